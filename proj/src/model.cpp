#include "grope/model.hpp"

#include <algorithm>
#include <functional>

#include "grope/errors.hpp"

namespace grope {

const char* kind_name(Kind k) {
  switch (k) {
    case Kind::BaseSurface: return "base-surface";
    case Kind::StageSurface: return "stage-surface";
    case Kind::Cap: return "cap";
    case Kind::Sphere: return "sphere";
    case Kind::WhitneyDisk: return "whitney-disk";
    case Kind::CliffordTorus: return "clifford-torus";
    case Kind::DualSphere: return "dual-sphere";
  }
  return "?";
}

std::optional<Kind> kind_from_name(const std::string& name) {
  for (Kind k : {Kind::BaseSurface, Kind::StageSurface, Kind::Cap, Kind::Sphere,
                 Kind::WhitneyDisk, Kind::CliffordTorus, Kind::DualSphere})
    if (name == kind_name(k)) return k;
  return std::nullopt;
}

void GroupRingMatrix::add(int row, int col, const GroupWord& word, int coeff) {
  if (coeff == 0) return;
  GroupRingElement& cell = entries[{row, col}];
  int& c = cell[word];
  c += coeff;
  if (c == 0) cell.erase(word);
  if (cell.empty()) entries.erase({row, col});
}

ObjectId Model::add_object(Kind kind, std::optional<ObjectId> parent) {
  Object o;
  o.id = next_object++;
  o.kind = kind;
  o.cls = next_class++;
  o.parent = parent;
  objects.emplace(o.id, std::move(o));
  return next_object - 1;
}

EdgeId Model::add_edge(ObjectId a, ObjectId b, GroupWord label, std::optional<PairingId> pairing) {
  Edge e;
  e.id = next_edge++;
  e.a = std::min(a, b);
  e.b = std::max(a, b);
  e.label = std::move(label);
  e.pairing = pairing;
  edges.emplace(e.id, std::move(e));
  return next_edge - 1;
}

const Object& Model::at(ObjectId id) const {
  auto it = objects.find(id);
  if (it == objects.end()) throw ShapeError("unknown object id " + std::to_string(id));
  return it->second;
}

Object& Model::at(ObjectId id) {
  auto it = objects.find(id);
  if (it == objects.end()) throw ShapeError("unknown object id " + std::to_string(id));
  return it->second;
}

const Edge& Model::edge_at(EdgeId id) const {
  auto it = edges.find(id);
  if (it == edges.end()) throw ShapeError("unknown edge id " + std::to_string(id));
  return it->second;
}

Edge& Model::edge_at(EdgeId id) {
  auto it = edges.find(id);
  if (it == edges.end()) throw ShapeError("unknown edge id " + std::to_string(id));
  return it->second;
}

std::vector<EdgeId> Model::incident(ObjectId id) const {
  std::vector<EdgeId> out;
  for (const auto& [eid, e] : edges)
    if (e.touches(id)) out.push_back(eid);
  return out;
}

std::vector<ObjectId> Model::grope_roots() const {
  std::vector<ObjectId> out;
  for (const auto& [id, o] : objects)
    if (o.kind == Kind::BaseSurface && o.height) out.push_back(id);
  return out;
}

std::vector<ObjectId> Model::subtree(ObjectId root) const {
  std::vector<ObjectId> out;
  std::function<void(ObjectId)> walk = [&](ObjectId id) {
    out.push_back(id);
    for (const DualPair& p : at(id).pairs) {
      walk(p.left);
      walk(p.right);
    }
  };
  walk(root);
  return out;
}

std::vector<ObjectId> Model::caps_below(ObjectId root) const {
  std::vector<ObjectId> out;
  for (ObjectId id : subtree(root))
    if (at(id).kind == Kind::Cap) out.push_back(id);
  return out;
}

void Model::remove_edge(EdgeId id) {
  if (!edges.erase(id)) throw ShapeError("removing unknown edge " + std::to_string(id));
}

void Model::remove_object(ObjectId id) {
  for (const auto& [eid, e] : edges)
    if (e.touches(id))
      throw ShapeError("removing object " + std::to_string(id) + " with live edge " +
                       std::to_string(eid));
  if (!objects.erase(id)) throw ShapeError("removing unknown object " + std::to_string(id));
}

void check_budget(const Model& m, const Budget& b, const std::string& stage) {
  if (m.objects.size() > b.max_objects)
    throw BudgetError("object budget " + std::to_string(b.max_objects) + " exceeded during " + stage,
                      stage, std::make_shared<Model>(m));
}

namespace {

bool is_surface(Kind k) { return k == Kind::BaseSurface || k == Kind::StageSurface; }

// Longest root-to-cap distance below `id`; caps count as depth 0 from themselves.
int tree_depth(const Model& m, ObjectId id) {
  const Object& o = m.at(id);
  int best = 0;
  for (const DualPair& p : o.pairs) {
    best = std::max(best, 1 + tree_depth(m, p.left));
    best = std::max(best, 1 + tree_depth(m, p.right));
  }
  return best;
}

}  // namespace

std::vector<Violation> validate(const Model& m) {
  std::vector<Violation> out;
  auto flag = [&](ObjectId subject, std::string rule, std::string message) {
    out.push_back(Violation{subject, std::move(rule), std::move(message)});
  };

  if (m.generators > 26) flag(0, "generators", "generator count exceeds 26");

  // Edge integrity: endpoints, reduced labels, generator range, pairing arity.
  std::map<PairingId, std::vector<EdgeId>> pairings;
  for (const auto& [eid, e] : m.edges) {
    if (!m.has_object(e.a) || !m.has_object(e.b)) {
      flag(e.a, "edge-endpoint", "edge " + std::to_string(eid) + " references a missing object");
      continue;
    }
    if (!e.label.is_reduced())
      flag(e.a, "label-reduced", "edge " + std::to_string(eid) + " label is not freely reduced");
    if (e.label.min_generator_count() > m.generators)
      flag(e.a, "label-generators",
           "edge " + std::to_string(eid) + " uses a generator outside the configured set");
    if (e.pairing) pairings[*e.pairing].push_back(eid);
  }
  for (const auto& [pid, eids] : pairings) {
    if (eids.size() != 2) {
      flag(0, "pairing-arity",
           "pairing " + std::to_string(pid) + " groups " + std::to_string(eids.size()) +
               " edges instead of 2");
      continue;
    }
    const Edge& x = m.edge_at(eids[0]);
    const Edge& y = m.edge_at(eids[1]);
    auto kinds = [&](const Edge& e) {
      return std::minmax(m.at(e.a).kind, m.at(e.b).kind);
    };
    if (m.has_object(x.a) && m.has_object(x.b) && m.has_object(y.a) && m.has_object(y.b) &&
        kinds(x) != kinds(y))
      flag(x.a, "pairing-kinds",
           "pairing " + std::to_string(pid) + " joins edges with different endpoint kinds");
  }

  // Tree shape: children belong to exactly one dual pair of their parent.
  std::map<ObjectId, int> child_slots;
  for (const auto& [id, o] : m.objects) {
    if (o.id != id) flag(id, "object-id", "object record id mismatch");
    for (const DualPair& p : o.pairs) {
      for (ObjectId c : {p.left, p.right}) {
        if (!m.has_object(c)) {
          flag(id, "child-missing", "dual pair references missing object " + std::to_string(c));
          continue;
        }
        ++child_slots[c];
        const Object& child = m.at(c);
        if (!child.parent || *child.parent != id)
          flag(c, "parent-link", "child does not point back to its parent surface");
        if (child.kind != Kind::StageSurface && child.kind != Kind::Cap)
          flag(c, "child-kind", "dual pair child must be a stage surface or cap");
      }
      if (p.left == p.right) flag(id, "dual-pair", "dual pair repeats one object");
    }
    if (!o.pairs.empty() && !is_surface(o.kind))
      flag(id, "genus", std::string(kind_name(o.kind)) + " cannot carry dual pairs");
    if (o.parent) {
      if (o.kind == Kind::BaseSurface) flag(id, "root-parent", "base surface has a parent");
      if (!m.has_object(*o.parent))
        flag(id, "parent-missing", "parent object does not exist");
    } else if (o.kind == Kind::StageSurface || o.kind == Kind::Cap) {
      flag(id, "orphan", std::string(kind_name(o.kind)) + " has no parent surface");
    }
    if (o.transverse && !m.has_object(*o.transverse))
      flag(id, "transverse-missing", "transverse sphere does not exist");
  }
  for (const auto& [c, n] : child_slots)
    if (n > 1) flag(c, "shared-child", "object sits in more than one dual pair");

  // Quotient classes never mix kinds.
  std::map<ClassId, Kind> class_kind;
  for (const auto& [id, o] : m.objects) {
    auto [it, fresh] = class_kind.emplace(o.cls, o.kind);
    if (!fresh && it->second != o.kind)
      flag(id, "quotient-kind", "quotient class mixes object kinds");
  }

  // Grope roots: heights bound the cap depth and are attained.
  for (const auto& [id, o] : m.objects) {
    if (o.kind == Kind::BaseSurface && o.height) {
      const int depth = tree_depth(m, id);
      if (*o.height < 0 || depth != *o.height)
        flag(id, "height",
             "grope height " + std::to_string(*o.height) + " but deepest cap path is " +
                 std::to_string(depth));
      if (o.dyadic)
        for (ObjectId s : m.subtree(id))
          if (m.at(s).kind == Kind::StageSurface && m.at(s).genus() > 1)
            flag(s, "dyadic", "genus > 1 stage inside a grope claimed dyadic");
    }
  }

  // Transverse pairs: spheres, distinguished edge, extras incidence.
  for (std::size_t i = 0; i < m.pairs.size(); ++i) {
    const TransversePair& p = m.pairs[i];
    const std::string tag = "pair " + std::to_string(i);
    if (!m.has_object(p.sphere_a) || !m.has_object(p.sphere_b) ||
        m.at(p.sphere_a).kind != Kind::Sphere || m.at(p.sphere_b).kind != Kind::Sphere) {
      flag(p.sphere_a, "pair-spheres", tag + " must join two sphere objects");
      continue;
    }
    if (!m.edges.count(p.distinguished)) {
      flag(p.sphere_a, "pair-distinguished", tag + " distinguished edge missing");
    } else {
      const Edge& d = m.edge_at(p.distinguished);
      if (!(d.touches(p.sphere_a) && d.touches(p.sphere_b)) || d.is_loop())
        flag(p.sphere_a, "pair-distinguished", tag + " distinguished edge must join its spheres");
    }
    for (EdgeId eid : p.extras) {
      if (!m.edges.count(eid)) {
        flag(p.sphere_a, "pair-extras", tag + " extra edge missing");
        continue;
      }
      const Edge& e = m.edge_at(eid);
      if (!e.touches(p.sphere_a) && !e.touches(p.sphere_b))
        flag(p.sphere_a, "pair-extras", tag + " extra edge touches neither sphere");
    }
  }

  // Whitney towers: layer-i disk edges stay at layer >= i.
  for (const WhitneyTower& t : m.towers) {
    if (t.pair_index < 0 || t.pair_index >= static_cast<int>(m.pairs.size())) {
      flag(0, "tower-pair", "tower references missing pair");
      continue;
    }
    std::map<ObjectId, int> disk_layer;
    for (std::size_t li = 0; li < t.layers.size(); ++li)
      for (ObjectId d : t.layers[li]) {
        if (!m.has_object(d) || m.at(d).kind != Kind::WhitneyDisk) {
          flag(d, "tower-disk", "tower layer lists a non-disk object");
          continue;
        }
        disk_layer[d] = static_cast<int>(li) + 1;
      }
    for (const auto& [d, layer] : disk_layer) {
      if (!m.at(d).cancels)
        flag(d, "disk-cancels", "tower disk cancels no pairing");
      for (EdgeId eid : m.incident(d)) {
        const Edge& e = m.edge_at(eid);
        const ObjectId other = e.other(d);
        auto it = disk_layer.find(other);
        const int other_layer = it == disk_layer.end() ? 0 : it->second;
        if (other != d && other_layer < layer)
          flag(d, "tower-layers",
               "layer " + std::to_string(layer) + " disk intersects a layer " +
                   std::to_string(other_layer) + " object");
      }
    }
  }

  // Clifford tori: the pairing they are dual to must still exist.
  for (const auto& [id, o] : m.objects) {
    if (o.kind == Kind::CliffordTorus && o.dual_to && !pairings.count(*o.dual_to))
      flag(id, "torus-pairing", "torus is dual to a pairing no edge carries");
    for (std::optional<ObjectId> cap : {o.cap_a, o.cap_b})
      if (cap && (!m.has_object(*cap) || m.at(*cap).kind != Kind::DualSphere))
        flag(id, "torus-caps", "torus cap slot must reference a dual sphere");
  }

  // Ledger sanity: indices sequential, references valid.
  const int n_records = static_cast<int>(m.ledger.records.size());
  for (int i = 0; i < n_records; ++i) {
    const HandleRecord& r = m.ledger.records[i];
    if (r.index != i) flag(0, "ledger-order", "handle records out of attachment order");
    if (r.dimension != 2 && r.dimension != 3)
      flag(0, "ledger-dimension", "handle dimension must be 2 or 3");
    if (!m.has_object(r.site)) flag(r.site, "ledger-site", "handle site object missing");
    for (ObjectId d : r.duals)
      if (!m.has_object(d)) flag(d, "ledger-dual", "handle dual object missing");
  }
  auto valid_two_handle = [&](int idx) {
    return idx >= 0 && idx < n_records && m.ledger.records[idx].dimension == 2;
  };
  for (const Obligation& o : m.ledger.obligations) {
    if (!valid_two_handle(o.handle))
      flag(0, "obligation-handle", "obligation references a non 2-handle");
    if (!m.has_object(o.dual) || !m.has_object(o.host))
      flag(o.dual, "obligation-objects", "obligation references missing objects");
  }
  for (const Incidence& inc : m.ledger.incidences) {
    if (!valid_two_handle(inc.from) || !valid_two_handle(inc.to))
      flag(0, "incidence-handles", "incidence references a non 2-handle");
    if (inc.edge && !m.edges.count(*inc.edge))
      flag(0, "incidence-edge", "incidence cites a missing edge");
  }
  for (const auto& [rc, cell] : m.ledger.boundary.entries) {
    if (!valid_two_handle(rc.first) || !valid_two_handle(rc.second))
      flag(0, "boundary-index", "boundary entry outside the 2-handle range");
    if (cell.empty()) flag(0, "boundary-empty", "boundary stores an empty cell");
  }

  return out;
}

std::map<ObjectId, std::string> dyadic_labels(const Model& m, ObjectId root) {
  const Object& r = m.at(root);
  if (r.kind != Kind::BaseSurface)
    throw ShapeError("dyadic labels start at a base surface, got " +
                     std::string(kind_name(r.kind)));
  std::map<ObjectId, std::string> out;
  std::function<void(ObjectId, const std::string&)> walk = [&](ObjectId id, const std::string& bits) {
    const Object& o = m.at(id);
    if (o.kind == Kind::Cap) {
      out[id] = bits;
      return;
    }
    if (o.kind == Kind::StageSurface && o.genus() > 1)
      throw ShapeError("dyadic labels undefined: stage " + std::to_string(id) + " has genus " +
                       std::to_string(o.genus()));
    for (const DualPair& p : o.pairs) {
      walk(p.left, bits + "0");
      walk(p.right, bits + "1");
    }
  };
  walk(root, "");
  return out;
}

std::set<GroupWord> label_set(const Model& m) {
  std::set<GroupWord> out;
  for (const auto& [eid, e] : m.edges) out.insert(normalize(e.label));
  return out;
}

std::pair<Model, ObjectId> sphere_to_capped_grope(const Model& m, int pair_index, int height) {
  if (pair_index < 0 || pair_index >= static_cast<int>(m.pairs.size()))
    throw ShapeError("no transverse pair with index " + std::to_string(pair_index));
  if (height < 1) throw ShapeError("grope height must be at least 1");
  const TransversePair pair = m.pairs[pair_index];

  // Group the extras into Whitney pairings; every extra must be paired.
  std::map<PairingId, std::vector<EdgeId>> groups;
  for (EdgeId eid : pair.extras) {
    const Edge& e = m.edge_at(eid);
    if (!e.pairing)
      throw PreconditionError("pair is not algebraically trivial: extra edge " +
                              std::to_string(eid) + " is unpaired");
    groups[*e.pairing].push_back(eid);
  }
  for (const auto& [pid, eids] : groups)
    if (eids.size() != 2)
      throw ShapeError("pairing " + std::to_string(pid) + " does not group exactly two extras");
  for (const auto& [oid, o] : m.objects)
    if (o.kind == Kind::CliffordTorus && o.dual_to && groups.count(*o.dual_to))
      throw PreconditionError("pair still carries Clifford-torus scaffolding; convert first");

  Model out = m;

  // The grope replaces sphere_a: one genus-1 base piece per Whitney pairing,
  // dyadic towers up to `height`, and cap edges inheriting the pairing labels.
  std::vector<EdgeId> to_remove = pair.extras;
  to_remove.push_back(pair.distinguished);
  for (EdgeId eid : to_remove) out.remove_edge(eid);
  for (EdgeId eid : out.incident(pair.sphere_a))
    throw PreconditionError("sphere_a carries an intersection outside the pair: edge " +
                            std::to_string(eid));

  const ObjectId root = out.add_object(Kind::BaseSurface);
  out.at(root).height = groups.empty() ? 0 : height;
  out.at(root).transverse = pair.sphere_b;

  // Builds one dyadic branch: stages of genus 1 down to caps at `remaining` 1.
  std::function<ObjectId(ObjectId, int)> build = [&](ObjectId parent, int remaining) {
    if (remaining == 1) return out.add_object(Kind::Cap, parent);
    const ObjectId stage = out.add_object(Kind::StageSurface, parent);
    const ObjectId l = build(stage, remaining - 1);
    const ObjectId r = build(stage, remaining - 1);
    out.at(stage).pairs.push_back(DualPair{l, r});
    return stage;
  };
  // First cap below `branch` following 0-side choices.
  auto leading_cap = [&](ObjectId branch) {
    ObjectId id = branch;
    while (out.at(id).kind != Kind::Cap) id = out.at(id).pairs.front().left;
    return id;
  };

  for (const auto& [pid, eids] : groups) {
    const GroupWord label = m.edge_at(std::min(eids[0], eids[1])).label;
    const ObjectId left = build(root, height);
    const ObjectId right = build(root, height);
    out.at(root).pairs.push_back(DualPair{left, right});
    out.add_edge(leading_cap(left), pair.sphere_b, label);
    out.add_edge(leading_cap(right), pair.sphere_b, label);
  }

  out.remove_object(pair.sphere_a);
  out.pairs.erase(out.pairs.begin() + pair_index);
  // Towers over the converted pair are absorbed into the new caps; towers over
  // later pairs shift down with the erased pair record.
  for (auto it = out.towers.begin(); it != out.towers.end();) {
    if (it->pair_index == pair_index) {
      for (const auto& layer : it->layers)
        for (ObjectId d : layer) {
          for (EdgeId eid : out.incident(d)) out.remove_edge(eid);
          out.remove_object(d);
        }
      it = out.towers.erase(it);
    } else {
      if (it->pair_index > pair_index) --it->pair_index;
      ++it;
    }
  }
  return {std::move(out), root};
}

}  // namespace grope
