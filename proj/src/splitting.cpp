#include "grope/splitting.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>

#include "grope/canonical.hpp"
#include "grope/errors.hpp"
#include "grope/graph_view.hpp"

namespace grope {

namespace {

std::string id_str(ObjectId id) { return std::to_string(id); }

/// Side assignment for one edge's ends on the target: 0 = unassigned.
struct EndSides {
  int side[2] = {0, 0};
};

/// Checks that the plan covers every slot of the target exactly once and
/// never separates a Whitney pairing.  Returns per-edge end sides.
std::map<EdgeId, EndSides> check_plan(const Model& m, const SplitPlan& plan,
                                      std::vector<int>* pair_sides,
                                      bool require_both_sides) {
  const std::vector<Slot> all = slots_of(m, plan.target);
  std::map<Slot, int> assigned;
  for (const Slot& s : plan.part_one) {
    if (!assigned.emplace(s, 1).second)
      throw PlanError("plan assigns a slot of object " + id_str(plan.target) + " twice");
  }
  for (const Slot& s : plan.part_two) {
    if (!assigned.emplace(s, 2).second)
      throw PlanError("plan assigns a slot of object " + id_str(plan.target) + " twice");
  }
  if (assigned.size() != all.size())
    throw PlanError("plan must cover every slot of object " + id_str(plan.target) +
                    " exactly once");
  for (const Slot& s : all)
    if (!assigned.count(s))
      throw PlanError("plan names a slot that object " + id_str(plan.target) +
                      " does not carry");
  if (require_both_sides && (plan.part_one.empty() || plan.part_two.empty()))
    throw PlanError("identity split rejected: both sides need at least one slot");

  // A Whitney pairing is indivisible: all slots of its edges stay together.
  std::map<PairingId, std::set<int>> pairing_sides;
  std::map<EdgeId, EndSides> edge_sides;
  if (pair_sides) pair_sides->assign(m.at(plan.target).pairs.size(), 0);
  for (const auto& [slot, side] : assigned) {
    if (slot.is_pair) {
      if (pair_sides) (*pair_sides)[slot.pair] = side;
      continue;
    }
    edge_sides[slot.edge].side[slot.end] = side;
    const Edge& e = m.edge_at(slot.edge);
    if (e.pairing) pairing_sides[*e.pairing].insert(side);
  }
  for (const auto& [pid, sides] : pairing_sides)
    if (sides.size() > 1)
      throw PlanError("plan splits Whitney pairing " + std::to_string(pid));
  return edge_sides;
}

/// Re-points the ends of `eid` according to `sides`: side-2 ends move from
/// `from` to `to`, everything else stays.
void reterminate(Model& m, EdgeId eid, const EndSides& sides, ObjectId from,
                 ObjectId to) {
  Edge& e = m.edges.at(eid);
  ObjectId ends[2] = {e.a, e.b};
  if (ends[0] == from && ends[1] == from) {
    if (sides.side[0] == 2) ends[0] = to;
    if (sides.side[1] == 2) ends[1] = to;
  } else {
    const int pos = ends[0] == from ? 0 : 1;
    if (sides.side[0] == 2) ends[pos] = to;
  }
  e.a = std::min(ends[0], ends[1]);
  e.b = std::max(ends[0], ends[1]);
}

/// Parallel-copies every edge touching the copied object set: the copy runs
/// to the neighbour's copy when the neighbour was copied too, and to the
/// original neighbour otherwise.  A loop additionally yields two edges
/// between original and copy, one per sheet crossing.  Pairings whose two
/// edges were both copied are re-paired under a fresh id.
void copy_edges(Model& out, const std::map<ObjectId, ObjectId>& copies) {
  std::vector<EdgeId> originals;
  for (const auto& [eid, e] : out.edges)
    if (copies.count(e.a) || copies.count(e.b)) originals.push_back(eid);
  std::map<PairingId, EdgeId> half_copied;
  for (EdgeId eid : originals) {
    const Edge e = out.edges.at(eid);
    const auto lift = [&](ObjectId v) {
      const auto it = copies.find(v);
      return it == copies.end() ? v : it->second;
    };
    const EdgeId ne = out.add_edge(lift(e.a), lift(e.b), e.label);
    if (e.pairing) {
      const auto it = half_copied.find(*e.pairing);
      if (it == half_copied.end()) {
        half_copied.emplace(*e.pairing, ne);
      } else {
        const PairingId fresh = out.fresh_pairing();
        out.edges.at(it->second).pairing = fresh;
        out.edges.at(ne).pairing = fresh;
      }
    }
    if (e.is_loop()) {
      out.add_edge(e.a, lift(e.a), e.label);
      out.add_edge(e.a, lift(e.a), e.label);
    }
  }
}

/// Copies the whole subtree under `root` (fresh ids, fresh classes), hangs
/// the copy under `parent`, parallel-copies the incident edges, and returns
/// the copy of `root`.
ObjectId copy_subtree(Model& out, ObjectId root, std::optional<ObjectId> parent) {
  const std::vector<ObjectId> members = out.subtree(root);
  std::map<ObjectId, ObjectId> copies;
  for (ObjectId id : members) copies[id] = out.add_object(out.at(id).kind);
  for (ObjectId id : members) {
    const Object src = out.at(id);
    Object& dst = out.at(copies.at(id));
    dst.parent = id == root ? parent : std::optional<ObjectId>(copies.at(*src.parent));
    for (const DualPair& p : src.pairs)
      dst.pairs.push_back(DualPair{copies.at(p.left), copies.at(p.right)});
  }
  copy_edges(out, copies);
  return copies.at(root);
}

/// Depth of an object below its grope root.
std::size_t depth_of(const Model& m, ObjectId id) {
  std::size_t d = 0;
  std::optional<ObjectId> cur = m.at(id).parent;
  while (cur) {
    ++d;
    cur = m.at(*cur).parent;
  }
  return d;
}

/// Grouping key for a cap's neighbour: caps carry their dyadic 0/1 path,
/// read as the dual-pair side at each step toward the base; every other kind
/// shares the empty key.  Sides survive cap splits, genus drains, and
/// subtree copies, so a group never reopens once it is separated — on a
/// fully drained grope the side path is exactly the dyadic label.
std::string neighbour_key(const Model& m, ObjectId v) {
  const Object& o = m.at(v);
  if (o.kind != Kind::Cap) return "";
  std::string bits;
  ObjectId cur = v;
  while (m.at(cur).parent) {
    const Object& p = m.at(*m.at(cur).parent);
    char bit = '?';
    for (const DualPair& dp : p.pairs) {
      if (dp.left == cur) bit = '0';
      if (dp.right == cur) bit = '1';
    }
    if (bit == '?') return "c*";
    bits.insert(bits.begin(), bit);
    cur = *m.at(cur).parent;
  }
  return "c" + bits;
}

/// First object on a cycle that split_surface can cut, with the cycle's edge
/// slots at it; nothing when the cycle avoids stages and caps entirely.
struct CycleCut {
  ObjectId target = 0;
  std::vector<Slot> separate;  // cycle slots that must leave for the fresh side
};

std::optional<CycleCut> plan_cycle_cut(const Model& m, const Cycle& cycle) {
  for (std::size_t i = 0; i < cycle.path.size(); ++i) {
    const ObjectId v = cycle.path[i];
    const Kind k = m.at(v).kind;
    if (k != Kind::StageSurface && k != Kind::Cap) continue;
    if (m.at(v).kind == Kind::StageSurface && !m.at(v).parent) continue;  // base
    // Edges of the cycle incident to v, as slots.
    std::vector<Slot> at_v;
    for (std::size_t j = 0; j < cycle.edges.size(); ++j) {
      const Edge& e = m.edge_at(cycle.edges[j]);
      if (e.touches(v)) at_v.push_back(Slot{false, cycle.edges[j], 0, 0});
    }
    if (at_v.empty()) continue;
    std::sort(at_v.begin(), at_v.end());
    at_v.erase(std::unique(at_v.begin(), at_v.end()), at_v.end());
    // Move the first cycle slot onto the fresh-class piece; the rest of the
    // object's slots (for a loop, the other end) stay behind, so the cycle
    // can no longer close up through this vertex.
    const Edge& first = m.edge_at(at_v.front().edge);
    if (first.pairing) continue;  // cannot separate a paired intersection
    return CycleCut{v, {at_v.front()}};
  }
  return std::nullopt;
}

}  // namespace

std::vector<Slot> slots_of(const Model& m, ObjectId target) {
  if (!m.has_object(target))
    throw ShapeError("object " + id_str(target) + " does not exist");
  std::vector<Slot> out;
  for (EdgeId eid : m.incident(target)) {
    const Edge& e = m.edge_at(eid);
    out.push_back(Slot{false, eid, 0, 0});
    if (e.is_loop()) out.push_back(Slot{false, eid, 1, 0});
  }
  const Object& t = m.at(target);
  for (std::size_t i = 0; i < t.pairs.size(); ++i) out.push_back(Slot{true, 0, 0, i});
  return out;
}

Model split_surface(const Model& m, const SplitPlan& plan) {
  if (!m.has_object(plan.target))
    throw ShapeError("split target " + id_str(plan.target) + " does not exist");
  const Object& t = m.at(plan.target);
  switch (t.kind) {
    case Kind::StageSurface:
    case Kind::Cap:
      break;
    case Kind::BaseSurface:
      throw PlanError("base surfaces are split through their transverse pair");
    case Kind::Sphere:
      throw PlanError("spheres are split with split_transverse_pair");
    case Kind::WhitneyDisk:
      throw PlanError("Whitney disks are split with split_whitney_disk");
    case Kind::CliffordTorus:
    case Kind::DualSphere:
      throw PlanError(std::string(kind_name(t.kind)) + " objects cannot be split");
  }
  if (!t.parent)
    throw ShapeError("split target " + id_str(plan.target) + " has no parent surface");

  std::vector<int> pair_sides;
  const std::map<EdgeId, EndSides> edge_sides =
      check_plan(m, plan, &pair_sides, /*require_both_sides=*/false);
  if (plan.part_one.empty() && plan.part_two.empty())
    throw PlanError("plan separates nothing on object " + id_str(plan.target));

  const ObjectId parent = *t.parent;
  const Object& p = m.at(parent);
  std::size_t pair_at = p.pairs.size();
  bool target_left = false;
  for (std::size_t i = 0; i < p.pairs.size(); ++i) {
    if (p.pairs[i].left == plan.target) {
      pair_at = i;
      target_left = true;
    } else if (p.pairs[i].right == plan.target) {
      pair_at = i;
      target_left = false;
    }
  }
  if (pair_at == p.pairs.size())
    throw ShapeError("split target " + id_str(plan.target) +
                     " is not a member of its parent's dual pairs");
  const ObjectId partner = target_left ? p.pairs[pair_at].right : p.pairs[pair_at].left;
  if (partner == plan.target)
    throw ShapeError("dual pair of object " + id_str(plan.target) + " is degenerate");

  Model out = m;
  const ObjectId t1 = plan.target;  // reuses id and quotient class
  const ObjectId t2 = out.add_object(t.kind, parent);

  // Redistribute the target's own dual pairs.
  std::vector<DualPair> keep, move;
  for (std::size_t i = 0; i < t.pairs.size(); ++i)
    (pair_sides[i] == 2 ? move : keep).push_back(t.pairs[i]);
  out.at(t1).pairs = keep;
  out.at(t2).pairs = move;
  for (const DualPair& dp : move) {
    out.at(dp.left).parent = t2;
    out.at(dp.right).parent = t2;
  }

  // Re-point the side-2 edge ends before the partner copy is taken, so the
  // copy sees the final picture.
  for (const auto& [eid, sides] : edge_sides) reterminate(out, eid, sides, t1, t2);

  const ObjectId partner2 = copy_subtree(out, partner, parent);
  Object& np = out.at(parent);
  np.pairs[pair_at] = target_left ? DualPair{t1, partner} : DualPair{partner, t1};
  np.pairs.push_back(target_left ? DualPair{t2, partner2} : DualPair{partner2, t2});
  return out;
}

std::optional<SplitPlan> synthesize_cap_plan(const Model& m, ObjectId cap) {
  const Object& c = m.at(cap);
  if (c.kind != Kind::Cap)
    throw ShapeError("plan synthesis expects a cap, got " + std::string(kind_name(c.kind)));
  const std::vector<Slot> slots = slots_of(m, cap);
  if (slots.empty()) return std::nullopt;

  // An unpaired loop is cut apart first: one end per side.
  for (const Slot& s : slots) {
    if (s.is_pair || s.end != 0) continue;
    const Edge& e = m.edge_at(s.edge);
    if (!e.is_loop() || e.pairing) continue;
    SplitPlan plan{cap, {Slot{false, s.edge, 0, 0}}, {}};
    for (const Slot& rest : slots)
      if (!(rest == plan.part_one.front())) plan.part_two.push_back(rest);
    return plan;
  }

  // Group edge slots by (label, neighbour key); merge groups that share a
  // Whitney pairing so the plan never splits one.
  std::map<std::pair<std::string, std::string>, std::vector<Slot>> groups;
  std::map<EdgeId, std::pair<std::string, std::string>> key_of;
  for (const Slot& s : slots) {
    if (s.is_pair) continue;
    const Edge& e = m.edge_at(s.edge);
    const ObjectId nb = e.is_loop() ? cap : e.other(cap);
    const std::pair<std::string, std::string> key{normalize(e.label).str(),
                                                  e.is_loop() ? "loop" : neighbour_key(m, nb)};
    groups[key].push_back(s);
    key_of[s.edge] = key;
  }
  if (groups.size() < 2) return std::nullopt;

  // Union-find over group keys, linked by pairings with both edges here.
  std::vector<std::pair<std::string, std::string>> keys;
  for (const auto& [k, v] : groups) keys.push_back(k);
  std::map<std::pair<std::string, std::string>, std::size_t> index;
  for (std::size_t i = 0; i < keys.size(); ++i) index[keys[i]] = i;
  std::vector<std::size_t> rep(keys.size());
  for (std::size_t i = 0; i < rep.size(); ++i) rep[i] = i;
  const auto find = [&](std::size_t i) {
    while (rep[i] != i) i = rep[i] = rep[rep[i]];
    return i;
  };
  std::map<PairingId, EdgeId> seen;
  for (const auto& [eid, key] : key_of) {
    const Edge& e = m.edge_at(eid);
    if (!e.pairing) continue;
    const auto it = seen.find(*e.pairing);
    if (it == seen.end()) {
      seen.emplace(*e.pairing, eid);
    } else {
      const std::size_t a = find(index.at(key_of.at(it->second)));
      const std::size_t b = find(index.at(key));
      if (a != b) rep[std::max(a, b)] = std::min(a, b);
    }
  }
  std::map<std::size_t, std::vector<Slot>> merged;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    auto& bucket = merged[find(i)];
    bucket.insert(bucket.end(), groups.at(keys[i]).begin(), groups.at(keys[i]).end());
  }
  if (merged.size() < 2) return std::nullopt;

  SplitPlan plan{cap, merged.begin()->second, {}};
  for (auto it = std::next(merged.begin()); it != merged.end(); ++it)
    plan.part_two.insert(plan.part_two.end(), it->second.begin(), it->second.end());
  std::sort(plan.part_one.begin(), plan.part_one.end());
  std::sort(plan.part_two.begin(), plan.part_two.end());
  return plan;
}

namespace {

/// One genus drain: peel the stage's first dual pair onto a fresh stage copy.
Model drain_once(const Model& m, ObjectId stage) {
  SplitPlan plan{stage, {}, {}};
  for (const Slot& s : slots_of(m, stage))
    ((s.is_pair && s.pair == 0) ? plan.part_one : plan.part_two).push_back(s);
  return split_surface(m, plan);
}

}  // namespace

Model split_to_dyadic(const Model& m, ObjectId grope, const Budget& budget) {
  if (!m.has_object(grope) || m.at(grope).kind != Kind::BaseSurface)
    throw ShapeError("split_to_dyadic starts at a base surface");
  Model out = m;
  for (;;) {
    check_budget(out, budget, "split_to_dyadic");

    // Caps first, deepest first; prefer one whose dual partner is already
    // clean so the partner copy stays clean.
    struct Candidate {
      bool partner_dirty = false;
      std::size_t depth = 0;
      ObjectId cap = 0;
      SplitPlan plan;
    };
    std::optional<Candidate> best;
    for (ObjectId id : out.subtree(grope)) {
      if (out.at(id).kind != Kind::Cap) continue;
      std::optional<SplitPlan> plan = synthesize_cap_plan(out, id);
      if (!plan) continue;
      Candidate cand{false, depth_of(out, id), id, *plan};
      const Object& pa = out.at(*out.at(id).parent);
      for (const DualPair& dp : pa.pairs) {
        const ObjectId partner = dp.left == id ? dp.right : (dp.right == id ? dp.left : 0);
        if (partner && out.at(partner).kind == Kind::Cap &&
            synthesize_cap_plan(out, partner))
          cand.partner_dirty = true;
      }
      const auto better = [](const Candidate& a, const Candidate& b) {
        return std::tuple(!a.partner_dirty, a.depth, b.cap) >
               std::tuple(!b.partner_dirty, b.depth, a.cap);
      };
      if (!best || better(cand, *best)) best = cand;
    }
    if (best) {
      out = split_surface(out, best->plan);
      continue;
    }

    // Then drain genus off non-base stages, deepest first.
    ObjectId fat = 0;
    std::size_t fat_depth = 0;
    for (ObjectId id : out.subtree(grope)) {
      const Object& o = out.at(id);
      if (o.kind != Kind::StageSurface || o.genus() < 2) continue;
      const std::size_t d = depth_of(out, id);
      if (!fat || d > fat_depth || (d == fat_depth && id < fat)) {
        fat = id;
        fat_depth = d;
      }
    }
    if (!fat) break;
    out = drain_once(out, fat);
  }
  out.at(grope).dyadic = true;
  return out;
}

Model split_to_distance(const Model& m, ObjectId grope, std::size_t n,
                        const Budget& budget) {
  Model out = split_to_dyadic(m, grope, budget);
  for (;;) {
    check_budget(out, budget, "split_to_distance");
    const GraphView view(out, surface_view());
    const std::vector<Cycle> cycles = find_cycles(view, n);
    if (cycles.empty()) break;
    std::optional<CycleCut> cut;
    for (const Cycle& cycle : cycles) {
      cut = plan_cycle_cut(out, cycle);
      if (cut) break;
    }
    if (!cut)
      throw PreconditionError("a cycle of length " +
                              std::to_string(cycles.front().length()) +
                              " passes through no splittable surface");
    SplitPlan plan{cut->target, {}, cut->separate};
    const std::set<Slot> taken(cut->separate.begin(), cut->separate.end());
    for (const Slot& s : slots_of(out, cut->target))
      if (!taken.count(s)) plan.part_one.push_back(s);
    out = split_surface(out, plan);
    out = split_to_dyadic(out, grope, budget);
  }
  return out;
}

Model split_transverse_pair(const Model& m, int pair_index, const SplitPlan& plan) {
  if (pair_index < 0 || pair_index >= static_cast<int>(m.pairs.size()))
    throw ShapeError("no transverse pair with index " + std::to_string(pair_index));
  const TransversePair pair = m.pairs[pair_index];
  if (plan.target != pair.sphere_a)
    throw PlanError("plan must target the pair's A-sphere " + id_str(pair.sphere_a));

  // Slots are A's intersections minus the distinguished one.
  std::vector<Slot> open;
  for (const Slot& s : slots_of(m, pair.sphere_a))
    if (s.edge != pair.distinguished) open.push_back(s);
  {
    SplitPlan probe = plan;
    probe.target = pair.sphere_a;
    std::map<Slot, int> assigned;
    for (const Slot& s : probe.part_one) assigned.emplace(s, 1);
    for (const Slot& s : probe.part_two) assigned.emplace(s, 2);
    if (assigned.size() != probe.part_one.size() + probe.part_two.size())
      throw PlanError("plan assigns a slot of sphere " + id_str(pair.sphere_a) + " twice");
    for (const Slot& s : open)
      if (!assigned.count(s))
        throw PlanError("plan must cover every extra intersection of sphere " +
                        id_str(pair.sphere_a));
    if (assigned.size() != open.size())
      throw PlanError("plan names a slot that sphere " + id_str(pair.sphere_a) +
                      " does not carry");
    if (probe.part_one.empty() || probe.part_two.empty())
      throw PlanError("identity split rejected: both sides need an intersection");
    std::map<PairingId, std::set<int>> pairing_sides;
    for (const auto& [slot, side] : assigned) {
      const Edge& e = m.edge_at(slot.edge);
      if (e.pairing) pairing_sides[*e.pairing].insert(side);
    }
    for (const auto& [pid, sides] : pairing_sides)
      if (sides.size() > 1)
        throw PlanError("plan splits Whitney pairing " + std::to_string(pid));
  }

  Model out = m;
  const ObjectId a1 = pair.sphere_a;  // reuses id and quotient class
  const ObjectId b1 = pair.sphere_b;
  const ObjectId a2 = out.add_object(Kind::Sphere);
  const ObjectId b2 = out.add_object(Kind::Sphere);

  // Whitney disks follow the side of the pairing they cancel.
  std::map<ObjectId, int> disk_side;
  std::map<EdgeId, int> edge_side;
  for (const Slot& s : plan.part_one) edge_side[s.edge] = 1;
  for (const Slot& s : plan.part_two) edge_side[s.edge] = 2;
  for (const WhitneyTower& tower : m.towers) {
    if (tower.pair_index != pair_index) continue;
    for (const std::vector<ObjectId>& layer : tower.layers) {
      for (ObjectId disk : layer) {
        const std::optional<PairingId> cancels = m.at(disk).cancels;
        int side = 0;
        if (cancels)
          for (const auto& [eid, e] : m.edges)
            if (e.pairing == cancels && edge_side.count(eid)) side = edge_side.at(eid);
        if (!side) {
          // Higher-layer disk: inherit the side of the disks it touches.
          for (EdgeId eid : m.incident(disk)) {
            const ObjectId nb = m.edge_at(eid).other(disk);
            if (disk_side.count(nb)) side = disk_side.at(nb);
          }
        }
        if (!side)
          throw PlanError("Whitney disk " + id_str(disk) +
                          " cannot be assigned to a side of the plan");
        disk_side[disk] = side;
      }
    }
  }
  for (const auto& [disk, side] : disk_side)
    for (EdgeId eid : m.incident(disk))
      if (!edge_side.count(eid)) edge_side[eid] = side;
  for (const auto& [disk, side] : disk_side) {
    for (EdgeId eid : m.incident(disk)) {
      if (edge_side.at(eid) != side) {
        const Edge& e = m.edge_at(eid);
        if (disk_side.count(e.a) && disk_side.count(e.b))
          throw PlanError("plan separates Whitney disks joined by edge " +
                          std::to_string(eid));
      }
    }
  }

  // Move side-2 ends off A and B.
  for (const auto& [eid, side] : edge_side) {
    if (side != 2) continue;
    Edge& e = out.edges.at(eid);
    ObjectId ends[2] = {e.a, e.b};
    for (int i = 0; i < 2; ++i) {
      if (ends[i] == a1) ends[i] = a2;
      if (ends[i] == b1) ends[i] = b2;
    }
    e.a = std::min(ends[0], ends[1]);
    e.b = std::max(ends[0], ends[1]);
  }

  // B's remaining intersections double onto the fresh copy: the two parallel
  // copies of B each keep a sheet.  A-incident edges were all assigned above.
  {
    std::map<ObjectId, ObjectId> copies{{b1, b2}};
    std::vector<EdgeId> third_party;
    for (const auto& [eid, e] : out.edges) {
      if (!e.touches(b1) || eid == pair.distinguished) continue;
      if (edge_side.count(eid)) continue;
      third_party.push_back(eid);
    }
    std::map<PairingId, EdgeId> half_copied;
    for (EdgeId eid : third_party) {
      const Edge e = out.edges.at(eid);
      const EdgeId ne =
          out.add_edge(e.a == b1 ? b2 : e.a, e.b == b1 ? b2 : e.b, e.label);
      if (e.pairing) {
        const auto it = half_copied.find(*e.pairing);
        if (it == half_copied.end()) {
          half_copied.emplace(*e.pairing, ne);
        } else {
          const PairingId fresh = out.fresh_pairing();
          out.edges.at(it->second).pairing = fresh;
          out.edges.at(ne).pairing = fresh;
        }
      }
      if (e.is_loop()) {
        out.add_edge(b1, b2, e.label);
        out.add_edge(b1, b2, e.label);
      }
    }
  }

  // The distinguished intersection is doubled onto the second pair.
  const GroupWord d_label = m.edge_at(pair.distinguished).label;
  const EdgeId d2 = out.add_edge(a2, b2, d_label);

  const auto extras_of = [&](int side) {
    std::vector<EdgeId> extras;
    for (const auto& [eid, s] : edge_side)
      if (s == side && (out.edge_at(eid).touches(side == 1 ? a1 : a2) ||
                        out.edge_at(eid).touches(side == 1 ? b1 : b2)))
        extras.push_back(eid);
    return extras;
  };
  out.pairs[pair_index] = TransversePair{a1, b1, pair.distinguished, extras_of(1)};
  out.pairs.push_back(TransversePair{a2, b2, d2, extras_of(2)});

  // Towers split along the disk sides; the new pair's tower goes to the end.
  const int new_index = static_cast<int>(out.pairs.size()) - 1;
  std::vector<WhitneyTower> towers;
  for (const WhitneyTower& tower : out.towers) {
    if (tower.pair_index != pair_index) {
      towers.push_back(tower);
      continue;
    }
    WhitneyTower one{pair_index, {}}, two{new_index, {}};
    for (const std::vector<ObjectId>& layer : tower.layers) {
      std::vector<ObjectId> l1, l2;
      for (ObjectId disk : layer)
        (disk_side.at(disk) == 1 ? l1 : l2).push_back(disk);
      if (!l1.empty()) one.layers.push_back(l1);
      if (!l2.empty()) two.layers.push_back(l2);
    }
    if (!one.layers.empty()) towers.push_back(one);
    if (!two.layers.empty()) towers.push_back(two);
  }
  out.towers = towers;

  // One 2-handle along the cut circle, and the pending 3-handle that will be
  // attached once one of the halves is certified embedded.
  const int handle = static_cast<int>(out.ledger.records.size());
  out.ledger.records.push_back(HandleRecord{handle, 2, a1, {}});
  out.ledger.obligations.push_back(Obligation{handle, a2, a1});
  return out;
}

Model split_whitney_disk(const Model& m, int tower_index, ObjectId disk,
                         const SplitPlan& plan) {
  if (tower_index < 0 || tower_index >= static_cast<int>(m.towers.size()))
    throw ShapeError("no Whitney tower with index " + std::to_string(tower_index));
  const WhitneyTower& tower = m.towers[tower_index];
  std::size_t layer_at = tower.layers.size();
  std::size_t pos_at = 0;
  for (std::size_t i = 0; i < tower.layers.size(); ++i)
    for (std::size_t j = 0; j < tower.layers[i].size(); ++j)
      if (tower.layers[i][j] == disk) {
        layer_at = i;
        pos_at = j;
      }
  if (layer_at == tower.layers.size())
    throw ShapeError("disk " + id_str(disk) + " is not part of tower " +
                     std::to_string(tower_index));
  if (plan.target != disk)
    throw PlanError("plan must target disk " + id_str(disk));
  const Object& w = m.at(disk);
  if (w.kind != Kind::WhitneyDisk)
    throw ShapeError("object " + id_str(disk) + " is not a Whitney disk");
  if (!w.cancels)
    throw ShapeError("disk " + id_str(disk) + " cancels no pairing");

  const std::map<EdgeId, EndSides> edge_sides =
      check_plan(m, plan, nullptr, /*require_both_sides=*/true);

  Model out = m;
  const ObjectId w1 = disk;  // keeps its pairing
  const ObjectId w2 = out.add_object(Kind::WhitneyDisk);

  for (const auto& [eid, sides] : edge_sides) reterminate(out, eid, sides, w1, w2);

  // The disk's own pairing splits into the original pair, still cancelled by
  // W1, and a fresh cancelling pair one layer down between the same two
  // surfaces, cancelled by W2.
  std::vector<EdgeId> paired;
  for (const auto& [eid, e] : m.edges)
    if (e.pairing == w.cancels) paired.push_back(eid);
  if (paired.size() != 2)
    throw ShapeError("pairing cancelled by disk " + id_str(disk) +
                     " does not have exactly two edges");
  const Edge& anchor = m.edge_at(std::min(paired[0], paired[1]));
  const PairingId fresh = out.fresh_pairing();
  out.add_edge(anchor.a, anchor.b, anchor.label, fresh);
  const EdgeId second = out.add_edge(anchor.a, anchor.b, anchor.label, fresh);
  out.at(w2).cancels = fresh;

  // The new intersections join the pair's extras when they sit on the pair's
  // spheres themselves.
  WhitneyTower& t = out.towers[tower_index];
  t.layers[layer_at].insert(t.layers[layer_at].begin() + pos_at + 1, w2);
  TransversePair& pr = out.pairs[tower.pair_index];
  const auto on_pair = [&](const Edge& e) {
    return (e.touches(pr.sphere_a) || e.touches(pr.sphere_b));
  };
  if (on_pair(anchor)) {
    pr.extras.push_back(second - 1);
    pr.extras.push_back(second);
  }
  return out;
}

}  // namespace grope
