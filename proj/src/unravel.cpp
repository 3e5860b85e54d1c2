#include "grope/unravel.hpp"

#include <algorithm>
#include <set>

#include "grope/errors.hpp"
#include "grope/graph_view.hpp"

namespace grope {

namespace {

std::string id_str(ObjectId id) { return std::to_string(id); }

/// One Whitney pairing joining the B-sphere of one chain pair to the
/// A-sphere of another (possibly the same): a chain edge.
struct Transition {
  PairingId pid = 0;
  std::size_t from = 0;  // global index of the pair owning the B-side
  std::size_t to = 0;    // global index of the pair owning the A-side
  EdgeId keep = 0;       // lower edge id: its lift stays on its level
  EdgeId shift = 0;      // higher edge id: its lift moves one level up
  GroupWord label;
};

}  // namespace

std::string UnravelReport::str() const {
  std::string out = "unravel report\ncopies:\n";
  for (const auto& [orig, made] : copies_made) {
    out += "  sphere " + id_str(orig) + " ->";
    for (ObjectId c : made) out += " " + id_str(c);
    out += "\n";
  }
  out += "shift:\n";
  for (const auto& [torus, handle] : shift_assignment)
    out += "  torus " + id_str(torus) + " -> handle " + std::to_string(handle) + "\n";
  const auto girth_str = [](const std::optional<std::size_t>& g) {
    return g ? std::to_string(*g) : std::string("none");
  };
  out += "girth: " + girth_str(girth_before) + " -> " + girth_str(girth_after) + "\n";
  return out;
}

std::pair<Model, UnravelReport> unravel(const Model& m, int seed_pair, std::size_t n,
                                        const Budget& budget) {
  if (n < 1) throw ShapeError("unravel degree must be at least 1");
  if (seed_pair < 0 || seed_pair >= static_cast<int>(m.pairs.size()))
    throw ShapeError("no transverse pair with index " + std::to_string(seed_pair));
  if (!m.towers.empty())
    throw PreconditionError("model carries Whitney towers; split them before unraveling");
  const std::size_t seed = static_cast<std::size_t>(seed_pair);

  // Which pairs serve each sphere, and the Whitney pairings among all extras.
  std::map<ObjectId, std::vector<std::size_t>> serving;
  for (std::size_t i = 0; i < m.pairs.size(); ++i) {
    serving[m.pairs[i].sphere_a].push_back(i);
    serving[m.pairs[i].sphere_b].push_back(i);
  }
  std::map<PairingId, std::set<EdgeId>> groups;
  for (const TransversePair& p : m.pairs)
    for (EdgeId eid : p.extras)
      if (const auto pid = m.edge_at(eid).pairing) groups[*pid].insert(eid);
  std::map<PairingId, std::set<std::size_t>> touches;
  for (const auto& [pid, eids] : groups)
    for (EdgeId eid : eids)
      for (ObjectId v : {m.edge_at(eid).a, m.edge_at(eid).b})
        if (const auto it = serving.find(v); it != serving.end())
          touches[pid].insert(it->second.begin(), it->second.end());

  // The chain: pairs reachable from the seed through pairings.
  std::set<std::size_t> chain{seed};
  std::vector<std::size_t> queue{seed};
  while (!queue.empty()) {
    const std::size_t i = queue.back();
    queue.pop_back();
    for (const auto& [pid, linked] : touches)
      if (linked.count(i))
        for (std::size_t j : linked)
          if (chain.insert(j).second) queue.push_back(j);
  }
  const std::vector<std::size_t> members(chain.begin(), chain.end());
  const std::size_t k = members.size();
  std::map<std::size_t, std::size_t> local;
  for (std::size_t l = 0; l < k; ++l) local[members[l]] = l;

  // Each chain sphere serves exactly one pair, and no two chain spheres are
  // parallel copies of one another; either way the walk would revisit an
  // object before reaching distance n.
  std::map<ObjectId, std::size_t> owner;
  std::map<ClassId, ObjectId> cls_seen;
  for (std::size_t i : members)
    for (ObjectId v : {m.pairs[i].sphere_a, m.pairs[i].sphere_b}) {
      const auto [it, fresh] = owner.emplace(v, i);
      if (!fresh)
        throw PreconditionError("collision at distance < n: sphere " + id_str(v) +
                                " serves pairs " + std::to_string(it->second) + " and " +
                                std::to_string(i));
      const auto [cit, cfresh] = cls_seen.emplace(m.at(v).cls, v);
      if (!cfresh)
        throw PreconditionError("collision at distance < n: spheres " + id_str(cit->second) +
                                " and " + id_str(v) + " are parallel copies");
      for (std::size_t j : serving.at(v))
        if (!chain.count(j))
          throw PreconditionError("sphere " + id_str(v) + " is shared with transverse pair " +
                                  std::to_string(j) + " outside the chain");
    }
  for (const HandleRecord& r : m.ledger.records)
    if (r.dimension == 2 && owner.count(r.site))
      throw PreconditionError("handles already attached along sphere " + id_str(r.site) +
                              "; unravel the bare chain");
  std::set<EdgeId> chain_extras;
  for (std::size_t i : members) {
    for (EdgeId eid : m.pairs[i].extras) {
      if (!m.edge_at(eid).pairing)
        throw PreconditionError("extra intersection " + std::to_string(eid) +
                                " is not Whitney-paired");
      chain_extras.insert(eid);
    }
  }

  // Walk the chain from the seed, naming each pair's spheres: an incoming
  // pairing meets the next pair on its A-sphere.
  std::map<std::size_t, std::pair<ObjectId, ObjectId>> role;  // pair -> (A, B)
  role[seed] = {m.pairs[seed].sphere_a, m.pairs[seed].sphere_b};
  queue.assign(1, seed);
  while (!queue.empty()) {
    const std::size_t i = queue.front();
    queue.erase(queue.begin());
    for (const auto& [pid, eids] : groups) {
      if (!touches.at(pid).count(i)) continue;
      if (eids.size() != 2)
        throw PreconditionError("pairing " + std::to_string(pid) +
                                " does not pair exactly two chain intersections");
      const Edge& first = m.edge_at(*eids.begin());
      for (EdgeId eid : eids) {
        const Edge& e = m.edge_at(eid);
        if (e.is_loop())
          throw PreconditionError("chain is not linear: extra " + std::to_string(eid) +
                                  " is a self-intersection");
        if (std::minmax(e.a, e.b) != std::minmax(first.a, first.b))
          throw PreconditionError("chain is not linear: pairing " + std::to_string(pid) +
                                  " spans two different transitions");
        if (!owner.count(e.a) || !owner.count(e.b))
          throw PreconditionError("chain is not linear: extra " + std::to_string(eid) +
                                  " does not join two chain spheres");
      }
      const ObjectId mine = owner.at(first.a) == i ? first.a : first.b;
      const ObjectId other = first.other(mine);
      const std::size_t j = owner.at(other);
      if (j == i) continue;  // a loop transition carries no new roles
      const ObjectId far = m.pairs[j].sphere_a == other ? m.pairs[j].sphere_b
                                                        : m.pairs[j].sphere_a;
      // Leaving through our B-sphere, the far pair meets us on its A-sphere.
      const std::pair<ObjectId, ObjectId> want =
          mine == role.at(i).second ? std::pair{other, far} : std::pair{far, other};
      const auto [it, fresh] = role.emplace(j, want);
      if (fresh) queue.push_back(j);
      else if (it->second != want)
        throw PreconditionError("chain is not linear: pair " + std::to_string(j) +
                                " is entered on both spheres");
    }
  }

  // Orient every pairing B -> A and check the chain is a path or a cycle.
  std::vector<Transition> transitions;
  for (const auto& [pid, eids] : groups) {
    if (!touches.at(pid).count(seed) &&
        !std::any_of(touches.at(pid).begin(), touches.at(pid).end(),
                     [&](std::size_t i) { return chain.count(i); }))
      continue;
    const EdgeId keep = *eids.begin();
    const EdgeId shift = *eids.rbegin();
    const Edge& e = m.edge_at(keep);
    std::optional<std::size_t> from, to;
    for (ObjectId v : {e.a, e.b}) {
      const std::size_t i = owner.at(v);
      if (v == role.at(i).second) from = i;       // B-sphere
      else if (v == role.at(i).first) to = i;     // A-sphere
    }
    if (!from || !to)
      throw PreconditionError("chain is not linear: pairing " + std::to_string(pid) +
                              " joins two spheres of the same role");
    transitions.push_back(
        Transition{pid, *from, *to, keep, shift, m.edge_at(keep).label});
  }

  std::vector<std::size_t> degree(k, 0);
  for (const Transition& t : transitions) {
    ++degree[local.at(t.from)];
    ++degree[local.at(t.to)];
  }
  const bool cycle = transitions.size() == k;
  if (cycle) {
    for (std::size_t d : degree)
      if (d != 2)
        throw PreconditionError("chain is not linear: a pair has degree " +
                                std::to_string(d) + " in a cyclic chain");
  } else if (transitions.size() + 1 == k) {
    for (std::size_t d : degree)
      if (d > 2)
        throw PreconditionError("chain is not linear: a pair has degree " +
                                std::to_string(d));
  } else {
    throw PreconditionError("chain is not linear: " + std::to_string(transitions.size()) +
                            " pairings over " + std::to_string(k) + " pairs");
  }

  UnravelReport report;
  report.girth_before = cycle ? std::optional<std::size_t>(transitions.size()) : std::nullopt;

  Model out = m;

  // Parallel copies of every B-sphere, with their third-party intersections.
  std::vector<std::vector<ObjectId>> copies(k);
  std::vector<std::vector<EdgeId>> third(k);
  for (std::size_t l = 0; l < k; ++l) {
    const std::size_t i = members[l];
    const ObjectId b = role.at(i).second;
    for (EdgeId eid : m.incident(b)) {
      if (chain_extras.count(eid) || eid == m.pairs[i].distinguished) continue;
      if (m.edge_at(eid).is_loop())
        throw PreconditionError("sphere " + id_str(b) +
                                " self-intersects; its parallel copies would collide");
      third[l].push_back(eid);
    }
    for (std::size_t t = 0; t < n; ++t) copies[l].push_back(out.add_object(Kind::Sphere));
    report.copies_made[b] = copies[l];
  }
  check_budget(out, budget, "unravel");

  // Lifted distinguished points and third-party edges.
  std::vector<std::vector<EdgeId>> dist(k);
  for (std::size_t l = 0; l < k; ++l) {
    const std::size_t i = members[l];
    const Edge d = m.edge_at(m.pairs[i].distinguished);
    for (std::size_t t = 0; t < n; ++t)
      dist[l].push_back(out.add_edge(role.at(i).first, copies[l][t], d.label));
    for (EdgeId eid : third[l]) {
      const Edge e = m.edge_at(eid);
      const ObjectId far = e.other(role.at(i).second);
      for (std::size_t t = 0; t < n; ++t) out.add_edge(copies[l][t], far, e.label);
    }
  }

  // Lifted pairings: the lower edge keeps its level, the higher edge shifts
  // one level up, so the pairing spans consecutive sheets.
  struct Lift {
    EdgeId keep = 0;
    EdgeId shift = 0;
    PairingId pid = 0;
  };
  std::vector<std::vector<Lift>> lifts(transitions.size());
  for (std::size_t p = 0; p < transitions.size(); ++p) {
    const Transition& tr = transitions[p];
    const std::size_t lf = local.at(tr.from);
    const ObjectId a_far = role.at(tr.to).first;
    for (std::size_t t = 0; t < n; ++t) {
      const EdgeId ek = out.add_edge(copies[lf][t], a_far, m.edge_at(tr.keep).label);
      const EdgeId es =
          out.add_edge(copies[lf][(t + 1) % n], a_far, m.edge_at(tr.shift).label);
      const PairingId q = out.fresh_pairing();
      out.edges.at(ek).pairing = q;
      out.edges.at(es).pairing = q;
      lifts[p].push_back(Lift{ek, es, q});
    }
  }

  // The originals go away: extras, distinguished points, third-party edges,
  // then the B-spheres themselves and the chain's pair records.
  {
    std::set<EdgeId> doomed(chain_extras.begin(), chain_extras.end());
    for (std::size_t l = 0; l < k; ++l) {
      doomed.insert(m.pairs[members[l]].distinguished);
      doomed.insert(third[l].begin(), third[l].end());
    }
    for (EdgeId eid : doomed) out.remove_edge(eid);
    for (std::size_t i : members) out.remove_object(role.at(i).second);
    for (auto it = members.rbegin(); it != members.rend(); ++it)
      out.pairs.erase(out.pairs.begin() + static_cast<long>(*it));
  }

  // Copy pairs in (chain position, level) order.
  for (std::size_t l = 0; l < k; ++l) {
    for (std::size_t t = 0; t < n; ++t) {
      std::vector<EdgeId> extras;
      for (EdgeId eid : out.incident(copies[l][t]))
        if (eid != dist[l][t]) extras.push_back(eid);
      out.pairs.push_back(TransversePair{role.at(members[l]).first, copies[l][t],
                                         dist[l][t], extras});
    }
  }
  check_budget(out, budget, "unravel");

  // The basic handle construction at every copy pair, all B-side handles
  // first so the cyclic-shift traffic lands above the diagonal.
  const GroupWord eps = GroupWord::identity();
  std::vector<std::vector<ObjectId>> at_dual(k), bt_dual(k);
  for (std::size_t l = 0; l < k; ++l) {
    const ObjectId a = role.at(members[l]).first;
    for (std::size_t t = 0; t < n; ++t) {
      const ObjectId at = out.add_object(Kind::DualSphere);
      const ObjectId bt = out.add_object(Kind::DualSphere);
      out.add_edge(at, a, eps);
      out.add_edge(bt, copies[l][t], eps);
      out.add_edge(at, bt, eps);
      at_dual[l].push_back(at);
      bt_dual[l].push_back(bt);
    }
  }
  const int base = static_cast<int>(out.ledger.records.size());
  const int batch = static_cast<int>(k * n);
  const auto b_handle = [&](std::size_t l, std::size_t t) {
    return base + static_cast<int>(l * n + t);
  };
  const auto a_handle = [&](std::size_t l, std::size_t t) {
    return base + batch + static_cast<int>(l * n + t);
  };
  for (std::size_t l = 0; l < k; ++l)
    for (std::size_t t = 0; t < n; ++t) {
      const int idx = b_handle(l, t);
      out.ledger.records.push_back(HandleRecord{idx, 2, copies[l][t], {bt_dual[l][t]}});
      out.ledger.obligations.push_back(Obligation{idx, bt_dual[l][t], copies[l][t]});
    }
  for (std::size_t l = 0; l < k; ++l)
    for (std::size_t t = 0; t < n; ++t) {
      const int idx = a_handle(l, t);
      const ObjectId a = role.at(members[l]).first;
      out.ledger.records.push_back(HandleRecord{idx, 2, a, {at_dual[l][t]}});
      out.ledger.obligations.push_back(Obligation{idx, at_dual[l][t], a});
    }

  // One Clifford torus per lifted pairing: the forced cap sits over the
  // B-side dual on its own level, the free cap goes over the A-side dual one
  // level up.  Consecutive tori meet; a single level closes on itself.
  std::vector<std::vector<ObjectId>> tori(transitions.size());
  for (std::size_t p = 0; p < transitions.size(); ++p) {
    const Transition& tr = transitions[p];
    for (std::size_t t = 0; t < n; ++t) {
      const ObjectId torus = out.add_object(Kind::CliffordTorus);
      out.at(torus).dual_to = lifts[p][t].pid;
      out.at(torus).cap_a = bt_dual[local.at(tr.from)][t];
      out.at(torus).cap_b = at_dual[local.at(tr.to)][(t + 1) % n];
      tori[p].push_back(torus);
      report.shift_assignment[torus] = a_handle(local.at(tr.to), (t + 1) % n);
    }
  }
  for (std::size_t p = 0; p < transitions.size(); ++p)
    for (std::size_t p2 = 0; p2 < transitions.size(); ++p2) {
      if (transitions[p2].from != transitions[p].to) continue;
      for (std::size_t t = 0; t < n; ++t)
        out.add_edge(tori[p][t], tori[p2][(t + 1) % n], transitions[p].label);
    }
  check_budget(out, budget, "unravel");

  // Cap traffic: the 3-handle sphere of each B-side handle crosses the
  // A-side co-core one level up along the shifted intersection.
  for (std::size_t p = 0; p < transitions.size(); ++p) {
    const Transition& tr = transitions[p];
    for (std::size_t t = 0; t < n; ++t)
      out.ledger.incidences.push_back(Incidence{b_handle(local.at(tr.from), t),
                                                a_handle(local.at(tr.to), (t + 1) % n),
                                                tr.label, lifts[p][t].shift});
  }

  // Girth of the rewired chain graph.
  std::vector<std::pair<std::size_t, std::size_t>> cover_edges;
  for (std::size_t p = 0; p < transitions.size(); ++p)
    for (std::size_t t = 0; t < n; ++t)
      cover_edges.push_back({local.at(transitions[p].from) * n + t,
                             local.at(transitions[p].to) * n + (t + 1) % n});
  report.girth_after = multigraph_girth(k * n, cover_edges);

  return {out, report};
}

}  // namespace grope
