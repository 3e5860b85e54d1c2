#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "grope/canonical.hpp"
#include "grope/errors.hpp"
#include "grope/generators.hpp"
#include "grope/model.hpp"
#include "grope/oracles.hpp"
#include "grope/serialize.hpp"
#include "grope/splitting.hpp"

namespace grope {
namespace {

/// Height-1 genus-1 grope; returns the model with root and its two caps out.
Model small_grope(ObjectId& root, ObjectId& c0, ObjectId& c1) {
  Model m;
  m.generators = 12;
  root = m.add_object(Kind::BaseSurface);
  m.at(root).height = 1;
  m.at(root).dyadic = true;
  c0 = m.add_object(Kind::Cap, root);
  c1 = m.add_object(Kind::Cap, root);
  m.at(root).pairs.push_back(DualPair{c0, c1});
  return m;
}

Slot edge_slot(EdgeId e, int end = 0) { return Slot{false, e, end, 0}; }

/// The three dyadic postconditions, checked directly on every cap below root:
/// no loops, one group label, one neighbour dyadic label among adjacent caps.
bool dyadic_conditions_hold(const Model& m, ObjectId root) {
  std::map<ObjectId, std::string> bits;
  for (ObjectId r : m.grope_roots()) {
    if (!m.at(r).dyadic) return false;
    for (const auto& [cap, b] : dyadic_labels(m, r)) bits[cap] = b;
  }
  for (ObjectId cap : m.caps_below(root)) {
    std::set<GroupWord> labels;
    std::set<std::string> neighbour_bits;
    for (EdgeId eid : m.incident(cap)) {
      const Edge& e = m.edge_at(eid);
      if (e.is_loop()) return false;
      labels.insert(normalize(e.label));
      const ObjectId nb = e.other(cap);
      if (m.at(nb).kind == Kind::Cap && bits.count(nb))
        neighbour_bits.insert(bits.at(nb));
    }
    if (labels.size() > 1 || neighbour_bits.size() > 1) return false;
  }
  for (ObjectId o : m.subtree(root))
    if (m.at(o).kind == Kind::StageSurface && m.at(o).genus() > 1) return false;
  return true;
}

TEST_CASE("split_surface separates a two-label cap and doubles the dual") {
  ObjectId root, c0, c1;
  Model m = small_grope(root, c0, c1);
  const ObjectId s1 = m.add_object(Kind::Sphere);
  const ObjectId s2 = m.add_object(Kind::Sphere);
  const EdgeId eg = m.add_edge(c0, s1, GroupWord::parse("g"));
  const EdgeId eh = m.add_edge(c0, s2, GroupWord::parse("h"));

  const Model out =
      split_surface(m, SplitPlan{c0, {edge_slot(eg)}, {edge_slot(eh)}});

  CHECK(out.at(root).genus() == 2);
  CHECK(out.caps_below(root).size() == 4);
  CHECK(label_set(out) == label_set(m));
  CHECK(validate(out).empty());

  // One piece carries exactly the g edge, the other exactly the h edge.
  CHECK(out.incident(c0) == std::vector<EdgeId>{eg});
  const ObjectId c2 = out.at(root).pairs[1].left;
  CHECK(out.incident(c2) == std::vector<EdgeId>{eh});
  CHECK(out.edge_at(eh).touches(c2));
}

TEST_CASE("splitting a loop applies the parallel-copy rule to the partner") {
  ObjectId root, c0, c1;
  Model m = small_grope(root, c0, c1);
  const ObjectId s = m.add_object(Kind::Sphere);
  const EdgeId loop0 = m.add_edge(c0, c0, GroupWord::parse("g"));
  const EdgeId eh = m.add_edge(c0, s, GroupWord::parse("h"));
  const EdgeId loop1 = m.add_edge(c1, c1, GroupWord::parse("c"));

  const Model out = split_surface(
      m, SplitPlan{c0, {edge_slot(loop0, 0)}, {edge_slot(loop0, 1), edge_slot(eh)}});

  CHECK(label_set(out) == label_set(m));
  CHECK(validate(out).empty());
  REQUIRE(out.at(root).genus() == 2);
  const ObjectId c2 = out.at(root).pairs[1].left;   // second half of the cut
  const ObjectId c1p = out.at(root).pairs[1].right; // parallel copy of c1

  // The cut loop straightens into a single c0-c2 edge.
  CHECK(out.edge_at(loop0).touches(c0));
  CHECK(out.edge_at(loop0).touches(c2));
  CHECK(!out.edge_at(loop0).is_loop());

  // c1 keeps its loop; the copy gets its own loop plus two cross edges.
  CHECK(out.edge_at(loop1) == m.edge_at(loop1));
  std::size_t copy_loops = 0, cross = 0;
  for (const auto& [eid, e] : out.edges) {
    if (e.a == c1p && e.b == c1p) ++copy_loops;
    if (e.touches(c1) && e.touches(c1p) && !e.is_loop()) ++cross;
  }
  CHECK(copy_loops == 1);
  CHECK(cross == 2);
  CHECK(out.edges.size() == 6);
}

TEST_CASE("split_surface rejects bad plans") {
  ObjectId root, c0, c1;
  Model m = small_grope(root, c0, c1);
  const ObjectId s = m.add_object(Kind::Sphere);
  const PairingId pid = m.fresh_pairing();
  const EdgeId e0 = m.add_edge(c0, s, GroupWord::parse("g"), pid);
  const EdgeId e1 = m.add_edge(c0, s, GroupWord::parse("g"), pid);

  // Separating the two edges of one Whitney pairing is never allowed.
  CHECK_THROWS_AS(split_surface(m, SplitPlan{c0, {edge_slot(e0)}, {edge_slot(e1)}}),
                  PlanError);
  // The base surface is not a splittable target.
  CHECK_THROWS_AS(split_surface(m, SplitPlan{root, {}, {}}), PlanError);
  // Slots must be covered exactly.
  CHECK_THROWS_AS(split_surface(m, SplitPlan{c0, {edge_slot(e0)}, {}}), PlanError);
}

TEST_CASE("split_surface preserves the label set on random plans") {
  Rng rng(51);
  int done = 0;
  while (done < 200) {
    const Model m = random_grope(rng);
    for (ObjectId o : m.subtree(m.grope_roots().front())) {
      if (m.at(o).kind == Kind::BaseSurface) continue;
      const auto plan = random_split_plan(rng, m, o);
      if (!plan) continue;
      const Model out = split_surface(m, *plan);
      CHECK(label_set(out) == label_set(m));
      CHECK(validate(out).empty());
      CHECK(out.caps_below(out.grope_roots().front()).size() >
            m.caps_below(m.grope_roots().front()).size());
      ++done;
      break;
    }
  }
}

TEST_CASE("split_to_dyadic fixes nothing on an already-uniform grope") {
  ObjectId root, c0, c1;
  Model m = small_grope(root, c0, c1);
  const ObjectId s = m.add_object(Kind::Sphere);
  m.add_edge(c0, s, GroupWord::parse("g"));

  CHECK(split_to_dyadic(m, root) == m);
}

TEST_CASE("split_to_dyadic separates a cap meeting two dyadic labels") {
  ObjectId root, c0, c1;
  Model m = small_grope(root, c0, c1);
  const ObjectId root2 = m.add_object(Kind::BaseSurface);
  m.at(root2).height = 1;
  m.at(root2).dyadic = true;
  const ObjectId d0 = m.add_object(Kind::Cap, root2);
  const ObjectId d1 = m.add_object(Kind::Cap, root2);
  m.at(root2).pairs.push_back(DualPair{d0, d1});
  m.add_edge(c0, d0, GroupWord::parse("g"));
  m.add_edge(c0, d1, GroupWord::parse("h"));

  const Model out = split_to_dyadic(m, root);
  CHECK(out.at(root).genus() == 2);
  CHECK(dyadic_conditions_hold(out, root));
  CHECK(label_set(out) == label_set(m));
  CHECK(validate(out).empty());
}

TEST_CASE("split_to_dyadic postconditions hold on random gropes") {
  Rng rng(52);
  for (int i = 0; i < 60; ++i) {
    const Model m = random_grope(rng);
    const ObjectId root = m.grope_roots().front();
    const Model out = split_to_dyadic(m, root);
    CHECK(dyadic_conditions_hold(out, root));
    CHECK(label_set(out) == label_set(m));
    CHECK(validate(out).empty());
    CHECK(out.at(root).height == m.at(root).height);

    // Deterministic: the same input always rewrites to the same bytes.
    CHECK(print_model(split_to_dyadic(m, root)) == print_model(out));
  }
}

TEST_CASE("split_to_distance is the identity on a clean dyadic grope") {
  ObjectId root, c0, c1;
  Model m = small_grope(root, c0, c1);
  const ObjectId s = m.add_object(Kind::Sphere);
  m.add_edge(c0, s, GroupWord::parse("g"));

  CHECK(split_to_distance(m, root, 1) == m);
}

TEST_CASE("a fully paired sphere pair needs no splitting at any distance") {
  const Model m = fig_cycle_model(false);
  for (std::size_t n = 1; n <= 4; ++n) CHECK(!collision_search(m, n));
  for (ObjectId branch : branch_roots(m)) CHECK_NOTHROW(ntype(m, branch, 3));
}

TEST_CASE("split_to_distance kills short collisions and leaves n-types") {
  Rng rng(53);
  for (int i = 0; i < 40; ++i) {
    const Model m = random_grope(rng);
    const ObjectId root = m.grope_roots().front();
    const std::size_t n = 1 + static_cast<std::size_t>(i % 3);
    const Model out = split_to_distance(m, root, n);

    CHECK(!collision_search(out, n));
    CHECK(label_set(out) == label_set(m));
    CHECK(validate(out).empty());
    for (ObjectId branch : branch_roots(out)) CHECK_NOTHROW(ntype(out, branch, n));
  }
}

TEST_CASE("n-type equality matches the exhaustive oracle on single-cap branches") {
  Rng rng(54);
  int compared = 0;
  for (int i = 0; i < 30 || compared < 60; ++i) {
    const Model g = random_grope(rng);
    const Model m = split_to_distance(g, g.grope_roots().front(), 2);
    std::vector<ObjectId> single;  // branches rooted at exactly one class
    for (ObjectId b : branch_roots(m)) {
      const auto caps = m.at(b).kind == Kind::Sphere ? std::vector<ObjectId>{b}
                                                     : m.caps_below(b);
      if (caps.size() == 1) single.push_back(caps.front());
    }
    for (std::size_t x = 0; x < single.size(); ++x)
      for (std::size_t y = x + 1; y < single.size(); ++y) {
        OracleBall bx, by;
        try {
          bx = oracle_ball(m, single[x], 2, surface_view());
          by = oracle_ball(m, single[y], 2, surface_view());
          if (bx.size() > 8 || by.size() > 8) continue;
        } catch (const OracleScaleError&) {
          continue;
        }
        const bool engine = ntype(m, single[x], 2) == ntype(m, single[y], 2);
        CHECK(engine == balls_isomorphic(bx, by));
        ++compared;
      }
    if (i > 200) break;
  }
  CHECK(compared >= 60);
}

TEST_CASE("split_transverse_pair doubles the distinguished point") {
  Rng rng(55);
  Model m = random_pair_model(rng, 2, true);
  while (m.pairs[0].extras.size() < 4) m = random_pair_model(rng, 2, true);

  const auto plan = random_pair_plan(rng, m, 0);
  REQUIRE(plan);
  const Model out = split_transverse_pair(m, 0, *plan);

  CHECK(out.pairs.size() == 2);
  CHECK(out.pairs[0].sphere_a == m.pairs[0].sphere_a);
  CHECK(out.pairs[1].distinguished != m.pairs[0].distinguished);
  CHECK(out.edge_at(out.pairs[1].distinguished).label ==
        out.edge_at(out.pairs[0].distinguished).label);
  CHECK(!out.pairs[0].extras.empty());
  CHECK(!out.pairs[1].extras.empty());
  CHECK(label_set(out) == label_set(m));
  CHECK(validate(out).empty());

  // The cut is recorded: one 2-handle plus its pending 3-handle.
  CHECK(out.ledger.records.size() == m.ledger.records.size() + 1);
  CHECK(out.ledger.obligations.size() == m.ledger.obligations.size() + 1);
}

TEST_CASE("split_transverse_pair rejects an empty side and split pairings") {
  Model m;
  m.generators = 7;
  const ObjectId a = m.add_object(Kind::Sphere);
  const ObjectId b = m.add_object(Kind::Sphere);
  const EdgeId x = m.add_edge(a, b, GroupWord::identity());
  const PairingId pid = m.fresh_pairing();
  const EdgeId e0 = m.add_edge(a, b, GroupWord::parse("g"), pid);
  const EdgeId e1 = m.add_edge(a, b, GroupWord::parse("g"), pid);
  m.pairs.push_back(TransversePair{a, b, x, {e0, e1}});

  // A single pairing family cannot be bipartitioned: one side stays empty.
  CHECK_THROWS_AS(
      split_transverse_pair(m, 0, SplitPlan{a, {edge_slot(e0), edge_slot(e1)}, {}}),
      PlanError);
  CHECK_THROWS_AS(
      split_transverse_pair(m, 0, SplitPlan{a, {edge_slot(e0)}, {edge_slot(e1)}}),
      PlanError);
}

TEST_CASE("iterated pair splitting reaches distance 2") {
  Rng rng(56);
  Model m = random_pair_model(rng, 2, true);
  // Split while any pair still admits a plan.
  for (bool progress = true; progress;) {
    progress = false;
    for (int p = 0; p < static_cast<int>(m.pairs.size()); ++p) {
      if (const auto plan = random_pair_plan(rng, m, p)) {
        m = split_transverse_pair(m, p, *plan);
        progress = true;
        break;
      }
    }
  }
  CHECK(!collision_search(m, 2));
  for (ObjectId branch : branch_roots(m)) CHECK(!ntype(m, branch, 2).signature.empty());
}

TEST_CASE("split_whitney_disk moves one pairing to a fresh disk") {
  Rng rng(57);
  Model m = random_tower_model(rng);
  ObjectId disk = 0;
  std::optional<SplitPlan> plan;
  while (!plan) {
    m = random_tower_model(rng);
    for (const auto& layer : m.towers.front().layers) {
      for (ObjectId d : layer)
        if ((plan = random_split_plan(rng, m, d))) {
          disk = d;
          break;
        }
      if (plan) break;
    }
  }

  const Model out = split_whitney_disk(m, 0, disk, *plan);
  CHECK(label_set(out) == label_set(m));
  CHECK(validate(out).empty());
  CHECK(out.edges.size() == m.edges.size() + 2);  // the fresh cancelling pair
  CHECK(out.towers.size() == m.towers.size());

  // The fresh disk cancels a fresh pairing of two equal-label edges.
  ObjectId w2 = 0;
  for (const auto& [id, o] : out.objects)
    if (o.kind == Kind::WhitneyDisk && !m.has_object(id)) w2 = id;
  REQUIRE(w2 != 0);
  std::vector<EdgeId> fresh;
  for (const auto& [eid, e] : out.edges)
    if (e.pairing == out.at(w2).cancels) fresh.push_back(eid);
  CHECK(fresh.size() == 2);
  CHECK(out.edge_at(fresh[0]).label == out.edge_at(fresh[1]).label);
}

TEST_CASE("a disk holding one pairing cannot be split") {
  Rng rng(58);
  bool found = false;
  for (int attempt = 0; attempt < 200 && !found; ++attempt) {
    const Model m = random_tower_model(rng);
    for (const auto& layer : m.towers.front().layers)
      for (ObjectId d : layer) {
        if (found || m.incident(d).size() != 2 || random_split_plan(rng, m, d))
          continue;
        CHECK_THROWS_AS(
            split_whitney_disk(m, 0, d,
                               SplitPlan{d,
                                         {edge_slot(m.incident(d)[0])},
                                         {edge_slot(m.incident(d)[1])}}),
            PlanError);
        found = true;
      }
  }
  CHECK(found);
}

TEST_CASE("tower layer disjointness survives random disk splits") {
  Rng rng(59);
  int done = 0;
  while (done < 100) {
    Model m = random_tower_model(rng);
    for (const auto& layer : m.towers.front().layers) {
      for (ObjectId d : layer) {
        if (const auto plan = random_split_plan(rng, m, d)) {
          const Model out = split_whitney_disk(m, 0, d, *plan);
          CHECK(validate(out).empty());  // includes the layer rule
          ++done;
          break;
        }
      }
      break;
    }
  }
}

}  // namespace
}  // namespace grope
