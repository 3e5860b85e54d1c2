#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "grope/errors.hpp"
#include "grope/generators.hpp"
#include "grope/graph_view.hpp"
#include "grope/ledger.hpp"
#include "grope/model.hpp"
#include "grope/oracles.hpp"
#include "grope/unravel.hpp"

namespace grope {
namespace {

/// A path of `length` transverse pairs, consecutive B- and A-spheres joined
/// by one Whitney pairing each; closed into a cycle when `cyclic` is set.
/// Transition i carries the i-th generator as its double-point loop.
Model chain(std::size_t length, bool cyclic, std::vector<ObjectId>* a_out = nullptr,
            std::vector<ObjectId>* b_out = nullptr) {
  Model m;
  m.generators = static_cast<unsigned>(length);
  std::vector<ObjectId> a(length), b(length);
  for (std::size_t i = 0; i < length; ++i) {
    a[i] = m.add_object(Kind::Sphere);
    b[i] = m.add_object(Kind::Sphere);
    const EdgeId d = m.add_edge(a[i], b[i], GroupWord::identity());
    m.pairs.push_back(TransversePair{a[i], b[i], d, {}});
  }
  const std::size_t links = cyclic ? length : length - 1;
  for (std::size_t i = 0; i < links; ++i) {
    const std::size_t j = (i + 1) % length;
    const GroupWord w = GroupWord::gen(static_cast<unsigned>(i));
    const PairingId pid = m.fresh_pairing();
    const EdgeId e1 = m.add_edge(b[i], a[j], w, pid);
    const EdgeId e2 = m.add_edge(b[i], a[j], w, pid);
    m.pairs[i].extras.push_back(e1);
    m.pairs[i].extras.push_back(e2);
    if (j != i) {
      m.pairs[j].extras.push_back(e1);
      m.pairs[j].extras.push_back(e2);
    }
  }
  if (a_out) *a_out = a;
  if (b_out) *b_out = b;
  return m;
}

std::vector<ObjectId> objects_of_kind(const Model& m, Kind k) {
  std::vector<ObjectId> out;
  for (const auto& [id, obj] : m.objects)
    if (obj.kind == k) out.push_back(id);
  return out;
}

std::size_t edges_between(const Model& m, ObjectId x, ObjectId y, const GroupWord& label) {
  std::size_t count = 0;
  for (const auto& [id, e] : m.edges) {
    (void)id;
    if (((e.a == x && e.b == y) || (e.a == y && e.b == x)) && e.label == label) ++count;
  }
  return count;
}

Model discharge_all(Model m) {
  while (!m.ledger.obligations.empty())
    m = discharge_obligation(m, m.ledger.obligations.front().dual);
  return m;
}

}  // namespace

TEST_CASE("unraveling the length-1 cycle at degree 3 matches the figure") {
  const Model m = fig_cycle_model(false);
  const ObjectId a = m.pairs[0].sphere_a;
  const ObjectId b = m.pairs[0].sphere_b;
  const GroupWord g = GroupWord::gen('g' - 'a');

  const auto [out, report] = unravel(m, 0, 3);
  CHECK(validate(out).empty());
  CHECK(label_set(out) == label_set(m));

  CHECK(report.girth_before == 1);
  CHECK(report.girth_after == 3);
  REQUIRE(report.copies_made.size() == 1);
  const std::vector<ObjectId>& copies = report.copies_made.at(b);
  REQUIRE(copies.size() == 3);
  CHECK(!out.has_object(b));

  // One parallel pair per sheet, each meeting A in its lifted distinguished
  // point and carrying the two lifted intersections of its level.
  REQUIRE(out.pairs.size() == 3);
  for (std::size_t t = 0; t < 3; ++t) {
    CHECK(out.pairs[t].sphere_a == a);
    CHECK(out.pairs[t].sphere_b == copies[t]);
    CHECK(out.pairs[t].extras.size() == 2);
    CHECK(out.edge_at(out.pairs[t].distinguished).label == GroupWord::identity());
  }

  // Exactly three capped tori in a cycle: each meets only its successor.
  const auto tori = objects_of_kind(out, Kind::CliffordTorus);
  REQUIRE(tori.size() == 3);
  REQUIRE(out.ledger.records.size() == 6);
  std::map<ObjectId, std::size_t> level;  // torus -> sheet, via its forced cap
  for (ObjectId torus : tori) {
    REQUIRE(out.at(torus).cap_a.has_value());
    for (std::size_t t = 0; t < 3; ++t)
      if (out.ledger.records[t].duals == std::vector<ObjectId>{*out.at(torus).cap_a})
        level[torus] = t;
  }
  REQUIRE(level.size() == 3);
  std::vector<ObjectId> by_level(3);
  for (const auto& [torus, t] : level) by_level[t] = torus;
  std::size_t torus_edges = 0;
  for (const auto& [id, e] : out.edges) {
    (void)id;
    if (out.at(e.a).kind != Kind::CliffordTorus && out.at(e.b).kind != Kind::CliffordTorus)
      continue;
    CHECK(out.at(e.a).kind == Kind::CliffordTorus);
    CHECK(out.at(e.b).kind == Kind::CliffordTorus);
    CHECK(!e.is_loop());
    ++torus_edges;
  }
  CHECK(torus_edges == 3);
  for (std::size_t t = 0; t < 3; ++t)
    CHECK(edges_between(out, by_level[t], by_level[(t + 1) % 3], g) == 1);

  // The free cap of each torus crosses the A-side co-core one sheet up.
  REQUIRE(report.shift_assignment.size() == 3);
  for (const auto& [torus, handle] : report.shift_assignment) {
    REQUIRE(handle >= 3);
    REQUIRE(handle < 6);
    CHECK(out.at(torus).cap_b == out.ledger.records[handle].duals.front());
    CHECK(out.ledger.records[handle].site == a);
  }
  REQUIRE(out.ledger.incidences.size() == 3);
  for (const Incidence& inc : out.ledger.incidences) {
    CHECK(inc.label == g);
    CHECK(inc.from < 3);
    CHECK(inc.to == 3 + (inc.from + 1) % 3);
    REQUIRE(inc.edge.has_value());
    const Edge& shifted = out.edge_at(*inc.edge);
    REQUIRE(shifted.pairing.has_value());
    bool linked = false;
    for (const auto& [torus, handle] : report.shift_assignment)
      if (handle == inc.to && out.at(torus).dual_to == shifted.pairing) linked = true;
    CHECK(linked);
  }

  // No short collisions survive, and the discharged ledger stays triangular.
  CHECK(find_cycles(GraphView(out), 2).empty());
  CHECK(collision_search(out, 2) == std::nullopt);
  const Model done = discharge_all(out);
  const Certificate cert = certify(done);
  CHECK(cert.kind == Certificate::Kind::UpperTriangularUnits);
  CHECK(cert.str() == "upper-triangular-units");

  const std::string text = report.str();
  CHECK(text.find("unravel report") != std::string::npos);
  CHECK(text.find("copies:") != std::string::npos);
  CHECK(text.find("shift:") != std::string::npos);
  CHECK(text.find("girth: 1 -> 3") != std::string::npos);
}

TEST_CASE("an acyclic chain replicates into label-isomorphic sheets") {
  std::vector<ObjectId> a, b;
  const Model m = chain(3, false, &a, &b);
  const std::size_t n = 2;
  const auto [out, report] = unravel(m, 0, n);
  CHECK(validate(out).empty());
  CHECK(label_set(out) == label_set(m));
  CHECK(report.girth_before == std::nullopt);
  CHECK(report.girth_after == std::nullopt);
  CHECK(out.pairs.size() == 3 * n);
  REQUIRE(report.copies_made.size() == 3);

  // Each sheet, read as a labeled graph on the surviving A-spheres and its
  // own B-copies, is label-isomorphic to the original chain.
  const ViewOptions all = ViewOptions::everything();
  const BallSignature original = ball_signature(m, b[0], 5, all);
  for (std::size_t t = 0; t < n; ++t) {
    std::set<ObjectId> sheet(a.begin(), a.end());
    for (std::size_t l = 0; l < 3; ++l) sheet.insert(report.copies_made.at(b[l])[t]);
    const ViewOptions slice{std::nullopt, sheet, false};
    CHECK(ball_signature(out, report.copies_made.at(b[0])[t], 5, slice) == original);
    for (std::size_t l = 0; l + 1 < 3; ++l)
      CHECK(edges_between(out, report.copies_made.at(b[l])[t], a[l + 1],
                          GroupWord::gen(static_cast<unsigned>(l))) == 2);
  }

  // Corresponding vertices across sheets carry identical balls.
  for (std::size_t l = 0; l < 3; ++l) {
    const std::vector<ObjectId>& copies = report.copies_made.at(b[l]);
    const BallSignature first = ball_signature(out, copies[0], 2, all);
    for (std::size_t t = 1; t < n; ++t)
      CHECK(ball_signature(out, copies[t], 2, all) == first);
  }

  const Certificate cert = certify(discharge_all(out));
  CHECK(cert.kind == Certificate::Kind::UpperTriangularUnits);
}

TEST_CASE("a planted cycle stretches past the unraveling degree") {
  for (std::size_t n : {2u, 3u, 4u}) {
    const Model m = chain(2, true);
    const auto [out, report] = unravel(m, 0, n);
    CHECK(validate(out).empty());
    CHECK(report.girth_before == 2);
    CHECK(report.girth_after == std::lcm(2u, static_cast<unsigned>(n)));
    CHECK(find_cycles(GraphView(out), n - 1).empty());
    CHECK(collision_search(out, n - 1) == std::nullopt);
  }
}

TEST_CASE("chains that would collide are rejected") {
  {
    Model m;
    m.generators = 1;
    const ObjectId a1 = m.add_object(Kind::Sphere);
    const ObjectId b1 = m.add_object(Kind::Sphere);
    const ObjectId c = m.add_object(Kind::Sphere);
    m.pairs.push_back(TransversePair{a1, b1, m.add_edge(a1, b1, GroupWord::identity()), {}});
    m.pairs.push_back(TransversePair{b1, c, m.add_edge(b1, c, GroupWord::identity()), {}});
    CHECK_THROWS_AS(unravel(m, 0, 2), PreconditionError);
  }
  {
    // Two chain spheres that are parallel copies of one object.
    std::vector<ObjectId> a;
    Model m = chain(2, false, &a);
    m.at(a[1]).cls = m.at(a[0]).cls;
    CHECK_THROWS_AS(unravel(m, 0, 2), PreconditionError);
  }
  CHECK_THROWS_AS(unravel(fig_cycle_model(true), 0, 2), PreconditionError);
  {
    Rng rng(7);
    CHECK_THROWS_AS(unravel(random_tower_model(rng), 0, 2), PreconditionError);
  }
  {
    // A self-intersection cannot join two chain spheres.
    Model m;
    m.generators = 1;
    const ObjectId a = m.add_object(Kind::Sphere);
    const ObjectId b = m.add_object(Kind::Sphere);
    TransversePair pair{a, b, m.add_edge(a, b, GroupWord::identity()), {}};
    const PairingId pid = m.fresh_pairing();
    pair.extras.push_back(m.add_edge(b, b, GroupWord::gen(0), pid));
    pair.extras.push_back(m.add_edge(b, b, GroupWord::gen(0), pid));
    m.pairs.push_back(pair);
    CHECK_THROWS_AS(unravel(m, 0, 2), PreconditionError);
  }
  {
    // An unpaired extra is a collision the chain walk cannot absorb.
    Model m;
    m.generators = 1;
    const ObjectId a = m.add_object(Kind::Sphere);
    const ObjectId b = m.add_object(Kind::Sphere);
    TransversePair pair{a, b, m.add_edge(a, b, GroupWord::identity()), {}};
    pair.extras.push_back(m.add_edge(a, b, GroupWord::gen(0)));
    m.pairs.push_back(pair);
    CHECK_THROWS_AS(unravel(m, 0, 2), PreconditionError);
  }
  {
    // A star of three transitions leaving one B-sphere is not a linear chain.
    Model m;
    m.generators = 3;
    const ObjectId ac = m.add_object(Kind::Sphere);
    const ObjectId bc = m.add_object(Kind::Sphere);
    m.pairs.push_back(TransversePair{ac, bc, m.add_edge(ac, bc, GroupWord::identity()), {}});
    for (unsigned arm = 0; arm < 3; ++arm) {
      const ObjectId ai = m.add_object(Kind::Sphere);
      const ObjectId bi = m.add_object(Kind::Sphere);
      TransversePair pair{ai, bi, m.add_edge(ai, bi, GroupWord::identity()), {}};
      const PairingId pid = m.fresh_pairing();
      const EdgeId e1 = m.add_edge(bc, ai, GroupWord::gen(arm), pid);
      const EdgeId e2 = m.add_edge(bc, ai, GroupWord::gen(arm), pid);
      m.pairs[0].extras.push_back(e1);
      m.pairs[0].extras.push_back(e2);
      pair.extras.push_back(e1);
      pair.extras.push_back(e2);
      m.pairs.push_back(pair);
    }
    CHECK(validate(m).empty());
    CHECK_THROWS_AS(unravel(m, 0, 2), PreconditionError);
  }
  CHECK_THROWS_AS(unravel(fig_cycle_model(false), 5, 2), ShapeError);
  CHECK_THROWS_AS(unravel(fig_cycle_model(false), -1, 2), ShapeError);
  CHECK_THROWS_AS(unravel(fig_cycle_model(false), 0, 0), ShapeError);
}

TEST_CASE("degree 1 leaves the length-1 cycle in place") {
  const auto [out, report] = unravel(fig_cycle_model(false), 0, 1);
  CHECK(report.girth_before == 1);
  CHECK(report.girth_after == 1);
  CHECK(out.pairs.size() == 1);
  CHECK(validate(out).empty());
  const std::string text = report.str();
  CHECK(text.find("girth: 1 -> 1") != std::string::npos);
}

}  // namespace grope
