#include "grope/ledger.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "grope/errors.hpp"

namespace grope {

namespace {

std::string id_str(ObjectId id) { return std::to_string(id); }

std::string ring_str(const GroupRingElement& e) {
  if (e.empty()) return "0";
  std::string out;
  for (const auto& [word, coeff] : e) {
    if (!out.empty()) out += " + ";
    out += std::to_string(coeff) + "*" + word.str();
  }
  return out;
}

/// Dual spheres and the handle records they answer to, in attachment order.
void require_unattached(const Model& m, ObjectId site) {
  for (const HandleRecord& r : m.ledger.records)
    if (r.dimension == 2 && r.site == site)
      throw PreconditionError("handles already attached along object " + id_str(site) +
                              " (record " + std::to_string(r.index) + ")");
}

}  // namespace

Model attach_pair_handles(const Model& m, int pair_index) {
  if (pair_index < 0 || pair_index >= static_cast<int>(m.pairs.size()))
    throw ShapeError("no transverse pair with index " + std::to_string(pair_index));
  const TransversePair pair = m.pairs[pair_index];
  require_unattached(m, pair.sphere_b);

  Model out = m;
  const GroupWord eps = GroupWord::identity();
  const ObjectId at = out.add_object(Kind::DualSphere);
  const ObjectId bt = out.add_object(Kind::DualSphere);
  out.add_edge(at, pair.sphere_a, eps);
  out.add_edge(bt, pair.sphere_b, eps);
  out.add_edge(at, bt, eps);  // the dual spheres meet in a single point

  const int idx = static_cast<int>(out.ledger.records.size());
  out.ledger.records.push_back(HandleRecord{idx, 2, pair.sphere_a, {at}});
  out.ledger.records.push_back(HandleRecord{idx + 1, 2, pair.sphere_b, {bt}});
  out.ledger.obligations.push_back(Obligation{idx, at, pair.sphere_a});
  out.ledger.obligations.push_back(Obligation{idx + 1, bt, pair.sphere_b});

  // One Clifford torus per Whitney pairing among the extras, capped by the
  // dual spheres.  The caps meet each other: a cycle of length one, labeled
  // by the pairing's double-point loop.
  std::map<PairingId, std::vector<EdgeId>> pairings;
  for (EdgeId eid : pair.extras) {
    const Edge& e = m.edge_at(eid);
    if (e.pairing) pairings[*e.pairing].push_back(eid);
  }
  for (const auto& [pid, eids] : pairings) {
    if (eids.size() < 2) continue;
    const ObjectId torus = out.add_object(Kind::CliffordTorus);
    out.at(torus).dual_to = pid;
    out.at(torus).cap_a = bt;
    out.at(torus).cap_b = at;
    out.add_edge(torus, torus, m.edge_at(*std::min_element(eids.begin(), eids.end())).label);
  }
  return out;
}

Model attach_stage_handles(const Model& m, ObjectId stage, std::size_t pair_index) {
  if (!m.has_object(stage))
    throw ShapeError("object " + id_str(stage) + " does not exist");
  const Object& s = m.at(stage);
  if (s.kind != Kind::BaseSurface && s.kind != Kind::StageSurface)
    throw ShapeError("handles attach along a surface stage, got " +
                     std::string(kind_name(s.kind)));
  if (pair_index >= s.pairs.size())
    throw ShapeError("stage " + id_str(stage) + " has no dual pair with index " +
                     std::to_string(pair_index));
  const DualPair dp = s.pairs[pair_index];
  require_unattached(m, dp.left);
  require_unattached(m, dp.right);

  Model out = m;
  const GroupWord eps = GroupWord::identity();
  const ObjectId da = out.add_object(Kind::DualSphere);
  const ObjectId db = out.add_object(Kind::DualSphere);
  out.add_edge(da, dp.left, eps);
  out.add_edge(db, dp.right, eps);
  out.add_edge(da, db, eps);  // the dual spheres meet in two points
  out.add_edge(da, db, eps);

  const int idx = static_cast<int>(out.ledger.records.size());
  out.ledger.records.push_back(HandleRecord{idx, 2, dp.left, {da}});
  out.ledger.records.push_back(HandleRecord{idx + 1, 2, dp.right, {db}});
  out.ledger.obligations.push_back(Obligation{idx, da, dp.left});
  out.ledger.obligations.push_back(Obligation{idx + 1, db, dp.right});
  return out;
}

Model discharge_obligation(const Model& m, ObjectId sphere) {
  std::size_t at = m.ledger.obligations.size();
  for (std::size_t i = 0; i < m.ledger.obligations.size(); ++i)
    if (m.ledger.obligations[i].dual == sphere) at = i;
  if (at == m.ledger.obligations.size())
    throw PreconditionError("no pending obligation for sphere " + id_str(sphere));
  const Obligation ob = m.ledger.obligations[at];
  const Kind kind = m.at(sphere).kind;

  for (EdgeId eid : m.incident(sphere)) {
    const Edge& e = m.edge_at(eid);
    const ObjectId other = e.other(sphere);
    if (m.at(other).kind == Kind::DualSphere && other != sphere) continue;
    if (kind == Kind::DualSphere) {
      // Construction edges to the host are expected; paired intersections
      // cancel and do not obstruct the parallel co-core copy.
      if (other == ob.host) continue;
      if (e.pairing) continue;
    } else {
      // A sphere created by a transverse-pair split must keep nothing but
      // its distinguished intersection.
      bool distinguished = false;
      for (const TransversePair& p : m.pairs)
        if (p.distinguished == eid) distinguished = true;
      if (distinguished) continue;
    }
    throw PreconditionError("premature discharge: sphere " + id_str(sphere) +
                            " still meets object " + id_str(other) + " along edge " +
                            std::to_string(eid));
  }

  Model out = m;
  out.ledger.obligations.erase(out.ledger.obligations.begin() + at);
  const int idx = static_cast<int>(out.ledger.records.size());
  out.ledger.records.push_back(HandleRecord{idx, 3, ob.host, {}});
  out.ledger.boundary.add(ob.handle, ob.handle, GroupWord::identity(), 1);
  for (const Incidence& inc : m.ledger.incidences)
    if (inc.from == ob.handle) out.ledger.boundary.add(ob.handle, inc.to, inc.label, 1);
  return out;
}

std::string Certificate::str() const {
  switch (kind) {
    case Kind::Identity:
      return "identity";
    case Kind::UpperTriangularUnits:
      return "upper-triangular-units";
    case Kind::Fail:
      return "fail(row " + std::to_string(row) + ", col " + std::to_string(col) +
             ", entry " + ring_str(element) + ")";
  }
  return "fail";
}

Certificate certify(const Model& m) {
  if (!m.ledger.obligations.empty()) {
    std::string pending;
    for (const Obligation& ob : m.ledger.obligations) {
      if (!pending.empty()) pending += ", ";
      pending += "handle " + std::to_string(ob.handle) + " (sphere " + id_str(ob.dual) + ")";
    }
    throw PreconditionError("ledger has pending obligations: " + pending);
  }

  std::vector<int> two_handles;
  for (const HandleRecord& r : m.ledger.records)
    if (r.dimension == 2) two_handles.push_back(r.index);

  const GroupWord eps = GroupWord::identity();
  bool diagonal_identity = true;

  for (int k : two_handles) {
    const auto it = m.ledger.boundary.entries.find({k, k});
    const GroupRingElement diag =
        it == m.ledger.boundary.entries.end() ? GroupRingElement{} : it->second;
    const bool unit = diag.size() == 1 && (diag.begin()->second == 1 || diag.begin()->second == -1);
    if (!unit)
      return Certificate{Certificate::Kind::Fail, k, k, diag,
                         "diagonal entry of handle " + std::to_string(k) + " is not a unit"};
    if (!(diag.begin()->first == eps && diag.begin()->second == 1)) diagonal_identity = false;
  }

  bool off_diagonal = false;
  for (const auto& [pos, element] : m.ledger.boundary.entries) {
    if (element.empty() || pos.first == pos.second) continue;
    off_diagonal = true;
    if (pos.first > pos.second)
      return Certificate{Certificate::Kind::Fail, pos.first, pos.second, element,
                         "entry below the diagonal in attachment order"};
  }

  if (diagonal_identity && !off_diagonal)
    return Certificate{Certificate::Kind::Identity, -1, -1, {}, "boundary is the identity"};
  return Certificate{Certificate::Kind::UpperTriangularUnits, -1, -1, {},
                     "boundary is upper triangular with unit diagonal"};
}

}  // namespace grope
