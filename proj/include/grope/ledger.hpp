#pragma once
/// Handle bookkeeping: constructions that attach 2-handles along surfaces,
/// create their dual spheres, discharge the pending 3-handles once the
/// co-cores are clean, and classify the resulting boundary matrix.

#include <string>

#include "grope/model.hpp"

namespace grope {

/// Attach the cancelling handle pair for one transverse pair: dual spheres
/// A^t and B^t meeting each other in a single point, one Clifford torus per
/// Whitney pairing among the extras (capped by the dual spheres, carrying a
/// length-1 self-intersection), two 2-handle records and their pending
/// 3-handles.  Attaching twice to the same pair is an error.
Model attach_pair_handles(const Model& m, int pair_index);

/// Attach 2-handles along the two dual circles of one dual pair of `stage`:
/// two dual spheres meeting each other in two points, plus host edges,
/// records and obligations as in attach_pair_handles.
Model attach_stage_handles(const Model& m, ObjectId stage, std::size_t pair_index);

/// Discharge the pending 3-handle whose co-core sphere is `sphere`.  The
/// sphere must carry nothing beyond its construction edges (its host, other
/// dual spheres, Whitney-paired intersections, or a pair's distinguished
/// point); anything else is a premature discharge.  On success the 3-handle
/// is recorded and the boundary row of the discharged 2-handle is filled in:
/// the unit diagonal plus one entry per recorded incidence leaving it.
Model discharge_obligation(const Model& m, ObjectId sphere);

/// Classification of a fully discharged ledger's boundary matrix.
struct Certificate {
  enum class Kind { Identity, UpperTriangularUnits, Fail };
  Kind kind = Kind::Fail;
  int row = -1;  ///< witness entry (Fail only)
  int col = -1;
  GroupRingElement element;  ///< witness element (Fail only)
  std::string reason;

  std::string str() const;
};

/// Classify the boundary matrix: the identity, upper triangular with unit
/// diagonal, or a failure carrying the first offending entry.  A ledger with
/// pending obligations cannot be certified.
Certificate certify(const Model& m);

}  // namespace grope
