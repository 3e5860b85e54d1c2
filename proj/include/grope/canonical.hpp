#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "grope/graph_view.hpp"
#include "grope/model.hpp"

namespace grope {

/// View used for n-types and collision search: the surfaces that carry
/// genuine intersections.  Handle scaffolding (Clifford tori, dual spheres)
/// and Whitney-paired edges are excluded -- paired intersections cancel.
ViewOptions surface_view();

/// The radius-n piece of a quotient graph around a set of root classes,
/// with hop distances and the induced links (labels normalized, since an
/// undirected intersection reads as w from one sheet and w' from the other).
struct Ball {
  std::set<ClassId> roots;
  std::vector<ClassId> nodes;  // sorted ascending
  std::map<ClassId, std::size_t> dist;

  struct Link {
    ClassId a = 0;  // a <= b
    ClassId b = 0;
    GroupWord label;
    EdgeId edge = 0;

    friend bool operator==(const Link&, const Link&) = default;
  };
  std::vector<Link> links;  // sorted by (a, b, label, edge)
};

Ball extract_ball(const GraphView& g, const std::set<ClassId>& roots, std::size_t n);

/// Canonical form of a ball up to label-preserving root-respecting
/// isomorphism: equal signatures iff the balls are isomorphic.
struct NType {
  std::string signature;

  friend bool operator==(const NType&, const NType&) = default;
  friend auto operator<=>(const NType&, const NType&) = default;
};

/// Exact canonicalization by color refinement with individualization
/// backtracking; the minimum encoding over all discrete refinements.
NType canonical_signature(const Ball& b);

/// n-type of a branch: the canonical radius-n ball around the branch's caps
/// (around the branch itself when it has none) in the surface view.
NType ntype(const Model& m, ObjectId branch, std::size_t n);

/// Branch roots carrying n-types: the children of every grope base, plus
/// every free-standing sphere.
std::vector<ObjectId> branch_roots(const Model& m);

}  // namespace grope
