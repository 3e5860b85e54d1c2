#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "grope/graph_view.hpp"
#include "grope/model.hpp"

namespace grope {

/// Brute-force checkers kept deliberately independent of the engine: they
/// rebuild the quotient graph straight from the model and enumerate, so the
/// fast implementations can be tested against them.

/// A radius-n quotient ball in adjacency-matrix form.  cell[i][j] holds the
/// sorted normalized labels of the links between nodes i and j (i == j for
/// loops), counted once.
struct OracleBall {
  std::vector<ClassId> nodes;  // sorted ascending
  std::vector<std::size_t> dist;
  std::vector<std::vector<std::vector<std::string>>> cell;

  std::size_t size() const { return nodes.size(); }
};

OracleBall oracle_ball(const Model& m, ObjectId root, std::size_t n,
                       ViewOptions opts = {});

/// Canonical text form of a ball: the minimum adjacency encoding over every
/// vertex order consistent with (distance, degree, label multiset).  Equal
/// texts iff the balls are label-isomorphic.  Throws OracleScaleError past
/// 12 vertices or when the consistent orders exceed the enumeration budget.
struct BallSignature {
  std::string text;

  friend bool operator==(const BallSignature&, const BallSignature&) = default;
  friend auto operator<=>(const BallSignature&, const BallSignature&) = default;
};

BallSignature ball_signature(const OracleBall& b);
BallSignature ball_signature(const Model& m, ObjectId root, std::size_t n,
                             ViewOptions opts = {});

/// Direct root-and-label-preserving isomorphism search between two balls.
/// Same scale limits as ball_signature.
bool balls_isomorphic(const OracleBall& x, const OracleBall& y);

/// Tree test for the radius-n ball around root's class: true iff the ball
/// is connected (it is, by construction) and acyclic; false carries a cycle
/// witness inside the ball.
struct TreeCheck {
  bool tree = false;
  std::optional<Cycle> witness;
};

TreeCheck is_tree_ball(const Model& m, ObjectId root, std::size_t n,
                       ViewOptions opts = {});

/// First embedded path of length <= n whose endpoints share a class, found
/// by exhaustive depth-first enumeration; nullopt when none exists.
std::optional<Cycle> collision_search(const Model& m, std::size_t n,
                                      ViewOptions opts = {});

}  // namespace grope
