#pragma once
/// Cycle unraveling: replace each B-sphere of a chain of transverse pairs by
/// n parallel copies wired as a cyclic cover, so every cycle of Whitney-paired
/// intersections lengthens by a factor of at least n / gcd, and record the
/// cap traffic that makes the boundary matrix upper triangular.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "grope/model.hpp"

namespace grope {

/// What the unraveling did: which copies replaced each B-sphere, where each
/// Clifford torus sends its free cap (the record index of the A-side handle
/// whose co-core the shifted cap crosses — the cyclic successor on every
/// chain), and the shortest cycle in the chain graph before and after
/// (absent when the graph is acyclic).
struct UnravelReport {
  std::map<ObjectId, std::vector<ObjectId>> copies_made;
  std::map<ObjectId, int> shift_assignment;
  std::optional<std::size_t> girth_before;
  std::optional<std::size_t> girth_after;

  std::string str() const;
};

/// Unravel the chain of Whitney-paired transverse pairs containing
/// `seed_pair` at degree n.  The chain is walked breadth-first from the seed,
/// naming each pair's spheres A and B along the way; it must form a simple
/// path or a simple cycle.  A sphere serving two chain pairs is a collision
/// at distance < n and is rejected, as is a chain whose pairs already carry
/// handles.  Pairs outside the chain are left alone.
std::pair<Model, UnravelReport> unravel(const Model& m, int seed_pair, std::size_t n,
                                        const Budget& budget = {});

}  // namespace grope
