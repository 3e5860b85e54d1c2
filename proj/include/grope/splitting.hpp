#pragma once
/// Surface splitting: rewrite moves that cut one surface into two pieces,
/// redistributing its intersections while preserving the set of double-point
/// labels.  Higher-level drivers iterate the cut until every branch is dyadic
/// or until no short collision survives.

#include <cstddef>
#include <optional>
#include <vector>

#include "grope/model.hpp"

namespace grope {

/// One attachment slot on a split target.  A non-loop edge occupies one slot
/// (end 0); a loop occupies two (ends 0 and 1); a dual pair of child surfaces
/// is carried as a single indivisible slot.
struct Slot {
  bool is_pair = false;  ///< true: dual-pair slot, false: edge-end slot
  EdgeId edge = 0;       ///< edge id (edge slots)
  int end = 0;           ///< 0 or 1; distinguishes the two ends of a loop
  std::size_t pair = 0;  ///< index into the target's dual pairs (pair slots)

  friend bool operator==(const Slot&, const Slot&) = default;
  friend auto operator<=>(const Slot&, const Slot&) = default;
};

/// A plan for cutting one object in two: every slot of the target is assigned
/// to exactly one side.  Plans that separate the two edges of a Whitney
/// pairing are rejected by every splitting operation.
struct SplitPlan {
  ObjectId target = 0;
  std::vector<Slot> part_one;
  std::vector<Slot> part_two;
};

/// All slots currently on `target`, deterministically ordered: edge slots
/// ascending by (edge id, end), then dual-pair slots ascending by index.
std::vector<Slot> slots_of(const Model& m, ObjectId target);

/// Cut a stage surface or cap in two along the plan.  The parent gains one
/// genus: the target's dual pair (T, H) becomes (T1, H) plus (T2, H2), where
/// T1 reuses the target and H2 is a parallel copy of H's whole subtree.  A
/// loop whose ends land on different sides becomes a single T1-T2 edge.
Model split_surface(const Model& m, const SplitPlan& plan);

/// Split stages and caps under `grope` until every non-base stage has genus
/// one and every cap is loop-free and uniform: one edge label, one neighbour
/// dyadic label.  Marks the root dyadic on success.
Model split_to_dyadic(const Model& m, ObjectId grope, const Budget& budget = {});

/// split_to_dyadic, then keep cutting surfaces on short cycles until no
/// embedded path of length <= n joins quotient-identified vertices in the
/// surface view.
Model split_to_distance(const Model& m, ObjectId grope, std::size_t n,
                        const Budget& budget = {});

/// Cut the A-sphere of a transverse pair in two and double B: the pair is
/// replaced by two transverse pairs, the distinguished intersection is
/// doubled, and the ledger records one 2-handle plus its pending 3-handle.
Model split_transverse_pair(const Model& m, int pair_index, const SplitPlan& plan);

/// Cut a Whitney disk holding at least two interior pairings in two; a fresh
/// cancelling pair of intersections appears one layer down between the
/// surfaces whose points the disk pairs.
Model split_whitney_disk(const Model& m, int tower_index, ObjectId disk,
                         const SplitPlan& plan);

/// Deterministic separation plan for a cap: an unpaired loop is cut apart
/// first; otherwise edge slots are grouped by (normalized label, neighbour
/// dyadic label), groups linked by a Whitney pairing are merged, and the
/// lexicographically first group is split off.  Returns nothing when the cap
/// is already uniform.
std::optional<SplitPlan> synthesize_cap_plan(const Model& m, ObjectId cap);

}  // namespace grope
