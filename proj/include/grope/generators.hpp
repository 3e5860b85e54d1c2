#pragma once
/// Deterministic random model generators for fuzzing and the test corpus.

#include <cstdint>
#include <optional>

#include "grope/model.hpp"
#include "grope/splitting.hpp"

namespace grope {

/// Small deterministic generator (splitmix64), so every fuzz run is
/// reproducible from its seed alone.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();
  std::size_t below(std::size_t n);  ///< uniform in [0, n); n must be positive
  bool one_in(std::size_t n);        ///< true with probability 1/n

  /// A reduced word of up to max_len letters over the first `letters`
  /// generators, occasionally inverted; may come out as the identity.
  GroupWord word(std::size_t letters, std::size_t max_len);

 private:
  std::uint64_t state_;
};

/// A random capped grope: height <= 3, stage genus <= 2, and at most 10
/// intersections among the caps and an optional floating sphere.  Loops stay
/// unpaired so every violation of cap uniformity remains splittable.
Model random_grope(Rng& rng);

/// A random transverse pair: spheres A and B, a distinguished point, and 1-3
/// Whitney pairings over `letters` generators; unless all_paired is set, an
/// occasional unpaired extra or self-intersection is thrown in.
Model random_pair_model(Rng& rng, std::size_t letters = 3, bool all_paired = false);

/// A transverse pair carrying a Whitney tower: first-layer disks cancel the
/// pair's Whitney pairings and intersect one another, and a second-layer
/// disk cancels the pairing between the first two.
Model random_tower_model(Rng& rng);

/// A chain of `length` transverse pairs joined consecutively by Whitney
/// pairings, closed into a cycle when `cyclic` is set; an occasional
/// third-party sphere hangs off one of the B-spheres.
Model random_chain_model(Rng& rng, std::size_t length, bool cyclic);

/// The length-1 cycle: one transverse pair whose two g-labeled extras form a
/// single Whitney pairing.  With handles attached the model carries the
/// capped torus whose caps intersect each other.
Model fig_cycle_model(bool with_handles = false);

/// A random valid plan cutting `target` in two, or nullopt when its slots
/// cannot be bipartitioned.  Whitney-paired slots travel together and both
/// sides stay nonempty.
std::optional<SplitPlan> random_split_plan(Rng& rng, const Model& m, ObjectId target);

/// As above, over the open slots of transverse pair `pair_index` (the
/// distinguished point stays put).
std::optional<SplitPlan> random_pair_plan(Rng& rng, const Model& m, int pair_index);

}  // namespace grope
