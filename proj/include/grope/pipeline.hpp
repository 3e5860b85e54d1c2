#pragma once
/// The end-to-end rewriting pipeline for one transverse pair: convert the
/// pair to a capped grope, split it until intersections sit at distance n,
/// unwind the cap/sphere interaction pattern into its depth-n universal
/// cover, attach and discharge handles on every copy, and certify the
/// resulting boundary matrix.

#include <optional>
#include <string>
#include <vector>

#include "grope/model.hpp"

namespace grope {

/// Outcome summary of one pipeline run.
struct PipelineReport {
  bool tree = false;               ///< ball of radius n at the distinguished cap is a tree
  std::optional<std::size_t> girth;  ///< surface-view girth; nullopt = no cycle at all
  std::string certificate;         ///< certify() verdict on the final ledger
  ObjectId distinguished_cap = 0;  ///< surviving copy of the leading cap
  std::size_t tree_nodes = 0;      ///< materialized cover nodes
  std::vector<std::string> push_downs;  ///< one line per grope-to-grope step

  std::string str() const;
};

/// Run the pipeline on pair `pair_index`, unwinding to distance `n` with
/// gropes of the given height.  The pair's extras must all be Whitney paired
/// and its transverse sphere must carry no other intersections.  Returns the
/// rewritten model and the report.
std::pair<Model, PipelineReport> theorem1_pipeline(const Model& m, int pair_index,
                                                   std::size_t n, int height = 2,
                                                   const Budget& budget = {});

}  // namespace grope
