#pragma once
/// DOT rendering of the quotient intersection graph: one node per quotient
/// class, badged with the number of parallel copies sharing it, one edge per
/// surviving intersection (Whitney-paired ones dashed).

#include <string>

#include "grope/graph_view.hpp"
#include "grope/model.hpp"

namespace grope {

std::string to_dot(const Model& m, const ViewOptions& opts = ViewOptions::everything());

}  // namespace grope
