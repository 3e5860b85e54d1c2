#include "grope/dot.hpp"

#include <set>

namespace grope {

std::string to_dot(const Model& m, const ViewOptions& opts) {
  const GraphView g(m, opts);
  std::string out = "graph quotient {\n  node [shape=ellipse];\n";
  for (ClassId c : g.classes()) {
    const std::vector<ObjectId>& mem = g.members(c);
    std::string label =
        std::string(kind_name(m.at(mem.front()).kind)) + " c" + std::to_string(c);
    if (mem.size() > 1) label += " x" + std::to_string(mem.size());
    out += "  c" + std::to_string(c) + " [label=\"" + label + "\"];\n";
  }
  std::set<EdgeId> seen;
  for (ClassId c : g.classes())
    for (const GraphView::Arc& a : g.arcs(c)) {
      if (!seen.insert(a.edge).second) continue;
      out += "  c" + std::to_string(c) + " -- c" + std::to_string(a.to) + " [label=\"" +
             a.label.str() + "\"";
      if (m.edge_at(a.edge).pairing) out += ", style=dashed";
      out += "];\n";
    }
  out += "}\n";
  return out;
}

}  // namespace grope
