#pragma once

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "grope/model.hpp"

namespace grope {

/// Filters applied when projecting a model to its intersection graph.
struct ViewOptions {
  std::optional<std::set<Kind>> kinds;        // keep only these kinds
  std::optional<std::set<ObjectId>> objects;  // keep only these objects
  bool exempt_paired = true;                  // drop Whitney-paired edges

  static ViewOptions everything() { return {std::nullopt, std::nullopt, false}; }
};

/// The quotient intersection multigraph of a model: vertices are quotient
/// classes, arcs are the edges surviving the view filters.  An edge whose
/// endpoints share a class is a loop and appears once in that class's arcs.
class GraphView {
 public:
  explicit GraphView(const Model& m, ViewOptions opts = {});

  struct Arc {
    EdgeId edge = 0;
    ClassId to = 0;        // class of the far endpoint
    ObjectId from_obj = 0;
    ObjectId to_obj = 0;
    GroupWord label;
    bool loop = false;     // both endpoints share a class
  };

  const std::vector<ClassId>& classes() const { return classes_; }
  bool has_class(ClassId c) const { return arcs_.count(c) != 0; }

  /// Arcs incident to a class, ascending by edge id; loops listed once.
  const std::vector<Arc>& arcs(ClassId c) const;

  /// Objects carrying a class, ascending.
  const std::vector<ObjectId>& members(ClassId c) const;

  std::optional<ClassId> class_of(ObjectId v) const;
  std::size_t edge_count() const { return edge_count_; }

 private:
  std::vector<ClassId> classes_;
  std::map<ClassId, std::vector<Arc>> arcs_;
  std::map<ClassId, std::vector<ObjectId>> members_;
  std::map<ObjectId, ClassId> cls_;
  std::size_t edge_count_ = 0;
};

/// An embedded path in the quotient graph whose endpoints share a class.
/// path[i] records the object through which the walk enters its i-th class;
/// for a self-intersection loop the two entries are the same object.
struct Cycle {
  std::vector<ObjectId> path;  // length() + 1 entries
  std::vector<EdgeId> edges;

  std::size_t length() const { return edges.size(); }

  friend bool operator==(const Cycle&, const Cycle&) = default;
};

/// Every cycle of length <= max_len, one representative per undirected edge
/// set, sorted by (length, edge ids).  Complete: empty result at max_len == k
/// means the quotient graph has girth > k.
std::vector<Cycle> find_cycles(const GraphView& g, std::size_t max_len);

/// Shortest cycle length over the view, nullopt when the quotient graph is a
/// forest.
std::optional<std::size_t> girth(const GraphView& g);

/// Hop distances from a class; unreachable classes are absent.
std::map<ClassId, std::size_t> distances_from(const GraphView& g, ClassId from);

/// Shortest cycle of a plain multigraph given as endpoint pairs over the
/// vertices 0..vertices-1; loops give 1, parallel edges 2.
std::optional<std::size_t> multigraph_girth(
    std::size_t vertices, const std::vector<std::pair<std::size_t, std::size_t>>& edges);

}  // namespace grope
