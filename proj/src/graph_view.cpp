#include "grope/graph_view.hpp"

#include <algorithm>
#include <deque>
#include <limits>

namespace grope {

GraphView::GraphView(const Model& m, ViewOptions opts) {
  auto keep_object = [&](ObjectId id) {
    const Object& o = m.at(id);
    if (opts.kinds && !opts.kinds->count(o.kind)) return false;
    if (opts.objects && !opts.objects->count(id)) return false;
    return true;
  };
  for (const auto& [id, o] : m.objects) {
    if (!keep_object(id)) continue;
    cls_[id] = o.cls;
    members_[o.cls].push_back(id);
    arcs_[o.cls];  // classes with no surviving edges still appear
  }
  for (const auto& [id, e] : m.edges) {
    if (opts.exempt_paired && e.pairing) continue;
    if (!cls_.count(e.a) || !cls_.count(e.b)) continue;
    ClassId ca = cls_[e.a];
    ClassId cb = cls_[e.b];
    bool loop = ca == cb;
    arcs_[ca].push_back({id, cb, e.a, e.b, e.label, loop});
    if (!loop) arcs_[cb].push_back({id, ca, e.b, e.a, e.label, loop});
    ++edge_count_;
  }
  for (auto& [c, list] : arcs_) {
    std::sort(list.begin(), list.end(),
              [](const Arc& x, const Arc& y) { return x.edge < y.edge; });
    classes_.push_back(c);
  }
}

const std::vector<GraphView::Arc>& GraphView::arcs(ClassId c) const {
  static const std::vector<Arc> none;
  auto it = arcs_.find(c);
  return it == arcs_.end() ? none : it->second;
}

const std::vector<ObjectId>& GraphView::members(ClassId c) const {
  static const std::vector<ObjectId> none;
  auto it = members_.find(c);
  return it == members_.end() ? none : it->second;
}

std::optional<ClassId> GraphView::class_of(ObjectId v) const {
  auto it = cls_.find(v);
  if (it == cls_.end()) return std::nullopt;
  return it->second;
}

namespace {

// Depth-first enumeration of embedded paths that start and end at `start`,
// with every interior class strictly greater -- so each cycle is reported
// from its minimal class only.  Direction is fixed by requiring the first
// edge id to be smaller than the last.
struct CycleSearch {
  const GraphView& g;
  std::size_t max_len;
  std::vector<Cycle>& out;
  ClassId start = 0;
  std::vector<EdgeId> edges;
  std::vector<ObjectId> path;
  std::set<ClassId> interior;

  void extend(ClassId at) {
    if (edges.size() >= max_len) return;
    for (const GraphView::Arc& a : g.arcs(at)) {
      if (a.loop) continue;  // loops are length-1 cycles, handled separately
      if (std::find(edges.begin(), edges.end(), a.edge) != edges.end()) continue;
      if (a.to == start) {
        // each undirected cycle is traversed twice from its minimal class;
        // keep the direction whose first edge id is the smaller one
        if (!edges.empty() && edges.front() < a.edge) {
          Cycle c;
          c.edges = edges;
          c.edges.push_back(a.edge);
          c.path = path;
          c.path.push_back(a.to_obj);
          out.push_back(std::move(c));
        }
        continue;
      }
      if (a.to <= start || interior.count(a.to)) continue;
      edges.push_back(a.edge);
      path.push_back(a.to_obj);
      interior.insert(a.to);
      extend(a.to);
      interior.erase(a.to);
      path.pop_back();
      edges.pop_back();
    }
  }
};

}  // namespace

std::vector<Cycle> find_cycles(const GraphView& g, std::size_t max_len) {
  std::vector<Cycle> out;
  if (max_len == 0) return out;
  for (ClassId c : g.classes())
    for (const GraphView::Arc& a : g.arcs(c))
      if (a.loop) out.push_back({{a.from_obj, a.to_obj}, {a.edge}});
  if (max_len >= 2) {
    for (ClassId s : g.classes()) {
      CycleSearch search{g, max_len, out, s, {}, {}, {}};
      // seed with each non-loop arc leaving s toward a greater class
      for (const GraphView::Arc& a : g.arcs(s)) {
        if (a.loop || a.to <= s) continue;
        search.edges = {a.edge};
        search.path = {a.from_obj, a.to_obj};
        search.interior = {a.to};
        search.extend(a.to);
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const Cycle& x, const Cycle& y) {
    if (x.length() != y.length()) return x.length() < y.length();
    return x.edges < y.edges;
  });
  return out;
}

std::optional<std::size_t> girth(const GraphView& g) {
  // Loops and parallel arcs first, then breadth-first search per root --
  // exact on the remaining simple quotient graph.
  std::map<std::pair<ClassId, ClassId>, int> pair_count;
  bool parallel = false;
  for (ClassId c : g.classes())
    for (const GraphView::Arc& a : g.arcs(c)) {
      if (a.loop) return 1;
      if (c < a.to && ++pair_count[{c, a.to}] >= 2) parallel = true;
    }
  if (parallel) return 2;

  constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max();
  std::size_t best = kInf;
  for (ClassId root : g.classes()) {
    std::map<ClassId, std::size_t> dist;
    std::map<ClassId, EdgeId> via;
    std::deque<ClassId> queue{root};
    dist[root] = 0;
    while (!queue.empty()) {
      ClassId u = queue.front();
      queue.pop_front();
      for (const GraphView::Arc& a : g.arcs(u)) {
        auto it = dist.find(a.to);
        if (it == dist.end()) {
          dist[a.to] = dist[u] + 1;
          via[a.to] = a.edge;
          queue.push_back(a.to);
        } else if (!(via.count(u) && via[u] == a.edge) &&
                   !(via.count(a.to) && via[a.to] == a.edge)) {
          // non-tree edge closing a cycle through the root's search tree
          best = std::min(best, dist[u] + it->second + 1);
        }
      }
    }
  }
  if (best == kInf) return std::nullopt;
  return best;
}

std::map<ClassId, std::size_t> distances_from(const GraphView& g, ClassId from) {
  std::map<ClassId, std::size_t> dist;
  if (!g.has_class(from)) return dist;
  std::deque<ClassId> queue{from};
  dist[from] = 0;
  while (!queue.empty()) {
    ClassId u = queue.front();
    queue.pop_front();
    for (const GraphView::Arc& a : g.arcs(u))
      if (!dist.count(a.to)) {
        dist[a.to] = dist[u] + 1;
        queue.push_back(a.to);
      }
  }
  return dist;
}

std::optional<std::size_t> multigraph_girth(
    std::size_t vertices, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  std::optional<std::size_t> best;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> bundle;
  for (const auto& [u, v] : edges) {
    if (u == v) return 1;
    ++bundle[{std::min(u, v), std::max(u, v)}];
  }
  for (const auto& [uv, count] : bundle)
    if (count > 1) best = 2;
  if (best) return best;

  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj(vertices);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    adj[edges[i].first].push_back({edges[i].second, i});
    adj[edges[i].second].push_back({edges[i].first, i});
  }
  for (std::size_t s = 0; s < vertices; ++s) {
    std::vector<std::size_t> dist(vertices, SIZE_MAX), via(vertices, SIZE_MAX);
    std::vector<std::size_t> queue{s};
    dist[s] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const std::size_t u = queue[head];
      for (const auto& [w, ei] : adj[u]) {
        if (ei == via[u]) continue;
        if (dist[w] == SIZE_MAX) {
          dist[w] = dist[u] + 1;
          via[w] = ei;
          queue.push_back(w);
        } else {
          const std::size_t len = dist[u] + dist[w] + 1;
          if (!best || len < *best) best = len;
        }
      }
    }
  }
  return best;
}

}  // namespace grope
