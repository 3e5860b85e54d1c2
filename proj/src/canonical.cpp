#include "grope/canonical.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include "grope/errors.hpp"

namespace grope {

ViewOptions surface_view() {
  return {std::set<Kind>{Kind::BaseSurface, Kind::StageSurface, Kind::Cap,
                         Kind::Sphere, Kind::WhitneyDisk},
          std::nullopt, true};
}

Ball extract_ball(const GraphView& g, const std::set<ClassId>& roots, std::size_t n) {
  Ball b;
  std::deque<ClassId> queue;
  for (ClassId r : roots)
    if (g.has_class(r)) {
      b.roots.insert(r);
      b.dist[r] = 0;
      queue.push_back(r);
    }
  while (!queue.empty()) {
    ClassId u = queue.front();
    queue.pop_front();
    if (b.dist[u] == n) continue;
    for (const GraphView::Arc& a : g.arcs(u))
      if (!b.dist.count(a.to)) {
        b.dist[a.to] = b.dist[u] + 1;
        queue.push_back(a.to);
      }
  }
  for (const auto& [c, d] : b.dist) b.nodes.push_back(c);
  for (ClassId c : b.nodes)
    for (const GraphView::Arc& a : g.arcs(c)) {
      if (!a.loop && c > a.to) continue;  // each link once; loops appear once
      if (!b.dist.count(a.to)) continue;
      b.links.push_back({std::min(c, a.to), std::max(c, a.to), normalize(a.label), a.edge});
    }
  std::sort(b.links.begin(), b.links.end(), [](const Ball::Link& x, const Ball::Link& y) {
    return std::tie(x.a, x.b, x.label, x.edge) < std::tie(y.a, y.b, y.label, y.edge);
  });
  return b;
}

namespace {

/// The ball reindexed to 0..n-1 with string labels, ready for refinement.
struct Arena {
  std::size_t nv = 0;
  std::vector<std::size_t> dist;
  struct Nbr {
    std::string label;
    std::size_t other;
    bool loop;
  };
  std::vector<std::vector<Nbr>> adj;

  explicit Arena(const Ball& b) {
    std::map<ClassId, std::size_t> index;
    for (ClassId c : b.nodes) {
      index[c] = nv++;
      dist.push_back(b.dist.at(c));
    }
    adj.resize(nv);
    for (const Ball::Link& l : b.links) {
      std::size_t i = index.at(l.a), j = index.at(l.b);
      if (i == j) {
        adj[i].push_back({l.label.str(), i, true});
      } else {
        adj[i].push_back({l.label.str(), j, false});
        adj[j].push_back({l.label.str(), i, false});
      }
    }
  }
};

using Coloring = std::vector<std::size_t>;

/// One round key: own color plus the sorted incident (label, far color) view.
Coloring refine(const Arena& a, Coloring color) {
  for (;;) {
    using Key = std::pair<std::size_t, std::vector<std::tuple<std::string, std::size_t, bool>>>;
    std::vector<Key> keys(a.nv);
    for (std::size_t v = 0; v < a.nv; ++v) {
      keys[v].first = color[v];
      for (const Arena::Nbr& n : a.adj[v])
        keys[v].second.emplace_back(n.label, color[n.other], n.loop);
      std::sort(keys[v].second.begin(), keys[v].second.end());
    }
    std::vector<Key> sorted = keys;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    Coloring next(a.nv);
    for (std::size_t v = 0; v < a.nv; ++v)
      next[v] = std::lower_bound(sorted.begin(), sorted.end(), keys[v]) - sorted.begin();
    if (next == color) return color;
    color = std::move(next);
  }
}

std::string encode(const Arena& a, const Coloring& color) {
  // discrete coloring: vertex with color p sits at position p
  std::vector<std::size_t> at(a.nv);
  for (std::size_t v = 0; v < a.nv; ++v) at[color[v]] = v;
  std::ostringstream out;
  out << a.nv << ';';
  for (std::size_t p = 0; p < a.nv; ++p) {
    std::size_t v = at[p];
    out << 'd' << a.dist[v] << '[';
    std::vector<std::string> entries;
    for (const Arena::Nbr& n : a.adj[v]) {
      std::ostringstream e;
      e << (n.loop ? "o" : "") << color[n.other] << ':' << n.label;
      entries.push_back(e.str());
    }
    std::sort(entries.begin(), entries.end());
    for (const std::string& e : entries) out << e << ',';
    out << ']';
  }
  return out.str();
}

void search(const Arena& a, const Coloring& color, std::string& best, bool& have) {
  // smallest color value held by more than one vertex
  std::map<std::size_t, std::vector<std::size_t>> cells;
  for (std::size_t v = 0; v < a.nv; ++v) cells[color[v]].push_back(v);
  const std::vector<std::size_t>* split = nullptr;
  for (const auto& [c, members] : cells)
    if (members.size() > 1) {
      split = &members;
      break;
    }
  if (!split) {
    std::string enc = encode(a, color);
    if (!have || enc < best) {
      best = std::move(enc);
      have = true;
    }
    return;
  }
  std::vector<Coloring> seen;
  for (std::size_t v : *split) {
    Coloring individual = color;
    individual[v] = a.nv;  // fresh color; refinement renumbers
    Coloring refined = refine(a, std::move(individual));
    // identical refinements give identical subtrees
    if (std::find(seen.begin(), seen.end(), refined) != seen.end()) continue;
    seen.push_back(refined);
    search(a, refined, best, have);
  }
}

}  // namespace

NType canonical_signature(const Ball& b) {
  Arena a(b);
  if (a.nv == 0) return {"0;"};
  Coloring initial(a.nv);
  std::vector<std::size_t> dists = a.dist;
  std::sort(dists.begin(), dists.end());
  dists.erase(std::unique(dists.begin(), dists.end()), dists.end());
  for (std::size_t v = 0; v < a.nv; ++v)
    initial[v] = std::lower_bound(dists.begin(), dists.end(), a.dist[v]) - dists.begin();
  std::string best;
  bool have = false;
  search(a, refine(a, std::move(initial)), best, have);
  return {best};
}

NType ntype(const Model& m, ObjectId branch, std::size_t n) {
  GraphView g(m, surface_view());
  const Object& o = m.at(branch);
  std::set<ClassId> roots;
  if (o.kind == Kind::Cap || o.kind == Kind::Sphere || o.kind == Kind::WhitneyDisk) {
    roots.insert(o.cls);
  } else if (o.kind == Kind::BaseSurface || o.kind == Kind::StageSurface) {
    for (ObjectId cap : m.caps_below(branch)) roots.insert(m.at(cap).cls);
    if (roots.empty()) roots.insert(o.cls);
  } else {
    throw ShapeError("ntype: object " + std::to_string(branch) +
                     " is handle scaffolding and has no n-type");
  }
  return canonical_signature(extract_ball(g, roots, n));
}

std::vector<ObjectId> branch_roots(const Model& m) {
  std::vector<ObjectId> out;
  for (ObjectId root : m.grope_roots())
    for (const DualPair& p : m.at(root).pairs) {
      out.push_back(p.left);
      out.push_back(p.right);
    }
  for (const auto& [id, o] : m.objects)
    if (o.kind == Kind::Sphere) out.push_back(id);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace grope
