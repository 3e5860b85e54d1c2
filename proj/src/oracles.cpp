#include "grope/oracles.hpp"

#include <algorithm>
#include <deque>

#include "grope/errors.hpp"

namespace grope {

namespace {

constexpr std::size_t kOracleVertexCap = 12;
constexpr std::size_t kOracleStepCap = 5'000'000;

/// Class-level adjacency rebuilt straight from the model tables.
struct Flat {
  struct A {
    EdgeId edge = 0;
    ClassId to = 0;
    ObjectId from_obj = 0;
    ObjectId to_obj = 0;
    std::string label;
    bool loop = false;
  };
  std::map<ObjectId, ClassId> cls;
  std::map<ClassId, std::vector<A>> adj;
};

Flat flatten(const Model& m, const ViewOptions& opts) {
  Flat f;
  for (const auto& [id, o] : m.objects) {
    if (opts.kinds && !opts.kinds->count(o.kind)) continue;
    if (opts.objects && !opts.objects->count(id)) continue;
    f.cls[id] = o.cls;
    f.adj[o.cls];
  }
  for (const auto& [id, e] : m.edges) {
    if (opts.exempt_paired && e.pairing) continue;
    auto a = f.cls.find(e.a), b = f.cls.find(e.b);
    if (a == f.cls.end() || b == f.cls.end()) continue;
    std::string label = normalize(e.label).str();
    bool loop = a->second == b->second;
    f.adj[a->second].push_back({id, b->second, e.a, e.b, label, loop});
    if (!loop) f.adj[b->second].push_back({id, a->second, e.b, e.a, label, loop});
  }
  for (auto& [c, list] : f.adj)
    std::sort(list.begin(), list.end(),
              [](const Flat::A& x, const Flat::A& y) { return x.edge < y.edge; });
  return f;
}

std::map<ClassId, std::size_t> ball_distances(const Flat& f, ClassId root, std::size_t n) {
  std::map<ClassId, std::size_t> dist{{root, 0}};
  std::deque<ClassId> queue{root};
  while (!queue.empty()) {
    ClassId u = queue.front();
    queue.pop_front();
    if (dist[u] == n) continue;
    for (const Flat::A& a : f.adj.at(u))
      if (!dist.count(a.to)) {
        dist[a.to] = dist[u] + 1;
        queue.push_back(a.to);
      }
  }
  return dist;
}

}  // namespace

OracleBall oracle_ball(const Model& m, ObjectId root, std::size_t n, ViewOptions opts) {
  Flat f = flatten(m, opts);
  auto it = f.cls.find(root);
  if (it == f.cls.end())
    throw ShapeError("ball: root " + std::to_string(root) + " is outside the view");
  auto dist = ball_distances(f, it->second, n);
  OracleBall b;
  std::map<ClassId, std::size_t> index;
  for (const auto& [c, d] : dist) {
    index[c] = b.nodes.size();
    b.nodes.push_back(c);
    b.dist.push_back(d);
  }
  b.cell.assign(b.size(), std::vector<std::vector<std::string>>(b.size()));
  for (const auto& [c, d] : dist)
    for (const Flat::A& a : f.adj.at(c)) {
      if (!a.loop && c > a.to) continue;
      auto other = index.find(a.to);
      if (other == index.end()) continue;
      std::size_t i = index[c], j = other->second;
      b.cell[i][j].push_back(a.label);
      if (i != j) b.cell[j][i].push_back(a.label);
    }
  for (auto& row : b.cell)
    for (auto& labels : row) std::sort(labels.begin(), labels.end());
  return b;
}

namespace {

/// Order-independent per-vertex key: distance, then every incident label
/// with a loop mark.  Isomorphisms preserve it, so canonical orders only
/// need to permute within equal keys.
using VertexKey = std::pair<std::size_t, std::vector<std::string>>;

VertexKey vertex_key(const OracleBall& b, std::size_t v) {
  VertexKey key{b.dist[v], {}};
  for (std::size_t u = 0; u < b.size(); ++u)
    for (const std::string& l : b.cell[v][u])
      key.second.push_back((u == v ? "o" : "") + l);
  std::sort(key.second.begin(), key.second.end());
  return key;
}

std::string encode_order(const OracleBall& b, const std::vector<std::size_t>& order) {
  std::string out = std::to_string(b.size()) + ";";
  for (std::size_t p = 0; p < order.size(); ++p) {
    out += "d" + std::to_string(b.dist[order[p]]) + "[";
    for (std::size_t q = 0; q <= p; ++q) {
      for (const std::string& l : b.cell[order[p]][order[q]]) out += l + ",";
      out += "|";
    }
    out += "]";
  }
  return out;
}

/// All orders consistent with the vertex keys, visited via per-group
/// std::next_permutation; calls fn for each.
template <typename Fn>
void each_consistent_order(const OracleBall& b, Fn fn) {
  std::vector<std::pair<VertexKey, std::size_t>> keyed;
  for (std::size_t v = 0; v < b.size(); ++v) keyed.emplace_back(vertex_key(b, v), v);
  std::sort(keyed.begin(), keyed.end());
  std::vector<std::vector<std::size_t>> groups;
  for (std::size_t v = 0; v < keyed.size(); ++v) {
    if (v == 0 || keyed[v].first != keyed[v - 1].first) groups.emplace_back();
    groups.back().push_back(keyed[v].second);
  }
  std::size_t total = 1;
  for (const auto& g : groups) {
    std::size_t f = 1;
    for (std::size_t k = 2; k <= g.size(); ++k) f *= k;
    if (total > kOracleStepCap / f)
      throw OracleScaleError("ball too symmetric for exhaustive enumeration");
    total *= f;
  }
  std::vector<std::vector<std::size_t>> perm = groups;
  for (;;) {
    std::vector<std::size_t> order;
    for (const auto& g : perm) order.insert(order.end(), g.begin(), g.end());
    fn(order);
    std::size_t i = 0;
    for (; i < perm.size(); ++i) {
      if (std::next_permutation(perm[i].begin(), perm[i].end())) break;
      // wrapped around; carry to the next group
    }
    if (i == perm.size()) return;
  }
}

}  // namespace

BallSignature ball_signature(const OracleBall& b) {
  if (b.size() > kOracleVertexCap)
    throw OracleScaleError("ball of " + std::to_string(b.size()) +
                           " vertices exceeds the oracle scale of " +
                           std::to_string(kOracleVertexCap));
  if (b.size() == 0) return {"0;"};
  std::string best;
  bool have = false;
  each_consistent_order(b, [&](const std::vector<std::size_t>& order) {
    std::string enc = encode_order(b, order);
    if (!have || enc < best) {
      best = std::move(enc);
      have = true;
    }
  });
  return {best};
}

BallSignature ball_signature(const Model& m, ObjectId root, std::size_t n,
                             ViewOptions opts) {
  return ball_signature(oracle_ball(m, root, n, opts));
}

bool balls_isomorphic(const OracleBall& x, const OracleBall& y) {
  if (x.size() != y.size()) return false;
  if (x.size() > kOracleVertexCap)
    throw OracleScaleError("balls exceed the oracle scale");
  std::vector<VertexKey> kx, ky;
  for (std::size_t v = 0; v < x.size(); ++v) kx.push_back(vertex_key(x, v));
  for (std::size_t v = 0; v < y.size(); ++v) ky.push_back(vertex_key(y, v));
  {
    auto sx = kx, sy = ky;
    std::sort(sx.begin(), sx.end());
    std::sort(sy.begin(), sy.end());
    if (sx != sy) return false;
  }
  std::vector<std::size_t> map(x.size());
  std::vector<bool> used(y.size(), false);
  std::size_t steps = 0;
  auto match = [&](auto&& self, std::size_t v) -> bool {
    if (v == x.size()) return true;
    if (++steps > kOracleStepCap)
      throw OracleScaleError("isomorphism search budget exhausted");
    for (std::size_t w = 0; w < y.size(); ++w) {
      if (used[w] || kx[v] != ky[w]) continue;
      bool ok = true;
      for (std::size_t u = 0; u < v && ok; ++u)
        ok = x.cell[v][u] == y.cell[w][map[u]];
      if (ok && x.cell[v][v] != y.cell[w][w]) ok = false;
      if (!ok) continue;
      used[w] = true;
      map[v] = w;
      if (self(self, v + 1)) return true;
      used[w] = false;
    }
    return false;
  };
  return match(match, 0);
}

TreeCheck is_tree_ball(const Model& m, ObjectId root, std::size_t n, ViewOptions opts) {
  Flat f = flatten(m, opts);
  auto it = f.cls.find(root);
  if (it == f.cls.end())
    throw ShapeError("is_tree_ball: root " + std::to_string(root) +
                     " is outside the view");
  auto dist = ball_distances(f, it->second, n);

  // breadth-first spanning tree over the ball, remembering discovery arcs
  std::map<ClassId, Flat::A> via;
  std::map<ClassId, ClassId> parent;
  std::deque<ClassId> queue{it->second};
  std::set<ClassId> seen{it->second};
  while (!queue.empty()) {
    ClassId u = queue.front();
    queue.pop_front();
    for (const Flat::A& a : f.adj.at(u)) {
      if (!dist.count(a.to) || a.loop) continue;
      if (!seen.count(a.to)) {
        seen.insert(a.to);
        via[a.to] = a;
        parent[a.to] = u;
        queue.push_back(a.to);
      }
    }
  }

  auto chain_to_root = [&](ClassId c) {
    std::vector<ClassId> chain{c};
    while (parent.count(chain.back())) chain.push_back(parent.at(chain.back()));
    return chain;  // c, ..., ball root
  };

  for (const auto& [c, d] : dist)
    for (const Flat::A& a : f.adj.at(c)) {
      if (!dist.count(a.to)) continue;
      if (a.loop)
        return {false, Cycle{{a.from_obj, a.to_obj}, {a.edge}}};
      if (c > a.to) continue;
      bool tree_arc = (via.count(a.to) && via.at(a.to).edge == a.edge) ||
                      (via.count(c) && via.at(c).edge == a.edge);
      if (tree_arc) continue;
      // non-tree edge: walk both endpoints up to their lowest common ancestor
      std::vector<ClassId> cu = chain_to_root(c), cw = chain_to_root(a.to);
      std::set<ClassId> on_cu(cu.begin(), cu.end());
      std::size_t wi = 0;
      while (!on_cu.count(cw[wi])) ++wi;
      ClassId lca = cw[wi];
      Cycle cyc;
      // descend lca -> c, cross the non-tree edge, climb a.to -> lca
      std::vector<ClassId> down(cu.begin(), cu.begin() + (std::find(cu.begin(), cu.end(), lca) - cu.begin()) + 1);
      std::reverse(down.begin(), down.end());  // lca, ..., c
      cyc.path.push_back(0);  // placeholder; fixed below once the first arc is known
      for (std::size_t i = 1; i < down.size(); ++i) {
        const Flat::A& arc = via.at(down[i]);
        cyc.edges.push_back(arc.edge);
        cyc.path.push_back(arc.to_obj);
      }
      cyc.edges.push_back(a.edge);
      cyc.path.push_back(a.to_obj);
      for (std::size_t i = 0; i < wi; ++i) {
        const Flat::A& arc = via.at(cw[i]);
        cyc.edges.push_back(arc.edge);
        cyc.path.push_back(arc.from_obj);
      }
      // the walk starts at the lca: through the first descent arc when the
      // descent is nonempty, else directly across the non-tree edge
      cyc.path.front() = down.size() >= 2 ? via.at(down[1]).from_obj : a.from_obj;
      return {false, std::move(cyc)};
    }
  return {true, std::nullopt};
}

std::optional<Cycle> collision_search(const Model& m, std::size_t n, ViewOptions opts) {
  if (n == 0) return std::nullopt;
  Flat f = flatten(m, opts);
  std::vector<EdgeId> edges;
  std::vector<ObjectId> path;
  std::set<ClassId> visited;
  std::optional<Cycle> found;

  // Embedded-path extension: loops can only close the empty path (any later
  // visit of the start class must be the closure itself), and an extension
  // needs room for one more edge to close within n.
  auto dfs = [&](auto&& self, ClassId start, ClassId at) -> bool {
    for (const Flat::A& a : f.adj.at(at)) {
      if (std::find(edges.begin(), edges.end(), a.edge) != edges.end()) continue;
      if (a.loop) continue;  // a loop mid-path would revisit its class
      if (a.to == start) {
        if (edges.size() + 1 <= n) {
          edges.push_back(a.edge);
          path.push_back(a.to_obj);
          found = Cycle{path, edges};
          return true;
        }
        continue;
      }
      if (visited.count(a.to) || edges.size() + 2 > n) continue;
      edges.push_back(a.edge);
      path.push_back(a.to_obj);
      visited.insert(a.to);
      if (self(self, start, a.to)) return true;
      visited.erase(a.to);
      path.pop_back();
      edges.pop_back();
    }
    return false;
  };

  for (const auto& [s, list] : f.adj) {
    for (const Flat::A& first : list) {
      if (first.loop) {
        if (n >= 1) return Cycle{{first.from_obj, first.to_obj}, {first.edge}};
        continue;
      }
      if (n < 2) continue;
      edges = {first.edge};
      path = {first.from_obj, first.to_obj};
      visited = {s, first.to};
      if (dfs(dfs, s, first.to)) return found;
    }
  }
  return std::nullopt;
}

}  // namespace grope
