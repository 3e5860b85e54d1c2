#include "grope/pipeline.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "grope/canonical.hpp"
#include "grope/errors.hpp"
#include "grope/graph_view.hpp"
#include "grope/ledger.hpp"
#include "grope/oracles.hpp"
#include "grope/splitting.hpp"

namespace grope {

namespace {

/// One edge of the cap/sphere interaction graph: a branch meets the
/// transverse sphere (or another branch) in a single labeled point.
struct InteractionEdge {
  std::size_t u = 0, v = 0;  // interaction-graph vertices
  ObjectId cap_u = 0;        // cap carrying the intersection on each branch
  ObjectId cap_v = 0;        // (0 when that side is the sphere)
  GroupWord label;
  EdgeId origin = 0;
};

/// A node of the depth-n universal cover: a non-backtracking walk, kept as
/// (vertex, walk parent, edge instance used to get here).
struct CoverNode {
  std::size_t vertex = 0;
  std::size_t parent = SIZE_MAX;
  std::size_t in_edge = SIZE_MAX;
  std::size_t depth = 0;
};

std::string bits_or_dot(const std::string& bits) { return bits.empty() ? "." : bits; }

}  // namespace

std::string PipelineReport::str() const {
  std::string out = "pipeline report\n";
  out += "tree: " + std::string(tree ? "true" : "false") + "\n";
  out += "girth: " + (girth ? std::to_string(*girth) : std::string("infinite")) + "\n";
  out += "certificate: " + certificate + "\n";
  out += "distinguished cap: " + std::to_string(distinguished_cap) + "\n";
  out += "tree nodes: " + std::to_string(tree_nodes) + "\n";
  if (push_downs.empty()) {
    out += "push-downs: none\n";
  } else {
    out += "push-downs:\n";
    for (const std::string& line : push_downs) out += "  " + line + "\n";
  }
  return out;
}

std::pair<Model, PipelineReport> theorem1_pipeline(const Model& m, int pair_index,
                                                   std::size_t n, int height,
                                                   const Budget& budget) {
  if (n < 1) throw ShapeError("pipeline distance must be at least 1");
  if (height < 2) throw ShapeError("pipeline needs grope height at least 2");

  // Convert the pair, then split until every cycle is longer than n.
  auto [g, root] = sphere_to_capped_grope(m, pair_index, height);
  const ObjectId sphere = *g.at(root).transverse;
  if (g.at(root).pairs.empty()) {
    // No intersections at all: the pair was already embedded, so the result
    // is the converted surface alone and its ball is a single point.
    PipelineReport report;
    report.tree = is_tree_ball(g, root, n, surface_view()).tree;
    report.girth = girth(GraphView(g, surface_view()));
    report.certificate = certify(g).str();
    report.distinguished_cap = root;
    report.tree_nodes = 0;
    return {std::move(g), report};
  }
  g = split_to_distance(g, root, n, budget);

  // The distinguished cap: smallest dyadic label, then smallest id.
  const std::map<ObjectId, std::string> bits = dyadic_labels(g, root);
  const std::vector<ObjectId> caps = g.caps_below(root);
  ObjectId leading = caps.front();
  for (ObjectId c : caps)
    if (std::pair(bits.at(c), c) < std::pair(bits.at(leading), leading)) leading = c;

  // Branches: the stage trees hanging off the base, in dual-pair order.
  std::vector<ObjectId> branches;
  std::map<ObjectId, std::size_t> branch_of;  // every subtree object -> branch
  for (const DualPair& dp : g.at(root).pairs)
    for (ObjectId side : {dp.left, dp.right}) {
      const std::size_t b = branches.size();
      branches.push_back(side);
      for (ObjectId o : g.subtree(side)) branch_of[o] = b;
    }
  const std::size_t sphere_vertex = branches.size();

  // Interaction graph: one vertex per branch plus the sphere, one edge per
  // remaining cap intersection.
  for (EdgeId eid : g.incident(sphere)) {
    const Edge& e = g.edge_at(eid);
    if (e.is_loop()) throw PreconditionError("transverse sphere self-intersects");
    if (!branch_of.count(e.other(sphere)))
      throw PreconditionError(
          "transverse sphere carries an intersection outside the grope: edge " +
          std::to_string(eid));
  }
  std::vector<InteractionEdge> interaction;
  for (ObjectId c : caps)
    for (EdgeId eid : g.incident(c)) {
      const Edge& e = g.edge_at(eid);
      const ObjectId other = e.other(c);
      if (other == sphere) {
        interaction.push_back(
            InteractionEdge{branch_of.at(c), sphere_vertex, c, 0, e.label, eid});
      } else if (branch_of.count(other) && c < other) {
        interaction.push_back(InteractionEdge{branch_of.at(c), branch_of.at(other), c,
                                              other, e.label, eid});
      }
    }
  std::sort(interaction.begin(), interaction.end(),
            [](const InteractionEdge& a, const InteractionEdge& b) {
              return a.origin < b.origin;
            });

  // Depth-n universal cover from the distinguished cap's branch: every
  // non-backtracking walk of length at most n.  Parallel edges are distinct,
  // so a doubled intersection unwinds into a line.
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> at_vertex(
      sphere_vertex + 1);  // vertex -> (edge index, far vertex)
  for (std::size_t i = 0; i < interaction.size(); ++i) {
    at_vertex[interaction[i].u].push_back({i, interaction[i].v});
    at_vertex[interaction[i].v].push_back({i, interaction[i].u});
  }
  std::vector<CoverNode> nodes{CoverNode{branch_of.at(leading), SIZE_MAX, SIZE_MAX, 0}};
  for (std::size_t head = 0; head < nodes.size(); ++head) {
    const CoverNode node = nodes[head];
    if (node.depth == n) continue;
    for (const auto& [ei, far] : at_vertex[node.vertex]) {
      if (ei == node.in_edge) continue;
      nodes.push_back(CoverNode{far, head, ei, node.depth + 1});
      if ((nodes.size() + head) * 4 > budget.max_objects)
        throw BudgetError("pipeline cover of " + std::to_string(nodes.size()) +
                              " nodes exceeds the object budget",
                          "pipeline", std::make_shared<const Model>(g));
    }
  }

  // Materialize the cover: a fresh standalone grope per branch node, a fresh
  // sphere per sphere node, tree edges carrying the original labels.
  std::vector<ObjectId> piece(nodes.size(), 0);            // node -> copy root / sphere
  std::vector<std::map<ObjectId, ObjectId>> copy_map(nodes.size());
  std::vector<EdgeId> in_edge_copy(nodes.size(), 0);       // node -> materialized edge
  for (std::size_t ni = 0; ni < nodes.size(); ++ni) {
    const CoverNode& node = nodes[ni];
    if (node.vertex == sphere_vertex) {
      piece[ni] = g.add_object(Kind::Sphere);
    } else {
      const ObjectId src = branches[node.vertex];
      const ObjectId base = g.add_object(Kind::BaseSurface);
      copy_map[ni][src] = base;
      std::deque<ObjectId> queue{src};
      while (!queue.empty()) {
        const ObjectId orig = queue.front();
        queue.pop_front();
        const ObjectId mine = copy_map[ni].at(orig);
        for (const DualPair& dp : g.at(orig).pairs) {
          for (ObjectId side : {dp.left, dp.right}) {
            copy_map[ni][side] = g.add_object(g.at(side).kind, mine);
            queue.push_back(side);
          }
          g.at(mine).pairs.push_back(
              DualPair{copy_map[ni].at(dp.left), copy_map[ni].at(dp.right)});
        }
      }
      int depth = 0;
      for (const auto& [orig, copy] : copy_map[ni])
        if (g.at(copy).kind == Kind::Cap)
          depth = std::max(depth, static_cast<int>(bits.at(orig).size()) - 1);
      g.at(base).height = depth;
      g.at(base).dyadic = true;
    }
    if (node.parent != SIZE_MAX) {
      const InteractionEdge& e = interaction[node.in_edge];
      const bool child_is_u = node.vertex == e.u;
      const ObjectId cap_child = child_is_u ? e.cap_u : e.cap_v;
      const ObjectId cap_parent = child_is_u ? e.cap_v : e.cap_u;
      const ObjectId child_end =
          cap_child == 0 ? piece[ni] : copy_map[ni].at(cap_child);
      const ObjectId parent_end = cap_parent == 0 ? piece[node.parent]
                                                  : copy_map[node.parent].at(cap_parent);
      in_edge_copy[ni] = g.add_edge(child_end, parent_end, e.label);
    }
    check_budget(g, budget, "pipeline");
  }
  const ObjectId distinguished = copy_map[0].at(leading);

  // The originals go away: the grope tree, the sphere, and their edges.
  {
    std::vector<ObjectId> doomed = g.subtree(root);
    doomed.push_back(sphere);
    for (ObjectId o : doomed)
      for (EdgeId eid : g.incident(o)) g.remove_edge(eid);
    for (ObjectId o : doomed) g.remove_object(o);
  }

  // Handles at every dual pair of every copy, in cover order; the first
  // handle of each copy is its primary one.
  std::vector<int> primary(nodes.size(), -1);
  for (std::size_t ni = 0; ni < nodes.size(); ++ni) {
    if (nodes[ni].vertex == sphere_vertex) continue;
    primary[ni] = static_cast<int>(g.ledger.records.size());
    std::deque<ObjectId> queue{copy_map[ni].at(branches[nodes[ni].vertex])};
    while (!queue.empty()) {
      const ObjectId stage = queue.front();
      queue.pop_front();
      for (std::size_t pi = 0; pi < g.at(stage).pairs.size(); ++pi) {
        const DualPair dp = g.at(stage).pairs[pi];
        g = attach_stage_handles(g, stage, pi);
        queue.push_back(dp.left);
        queue.push_back(dp.right);
      }
    }
  }
  check_budget(g, budget, "pipeline");

  // Grope-to-grope steps: grandparent and grandchild branch copies joined
  // through a sphere copy.  The cap traffic crosses the child's primary
  // co-core; the push-down happens at the deepest common stage of the two
  // caps' dyadic addresses.
  PipelineReport report;
  for (std::size_t ni = 0; ni < nodes.size(); ++ni) {
    if (nodes[ni].vertex == sphere_vertex || nodes[ni].depth < 2) continue;
    const std::size_t via = nodes[ni].parent;
    if (nodes[via].vertex != sphere_vertex) continue;
    const std::size_t grand = nodes[via].parent;
    const InteractionEdge& e = interaction[nodes[ni].in_edge];
    g.ledger.incidences.push_back(
        Incidence{primary[grand], primary[ni], e.label, in_edge_copy[ni]});

    const ObjectId cap_child = e.u == nodes[ni].vertex ? e.cap_u : e.cap_v;
    const InteractionEdge& pe = interaction[nodes[via].in_edge];
    const ObjectId cap_grand = pe.u == nodes[grand].vertex ? pe.cap_u : pe.cap_v;
    const std::string &bc = bits.at(cap_child), &bg = bits.at(cap_grand);
    std::size_t lcp = 0;
    while (lcp < bc.size() && lcp < bg.size() && bc[lcp] == bg[lcp]) ++lcp;
    const auto stage_at = [&](std::size_t node, ObjectId cap, std::size_t depth) {
      std::vector<ObjectId> path{copy_map[node].at(cap)};
      while (g.at(path.back()).parent) path.push_back(*g.at(path.back()).parent);
      std::reverse(path.begin(), path.end());  // base .. cap
      return path[std::min(depth, path.size() - 2)];
    };
    report.push_downs.push_back(
        "prefix '" + bits_or_dot(bc.substr(0, lcp)) + "' pushes to stage " +
        std::to_string(stage_at(grand, cap_grand, lcp)) + " and stage " +
        std::to_string(stage_at(ni, cap_child, lcp)));
  }

  // Every co-core carries construction edges only, so the ledger clears.
  while (!g.ledger.obligations.empty())
    g = discharge_obligation(g, g.ledger.obligations.front().dual);

  report.tree = is_tree_ball(g, distinguished, n, surface_view()).tree;
  report.girth = girth(GraphView(g, surface_view()));
  report.certificate = certify(g).str();
  report.distinguished_cap = distinguished;
  report.tree_nodes = nodes.size();
  return {std::move(g), report};
}

}  // namespace grope
