#include "grope/generators.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "grope/ledger.hpp"

namespace grope {

std::uint64_t Rng::next() {
  state_ += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::size_t Rng::below(std::size_t n) { return static_cast<std::size_t>(next() % n); }

bool Rng::one_in(std::size_t n) { return below(n) == 0; }

GroupWord Rng::word(std::size_t letters, std::size_t max_len) {
  GroupWord w;
  const std::size_t len = below(max_len + 1);
  for (std::size_t i = 0; i < len; ++i)
    w = multiply(w, GroupWord::gen(static_cast<unsigned>(below(letters)), one_in(3)));
  return reduce(w);
}

Model random_grope(Rng& rng) {
  Model m;
  m.generators = 2;  // intersection labels are drawn over two letters
  const int h = 1 + static_cast<int>(rng.below(3));
  const ObjectId root = m.add_object(Kind::BaseSurface);
  m.at(root).height = h;

  const std::function<ObjectId(ObjectId, int)> build = [&](ObjectId parent, int depth) {
    if (depth == h) return m.add_object(Kind::Cap, parent);
    const ObjectId stage = m.add_object(Kind::StageSurface, parent);
    const std::size_t genus = 1 + (rng.one_in(3) ? 1 : 0);
    for (std::size_t g = 0; g < genus; ++g) {
      const ObjectId left = build(stage, depth + 1);
      const ObjectId right = build(stage, depth + 1);
      m.at(stage).pairs.push_back(DualPair{left, right});
    }
    return stage;
  };
  const std::size_t root_genus = 1 + (rng.one_in(2) ? 1 : 0);
  for (std::size_t g = 0; g < root_genus; ++g) {
    const ObjectId left = build(root, 1);
    const ObjectId right = build(root, 1);
    m.at(root).pairs.push_back(DualPair{left, right});
  }

  const std::vector<ObjectId> caps = m.caps_below(root);
  std::optional<ObjectId> sphere;
  if (rng.one_in(2)) sphere = m.add_object(Kind::Sphere);

  const std::size_t wanted = rng.below(11);
  std::size_t made = 0;
  while (made < wanted) {
    const GroupWord label = rng.word(2, 2);
    const ObjectId a = caps[rng.below(caps.size())];
    const ObjectId b = (sphere && rng.one_in(3)) ? *sphere : caps[rng.below(caps.size())];
    if (a != b && rng.one_in(3) && made + 2 <= wanted) {
      const PairingId pid = m.fresh_pairing();
      m.add_edge(a, b, label, pid);
      m.add_edge(a, b, label, pid);
      made += 2;
    } else {
      m.add_edge(a, b, label);  // loops stay unpaired
      made += 1;
    }
  }
  return m;
}

Model random_pair_model(Rng& rng, std::size_t letters, bool all_paired) {
  Model m;
  m.generators = static_cast<unsigned>(letters);
  const ObjectId a = m.add_object(Kind::Sphere);
  const ObjectId b = m.add_object(Kind::Sphere);
  const EdgeId d = m.add_edge(a, b, GroupWord::identity());
  TransversePair pair{a, b, d, {}};
  const std::size_t pairings = 1 + rng.below(3);
  for (std::size_t i = 0; i < pairings; ++i) {
    const GroupWord w = rng.word(letters, 2);
    const PairingId pid = m.fresh_pairing();
    pair.extras.push_back(m.add_edge(a, b, w, pid));
    pair.extras.push_back(m.add_edge(a, b, w, pid));
  }
  if (!all_paired) {
    if (rng.one_in(3)) pair.extras.push_back(m.add_edge(a, b, rng.word(letters, 2)));
    if (rng.one_in(6)) pair.extras.push_back(m.add_edge(a, a, rng.word(letters, 2)));
  }
  m.pairs.push_back(pair);
  return m;
}

Model random_tower_model(Rng& rng) {
  Model m = random_pair_model(rng, 2, true);
  std::vector<PairingId> pids;
  for (EdgeId eid : m.pairs[0].extras) {
    const PairingId pid = *m.edge_at(eid).pairing;
    if (std::find(pids.begin(), pids.end(), pid) == pids.end()) pids.push_back(pid);
  }
  WhitneyTower tower{0, {}};
  std::vector<ObjectId> layer;
  for (PairingId pid : pids) {
    const ObjectId disk = m.add_object(Kind::WhitneyDisk);
    m.at(disk).cancels = pid;
    layer.push_back(disk);
  }
  tower.layers.push_back(layer);
  if (layer.size() >= 2 && rng.one_in(2)) {
    const GroupWord w = rng.word(2, 2);
    const PairingId q = m.fresh_pairing();
    m.add_edge(layer[0], layer[1], w, q);
    m.add_edge(layer[0], layer[1], w, q);
    if (rng.one_in(2)) m.add_edge(layer[0], layer[1], rng.word(2, 1));
    const ObjectId high = m.add_object(Kind::WhitneyDisk);
    m.at(high).cancels = q;
    tower.layers.push_back({high});
  }
  m.towers.push_back(tower);
  return m;
}

Model random_chain_model(Rng& rng, std::size_t length, bool cyclic) {
  Model m;
  m.generators = 2;  // transition labels are drawn over two letters
  std::vector<ObjectId> a(length), b(length);
  for (std::size_t i = 0; i < length; ++i) {
    a[i] = m.add_object(Kind::Sphere);
    b[i] = m.add_object(Kind::Sphere);
    const EdgeId d = m.add_edge(a[i], b[i], GroupWord::identity());
    m.pairs.push_back(TransversePair{a[i], b[i], d, {}});
  }
  const std::size_t links = cyclic ? length : length - 1;
  for (std::size_t i = 0; i < links; ++i) {
    const std::size_t j = (i + 1) % length;
    GroupWord w = rng.word(2, 2);
    if (w == GroupWord::identity()) w = GroupWord::gen(0);
    const PairingId pid = m.fresh_pairing();
    const EdgeId e1 = m.add_edge(b[i], a[j], w, pid);
    const EdgeId e2 = m.add_edge(b[i], a[j], w, pid);
    m.pairs[i].extras.push_back(e1);
    m.pairs[i].extras.push_back(e2);
    if (j != i) {
      m.pairs[j].extras.push_back(e1);
      m.pairs[j].extras.push_back(e2);
    }
  }
  if (rng.one_in(3)) {
    const ObjectId bystander = m.add_object(Kind::Sphere);
    m.add_edge(b[rng.below(length)], bystander, rng.word(2, 1));
  }
  return m;
}

Model fig_cycle_model(bool with_handles) {
  Model m;
  m.generators = 'g' - 'a' + 1;  // the doubled intersection is labeled g
  const ObjectId a = m.add_object(Kind::Sphere);
  const ObjectId b = m.add_object(Kind::Sphere);
  const EdgeId d = m.add_edge(a, b, GroupWord::identity());
  const GroupWord g = GroupWord::gen('g' - 'a');
  const PairingId pid = m.fresh_pairing();
  const EdgeId x = m.add_edge(a, b, g, pid);
  const EdgeId y = m.add_edge(a, b, g, pid);
  m.pairs.push_back(TransversePair{a, b, d, {x, y}});
  if (with_handles) return attach_pair_handles(m, 0);
  return m;
}

namespace {

/// Random bipartition of the slots into a plan, keeping the slots of each
/// Whitney pairing together and both sides nonempty.
std::optional<SplitPlan> bipartition(Rng& rng, const Model& m, ObjectId target,
                                     const std::vector<Slot>& slots) {
  std::vector<std::vector<Slot>> atoms;
  std::map<PairingId, std::size_t> by_pairing;
  for (const Slot& s : slots) {
    std::optional<PairingId> pid;
    if (!s.is_pair) pid = m.edge_at(s.edge).pairing;
    if (pid) {
      const auto [it, fresh] = by_pairing.emplace(*pid, atoms.size());
      if (fresh) atoms.push_back({});
      atoms[it->second].push_back(s);
    } else {
      atoms.push_back({s});
    }
  }
  if (atoms.size() < 2) return std::nullopt;
  std::vector<bool> movers(atoms.size());
  bool any_one = false, any_two = false;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    movers[i] = rng.one_in(2);
    (movers[i] ? any_two : any_one) = true;
  }
  if (!any_one || !any_two) movers[rng.below(atoms.size())] = !movers[0];
  SplitPlan plan{target, {}, {}};
  for (std::size_t i = 0; i < atoms.size(); ++i)
    for (const Slot& s : atoms[i]) (movers[i] ? plan.part_two : plan.part_one).push_back(s);
  std::sort(plan.part_one.begin(), plan.part_one.end());
  std::sort(plan.part_two.begin(), plan.part_two.end());
  return plan;
}

}  // namespace

std::optional<SplitPlan> random_split_plan(Rng& rng, const Model& m, ObjectId target) {
  return bipartition(rng, m, target, slots_of(m, target));
}

std::optional<SplitPlan> random_pair_plan(Rng& rng, const Model& m, int pair_index) {
  if (pair_index < 0 || pair_index >= static_cast<int>(m.pairs.size())) return std::nullopt;
  const TransversePair& p = m.pairs[pair_index];
  std::vector<Slot> open;
  for (const Slot& s : slots_of(m, p.sphere_a))
    if (s.is_pair || s.edge != p.distinguished) open.push_back(s);
  return bipartition(rng, m, p.sphere_a, open);
}

}  // namespace grope
