#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "grope/group_word.hpp"

namespace grope {

using ObjectId = std::uint32_t;
using EdgeId = std::uint32_t;
using ClassId = std::uint32_t;
using PairingId = std::uint32_t;

enum class Kind : std::uint8_t {
  BaseSurface,
  StageSurface,
  Cap,
  Sphere,
  WhitneyDisk,
  CliffordTorus,
  DualSphere,
};

const char* kind_name(Kind k);
std::optional<Kind> kind_from_name(const std::string& name);

/// An ordered pair of children attached along dual circles of their parent
/// surface.  Surface genus equals the number of dual pairs.
struct DualPair {
  ObjectId left = 0;
  ObjectId right = 0;

  friend bool operator==(const DualPair&, const DualPair&) = default;
};

/// One node of the model: a surface stage, cap, sphere, Whitney disk,
/// Clifford torus or dual sphere.  Fields that only apply to some kinds stay
/// empty elsewhere.
struct Object {
  ObjectId id = 0;
  Kind kind = Kind::Sphere;
  /// Quotient class; vertices sharing a class denote the same underlying
  /// object (parallel slots of one surface).  Fresh objects get fresh classes.
  ClassId cls = 0;

  std::optional<ObjectId> parent;   // tree parent for stages and caps
  std::vector<DualPair> pairs;      // children; genus == pairs.size()

  std::optional<int> height;        // grope roots: promised stage depth
  bool dyadic = false;              // grope roots: claimed dyadic branches
  std::optional<ObjectId> transverse;  // grope roots: transverse sphere

  std::optional<PairingId> dual_to; // Clifford tori: pairing the torus caps
  std::optional<ObjectId> cap_a;    // Clifford tori: dual sphere under cap a
  std::optional<ObjectId> cap_b;    // Clifford tori: dual sphere under cap b

  std::optional<PairingId> cancels; // Whitney disks: pairing the disk cancels

  unsigned genus() const { return static_cast<unsigned>(pairs.size()); }

  friend bool operator==(const Object&, const Object&) = default;
};

/// An intersection between two objects (a == b for a self-intersection),
/// labeled by the double-point loop's group word.  Paired edges cancel in
/// pairs under a shared Whitney pairing id.
struct Edge {
  EdgeId id = 0;
  ObjectId a = 0;
  ObjectId b = 0;  // endpoints stored with a <= b
  GroupWord label;
  std::optional<PairingId> pairing;

  bool is_loop() const { return a == b; }
  ObjectId other(ObjectId v) const { return v == a ? b : a; }
  bool touches(ObjectId v) const { return a == v || b == v; }

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Two spheres meeting in one distinguished point plus extra intersections.
/// The pair is algebraically trivial when every extra edge is paired.
struct TransversePair {
  ObjectId sphere_a = 0;
  ObjectId sphere_b = 0;
  EdgeId distinguished = 0;
  std::vector<EdgeId> extras;

  friend bool operator==(const TransversePair&, const TransversePair&) = default;
};

/// Whitney disks stacked over a transverse pair: layer i disks cancel the
/// pairings among layer i-1 intersections.
struct WhitneyTower {
  int pair_index = 0;
  std::vector<std::vector<ObjectId>> layers;

  friend bool operator==(const WhitneyTower&, const WhitneyTower&) = default;
};

/// A handle attached by one of the constructions.  2-handles carry the
/// surface they were attached along and the dual spheres they created;
/// 3-handles carry the handle they discharge via the boundary matrix.
struct HandleRecord {
  int index = 0;
  int dimension = 2;
  ObjectId site = 0;
  std::vector<ObjectId> duals;

  friend bool operator==(const HandleRecord&, const HandleRecord&) = default;
};

/// A pending 3-handle: the 2-handle's attaching sphere is not yet certified
/// embedded.  `dual` is the created co-core sphere, `host` the surface whose
/// parallel copy will attach the 3-handle.
struct Obligation {
  int handle = 0;
  ObjectId dual = 0;
  ObjectId host = 0;

  friend bool operator==(const Obligation&, const Obligation&) = default;
};

/// Cap traffic recorded by a cyclic-shift construction: the 3-handle sphere
/// of `from` crosses the co-core of `to` along graph edge `edge`.  These
/// incidences become the off-diagonal boundary entries.
struct Incidence {
  int from = 0;
  int to = 0;
  GroupWord label;
  std::optional<EdgeId> edge;

  friend bool operator==(const Incidence&, const Incidence&) = default;
};

/// Formal integer combination of group words.
using GroupRingElement = std::map<GroupWord, int>;

/// Sparse matrix over the integral group ring, indexed by 2-handle indices:
/// row k holds the boundary of the 3-handle discharging 2-handle k.
struct GroupRingMatrix {
  std::map<std::pair<int, int>, GroupRingElement> entries;

  void add(int row, int col, const GroupWord& word, int coeff);

  friend bool operator==(const GroupRingMatrix&, const GroupRingMatrix&) = default;
};

/// The s-cobordism bookkeeping: handles in attachment order, pending
/// obligations, recorded cap traffic and the assembled boundary matrix.
struct HandleLedger {
  std::vector<HandleRecord> records;
  std::vector<Obligation> obligations;
  std::vector<Incidence> incidences;
  GroupRingMatrix boundary;

  bool empty() const {
    return records.empty() && obligations.empty() && incidences.empty() &&
           boundary.entries.empty();
  }

  friend bool operator==(const HandleLedger&, const HandleLedger&) = default;
};

/// A full rewriting state: objects, intersection edges with the quotient map
/// (stored per object), transverse pairs, Whitney towers and the ledger.
/// Operations treat models as immutable values and return rewritten copies.
struct Model {
  unsigned generators = 0;
  std::map<ObjectId, Object> objects;
  std::map<EdgeId, Edge> edges;
  std::vector<TransversePair> pairs;
  std::vector<WhitneyTower> towers;
  HandleLedger ledger;

  ObjectId next_object = 0;
  EdgeId next_edge = 0;
  ClassId next_class = 0;
  PairingId next_pairing = 0;

  ObjectId add_object(Kind kind, std::optional<ObjectId> parent = std::nullopt);
  EdgeId add_edge(ObjectId a, ObjectId b, GroupWord label,
                  std::optional<PairingId> pairing = std::nullopt);
  PairingId fresh_pairing() { return next_pairing++; }

  const Object& at(ObjectId id) const;
  Object& at(ObjectId id);
  const Edge& edge_at(EdgeId id) const;
  Edge& edge_at(EdgeId id);
  bool has_object(ObjectId id) const { return objects.count(id) != 0; }

  /// Edge ids incident to an object, ascending; loops appear once.
  std::vector<EdgeId> incident(ObjectId id) const;

  /// Grope roots: base surfaces carrying a height.
  std::vector<ObjectId> grope_roots() const;

  /// All objects in the subtree hanging off `root` (root included),
  /// depth-first in child order.
  std::vector<ObjectId> subtree(ObjectId root) const;

  /// Caps reachable below `root`.
  std::vector<ObjectId> caps_below(ObjectId root) const;

  void remove_edge(EdgeId id);
  void remove_object(ObjectId id);  // object must have no incident edges

  friend bool operator==(const Model&, const Model&) = default;
};

/// One validation failure; validate() reports violations as data.
struct Violation {
  ObjectId subject = 0;
  std::string rule;
  std::string message;

  friend bool operator==(const Violation&, const Violation&) = default;
};

/// Structural validation: reference integrity, tree shape, genus bookkeeping,
/// reduced labels, pairing arity, quotient kind-consistency, ledger sanity.
std::vector<Violation> validate(const Model& m);

/// Root-to-cap 0/1 choice strings for every cap below a grope root: at each
/// dual pair the left child appends 0, the right child appends 1.  Throws
/// ShapeError when a non-base stage has genus > 1 (labels undefined).
std::map<ObjectId, std::string> dyadic_labels(const Model& m, ObjectId root);

/// Set of edge labels up to inversion (normalize()d), over every edge.
std::set<GroupWord> label_set(const Model& m);

/// Replaces pair .sphere_a by a capped grope: base genus = number of Whitney
/// pairings among the extras, one dyadic branch tower of the given height per
/// pairing side, cap edges inheriting the pairing labels.  The pair must be
/// algebraically trivial.  Returns the rewritten model and the grope root.
std::pair<Model, ObjectId> sphere_to_capped_grope(const Model& m, int pair_index, int height);

/// Object-count budget threaded through the rewriting operations.
struct Budget {
  std::size_t max_objects = 1'000'000;
};

void check_budget(const Model& m, const Budget& b, const std::string& stage);

}  // namespace grope
