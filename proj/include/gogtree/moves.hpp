#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gogtree/marking.hpp"

namespace gogtree {

/// Parameters of an expansion: blow the subgroup `a` of vertex `vertex_id`
/// out into a new vertex, reattaching the listed ends twisted by their
/// conjugators (elements of the old vertex group).
struct ExpansionParams {
  std::string vertex_id;
  uint64_t subgroup_mask = 0;
  std::vector<std::pair<std::string, int>> ends;  // (edge id, side)
  std::vector<Elem> conjugators;                  // parallel to ends
};

/// What a move did, with enough data to reconstruct its inverse.
struct MoveRecord {
  enum Kind { Collapse, Expansion } kind = Collapse;
  std::string collapsed_edge;                 // Collapse: the edge; Expansion: the inverse edge
  std::optional<ExpansionParams> expansion;   // Expansion: parameters; Collapse: the inverse move
};

struct MoveResult {
  MarkedGraphOfGroups marked;
  MoveRecord record;
};

/// Contracts a collapsible (non-loop, one surjective end) edge, merging the
/// surjective-end vertex into the other endpoint. The fundamental group is
/// unchanged; the marking is transported and re-verified.
MoveResult collapse(const MarkedGraphOfGroups& m, const std::string& edge_id);

/// Inverse operation: pre-check conj(end)·image(end)·conj(end)^-1 ⊆ a for
/// every reattached end.
MoveResult expand(const MarkedGraphOfGroups& m, const ExpansionParams& p);

// ---- marked isomorphism ----------------------------------------------------

struct IsoOptions {
  int candidate_cap = 4096;  // fixed-subtree enumeration budget for the first vertex
  const SubgroupCensus* ref_census = nullptr;  // optional, computed on demand otherwise
};

struct MarkedIsoResult {
  enum Verdict { Isomorphic, Distinct, NotProven } verdict = NotProven;
  std::string detail;
  // On Isomorphic: per m1-vertex, the image in m2's tree of its canonical lift.
  std::vector<TreeVertex> assignment;
  bool proven() const { return verdict == Isomorphic; }
};

/// Searches for an equivariant tree isomorphism: per vertex orbit a target
/// vertex with exactly matching (translated) stabilizer, orbits hit
/// bijectively, and every quotient edge mapping to an adjacency. Distinct is
/// returned only on invariant mismatch; a failed search is NotProven.
MarkedIsoResult marked_iso(const MarkedGraphOfGroups& m1, const MarkedGraphOfGroups& m2,
                           const IsoOptions& opts = {});

/// Iso-invariant one-line signature: orders and end indices only.
std::string fingerprint(const GraphOfGroups& g);
/// Finer signature adding reference-census class labels of vertex groups and
/// edge images (marked-iso invariant).
std::string labeled_fingerprint(const MarkedGraphOfGroups& m, const SubgroupCensus& ref_census);

// ---- bounded enumeration ---------------------------------------------------

struct EnumerationCaps {
  int depth = 3;
  int max_edges = 8;
  int max_subgroup_order = 48;
  int max_valence_for_subsets = 4;
  bool reversed_move_order = false;  // tie-breaking knob, for order-independence tests
  bool verify_every_move = true;
};

struct EnumeratedClass {
  MarkedGraphOfGroups marked;
  std::string fingerprint;
  std::string labeled;
  bool reduced = false;
  bool minimal = false;
  bool slide_free = false;
  int depth = 0;
};

struct MoveEdge {
  int from_class = 0;
  int to_class = 0;
  std::string description;
};

struct EnumerationResult {
  std::vector<EnumeratedClass> classes;  // class 0 is the seed
  std::vector<MoveEdge> moves;
  bool truncated = false;        // some move was cut by a cap
  bool frontier_open = false;    // depth exhausted with states left to expand
  bool dedup_uncertain = false;  // some marked_iso came back NotProven
  std::vector<int> reduced_classes() const;
};

/// Breadth-first closure of the seed under collapses and cap-bounded
/// expansions, deduplicated by fingerprint buckets + marked_iso.
EnumerationResult enumerate_reduced(const MarkedGraphOfGroups& seed, const EnumerationCaps& caps);

}  // namespace gogtree
