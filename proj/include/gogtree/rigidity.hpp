#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gogtree/moves.hpp"

namespace gogtree {

/// Diagnostics for a pair of source tree edges at a common vertex whose
/// image arcs overlap in more than a point.
struct FoldReport {
  TreeVertex common;         // shared endpoint in the source tree
  TreeVertex tip1, tip2;     // far endpoints of the two edges
  int overlap_edges = 0;     // edges shared by the two image arcs
  bool same_orbit = false;   // edges lie in one stabilizer orbit at `common`
  std::optional<PathWord> orbit_witness;  // stabilizer element carrying edge1 to edge2
  std::vector<PathWord> joint_group;      // generators of <stab(e1), stab(e2)>
  bool joint_elliptic = false;
  bool strict_in_1 = false;  // overlap strictly contained in the first image arc
  bool strict_in_2 = false;
  bool image_lengths_equal = false;
};

enum class MapVerdict { Isomorphism, FoldDetected, PreconditionFailed };

struct MapChecks {
  bool injectivity = false;
  bool edge_lengths = false;
  bool degrees = false;
  bool uniqueness = false;
};

/// The equivariant comparison map between two marked trees: built by sending
/// each source vertex orbit to a target vertex fixed by its translated
/// stabilizer, then certified on a finite ball.
struct CanonicalMap {
  MarkedGraphOfGroups source, target;
  MapVerdict verdict = MapVerdict::PreconditionFailed;
  std::string detail;                  // precondition witness or failure note
  std::vector<TreeVertex> assignment;  // per source quotient vertex, in the target tree
  MapChecks checks;
  int radius = 0;  // verification ball radius used
  std::vector<FoldReport> diagnostics;
};

struct CanonicalMapOptions {
  bool skip_preconditions = false;  // diagnostics-only construction; not reachable from the CLI
  int radius_override = 0;          // 0 = 2 * (max image arc) + 2
  int subtree_cap = 4096;           // fixed-subtree enumeration budget
};

/// Requires: same reference; source minimal and strongly slide-free, target
/// minimal and reduced (checked unless skipped). Verdict Isomorphism iff the
/// vertex assignment is injective on the verification ball, every source
/// edge maps to an arc of length exactly one, local degrees match, and each
/// translated vertex group fixes exactly one target vertex.
CanonicalMap canonical_map(const MarkedGraphOfGroups& source, const MarkedGraphOfGroups& target,
                           const CanonicalMapOptions& opts = {});

/// Image of an arbitrary source tree vertex under the map.
TreeVertex map_vertex(const CanonicalMap& cm, const TreeVertex& x);

/// Detailed report for a fold pair; throws "no fold" if the image arcs meet
/// in at most one vertex.
FoldReport diagnose_fold(const CanonicalMap& cm, const TreeVertex& common, const TreeVertex& tip1,
                         const TreeVertex& tip2);

struct TripodResult {
  bool empty_intersection = false;
  // On failure: stabilizer elements moving edge1 onto edge2 (at the first
  // shared vertex) and edge2 onto edge3 (at the second), whose product is
  // elliptic on the target yet hyperbolic on the source.
  std::optional<PathWord> gamma1, gamma2;
  bool contradiction_certified = false;
  std::string detail;
};

/// Three consecutive source edges given as a vertex path x0-x1-x2-x3: checks
/// that the three image arcs have empty common intersection.
TripodResult check_tripod(const CanonicalMap& cm, const TreeVertex& x0, const TreeVertex& x1,
                          const TreeVertex& x2, const TreeVertex& x3);

struct UniqueSsfReport {
  int reduced_count = 0;
  int slide_free_count = 0;
  std::vector<int> slide_free_classes;            // indices into the enumeration
  std::vector<std::pair<int, MapVerdict>> map_runs;  // slide-free -> other reduced classes
  bool theorem_violation = false;
  std::string detail;
};

/// Counts strongly slide-free classes among the reduced classes of an
/// enumeration; at most one may exist, and when one does every other reduced
/// class must be isomorphic to it through canonical_map. Any other outcome
/// is flagged as a theorem violation.
UniqueSsfReport verify_unique_ssf(const EnumerationResult& space);

}  // namespace gogtree
