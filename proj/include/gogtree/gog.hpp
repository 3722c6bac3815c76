#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gogtree/fingroup.hpp"

namespace gogtree {

class GraphOfGroups;
using GogPtr = std::shared_ptr<const GraphOfGroups>;

/// One end of an edge: which vertex it attaches to, the edge-group inclusion
/// into that vertex's group, and the left-transversal data used for coset
/// normal forms. rep_of/edgepart_of decompose g = rep_of[g] * mono(edgepart_of[g]).
struct EdgeEnd {
  int vertex = -1;
  Mono inclusion;
  uint64_t image_mask = 0;
  std::vector<Elem> transversal;  // coset representatives, canonical order
  std::vector<Elem> rep_of;       // per vertex-group element
  std::vector<Elem> edgepart_of;  // per vertex-group element (edge-group index)
  int index = 0;                  // [G_v : image]
  bool surjective() const { return index == 1; }
};

struct VertexData {
  std::string id;
  GroupPtr group;
};

struct EdgeData {
  std::string id;
  GroupPtr group;
  EdgeEnd end[2];  // 0 = side a, 1 = side b
  bool is_loop() const { return end[0].vertex == end[1].vertex; }
};

/// Reference to an edge end: (edge index, side).
struct EndRef {
  int edge = -1;
  int side = 0;
  bool operator==(const EndRef& o) const { return edge == o.edge && side == o.side; }
};

/// The quotient data of a cocompact tree action: vertices with finite groups,
/// edges with finite groups and two verified inclusions, a base vertex and a
/// deterministic spanning tree. Immutable once built.
class GraphOfGroups : public std::enable_shared_from_this<GraphOfGroups> {
public:
  struct EdgeSpec {
    std::string id;
    GroupPtr group;
    std::string vertex_a, vertex_b;
    Mono incl_a, incl_b;
  };

  static GogPtr build(std::vector<VertexData> vertices, std::vector<EdgeSpec> edges,
                      const std::string& base_id);

  int vertex_count() const { return static_cast<int>(vertices_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const VertexData& vertex(int i) const { return vertices_[i]; }
  const EdgeData& edge(int i) const { return edges_[i]; }
  const EdgeEnd& end(EndRef r) const { return edges_[r.edge].end[r.side]; }
  int base() const { return base_; }
  bool in_tree(int edge) const { return tree_edge_[edge]; }

  std::optional<int> vertex_by_id(const std::string& id) const;
  std::optional<int> edge_by_id(const std::string& id) const;

  /// Ends incident to a vertex; a loop contributes both of its sides.
  const std::vector<EndRef>& ends_at(int vertex) const { return ends_at_[vertex]; }
  /// Sum of [G_v : image] over incident ends = degree of any lift of v.
  int lift_degree(int vertex) const;

  /// Spanning-tree path from base to a vertex, as (edge, direction) steps
  /// where direction +1 traverses side a -> side b.
  const std::vector<std::pair<int, int>>& tree_steps(int vertex) const {
    return tree_steps_[vertex];
  }

private:
  GraphOfGroups() = default;

  std::vector<VertexData> vertices_;
  std::vector<EdgeData> edges_;
  int base_ = 0;
  std::vector<bool> tree_edge_;
  std::vector<std::vector<EndRef>> ends_at_;
  std::vector<std::vector<std::pair<int, int>>> tree_steps_;
};

// ---- structural predicates ----------------------------------------------

struct ReducedVerdict {
  bool reduced = true;
  std::optional<int> witness_edge;  // a collapsible non-loop edge
};

struct MinimalVerdict {
  bool minimal = true;
  std::optional<int> witness_vertex;  // a vertex whose lifts have degree < 2
};

struct SlideFreeWitness {
  int vertex = -1;
  EndRef end1, end2;
  Elem conjugator = 0;  // x with x·image(end1)·x^-1 ⊆ image(end2)
};

struct SlideFreeVerdict {
  bool slide_free = true;
  std::optional<SlideFreeWitness> witness;
};

/// False iff some non-loop edge has a surjective end inclusion.
ReducedVerdict is_reduced(const GraphOfGroups& g);
/// True iff every vertex lift has degree >= 2 (single vertex, no edges: true).
MinimalVerdict is_minimal(const GraphOfGroups& g);
/// True iff no element of a vertex group conjugates one incident end image
/// into a different incident end's image.
SlideFreeVerdict is_strongly_slide_free(const GraphOfGroups& g);

}  // namespace gogtree
