#pragma once

#include <optional>
#include <vector>

#include "gogtree/words.hpp"

namespace gogtree {

/// A vertex of the Bass-Serre tree, named by its quotient vertex together
/// with the canonical coset prefix from the base vertex: an alternating
/// [rep][edge]... token sequence of even length. Names are unique, so
/// equality of TreeVertex values is syntactic.
class TreeVertex {
public:
  TreeVertex() = default;
  TreeVertex(GogPtr g, int orbit, std::vector<Token> prefix);

  static TreeVertex base(const GogPtr& g);
  /// Canonical lift of a quotient vertex: spanning-tree prefix with identity
  /// coset representatives.
  static TreeVertex lift(const GogPtr& g, int vertex);

  const GogPtr& gog() const { return gog_; }
  int orbit() const { return orbit_; }
  const std::vector<Token>& prefix() const { return prefix_; }
  int depth() const { return static_cast<int>(prefix_.size() / 2); }

  bool operator==(const TreeVertex& o) const {
    return gog_ == o.gog_ && orbit_ == o.orbit_ && prefix_ == o.prefix_;
  }
  bool operator<(const TreeVertex& o) const;

private:
  GogPtr gog_;
  int orbit_ = -1;
  std::vector<Token> prefix_;
};

struct TreeVertexHash {
  size_t operator()(const TreeVertex& v) const { return hash_tokens(v.prefix()) * 31 + v.orbit(); }
};

/// The left action of the fundamental group on the tree.
TreeVertex act(const PathWord& x, const TreeVertex& v);

/// Unique reduced vertex sequence from u to v (inclusive); length 1 iff u = v.
std::vector<TreeVertex> tree_path(const TreeVertex& u, const TreeVertex& v);
int tree_distance(const TreeVertex& u, const TreeVertex& v);

/// Neighbors of a tree vertex, in deterministic order.
std::vector<TreeVertex> tree_neighbors(const TreeVertex& v);

/// All vertices within the given radius of the base vertex.
std::vector<TreeVertex> tree_ball(const GogPtr& g, int radius);

/// The word carrying lift(orbit(v)) to v.
PathWord transporter(const TreeVertex& v);

/// Stabilizer of a tree vertex, as canonical words (one per element of the
/// quotient vertex group).
std::vector<PathWord> stabilizer_words(const TreeVertex& v);

/// Conjugates a word fixing v into the vertex group of v's orbit; throws if
/// the word does not normalize into a single syllable there.
Elem localize_at(const PathWord& w, const TreeVertex& v);

/// Vertices of the radius ball fixed by every generator.
std::vector<TreeVertex> fixed_set(const std::vector<PathWord>& gens, int radius);

/// A vertex fixed by the whole generated subgroup: the center of the orbit
/// of the base vertex. Requires elliptic generators; the closure of the
/// generated subgroup is capped.
TreeVertex fixed_vertex(const std::vector<PathWord>& gens, int order_cap = 4096);

/// Serre's criterion: every generator and every pairwise product is elliptic.
bool is_elliptic_subgroup(const std::vector<PathWord>& gens);

/// Closure of the generated finite subgroup as canonical words.
std::vector<PathWord> subgroup_closure(const GogPtr& g, const std::vector<PathWord>& gens,
                                       int order_cap = 4096);

/// One conjugacy class of finite subgroups of the fundamental group.
struct SubgroupClass {
  std::vector<PathWord> representative;  // generators, fixing witness_vertex
  TreeVertex witness_vertex;
  Subgroup local_form;
  int home_vertex = -1;       // quotient vertex of the representative
  int local_class_index = -1; // conjugacy class index within that vertex group
};

/// Conjugacy classes of finite subgroups of the fundamental group, computed
/// by gluing per-vertex subgroup classes along edge-group inclusions.
class SubgroupCensus {
public:
  explicit SubgroupCensus(GogPtr g);
  const std::vector<SubgroupClass>& classes() const { return classes_; }
  /// Class index of a subgroup of a vertex group.
  int class_index(int vertex, uint64_t subgroup_mask) const;

private:
  GogPtr g_;
  std::vector<int> offset_;         // per-vertex node base: node = offset[v] + local class
  std::vector<int> node_class_;     // node -> census class index
  std::vector<SubgroupClass> classes_;
};

std::vector<SubgroupClass> finite_subgroup_classes(const GogPtr& g);

}  // namespace gogtree
