#pragma once

#include <string>
#include <vector>

#include "gogtree/tree.hpp"
#include "gogtree/words.hpp"

namespace gogtree {

/// A graph of groups together with a verified identification of its
/// fundamental group with a fixed reference group. The identification is
/// stored as generator tables in both directions:
///   vertex elements (v, g)  ->  words over the other side
///   stable letters  t_e     ->  words over the other side
/// and evaluated on arbitrary words by decomposing them over the standard
/// generators. verify_marking checks that both tables are homomorphisms
/// (all vertex-group and edge relations map to the identity) and that the
/// two evaluations invert each other on generators.
class MarkedGraphOfGroups {
public:
  MarkedGraphOfGroups() = default;

  /// The seed of a deformation space: the graph marked by itself.
  static MarkedGraphOfGroups identity(const GogPtr& g);

  /// Assembles a marking from tables (moves build these); call
  /// verify_marking before trusting it.
  static MarkedGraphOfGroups from_tables(GogPtr gog, GogPtr ref,
                                         std::vector<std::vector<PathWord>> to_vert,
                                         std::vector<PathWord> to_edge,
                                         std::vector<std::vector<PathWord>> from_vert,
                                         std::vector<PathWord> from_edge);

  const GogPtr& gog() const { return gog_; }
  const GogPtr& ref() const { return ref_; }

  /// Image in the reference group of a word over the marked graph.
  PathWord to_ref(const PathWord& w) const;
  PathWord to_ref_raw(std::span<const Token> raw) const;
  /// Image over the marked graph of a word in the reference group.
  PathWord from_ref(const PathWord& w) const;
  PathWord from_ref_raw(std::span<const Token> raw) const;

  const PathWord& to_vert_img(int v, Elem g) const { return to_vert_[v][g]; }
  const PathWord& to_edge_img(int e) const { return to_edge_[e]; }
  const PathWord& from_vert_img(int v, Elem g) const { return from_vert_[v][g]; }
  const PathWord& from_edge_img(int e) const { return from_edge_[e]; }

  /// The same tree marked through an inner twist: to' = c · to(...) · c^-1.
  MarkedGraphOfGroups conjugated(const PathWord& c) const;

private:
  GogPtr gog_, ref_;
  std::vector<std::vector<PathWord>> to_vert_;  // [vertex][elem] over ref
  std::vector<PathWord> to_edge_;               // [edge] over ref
  std::vector<std::vector<PathWord>> from_vert_;
  std::vector<PathWord> from_edge_;
};

struct MarkingCheck {
  bool ok = true;
  std::string detail;  // first failure
};

/// Full verification: relations of both sides map to the identity and the
/// generator round trips are the identity.
MarkingCheck verify_marking(const MarkedGraphOfGroups& m);

/// The conjugacy class, in the reference census, of a subgroup of a vertex
/// group of the marked graph.
int ref_class_of_subgroup(const MarkedGraphOfGroups& m, const SubgroupCensus& ref_census,
                          int vertex, uint64_t subgroup_mask);

}  // namespace gogtree
