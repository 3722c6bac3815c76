#pragma once

#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "gogtree/error.hpp"

namespace gogtree {

/// A finite simplicial tree over integer vertex ids. Used as a sandbox for
/// the purely combinatorial arc arguments (bridge, projection, hull,
/// sequence backtracking).
class FiniteTree {
public:
  FiniteTree(std::vector<int> vertices, std::vector<std::pair<int, int>> edges);
  /// Edge-list text format: one "u v" pair per line, '#' comments.
  static FiniteTree from_text(const std::string& text);

  int size() const { return static_cast<int>(verts_.size()); }
  const std::vector<int>& vertices() const { return verts_; }
  const std::vector<int>& neighbors(int v) const;
  bool has_vertex(int v) const;

private:
  std::vector<int> verts_;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::vector<int>> adj_;  // indexed by position
  std::vector<int> pos_;               // id -> position (-1 absent)
  int check_vertex(int v) const;
};

/// Unique reduced path from u to v, inclusive.
std::vector<int> ft_path(const FiniteTree& t, int u, int v);
/// Smallest subtree containing s (vertex set).
std::set<int> ft_hull(const FiniteTree& t, const std::set<int>& s);
/// The bridge between two disjoint subtrees: the arc [a,b] contained in
/// every arc joining them. Throws if the sets intersect or are not subtrees.
std::vector<int> ft_bridge(const FiniteTree& t, const std::set<int>& a, const std::set<int>& b);
/// Closest vertex of the subtree a to x.
int ft_projection(const FiniteTree& t, int x, const std::set<int>& a);
/// Midpoint of a diametral pair of the hull of s: vertex if the diameter is
/// even, otherwise the middle edge.
std::variant<int, std::pair<int, int>> ft_center(const FiniteTree& t, const std::set<int>& s);

/// Outcome of checking a vertex sequence against the backtracking
/// hypotheses and, when they hold, the non-overlap conclusion.
struct BacktrackingReport {
  bool hyp_distinct = true;         // u_i != u_{i+1}
  bool hyp_strict = true;           // consecutive arc intersections strictly contained
  bool hyp_triple = true;           // consecutive triple intersections empty
  std::string hypothesis_detail;    // first violation, if any
  bool conclusion_checked = false;  // only when all hypotheses hold
  bool conclusion_holds = true;     // arcs i,j with |j-i|>=2 are disjoint
  std::string conclusion_detail;
  bool induction_holds = true;      // u_{i+1} not in C_i and [u_i,u_{i+1}] disjoint from C_{i-1}
  std::string induction_detail;
  bool hypotheses_hold() const { return hyp_distinct && hyp_strict && hyp_triple; }
};

BacktrackingReport check_backtracking(const FiniteTree& t, const std::vector<int>& seq);

/// Random tree on n vertices (ids 0..n-1) by uniform attachment.
FiniteTree random_tree(std::mt19937_64& rng, int n);

/// Grows a vertex sequence satisfying the backtracking hypotheses by greedy
/// extension: each next vertex is drawn from the candidates that keep all
/// three hypotheses true. Reports the fraction of candidate vertices that
/// were acceptable at each step via `acceptance`.
std::vector<int> grow_backtracking_sequence(const FiniteTree& t, std::mt19937_64& rng,
                                            int target_arcs, double* acceptance = nullptr);

}  // namespace gogtree
