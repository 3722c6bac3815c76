#include "gogtree/treegeom.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>

namespace gogtree {

FiniteTree::FiniteTree(std::vector<int> vertices, std::vector<std::pair<int, int>> edges)
    : verts_(std::move(vertices)), edges_(std::move(edges)) {
  if (verts_.empty()) throw Error("tree must have at least one vertex");
  if (edges_.size() + 1 != verts_.size())
    throw Error("not a tree: " + std::to_string(verts_.size()) + " vertices but " +
                std::to_string(edges_.size()) + " edges");
  int max_id = *std::max_element(verts_.begin(), verts_.end());
  pos_.assign(max_id + 1, -1);
  for (size_t i = 0; i < verts_.size(); ++i) {
    if (verts_[i] < 0) throw Error("negative vertex id");
    if (pos_[verts_[i]] >= 0) throw Error("duplicate vertex id " + std::to_string(verts_[i]));
    pos_[verts_[i]] = static_cast<int>(i);
  }
  adj_.assign(verts_.size(), {});
  for (auto [u, v] : edges_) {
    adj_[check_vertex(u)].push_back(v);
    adj_[check_vertex(v)].push_back(u);
  }
  // connectivity (acyclicity follows from the edge count)
  std::vector<bool> seen(verts_.size(), false);
  std::deque<int> queue{verts_[0]};
  seen[0] = true;
  int reached = 1;
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (int n : neighbors(v))
      if (!seen[pos_[n]]) {
        seen[pos_[n]] = true;
        ++reached;
        queue.push_back(n);
      }
  }
  if (reached != size()) throw Error("not a tree: disconnected");
}

FiniteTree FiniteTree::from_text(const std::string& text) {
  std::vector<std::pair<int, int>> edges;
  std::set<int> verts;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    int u, v;
    if (ls >> u >> v) {
      edges.emplace_back(u, v);
      verts.insert(u);
      verts.insert(v);
    } else if (ls.rdbuf()->in_avail() == 0 && line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    } else {
      std::istringstream single(line);
      if (single >> u && !(single >> v)) verts.insert(u);  // isolated vertex line
    }
  }
  return FiniteTree({verts.begin(), verts.end()}, std::move(edges));
}

int FiniteTree::check_vertex(int v) const {
  if (v < 0 || v >= static_cast<int>(pos_.size()) || pos_[v] < 0)
    throw Error("unknown tree vertex " + std::to_string(v));
  return pos_[v];
}

const std::vector<int>& FiniteTree::neighbors(int v) const { return adj_[check_vertex(v)]; }

bool FiniteTree::has_vertex(int v) const {
  return v >= 0 && v < static_cast<int>(pos_.size()) && pos_[v] >= 0;
}

std::vector<int> ft_path(const FiniteTree& t, int u, int v) {
  t.neighbors(u);  // validates
  t.neighbors(v);
  std::deque<int> queue{u};
  std::map<int, int> parent{{u, u}};
  while (!queue.empty()) {
    int x = queue.front();
    queue.pop_front();
    if (x == v) break;
    for (int n : t.neighbors(x))
      if (!parent.count(n)) {
        parent[n] = x;
        queue.push_back(n);
      }
  }
  std::vector<int> path;
  for (int x = v;; x = parent.at(x)) {
    path.push_back(x);
    if (x == u) break;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

std::set<int> ft_hull(const FiniteTree& t, const std::set<int>& s) {
  if (s.empty()) throw Error("hull of an empty set");
  std::set<int> out;
  int first = *s.begin();
  for (int v : s)
    for (int x : ft_path(t, first, v)) out.insert(x);
  // union of paths from a fixed point is already the Steiner tree of s
  return out;
}

namespace {

bool is_subtree(const FiniteTree& t, const std::set<int>& a) {
  if (a.empty()) return false;
  return ft_hull(t, a) == a;
}

}  // namespace

std::vector<int> ft_bridge(const FiniteTree& t, const std::set<int>& a, const std::set<int>& b) {
  if (!is_subtree(t, a) || !is_subtree(t, b)) throw Error("bridge: input is not a subtree");
  for (int x : a)
    if (b.count(x)) throw Error("bridge: subtrees intersect at " + std::to_string(x));
  std::vector<int> path = ft_path(t, *a.begin(), *b.begin());
  size_t i = 0, j = path.size() - 1;
  while (i + 1 < path.size() && a.count(path[i + 1])) ++i;
  while (j > 0 && b.count(path[j - 1])) --j;
  return {path.begin() + i, path.begin() + j + 1};
}

int ft_projection(const FiniteTree& t, int x, const std::set<int>& a) {
  if (!is_subtree(t, a)) throw Error("projection: input is not a subtree");
  if (a.count(x)) return x;
  std::vector<int> path = ft_path(t, x, *a.begin());
  for (int v : path)
    if (a.count(v)) return v;
  throw Error("projection: unreachable");  // tree is connected
}

std::variant<int, std::pair<int, int>> ft_center(const FiniteTree& t, const std::set<int>& s) {
  std::set<int> hull = ft_hull(t, s);
  int best = -1, bu = 0, bv = 0;
  for (int u : s)
    for (int v : s) {
      int d = static_cast<int>(ft_path(t, u, v).size()) - 1;
      if (d > best) {
        best = d;
        bu = u;
        bv = v;
      }
    }
  std::vector<int> diam = ft_path(t, bu, bv);
  if (best % 2 == 0) return diam[best / 2];
  return std::make_pair(diam[best / 2], diam[best / 2 + 1]);
}

namespace {

std::set<int> arc_set(const FiniteTree& t, int u, int v) {
  std::vector<int> p = ft_path(t, u, v);
  return {p.begin(), p.end()};
}

std::set<int> intersect(const std::set<int>& a, const std::set<int>& b) {
  std::set<int> out;
  for (int x : a)
    if (b.count(x)) out.insert(x);
  return out;
}

}  // namespace

BacktrackingReport check_backtracking(const FiniteTree& t, const std::vector<int>& seq) {
  if (seq.size() < 2) throw Error("backtracking check needs a sequence of length >= 2");
  BacktrackingReport rep;
  const int n = static_cast<int>(seq.size()) - 1;  // number of arcs
  std::vector<std::set<int>> arc(n);
  for (int i = 0; i < n; ++i) arc[i] = arc_set(t, seq[i], seq[i + 1]);

  for (int i = 0; i + 1 <= n; ++i)
    if (seq[i] == seq[i + 1]) {
      rep.hyp_distinct = false;
      rep.hypothesis_detail = "u_" + std::to_string(i) + " = u_" + std::to_string(i + 1);
      break;
    }
  if (rep.hyp_distinct)
    for (int i = 1; i < n; ++i) {
      std::set<int> inter = intersect(arc[i - 1], arc[i]);
      if (inter == arc[i - 1] || inter == arc[i]) {
        rep.hyp_strict = false;
        rep.hypothesis_detail = "arcs " + std::to_string(i - 1) + " and " + std::to_string(i) +
                                " are not in strict position";
        break;
      }
    }
  if (rep.hyp_distinct && rep.hyp_strict)
    for (int i = 1; i + 1 < n; ++i) {
      std::set<int> inter = intersect(intersect(arc[i - 1], arc[i]), arc[i + 1]);
      if (!inter.empty()) {
        rep.hyp_triple = false;
        rep.hypothesis_detail =
            "arcs " + std::to_string(i - 1) + ".." + std::to_string(i + 1) + " share a vertex";
        break;
      }
    }

  if (!rep.hypotheses_hold()) return rep;

  rep.conclusion_checked = true;
  for (int i = 0; i < n; ++i)
    for (int j = i + 2; j < n; ++j)
      if (!intersect(arc[i], arc[j]).empty()) {
        rep.conclusion_holds = false;
        rep.conclusion_detail = "arcs " + std::to_string(i) + " and " + std::to_string(j) +
                                " intersect despite the hypotheses";
      }

  // per-step induction property: u_{i+1} not in C_i, arc_i+1... expressed on
  // hulls C_i of {u_0..u_i}
  for (int i = 1; i + 1 <= n; ++i) {
    std::set<int> ci, cim1;
    for (int k = 0; k <= i; ++k) ci.insert(seq[k]);
    for (int k = 0; k <= i - 1; ++k) cim1.insert(seq[k]);
    ci = ft_hull(t, ci);
    cim1 = ft_hull(t, cim1);
    bool ok = !ci.count(seq[i + 1]) && intersect(arc[i], cim1).empty();
    if (!ok) {
      rep.induction_holds = false;
      rep.induction_detail = "P_" + std::to_string(i) + " fails";
    }
  }
  return rep;
}

FiniteTree random_tree(std::mt19937_64& rng, int n) {
  std::vector<int> verts(n);
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) {
    verts[i] = i;
    if (i > 0) edges.emplace_back(static_cast<int>(rng() % i), i);
  }
  return FiniteTree(std::move(verts), std::move(edges));
}

std::vector<int> grow_backtracking_sequence(const FiniteTree& t, std::mt19937_64& rng,
                                            int target_arcs, double* acceptance) {
  const auto& verts = t.vertices();
  std::vector<int> seq{verts[rng() % verts.size()]};
  long tried = 0, accepted = 0;
  while (static_cast<int>(seq.size()) <= target_arcs) {
    std::vector<int> candidates;
    for (int v : verts) {
      seq.push_back(v);
      bool ok = seq.size() < 2 || check_backtracking(t, seq).hypotheses_hold();
      seq.pop_back();
      ++tried;
      if (ok && v != seq.back()) {
        candidates.push_back(v);
        ++accepted;
      }
    }
    if (candidates.empty()) break;
    seq.push_back(candidates[rng() % candidates.size()]);
  }
  if (acceptance) *acceptance = tried ? static_cast<double>(accepted) / tried : 0.0;
  return seq;
}

}  // namespace gogtree
