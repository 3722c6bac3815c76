#include "gogtree/tree.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace gogtree {

TreeVertex::TreeVertex(GogPtr g, int orbit, std::vector<Token> prefix)
    : gog_(std::move(g)), orbit_(orbit), prefix_(std::move(prefix)) {}

TreeVertex TreeVertex::base(const GogPtr& g) { return TreeVertex(g, g->base(), {}); }

TreeVertex TreeVertex::lift(const GogPtr& g, int vertex) {
  std::vector<Token> prefix;
  for (auto [edge, dir] : g->tree_steps(vertex)) {
    const EdgeEnd& dep = g->edge(edge).end[dir > 0 ? 0 : 1];
    prefix.push_back(Token::vtx(dep.vertex, g->vertex(dep.vertex).group->identity()));
    prefix.push_back(Token::edge(edge, dir));
  }
  return TreeVertex(g, vertex, std::move(prefix));
}

bool TreeVertex::operator<(const TreeVertex& o) const {
  if (prefix_.size() != o.prefix_.size()) return prefix_.size() < o.prefix_.size();
  if (orbit_ != o.orbit_) return orbit_ < o.orbit_;
  return std::lexicographical_compare(prefix_.begin(), prefix_.end(), o.prefix_.begin(),
                                      o.prefix_.end(), [](const Token& a, const Token& b) {
                                        if (a.kind != b.kind) return a.kind < b.kind;
                                        if (a.idx != b.idx) return a.idx < b.idx;
                                        return a.val < b.val;
                                      });
}

TreeVertex act(const PathWord& x, const TreeVertex& v) {
  if (x.gog() != v.gog()) throw Error("act: word and vertex over different graphs of groups");
  const GogPtr& g = x.gog();
  std::vector<Token> raw = x.tokens();
  raw.insert(raw.end(), v.prefix().begin(), v.prefix().end());
  CanonResult r = canonicalize(*g, g->base(), raw);
  if (r.end_vertex != v.orbit()) throw Error("act: internal orbit mismatch");  // unreachable
  r.tokens.pop_back();  // drop the trailing free syllable: cosets of G_v coincide
  return TreeVertex(g, v.orbit(), std::move(r.tokens));
}

namespace {

// Vertex at the depth-d truncation of a prefix.
TreeVertex truncated(const TreeVertex& v, int d) {
  const GraphOfGroups& g = *v.gog();
  std::vector<Token> p(v.prefix().begin(), v.prefix().begin() + 2 * d);
  int orbit = g.base();
  if (d > 0) {
    const Token& e = p[2 * d - 1];
    orbit = g.edge(e.idx).end[e.val > 0 ? 1 : 0].vertex;
  }
  return TreeVertex(v.gog(), orbit, std::move(p));
}

}  // namespace

std::vector<TreeVertex> tree_path(const TreeVertex& u, const TreeVertex& v) {
  if (u.gog() != v.gog()) throw Error("tree_path: vertices over different graphs of groups");
  int du = u.depth(), dv = v.depth();
  int lcp = 0;
  while (lcp < std::min(du, dv) && u.prefix()[2 * lcp] == v.prefix()[2 * lcp] &&
         u.prefix()[2 * lcp + 1] == v.prefix()[2 * lcp + 1])
    ++lcp;
  std::vector<TreeVertex> out;
  for (int d = du; d > lcp; --d) out.push_back(truncated(u, d));
  out.push_back(truncated(u, lcp));
  for (int d = lcp + 1; d <= dv; ++d) out.push_back(truncated(v, d));
  return out;
}

int tree_distance(const TreeVertex& u, const TreeVertex& v) {
  int du = u.depth(), dv = v.depth();
  int lcp = 0;
  while (lcp < std::min(du, dv) && u.prefix()[2 * lcp] == v.prefix()[2 * lcp] &&
         u.prefix()[2 * lcp + 1] == v.prefix()[2 * lcp + 1])
    ++lcp;
  return (du - lcp) + (dv - lcp);
}

std::vector<TreeVertex> tree_neighbors(const TreeVertex& v) {
  const GraphOfGroups& g = *v.gog();
  std::vector<TreeVertex> out;
  for (EndRef r : g.ends_at(v.orbit())) {
    const EdgeEnd& dep = g.end(r);
    const EdgeEnd& arr = g.edge(r.edge).end[1 - r.side];
    int dir = r.side == 0 ? +1 : -1;
    for (Elem rep : dep.transversal) {
      bool backtrack = !v.prefix().empty() && rep == g.vertex(v.orbit()).group->identity() &&
                       v.prefix()[v.prefix().size() - 1] == Token::edge(r.edge, -dir);
      if (backtrack) {
        out.push_back(truncated(v, v.depth() - 1));
      } else {
        std::vector<Token> p = v.prefix();
        p.push_back(Token::vtx(v.orbit(), rep));
        p.push_back(Token::edge(r.edge, dir));
        out.emplace_back(v.gog(), arr.vertex, std::move(p));
      }
    }
  }
  return out;
}

std::vector<TreeVertex> tree_ball(const GogPtr& g, int radius) {
  std::vector<TreeVertex> out{TreeVertex::base(g)};
  std::set<TreeVertex> seen{out[0]};
  size_t frontier_start = 0;
  for (int r = 0; r < radius; ++r) {
    size_t frontier_end = out.size();
    for (size_t i = frontier_start; i < frontier_end; ++i)
      for (TreeVertex& n : tree_neighbors(out[i]))
        if (seen.insert(n).second) out.push_back(std::move(n));
    frontier_start = frontier_end;
  }
  return out;
}

PathWord transporter(const TreeVertex& v) {
  const GogPtr& g = v.gog();
  std::vector<Token> raw = v.prefix();
  TreeVertex l = TreeVertex::lift(g, v.orbit());
  std::vector<Token> inv = invert_tokens(*g, l.prefix());
  raw.insert(raw.end(), inv.begin(), inv.end());
  return PathWord::from_raw(g, raw);
}

std::vector<PathWord> stabilizer_words(const TreeVertex& v) {
  const GogPtr& g = v.gog();
  const FiniteGroup& gv = *g->vertex(v.orbit()).group;
  std::vector<Token> inv_prefix = invert_tokens(*g, v.prefix());
  std::vector<PathWord> out;
  out.reserve(gv.order());
  for (Elem x : gv.canonical_order()) {
    std::vector<Token> raw = v.prefix();
    raw.push_back(Token::vtx(v.orbit(), x));
    raw.insert(raw.end(), inv_prefix.begin(), inv_prefix.end());
    out.push_back(PathWord::from_raw(g, raw));
  }
  return out;
}

Elem localize_at(const PathWord& w, const TreeVertex& v) {
  const GogPtr& g = v.gog();
  std::vector<Token> raw = invert_tokens(*g, v.prefix());
  raw.insert(raw.end(), w.tokens().begin(), w.tokens().end());
  raw.insert(raw.end(), v.prefix().begin(), v.prefix().end());
  CanonResult r = canonicalize(*g, v.orbit(), raw);
  if (r.tokens.size() != 1 || r.end_vertex != v.orbit())
    throw Error("localize_at: word does not fix the vertex");
  return r.tokens[0].val;
}

std::vector<TreeVertex> fixed_set(const std::vector<PathWord>& gens, int radius) {
  if (gens.empty()) throw Error("fixed_set: no generators");
  const GogPtr& g = gens.front().gog();
  std::vector<TreeVertex> out;
  for (const TreeVertex& v : tree_ball(g, radius)) {
    bool fixed = true;
    for (const PathWord& w : gens)
      if (!(act(w, v) == v)) {
        fixed = false;
        break;
      }
    if (fixed) out.push_back(v);
  }
  return out;
}

std::vector<PathWord> subgroup_closure(const GogPtr& g, const std::vector<PathWord>& gens,
                                       int order_cap) {
  std::set<PathWord> have{PathWord::identity(g)};
  std::deque<PathWord> queue{PathWord::identity(g)};
  std::vector<PathWord> base = gens;
  for (const PathWord& w : gens) base.push_back(element_inv(w));
  while (!queue.empty()) {
    PathWord cur = queue.front();
    queue.pop_front();
    for (const PathWord& s : base) {
      PathWord next = element_mul(cur, s);
      if (have.insert(next).second) {
        if (static_cast<int>(have.size()) > order_cap)
          throw Error("subgroup closure exceeds the order cap of " + std::to_string(order_cap));
        queue.push_back(next);
      }
    }
  }
  return {have.begin(), have.end()};
}

bool is_elliptic_subgroup(const std::vector<PathWord>& gens) {
  for (const PathWord& a : gens)
    if (translation_length(a) > 0) return false;
  for (size_t i = 0; i < gens.size(); ++i)
    for (size_t j = 0; j < gens.size(); ++j)
      if (i != j && translation_length(element_mul(gens[i], gens[j])) > 0) return false;
  return true;
}

TreeVertex fixed_vertex(const std::vector<PathWord>& gens, int order_cap) {
  if (gens.empty()) throw Error("fixed_vertex: no generators");
  const GogPtr& g = gens.front().gog();
  for (const PathWord& w : gens)
    if (translation_length(w) > 0)
      throw Error("fixed_vertex: generator '" + print_word(w) + "' is hyperbolic");
  if (!is_elliptic_subgroup(gens))
    throw Error("fixed_vertex: generated subgroup is not elliptic");

  // orbit of the base vertex under the generated (finite) subgroup
  std::vector<PathWord> step = gens;
  for (const PathWord& w : gens) step.push_back(element_inv(w));
  std::set<TreeVertex> orbit{TreeVertex::base(g)};
  std::deque<TreeVertex> queue{TreeVertex::base(g)};
  while (!queue.empty()) {
    TreeVertex cur = queue.front();
    queue.pop_front();
    for (const PathWord& s : step) {
      TreeVertex next = act(s, cur);
      if (orbit.insert(next).second) {
        if (static_cast<int>(orbit.size()) > order_cap)
          throw Error("fixed_vertex: orbit exceeds the order cap");
        queue.push_back(next);
      }
    }
  }

  // center of the orbit: midpoint of the (deterministically chosen) diametral pair
  std::vector<TreeVertex> pts(orbit.begin(), orbit.end());
  int best = -1;
  std::pair<size_t, size_t> pair{0, 0};
  for (size_t i = 0; i < pts.size(); ++i)
    for (size_t j = i; j < pts.size(); ++j) {
      int d = tree_distance(pts[i], pts[j]);
      if (d > best) {
        best = d;
        pair = {i, j};
      }
    }
  if (best % 2 != 0)
    throw Error("fixed_vertex: odd orbit diameter (action with inversions?)");  // unreachable
  std::vector<TreeVertex> path = tree_path(pts[pair.first], pts[pair.second]);
  TreeVertex center = path[best / 2];
  for (const PathWord& w : gens)
    if (!(act(w, center) == center))
      throw Error("fixed_vertex: computed center is not fixed");  // unreachable
  return center;
}

SubgroupCensus::SubgroupCensus(GogPtr g) : g_(std::move(g)) {
  offset_.assign(g_->vertex_count() + 1, 0);
  for (int v = 0; v < g_->vertex_count(); ++v)
    offset_[v + 1] = offset_[v] + static_cast<int>(g_->vertex(v).group->subgroup_classes().size());

  std::vector<int> dsu(offset_.back());
  for (size_t i = 0; i < dsu.size(); ++i) dsu[i] = static_cast<int>(i);
  auto find = [&](int x) {
    while (dsu[x] != x) x = dsu[x] = dsu[dsu[x]];
    return x;
  };
  auto unite = [&](int a, int b) {
    int ra = find(a), rb = find(b);
    dsu[std::max(ra, rb)] = std::min(ra, rb);
  };

  for (int ei = 0; ei < g_->edge_count(); ++ei) {
    const EdgeData& e = g_->edge(ei);
    for (uint64_t k : e.group->subgroup_lattice()) {
      uint64_t ia = 0, ib = 0;
      for (Elem c : e.group->mask_members(k)) {
        ia |= 1ull << e.end[0].inclusion.map(c);
        ib |= 1ull << e.end[1].inclusion.map(c);
      }
      int ca = g_->vertex(e.end[0].vertex).group->class_of_subgroup(ia);
      int cb = g_->vertex(e.end[1].vertex).group->class_of_subgroup(ib);
      unite(offset_[e.end[0].vertex] + ca, offset_[e.end[1].vertex] + cb);
    }
  }

  node_class_.assign(offset_.back(), -1);
  for (int v = 0; v < g_->vertex_count(); ++v) {
    const FiniteGroup& gv = *g_->vertex(v).group;
    for (size_t c = 0; c < gv.subgroup_classes().size(); ++c) {
      int node = offset_[v] + static_cast<int>(c);
      int root = find(node);
      if (node_class_[root] < 0) {
        uint64_t mask = gv.subgroup_lattice()[gv.subgroup_classes()[c][0]];
        SubgroupClass sc;
        sc.home_vertex = v;
        sc.local_class_index = static_cast<int>(c);
        sc.local_form = Subgroup(g_->vertex(v).group, mask);
        sc.witness_vertex = TreeVertex::lift(g_, v);
        for (Elem x : gv.generating_set(mask))
          sc.representative.push_back(vertex_element(g_, v, x));
        if (sc.representative.empty())
          sc.representative.push_back(PathWord::identity(g_));  // trivial subgroup
        node_class_[root] = static_cast<int>(classes_.size());
        classes_.push_back(std::move(sc));
      }
      node_class_[node] = node_class_[root];
    }
  }
}

int SubgroupCensus::class_index(int vertex, uint64_t subgroup_mask) const {
  int local = g_->vertex(vertex).group->class_of_subgroup(subgroup_mask);
  return node_class_[offset_[vertex] + local];
}

std::vector<SubgroupClass> finite_subgroup_classes(const GogPtr& g) {
  return SubgroupCensus(g).classes();
}

}  // namespace gogtree
