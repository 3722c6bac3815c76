#pragma once

#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gogtree/dsl.hpp"
#include "gogtree/tree.hpp"
#include "gogtree/words.hpp"

namespace gogtree::testing {

inline std::string fixture_path(const std::string& name) {
  return std::string(GOGTREE_FIXTURE_DIR) + "/" + name + ".gog";
}

inline GogPtr load_fixture(const std::string& name) {
  return parse_gog_file(fixture_path(name));
}

inline Elem elem(const GogPtr& g, int vertex, const std::string& name) {
  auto e = g->vertex(vertex).group->elem_by_name(name);
  if (!e) throw Error("test: no element " + name);
  return *e;
}

// Independent Britton-style reducer. It repeatedly rewrites an arbitrary
// pinch subword e·g·e^-1 (pinch chosen by rng, not leftmost) and never uses
// the transversal tables, so triviality judgments cross-check the canonical
// engine. Returns true iff the word is the identity.
inline bool britton_trivial(const GraphOfGroups& g, int start, std::vector<Token> raw,
                            std::mt19937_64& rng) {
  // strict alternating form [g0][E1][g1]...[Ek][gk] over (elem, edge) slots
  struct Syl {
    bool is_edge;
    int idx;  // vertex or edge
    int val;  // element or direction
  };
  std::vector<Syl> w;
  int cur = start;
  w.push_back({false, cur, g.vertex(cur).group->identity()});
  for (const Token& t : raw) {
    if (t.kind == Token::VtxElem) {
      if (t.idx != cur) throw Error("britton oracle: ill-formed path");
      w.back().val = g.vertex(cur).group->mul(w.back().val, t.val);
    } else {
      const EdgeEnd& dep = g.edge(t.idx).end[t.val > 0 ? 0 : 1];
      const EdgeEnd& arr = g.edge(t.idx).end[t.val > 0 ? 1 : 0];
      if (dep.vertex != cur) throw Error("britton oracle: ill-formed path");
      w.push_back({true, t.idx, t.val});
      cur = arr.vertex;
      w.push_back({false, cur, g.vertex(cur).group->identity()});
    }
  }

  while (true) {
    std::vector<size_t> pinches;
    for (size_t i = 1; i + 2 < w.size(); i += 2) {
      // w[i] edge, w[i+1] elem, w[i+2] edge
      if (w[i].idx != w[i + 2].idx || w[i].val != -w[i + 2].val) continue;
      const EdgeEnd& mid = g.edge(w[i].idx).end[w[i].val > 0 ? 1 : 0];
      if ((mid.image_mask >> w[i + 1].val) & 1) pinches.push_back(i);
    }
    if (pinches.empty()) break;
    size_t i = pinches[rng() % pinches.size()];
    const EdgeData& e = g.edge(w[i].idx);
    const EdgeEnd& mid = e.end[w[i].val > 0 ? 1 : 0];
    const EdgeEnd& outer = e.end[w[i].val > 0 ? 0 : 1];
    Elem c = *mid.inclusion.preimage(w[i + 1].val);
    Elem replacement = outer.inclusion.map(c);
    const FiniteGroup& gv = *g.vertex(outer.vertex).group;
    Elem merged = gv.mul(gv.mul(w[i - 1].val, replacement), w[i + 3].val);
    w[i - 1].val = merged;
    w.erase(w.begin() + i, w.begin() + i + 4);
  }
  return w.size() == 1 && w[0].val == g.vertex(start).group->identity();
}

// Random loop word over the standard generators, as raw path tokens.
// Token count (before expansion) is at most max_tokens.
inline std::vector<Token> random_generator_word(const GogPtr& g, std::mt19937_64& rng,
                                                int max_tokens) {
  int len = 1 + static_cast<int>(rng() % max_tokens);
  std::vector<Token> gens;
  for (int i = 0; i < len; ++i) {
    bool edge = g->edge_count() > 0 && rng() % 3 == 0;
    if (edge) {
      int e = static_cast<int>(rng() % g->edge_count());
      gens.push_back(Token::edge(e, rng() % 2 ? +1 : -1));
    } else {
      int v = static_cast<int>(rng() % g->vertex_count());
      const FiniteGroup& gv = *g->vertex(v).group;
      gens.push_back(Token::vtx(v, static_cast<Elem>(rng() % gv.order())));
    }
  }
  return expand_generator_word(*g, gens);
}

inline PathWord random_word(const GogPtr& g, std::mt19937_64& rng, int max_tokens) {
  return PathWord::from_raw(g, random_generator_word(g, rng, max_tokens));
}

inline int ball_min_displacement(const PathWord& w, const std::vector<TreeVertex>& ball) {
  int best = -1;
  for (const TreeVertex& v : ball) {
    int d = tree_distance(v, act(w, v));
    if (best < 0 || d < best) best = d;
  }
  return best;
}

inline bool ball_action_trivial(const PathWord& w, const std::vector<TreeVertex>& ball) {
  for (const TreeVertex& v : ball)
    if (!(act(w, v) == v)) return false;
  return true;
}

}  // namespace gogtree::testing
