#include "gogtree/words.hpp"

#include <algorithm>

namespace gogtree {

size_t hash_tokens(std::span<const Token> toks) {
  size_t h = 1469598103934665603ull;
  for (const Token& t : toks) {
    h = (h ^ static_cast<size_t>(t.kind)) * 1099511628211ull;
    h = (h ^ static_cast<size_t>(t.idx)) * 1099511628211ull;
    h = (h ^ static_cast<size_t>(t.val + 7)) * 1099511628211ull;
  }
  return h;
}

CanonResult canonicalize(const GraphOfGroups& g, int start_vertex, std::span<const Token> raw) {
  std::vector<Token> out;
  out.reserve(raw.size() + 1);
  int v = start_vertex;
  Elem h = g.vertex(v).group->identity();

  for (const Token& t : raw) {
    if (t.kind == Token::VtxElem) {
      if (t.idx != v)
        throw Error("ill-formed path: element of '" + g.vertex(t.idx).id +
                    "' read at vertex '" + g.vertex(v).id + "'");
      h = g.vertex(v).group->mul(h, t.val);
      continue;
    }
    const EdgeData& e = g.edge(t.idx);
    const EdgeEnd& dep = e.end[t.val > 0 ? 0 : 1];
    const EdgeEnd& arr = e.end[t.val > 0 ? 1 : 0];
    if (dep.vertex != v)
      throw Error("ill-formed path: edge '" + e.id + "' does not depart from vertex '" +
                  g.vertex(v).id + "'");

    bool pinch = !out.empty() && out.back().kind == Token::EdgeLetter &&
                 out.back().idx == t.idx && out.back().val == -t.val &&
                 ((dep.image_mask >> h) & 1);
    if (pinch) {
      Elem c = *dep.inclusion.preimage(h);
      out.pop_back();                  // the reversed edge letter
      Token rep = out.back();          // its preceding coset representative
      out.pop_back();
      v = arr.vertex;                  // back where the popped letter departed
      h = g.vertex(v).group->mul(rep.val, arr.inclusion.map(c));
    } else {
      Elem rep = dep.rep_of[h];
      Elem c = dep.edgepart_of[h];
      out.push_back(Token::vtx(v, rep));
      out.push_back(t);
      v = arr.vertex;
      h = arr.inclusion.map(c);
    }
  }
  out.push_back(Token::vtx(v, h));
  return {std::move(out), v};
}

std::vector<Token> invert_tokens(const GraphOfGroups& g, std::span<const Token> toks) {
  std::vector<Token> out;
  out.reserve(toks.size());
  for (auto it = toks.rbegin(); it != toks.rend(); ++it) {
    if (it->kind == Token::VtxElem)
      out.push_back(Token::vtx(it->idx, g.vertex(it->idx).group->inv(it->val)));
    else
      out.push_back(Token::edge(it->idx, -it->val));
  }
  return out;
}

PathWord PathWord::identity(const GogPtr& g) {
  PathWord w;
  w.gog_ = g;
  w.toks_ = {Token::vtx(g->base(), g->vertex(g->base()).group->identity())};
  return w;
}

PathWord PathWord::from_raw(const GogPtr& g, std::span<const Token> raw) {
  CanonResult r = canonicalize(*g, g->base(), raw);
  if (r.end_vertex != g->base())
    throw Error("word is a path from the base to '" + g->vertex(r.end_vertex).id +
                "', not a loop");
  PathWord w;
  w.gog_ = g;
  w.toks_ = std::move(r.tokens);
  return w;
}

bool PathWord::is_identity() const {
  return toks_.size() == 1 && toks_[0].val == gog_->vertex(gog_->base()).group->identity();
}

bool PathWord::operator<(const PathWord& o) const {
  return std::lexicographical_compare(
      toks_.begin(), toks_.end(), o.toks_.begin(), o.toks_.end(), [](const Token& a, const Token& b) {
        if (a.kind != b.kind) return a.kind < b.kind;
        if (a.idx != b.idx) return a.idx < b.idx;
        return a.val < b.val;
      });
}

PathWord element_mul(const PathWord& x, const PathWord& y) {
  if (x.gog() != y.gog()) throw Error("element_mul: words over different graphs of groups");
  std::vector<Token> raw = x.tokens();
  raw.insert(raw.end(), y.tokens().begin(), y.tokens().end());
  return PathWord::from_raw(x.gog(), raw);
}

PathWord element_inv(const PathWord& x) {
  return PathWord::from_raw(x.gog(), invert_tokens(*x.gog(), x.tokens()));
}

namespace {

void append_tree_path(const GraphOfGroups& g, int vertex, std::vector<Token>& out) {
  for (auto [edge, dir] : g.tree_steps(vertex)) out.push_back(Token::edge(edge, dir));
}

void append_tree_path_inverse(const GraphOfGroups& g, int vertex, std::vector<Token>& out) {
  const auto& steps = g.tree_steps(vertex);
  for (auto it = steps.rbegin(); it != steps.rend(); ++it)
    out.push_back(Token::edge(it->first, -it->second));
}

}  // namespace

PathWord vertex_element(const GogPtr& g, int vertex, Elem x) {
  std::vector<Token> raw;
  append_tree_path(*g, vertex, raw);
  raw.push_back(Token::vtx(vertex, x));
  append_tree_path_inverse(*g, vertex, raw);
  return PathWord::from_raw(g, raw);
}

PathWord stable_letter(const GogPtr& g, int edge, int dir) {
  const EdgeData& e = g->edge(edge);
  int from = e.end[dir > 0 ? 0 : 1].vertex;
  int to = e.end[dir > 0 ? 1 : 0].vertex;
  std::vector<Token> raw;
  append_tree_path(*g, from, raw);
  raw.push_back(Token::edge(edge, dir));
  append_tree_path_inverse(*g, to, raw);
  return PathWord::from_raw(g, raw);
}

std::vector<Token> expand_generator_word(const GraphOfGroups& g, std::span<const Token> gens) {
  std::vector<Token> raw;
  for (const Token& t : gens) {
    if (t.kind == Token::VtxElem) {
      append_tree_path(g, t.idx, raw);
      raw.push_back(t);
      append_tree_path_inverse(g, t.idx, raw);
    } else {
      const EdgeData& e = g.edge(t.idx);
      int from = e.end[t.val > 0 ? 0 : 1].vertex;
      int to = e.end[t.val > 0 ? 1 : 0].vertex;
      append_tree_path(g, from, raw);
      raw.push_back(t);
      append_tree_path_inverse(g, to, raw);
    }
  }
  return raw;
}

int translation_length(const PathWord& x) {
  const GraphOfGroups& g = *x.gog();
  std::vector<Token> w = x.tokens();
  int start = g.base();
  while (true) {
    int k = static_cast<int>(w.size() / 2);
    if (k == 0) return 0;
    const Token first_e = w[1];
    const Token last_e = w[2 * k - 1];
    if (first_e.idx != last_e.idx || first_e.val != -last_e.val) return k;
    const EdgeData& e = g.edge(first_e.idx);
    const EdgeEnd& dep = e.end[first_e.val > 0 ? 0 : 1];
    const EdgeEnd& arr = e.end[first_e.val > 0 ? 1 : 0];
    const FiniteGroup& gv = *g.vertex(start).group;
    Elem seam = gv.mul(w.back().val, w.front().val);  // h · r0
    if (!((dep.image_mask >> seam) & 1)) return k;
    // conjugate by r0·E1 and renormalize; the seam pinch removes two letters
    std::vector<Token> raw;
    raw.push_back(Token::edge(first_e.idx, -first_e.val));
    raw.push_back(Token::vtx(start, gv.inv(w.front().val)));
    raw.insert(raw.end(), w.begin(), w.end());
    raw.push_back(w.front());
    raw.push_back(first_e);
    start = arr.vertex;
    w = canonicalize(g, start, raw).tokens;
  }
}

// ---- serialization ---------------------------------------------------------

namespace {
const std::string kDot = "·";
const std::string kSup = "⁻¹";
}  // namespace

std::string print_word(const PathWord& w) {
  const GraphOfGroups& g = *w.gog();
  std::string out;
  for (const Token& t : w.tokens()) {
    if (!out.empty()) out += kDot;
    if (t.kind == Token::VtxElem)
      out += g.vertex(t.idx).group->name() + "." + g.vertex(t.idx).group->elem_name(t.val);
    else
      out += g.edge(t.idx).id + (t.val > 0 ? "" : kSup);
  }
  return out;
}

PathWord parse_word(const GogPtr& g, const std::string& text, int syllable_cap) {
  // split on the middle-dot separator
  std::vector<std::string> parts;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t next = text.find(kDot, pos);
    if (next == std::string::npos) {
      parts.push_back(text.substr(pos));
      break;
    }
    parts.push_back(text.substr(pos, next - pos));
    pos = next + kDot.size();
  }
  if (parts.size() == 1 && parts[0].empty()) throw Error("empty word");
  if (static_cast<int>(parts.size()) > syllable_cap)
    throw Error("word exceeds the syllable cap of " + std::to_string(syllable_cap));

  std::vector<Token> raw;
  int cur = g->base();
  auto goto_vertex = [&](int target) {
    if (cur == target) return;
    // travel through the base along the spanning tree; canonicalization
    // trims the common prefix
    append_tree_path_inverse(*g, cur, raw);
    append_tree_path(*g, target, raw);
    cur = target;
  };

  for (std::string tok : parts) {
    if (tok.empty()) throw Error("empty syllable in word");
    int dir = +1;
    if (tok.size() >= kSup.size() && tok.compare(tok.size() - kSup.size(), kSup.size(), kSup) == 0) {
      dir = -1;
      tok = tok.substr(0, tok.size() - kSup.size());
    }
    if (auto ei = g->edge_by_id(tok)) {
      const EdgeData& e = g->edge(*ei);
      int from = e.end[dir > 0 ? 0 : 1].vertex;
      goto_vertex(from);
      raw.push_back(Token::edge(*ei, dir));
      cur = e.end[dir > 0 ? 1 : 0].vertex;
      continue;
    }
    if (dir < 0) throw Error("inverse marker on a non-edge token '" + tok + "'");
    size_t dot = tok.find('.');
    if (dot == std::string::npos)
      throw Error("cannot read token '" + tok + "': not an edge id or GROUP.element");
    std::string gname = tok.substr(0, dot), ename = tok.substr(dot + 1);
    int target = -1;
    if (g->vertex(cur).group->name() == gname) {
      target = cur;
    } else {
      for (int v = 0; v < g->vertex_count(); ++v)
        if (g->vertex(v).group->name() == gname) {
          if (target >= 0)
            throw Error("ambiguous element '" + tok + "': several vertices carry group " + gname);
          target = v;
        }
      if (target < 0) throw Error("no vertex carries a group named '" + gname + "'");
    }
    auto el = g->vertex(target).group->elem_by_name(ename);
    if (!el) throw Error("unknown element '" + ename + "' in group " + gname);
    goto_vertex(target);
    raw.push_back(Token::vtx(target, *el));
  }
  goto_vertex(g->base());
  return PathWord::from_raw(g, raw);
}

}  // namespace gogtree
