#include "gogtree/marking.hpp"

namespace gogtree {

namespace {

// Evaluate a canonical word by the generator tables: the canonical form
// [r0][E1][r1]...[Ek][h] equals the product of its vertex-element and
// stable-letter generators, so images concatenate.
PathWord eval_tables(const GogPtr& target, const std::vector<std::vector<PathWord>>& vert,
                     const std::vector<PathWord>& edge, std::span<const Token> canonical) {
  std::vector<Token> out;
  for (const Token& t : canonical) {
    if (t.kind == Token::VtxElem) {
      const PathWord& img = vert[t.idx][t.val];
      out.insert(out.end(), img.tokens().begin(), img.tokens().end());
    } else {
      const PathWord& img = edge[t.idx];
      if (t.val > 0) {
        out.insert(out.end(), img.tokens().begin(), img.tokens().end());
      } else {
        std::vector<Token> inv = invert_tokens(*target, img.tokens());
        out.insert(out.end(), inv.begin(), inv.end());
      }
    }
  }
  return PathWord::from_raw(target, out);
}

}  // namespace

MarkedGraphOfGroups MarkedGraphOfGroups::identity(const GogPtr& g) {
  MarkedGraphOfGroups m;
  m.gog_ = g;
  m.ref_ = g;
  m.to_vert_.resize(g->vertex_count());
  for (int v = 0; v < g->vertex_count(); ++v) {
    const FiniteGroup& gv = *g->vertex(v).group;
    m.to_vert_[v].resize(gv.order());
    for (Elem x = 0; x < gv.order(); ++x) m.to_vert_[v][x] = vertex_element(g, v, x);
  }
  m.to_edge_.resize(g->edge_count());
  for (int e = 0; e < g->edge_count(); ++e) m.to_edge_[e] = stable_letter(g, e);
  m.from_vert_ = m.to_vert_;
  m.from_edge_ = m.to_edge_;
  return m;
}

MarkedGraphOfGroups MarkedGraphOfGroups::from_tables(GogPtr gog, GogPtr ref,
                                                     std::vector<std::vector<PathWord>> to_vert,
                                                     std::vector<PathWord> to_edge,
                                                     std::vector<std::vector<PathWord>> from_vert,
                                                     std::vector<PathWord> from_edge) {
  MarkedGraphOfGroups m;
  m.gog_ = std::move(gog);
  m.ref_ = std::move(ref);
  m.to_vert_ = std::move(to_vert);
  m.to_edge_ = std::move(to_edge);
  m.from_vert_ = std::move(from_vert);
  m.from_edge_ = std::move(from_edge);
  return m;
}

PathWord MarkedGraphOfGroups::to_ref(const PathWord& w) const {
  if (w.gog() != gog_) throw Error("to_ref: word is over a different graph of groups");
  return eval_tables(ref_, to_vert_, to_edge_, w.tokens());
}

PathWord MarkedGraphOfGroups::to_ref_raw(std::span<const Token> raw) const {
  return to_ref(PathWord::from_raw(gog_, raw));
}

PathWord MarkedGraphOfGroups::from_ref(const PathWord& w) const {
  if (w.gog() != ref_) throw Error("from_ref: word is not over the reference group");
  return eval_tables(gog_, from_vert_, from_edge_, w.tokens());
}

PathWord MarkedGraphOfGroups::from_ref_raw(std::span<const Token> raw) const {
  return from_ref(PathWord::from_raw(ref_, raw));
}

MarkedGraphOfGroups MarkedGraphOfGroups::conjugated(const PathWord& c) const {
  if (c.gog() != ref_) throw Error("conjugated: twist word must be over the reference group");
  MarkedGraphOfGroups m;
  m.gog_ = gog_;
  m.ref_ = ref_;
  PathWord cinv = element_inv(c);
  auto twist = [&](const PathWord& w) { return element_mul(element_mul(c, w), cinv); };
  m.to_vert_.resize(to_vert_.size());
  for (size_t v = 0; v < to_vert_.size(); ++v) {
    m.to_vert_[v].reserve(to_vert_[v].size());
    for (const PathWord& w : to_vert_[v]) m.to_vert_[v].push_back(twist(w));
  }
  m.to_edge_.reserve(to_edge_.size());
  for (const PathWord& w : to_edge_) m.to_edge_.push_back(twist(w));

  // from'(y) = from(c^-1 · y · c)
  m.from_vert_.resize(from_vert_.size());
  for (int v = 0; v < ref_->vertex_count(); ++v) {
    const FiniteGroup& gv = *ref_->vertex(v).group;
    m.from_vert_[v].resize(gv.order());
    for (Elem x = 0; x < gv.order(); ++x)
      m.from_vert_[v][x] = from_ref(element_mul(element_mul(cinv, vertex_element(ref_, v, x)), c));
  }
  m.from_edge_.resize(from_edge_.size());
  for (int e = 0; e < ref_->edge_count(); ++e)
    m.from_edge_[e] = from_ref(element_mul(element_mul(cinv, stable_letter(ref_, e)), c));
  return m;
}

MarkingCheck verify_marking(const MarkedGraphOfGroups& m) {
  const GogPtr& g = m.gog();
  const GogPtr& r = m.ref();

  // vertex-group relations through to_ref
  for (int v = 0; v < g->vertex_count(); ++v) {
    const FiniteGroup& gv = *g->vertex(v).group;
    for (Elem a = 0; a < gv.order(); ++a)
      for (Elem b = 0; b < gv.order(); ++b)
        if (!(element_mul(m.to_vert_img(v, a), m.to_vert_img(v, b)) ==
              m.to_vert_img(v, gv.mul(a, b))))
          return {false, "to_ref breaks multiplication at vertex '" + g->vertex(v).id + "' on (" +
                             gv.elem_name(a) + ", " + gv.elem_name(b) + ")"};
  }
  // edge relations: t_e · img(b side, beta(c)) · t_e^-1 = img(a side, alpha(c))
  for (int e = 0; e < g->edge_count(); ++e) {
    const EdgeData& ed = g->edge(e);
    const PathWord& t = m.to_edge_img(e);
    for (Elem c = 0; c < ed.group->order(); ++c) {
      PathWord lhs = element_mul(
          element_mul(t, m.to_vert_img(ed.end[1].vertex, ed.end[1].inclusion.map(c))),
          element_inv(t));
      if (!(lhs == m.to_vert_img(ed.end[0].vertex, ed.end[0].inclusion.map(c))))
        return {false, "to_ref breaks the relation of edge '" + ed.id + "' at element " +
                           ed.group->elem_name(c)};
    }
  }
  // mirror checks for from_ref over the reference structure
  for (int v = 0; v < r->vertex_count(); ++v) {
    const FiniteGroup& gv = *r->vertex(v).group;
    for (Elem a = 0; a < gv.order(); ++a)
      for (Elem b = 0; b < gv.order(); ++b)
        if (!(element_mul(m.from_vert_img(v, a), m.from_vert_img(v, b)) ==
              m.from_vert_img(v, gv.mul(a, b))))
          return {false,
                  "from_ref breaks multiplication at reference vertex '" + r->vertex(v).id + "'"};
  }
  for (int e = 0; e < r->edge_count(); ++e) {
    const EdgeData& ed = r->edge(e);
    const PathWord& t = m.from_edge_img(e);
    for (Elem c = 0; c < ed.group->order(); ++c) {
      PathWord lhs = element_mul(
          element_mul(t, m.from_vert_img(ed.end[1].vertex, ed.end[1].inclusion.map(c))),
          element_inv(t));
      if (!(lhs == m.from_vert_img(ed.end[0].vertex, ed.end[0].inclusion.map(c))))
        return {false, "from_ref breaks the relation of reference edge '" + ed.id + "'"};
    }
  }

  // round trips on generators, both directions
  for (int v = 0; v < g->vertex_count(); ++v) {
    const FiniteGroup& gv = *g->vertex(v).group;
    for (Elem x = 0; x < gv.order(); ++x)
      if (!(m.from_ref(m.to_vert_img(v, x)) == vertex_element(g, v, x)))
        return {false, "round trip fails on element '" + gv.elem_name(x) + "' of vertex '" +
                           g->vertex(v).id + "'"};
  }
  for (int e = 0; e < g->edge_count(); ++e)
    if (!(m.from_ref(m.to_edge_img(e)) == stable_letter(g, e)))
      return {false, "round trip fails on the stable letter of edge '" + g->edge(e).id + "'"};
  for (int v = 0; v < r->vertex_count(); ++v) {
    const FiniteGroup& gv = *r->vertex(v).group;
    for (Elem x = 0; x < gv.order(); ++x)
      if (!(m.to_ref(m.from_vert_img(v, x)) == vertex_element(r, v, x)))
        return {false, "reverse round trip fails on reference vertex '" + r->vertex(v).id + "'"};
  }
  for (int e = 0; e < r->edge_count(); ++e)
    if (!(m.to_ref(m.from_edge_img(e)) == stable_letter(r, e)))
      return {false, "reverse round trip fails on reference edge '" + r->edge(e).id + "'"};

  return {true, ""};
}

int ref_class_of_subgroup(const MarkedGraphOfGroups& m, const SubgroupCensus& ref_census,
                          int vertex, uint64_t subgroup_mask) {
  const GogPtr& g = m.gog();
  const FiniteGroup& gv = *g->vertex(vertex).group;
  std::vector<PathWord> ref_gens;
  for (Elem x : gv.generating_set(subgroup_mask))
    ref_gens.push_back(m.to_ref(vertex_element(g, vertex, x)));
  if (ref_gens.empty()) ref_gens.push_back(PathWord::identity(m.ref()));
  TreeVertex y = fixed_vertex(ref_gens);
  uint64_t local = 0;
  for (const PathWord& w : ref_gens) local |= 1ull << localize_at(w, y);
  uint64_t mask = m.ref()->vertex(y.orbit()).group->closure(local);
  return ref_census.class_index(y.orbit(), mask);
}

}  // namespace gogtree
