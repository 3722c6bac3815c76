#include "gogtree/moves.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <functional>
#include <set>
#include <sstream>

namespace gogtree {

namespace {

// ---- token correspondence for a collapse ------------------------------------
//
// `from` is the graph carrying the collapsible edge; tokens are projected to
// the indexing of the collapsed graph (v1 merged into v2, the edge erased)
// and lifted back. The lift reroutes through the erased edge whenever the
// path needs the far side of the merged pair.
struct MergeMaps {
  const GraphOfGroups* from = nullptr;
  int edge = -1;
  int v1 = -1, v2 = -1;        // from-indices; v1 is merged away
  std::vector<Elem> theta;     // G_v1 -> G_v2
  std::vector<int> vmap;       // from-vertex -> to-vertex
  std::vector<int> emap;       // from-edge -> to-edge (-1 on `edge`)
  std::vector<int> vinv;       // to-vertex -> from-vertex
  std::vector<int> einv;       // to-edge -> from-edge
  int dir_v1_to_v2 = +1;       // direction of `edge` read from v1 to v2
};

MergeMaps make_merge_maps(const GraphOfGroups& from, int edge, int surjective_side) {
  MergeMaps mm;
  mm.from = &from;
  mm.edge = edge;
  const EdgeData& e = from.edge(edge);
  mm.v1 = e.end[surjective_side].vertex;
  mm.v2 = e.end[1 - surjective_side].vertex;
  mm.dir_v1_to_v2 = surjective_side == 0 ? +1 : -1;

  const FiniteGroup& g1 = *from.vertex(mm.v1).group;
  mm.theta.resize(g1.order());
  for (Elem x = 0; x < g1.order(); ++x) {
    auto c = e.end[surjective_side].inclusion.preimage(x);
    mm.theta[x] = e.end[1 - surjective_side].inclusion.map(*c);
  }

  mm.vmap.assign(from.vertex_count(), -1);
  int next = 0;
  for (int v = 0; v < from.vertex_count(); ++v)
    if (v != mm.v1) {
      mm.vmap[v] = next++;
      mm.vinv.push_back(v);
    }
  mm.vmap[mm.v1] = mm.vmap[mm.v2];

  mm.emap.assign(from.edge_count(), -1);
  next = 0;
  for (int ei = 0; ei < from.edge_count(); ++ei)
    if (ei != edge) {
      mm.emap[ei] = next++;
      mm.einv.push_back(ei);
    }
  return mm;
}

std::vector<Token> project_tokens(const MergeMaps& mm, std::span<const Token> toks) {
  std::vector<Token> out;
  out.reserve(toks.size());
  for (const Token& t : toks) {
    if (t.kind == Token::VtxElem) {
      if (t.idx == mm.v1)
        out.push_back(Token::vtx(mm.vmap[mm.v1], mm.theta[t.val]));
      else
        out.push_back(Token::vtx(mm.vmap[t.idx], t.val));
    } else {
      if (t.idx == mm.edge) continue;
      out.push_back(Token::edge(mm.emap[t.idx], t.val));
    }
  }
  return out;
}

// Lift of a loop word at the (projected) base back to `from`.
std::vector<Token> lift_tokens(const MergeMaps& mm, std::span<const Token> toks) {
  const GraphOfGroups& g = *mm.from;
  std::vector<Token> out;
  out.reserve(toks.size() + 4);
  int pos = g.base();
  auto ensure = [&](int target) {
    if (pos == target) return;
    if ((pos == mm.v1 && target == mm.v2) || (pos == mm.v2 && target == mm.v1)) {
      out.push_back(Token::edge(mm.edge, pos == mm.v1 ? mm.dir_v1_to_v2 : -mm.dir_v1_to_v2));
      pos = target;
      return;
    }
    throw Error("lift_tokens: position mismatch");  // unreachable on valid input
  };

  for (const Token& t : toks) {
    if (t.kind == Token::VtxElem) {
      int u = mm.vinv[t.idx];  // merged vertex maps back to v2; its group is G_v2
      ensure(u);
      out.push_back(Token::vtx(u, t.val));
    } else {
      int ei = mm.einv[t.idx];
      const EdgeData& ed = g.edge(ei);
      int dep = ed.end[t.val > 0 ? 0 : 1].vertex;
      int arr = ed.end[t.val > 0 ? 1 : 0].vertex;
      ensure(dep);
      out.push_back(Token::edge(ei, t.val));
      pos = arr;
    }
  }
  ensure(g.base());
  return out;
}

// ---- conjugator insertions for expansions -----------------------------------
//
// An expansion reattaches selected ends with a conjugator twist; collapsing
// the fresh edge therefore yields the original graph with those ends'
// inclusions conjugated. These walkers translate between the plain and the
// conjugated readings of the same token stream.
struct EndTwists {
  const GraphOfGroups* plain = nullptr;            // the original graph
  std::map<std::pair<int, int>, Elem> conj;        // (edge, side) -> c in G_v
};

std::vector<Token> twisted_to_plain(const EndTwists& tw, std::span<const Token> toks) {
  const GraphOfGroups& g = *tw.plain;
  std::vector<Token> out;
  out.reserve(toks.size());
  for (const Token& t : toks) {
    if (t.kind == Token::VtxElem) {
      out.push_back(t);
      continue;
    }
    int dep_side = t.val > 0 ? 0 : 1;
    auto dep = tw.conj.find({t.idx, dep_side});
    auto arr = tw.conj.find({t.idx, 1 - dep_side});
    if (dep != tw.conj.end())
      out.push_back(Token::vtx(g.edge(t.idx).end[dep_side].vertex, dep->second));
    out.push_back(t);
    if (arr != tw.conj.end()) {
      const FiniteGroup& gv = *g.vertex(g.edge(t.idx).end[1 - dep_side].vertex).group;
      out.push_back(Token::vtx(g.edge(t.idx).end[1 - dep_side].vertex, gv.inv(arr->second)));
    }
  }
  return out;
}

std::vector<Token> plain_to_twisted(const EndTwists& tw, std::span<const Token> toks) {
  const GraphOfGroups& g = *tw.plain;
  std::vector<Token> out;
  out.reserve(toks.size());
  for (const Token& t : toks) {
    if (t.kind == Token::VtxElem) {
      out.push_back(t);
      continue;
    }
    int dep_side = t.val > 0 ? 0 : 1;
    auto dep = tw.conj.find({t.idx, dep_side});
    auto arr = tw.conj.find({t.idx, 1 - dep_side});
    if (dep != tw.conj.end()) {
      const FiniteGroup& gv = *g.vertex(g.edge(t.idx).end[dep_side].vertex).group;
      out.push_back(Token::vtx(g.edge(t.idx).end[dep_side].vertex, gv.inv(dep->second)));
    }
    out.push_back(t);
    if (arr != tw.conj.end())
      out.push_back(Token::vtx(g.edge(t.idx).end[1 - dep_side].vertex, arr->second));
  }
  return out;
}

// Rebuild the marking tables of `target` from `source`'s marking through
// token translators in both directions.
MarkedGraphOfGroups transport_marking(
    const MarkedGraphOfGroups& source, const GogPtr& target,
    const std::function<std::vector<Token>(std::span<const Token>)>& target_to_source,
    const std::function<std::vector<Token>(std::span<const Token>)>& source_to_target) {
  const GogPtr& ref = source.ref();
  std::vector<std::vector<PathWord>> to_vert(target->vertex_count());
  for (int v = 0; v < target->vertex_count(); ++v) {
    const FiniteGroup& gv = *target->vertex(v).group;
    to_vert[v].resize(gv.order());
    for (Elem x = 0; x < gv.order(); ++x) {
      std::vector<Token> gen{Token::vtx(v, x)};
      to_vert[v][x] = source.to_ref_raw(target_to_source(expand_generator_word(*target, gen)));
    }
  }
  std::vector<PathWord> to_edge(target->edge_count());
  for (int e = 0; e < target->edge_count(); ++e) {
    std::vector<Token> gen{Token::edge(e, +1)};
    to_edge[e] = source.to_ref_raw(target_to_source(expand_generator_word(*target, gen)));
  }

  std::vector<std::vector<PathWord>> from_vert(ref->vertex_count());
  for (int v = 0; v < ref->vertex_count(); ++v) {
    const FiniteGroup& gv = *ref->vertex(v).group;
    from_vert[v].resize(gv.order());
    for (Elem x = 0; x < gv.order(); ++x)
      from_vert[v][x] =
          PathWord::from_raw(target, source_to_target(source.from_vert_img(v, x).tokens()));
  }
  std::vector<PathWord> from_edge(ref->edge_count());
  for (int e = 0; e < ref->edge_count(); ++e)
    from_edge[e] =
        PathWord::from_raw(target, source_to_target(source.from_edge_img(e).tokens()));

  return MarkedGraphOfGroups::from_tables(target, ref, std::move(to_vert), std::move(to_edge),
                                          std::move(from_vert), std::move(from_edge));
}

std::string fresh_id(const GraphOfGroups& g, const std::string& base) {
  auto taken = [&](const std::string& id) {
    return g.vertex_by_id(id).has_value() || g.edge_by_id(id).has_value();
  };
  if (!taken(base)) return base;
  for (int k = 0;; ++k) {
    std::string id = base + std::to_string(k);
    if (!taken(id)) return id;
  }
}

}  // namespace

MoveResult collapse(const MarkedGraphOfGroups& m, const std::string& edge_id) {
  const GogPtr& g = m.gog();
  auto eidx = g->edge_by_id(edge_id);
  if (!eidx) throw Error("collapse: unknown edge '" + edge_id + "'");
  const EdgeData& e = g->edge(*eidx);
  if (e.is_loop()) throw Error("collapse: edge '" + edge_id + "' is a loop");
  int side;
  if (e.end[0].surjective())
    side = 0;
  else if (e.end[1].surjective())
    side = 1;
  else
    throw Error("collapse: neither inclusion of edge '" + edge_id + "' is surjective");

  MergeMaps mm = make_merge_maps(*g, *eidx, side);
  const GroupPtr& g2 = g->vertex(mm.v2).group;

  std::vector<VertexData> vertices;
  for (int v = 0; v < g->vertex_count(); ++v)
    if (v != mm.v1) vertices.push_back(g->vertex(v));

  std::vector<GraphOfGroups::EdgeSpec> edges;
  std::vector<std::pair<std::string, int>> moved_ends;
  for (int ei = 0; ei < g->edge_count(); ++ei) {
    if (ei == *eidx) continue;
    const EdgeData& ed = g->edge(ei);
    GraphOfGroups::EdgeSpec spec;
    spec.id = ed.id;
    spec.group = ed.group;
    const EdgeEnd* ends[2] = {&ed.end[0], &ed.end[1]};
    std::string vids[2];
    Mono incls[2];
    for (int s = 0; s < 2; ++s) {
      if (ends[s]->vertex == mm.v1) {
        vids[s] = g->vertex(mm.v2).id;
        std::vector<std::pair<Elem, Elem>> pairs;
        for (Elem c = 0; c < ed.group->order(); ++c)
          pairs.emplace_back(c, mm.theta[ends[s]->inclusion.map(c)]);
        incls[s] = Mono::check(ed.group, g2, pairs);
        moved_ends.emplace_back(ed.id, s);
      } else {
        vids[s] = g->vertex(ends[s]->vertex).id;
        incls[s] = ends[s]->inclusion;
      }
    }
    spec.vertex_a = vids[0];
    spec.vertex_b = vids[1];
    spec.incl_a = incls[0];
    spec.incl_b = incls[1];
    edges.push_back(std::move(spec));
  }

  std::string base_id =
      g->base() == mm.v1 ? g->vertex(mm.v2).id : g->vertex(g->base()).id;
  GogPtr collapsed = GraphOfGroups::build(std::move(vertices), std::move(edges), base_id);

  MarkedGraphOfGroups marked = transport_marking(
      m, collapsed,
      [&](std::span<const Token> t) { return lift_tokens(mm, t); },
      [&](std::span<const Token> t) { return project_tokens(mm, t); });

  MarkingCheck check = verify_marking(marked);
  if (!check.ok) throw Error("collapse: marking transport failed: " + check.detail);

  MoveRecord rec;
  rec.kind = MoveRecord::Collapse;
  rec.collapsed_edge = edge_id;
  ExpansionParams inverse;
  inverse.vertex_id = g->vertex(mm.v2).id;
  uint64_t a_mask = 0;
  for (Elem x = 0; x < g->vertex(mm.v1).group->order(); ++x) a_mask |= 1ull << mm.theta[x];
  inverse.subgroup_mask = a_mask;
  inverse.ends = moved_ends;
  inverse.conjugators.assign(moved_ends.size(), g2->identity());
  rec.expansion = std::move(inverse);
  return {std::move(marked), std::move(rec)};
}

MoveResult expand(const MarkedGraphOfGroups& m, const ExpansionParams& p) {
  const GogPtr& g = m.gog();
  auto vi = g->vertex_by_id(p.vertex_id);
  if (!vi) throw Error("expand: unknown vertex '" + p.vertex_id + "'");
  const GroupPtr& gv = g->vertex(*vi).group;
  if (!gv->mask_is_subgroup(p.subgroup_mask))
    throw Error("expand: member set is not a subgroup of the group of '" + p.vertex_id + "'");
  if (p.ends.size() != p.conjugators.size())
    throw Error("expand: conjugator list does not match the end list");

  EndTwists tw;
  tw.plain = g.get();
  std::vector<std::pair<int, int>> end_idx;
  for (size_t i = 0; i < p.ends.size(); ++i) {
    auto ei = g->edge_by_id(p.ends[i].first);
    if (!ei) throw Error("expand: unknown edge '" + p.ends[i].first + "'");
    int s = p.ends[i].second;
    if (s != 0 && s != 1) throw Error("expand: edge side must be 0 or 1");
    const EdgeEnd& end = g->edge(*ei).end[s];
    if (end.vertex != *vi)
      throw Error("expand: end of '" + p.ends[i].first + "' is not incident to '" + p.vertex_id +
                  "'");
    Elem c = p.conjugators[i];
    if ((gv->conj_mask(c, end.image_mask) & ~p.subgroup_mask) != 0)
      throw Error("expand: conjugated image of the end of '" + p.ends[i].first +
                  "' is not contained in the chosen subgroup");
    if (!tw.conj.emplace(std::make_pair(*ei, s), c).second)
      throw Error("expand: end listed twice");
    end_idx.emplace_back(*ei, s);
  }

  std::string w_id = fresh_id(*g, p.vertex_id + "_w");
  std::string n_id = fresh_id(*g, p.vertex_id + "_n");
  GroupPtr A = FiniteGroup::from_subgroup(
      gv, p.subgroup_mask, gv->name() + "_s" + std::to_string(std::popcount(p.subgroup_mask)));

  // position of a parent element inside A
  std::vector<int> a_pos(gv->order(), -1);
  {
    auto members = gv->mask_members(p.subgroup_mask);
    for (size_t i = 0; i < members.size(); ++i) a_pos[members[i]] = static_cast<int>(i);
  }

  std::vector<VertexData> vertices;
  for (int v = 0; v < g->vertex_count(); ++v) vertices.push_back(g->vertex(v));
  vertices.push_back({w_id, A});

  std::vector<GraphOfGroups::EdgeSpec> edges;
  for (int ei = 0; ei < g->edge_count(); ++ei) {
    const EdgeData& ed = g->edge(ei);
    GraphOfGroups::EdgeSpec spec;
    spec.id = ed.id;
    spec.group = ed.group;
    std::string vids[2];
    Mono incls[2];
    for (int s = 0; s < 2; ++s) {
      auto it = tw.conj.find({ei, s});
      if (it != tw.conj.end()) {
        vids[s] = w_id;
        std::vector<std::pair<Elem, Elem>> pairs;
        for (Elem c = 0; c < ed.group->order(); ++c)
          pairs.emplace_back(c, a_pos[gv->conj(it->second, ed.end[s].inclusion.map(c))]);
        incls[s] = Mono::check(ed.group, A, pairs);
      } else {
        vids[s] = g->vertex(ed.end[s].vertex).id;
        incls[s] = ed.end[s].inclusion;
      }
    }
    spec.vertex_a = vids[0];
    spec.vertex_b = vids[1];
    spec.incl_a = incls[0];
    spec.incl_b = incls[1];
    edges.push_back(std::move(spec));
  }
  {
    GraphOfGroups::EdgeSpec spec;
    spec.id = n_id;
    spec.group = A;
    spec.vertex_a = w_id;  // identity end: the collapsible side
    spec.vertex_b = p.vertex_id;
    std::vector<std::pair<Elem, Elem>> idpairs, inclpairs;
    auto members = gv->mask_members(p.subgroup_mask);
    for (int i = 0; i < A->order(); ++i) {
      idpairs.emplace_back(i, i);
      inclpairs.emplace_back(i, members[i]);
    }
    spec.incl_a = Mono::check(A, A, idpairs);
    spec.incl_b = Mono::check(A, gv, inclpairs);
    edges.push_back(std::move(spec));
  }

  GogPtr expanded =
      GraphOfGroups::build(std::move(vertices), std::move(edges), g->vertex(g->base()).id);

  // Correspondence: collapsing the fresh edge in `expanded` recovers the
  // original graph with the reattached ends' inclusions conjugated; the
  // twist walkers bridge that last difference.
  int n_idx = *expanded->edge_by_id(n_id);
  MergeMaps mm = make_merge_maps(*expanded, n_idx, 0);

  MarkedGraphOfGroups marked = transport_marking(
      m, expanded,
      [&](std::span<const Token> t) {
        return twisted_to_plain(tw, project_tokens(mm, t));
      },
      [&](std::span<const Token> t) {
        return lift_tokens(mm, plain_to_twisted(tw, t));
      });

  MarkingCheck check = verify_marking(marked);
  if (!check.ok) throw Error("expand: marking transport failed: " + check.detail);

  MoveRecord rec;
  rec.kind = MoveRecord::Expansion;
  rec.collapsed_edge = n_id;
  rec.expansion = p;
  return {std::move(marked), std::move(rec)};
}

// ---- marked isomorphism ------------------------------------------------------

namespace {

std::vector<PathWord> sorted_ref_stab(const MarkedGraphOfGroups& m, const TreeVertex& v) {
  std::vector<PathWord> out;
  for (const PathWord& w : stabilizer_words(v)) out.push_back(m.to_ref(w));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::string fingerprint(const GraphOfGroups& g) {
  std::vector<std::string> vsigs;
  for (int v = 0; v < g.vertex_count(); ++v) {
    std::vector<std::string> ends;
    for (EndRef r : g.ends_at(v)) {
      const EdgeData& e = g.edge(r.edge);
      std::ostringstream s;
      s << e.group->order() << ":" << g.end(r).index << ":"
        << g.edge(r.edge).end[1 - r.side].index << ":"
        << g.vertex(e.end[1 - r.side].vertex).group->order();
      ends.push_back(s.str());
    }
    std::sort(ends.begin(), ends.end());
    std::ostringstream s;
    s << g.vertex(v).group->order() << "(";
    for (const std::string& e : ends) s << e << ";";
    s << ")";
    vsigs.push_back(s.str());
  }
  std::sort(vsigs.begin(), vsigs.end());
  std::ostringstream out;
  out << "V" << g.vertex_count() << "E" << g.edge_count() << "|";
  for (const std::string& v : vsigs) out << v;
  return out.str();
}

std::string labeled_fingerprint(const MarkedGraphOfGroups& m, const SubgroupCensus& ref_census) {
  const GogPtr& g = m.gog();
  std::vector<std::string> vsigs;
  for (int v = 0; v < g->vertex_count(); ++v) {
    std::ostringstream s;
    s << g->vertex(v).group->order() << "@"
      << ref_class_of_subgroup(m, ref_census, v, g->vertex(v).group->full_mask());
    std::vector<std::string> ends;
    for (EndRef r : g->ends_at(v)) {
      std::ostringstream es;
      es << g->end(r).index << "@"
         << ref_class_of_subgroup(m, ref_census, v, g->end(r).image_mask);
      ends.push_back(es.str());
    }
    std::sort(ends.begin(), ends.end());
    s << "(";
    for (const std::string& e : ends) s << e << ";";
    s << ")";
    vsigs.push_back(s.str());
  }
  std::sort(vsigs.begin(), vsigs.end());
  std::ostringstream out;
  out << fingerprint(*g) << "|";
  for (const std::string& v : vsigs) out << v;
  return out.str();
}

MarkedIsoResult marked_iso(const MarkedGraphOfGroups& m1, const MarkedGraphOfGroups& m2,
                           const IsoOptions& opts) {
  if (m1.ref() != m2.ref()) throw Error("marked_iso: markings have different references");
  const GogPtr& g1 = m1.gog();
  const GogPtr& g2 = m2.gog();

  if (g1->vertex_count() != g2->vertex_count() || g1->edge_count() != g2->edge_count())
    return {MarkedIsoResult::Distinct, "vertex/edge counts differ", {}};
  if (fingerprint(*g1) != fingerprint(*g2))
    return {MarkedIsoResult::Distinct, "fingerprints differ", {}};
  std::optional<SubgroupCensus> own_census;
  const SubgroupCensus* census = opts.ref_census;
  if (!census) {
    own_census.emplace(m1.ref());
    census = &*own_census;
  }
  if (labeled_fingerprint(m1, *census) != labeled_fingerprint(m2, *census))
    return {MarkedIsoResult::Distinct, "stabilizer class labels differ", {}};

  // per-vertex translated stabilizers (sorted canonical ref words)
  const int n = g1->vertex_count();
  std::vector<std::vector<PathWord>> want(n);
  std::vector<std::vector<PathWord>> gens2(n);  // generators of the image, over g2
  for (int v = 0; v < n; ++v) {
    TreeVertex lv = TreeVertex::lift(g1, v);
    want[v] = sorted_ref_stab(m1, lv);
    const FiniteGroup& gv = *g1->vertex(v).group;
    for (Elem x : gv.generating_set(gv.full_mask()))
      gens2[v].push_back(m2.from_ref(m1.to_ref(vertex_element(g1, v, x))));
    if (gens2[v].empty()) gens2[v].push_back(PathWord::identity(g2));
  }

  auto stab_matches = [&](int v, const TreeVertex& y) {
    if (g2->vertex(y.orbit()).group->order() != g1->vertex(v).group->order()) return false;
    return sorted_ref_stab(m2, y) == want[v];
  };

  // choose a deterministic DFS order: largest vertex group first, then
  // vertices adjacent to already-ordered ones
  std::vector<int> order;
  {
    std::vector<bool> placed(n, false);
    int first = 0;
    for (int v = 1; v < n; ++v)
      if (g1->vertex(v).group->order() > g1->vertex(first).group->order()) first = v;
    order.push_back(first);
    placed[first] = true;
    while (static_cast<int>(order.size()) < n) {
      int best = -1;
      for (int v = 0; v < n; ++v) {
        if (placed[v]) continue;
        bool adj = false;
        for (EndRef r : g1->ends_at(v))
          if (placed[g1->edge(r.edge).end[1 - r.side].vertex]) adj = true;
        if (!adj) continue;
        if (best < 0 || g1->vertex(v).group->order() > g1->vertex(best).group->order()) best = v;
      }
      if (best < 0) break;  // unreachable: quotient graphs are connected
      order.push_back(best);
      placed[best] = true;
    }
  }

  // Candidates for the first vertex: its fixed subtree in T2, exact-stab
  // only. When the subtree enumeration completes under the cap the whole
  // search below is exhaustive, so a failure is a proof of non-isomorphism.
  std::vector<TreeVertex> first_candidates;
  bool capped = false;
  {
    int v = order[0];
    bool elliptic = true;
    for (const PathWord& w : gens2[v])
      if (translation_length(w) > 0) elliptic = false;
    if (!elliptic || !is_elliptic_subgroup(gens2[v]))
      return {MarkedIsoResult::Distinct, "a vertex group is not elliptic on the other side", {}};
    TreeVertex y0 = fixed_vertex(gens2[v]);
    std::set<TreeVertex> seen{y0};
    std::deque<TreeVertex> queue{y0};
    while (!queue.empty()) {
      TreeVertex cur = queue.front();
      queue.pop_front();
      if (stab_matches(v, cur)) first_candidates.push_back(cur);
      for (TreeVertex& nb : tree_neighbors(cur)) {
        bool fixed = true;
        for (const PathWord& w : gens2[v])
          if (!(act(w, nb) == nb)) {
            fixed = false;
            break;
          }
        if (fixed && seen.insert(nb).second) {
          if (static_cast<int>(seen.size()) > opts.candidate_cap) {
            capped = true;
            break;
          }
          queue.push_back(nb);
        }
      }
      if (capped) break;
    }
    if (first_candidates.empty() && !capped)
      return {MarkedIsoResult::Distinct, "no target vertex carries the first stabilizer", {}};
  }

  // quotient edges between v and each earlier-assigned vertex, as tree data:
  // the canonical lifted edge (u1 at the assigned side, u2 across)
  struct EdgeCheck {
    int assigned;      // earlier vertex (g1 index)
    PathWord t;        // translate of transporter(u2), over g2
    int other;         // the vertex pinned by this edge (g1 index)
  };

  std::vector<TreeVertex> assign(n);
  std::vector<bool> done(n, false);
  std::vector<bool> orbit_used(g2->vertex_count(), false);

  std::function<bool(size_t)> dfs = [&](size_t k) -> bool {
    if (k == order.size()) return true;
    int v = order[k];

    // gather constraints: edges from v to already-assigned vertices
    std::vector<std::pair<PathWord, TreeVertex>> pins;  // (translate(g_u2), y_assigned)
    for (EndRef r : g1->ends_at(v)) {
      int other = g1->edge(r.edge).end[1 - r.side].vertex;
      if (!done[other]) continue;
      // u1 = lift(other), u2 = neighbor across r departing from `other` side
      std::vector<Token> raw = TreeVertex::lift(g1, other).prefix();
      raw.push_back(Token::edge(r.edge, r.side == 0 ? -1 : +1));  // depart the *other* side
      CanonResult cr = canonicalize(*g1, g1->base(), raw);
      cr.tokens.pop_back();
      TreeVertex u2(g1, v, std::move(cr.tokens));
      PathWord t = m2.from_ref(m1.to_ref(transporter(u2)));
      pins.emplace_back(std::move(t), assign[other]);
    }

    std::vector<TreeVertex> candidates;
    if (k == 0) {
      candidates = first_candidates;
    } else {
      // v is pinned by at least one edge: y_v must satisfy act(t, y_v)
      // adjacent to y_other, i.e. y_v in act(t^-1, neighbors(y_other))
      const auto& [t, y_other] = pins.front();
      PathWord tinv = element_inv(t);
      for (const TreeVertex& nb : tree_neighbors(y_other)) candidates.push_back(act(tinv, nb));
      std::sort(candidates.begin(), candidates.end());
      candidates.erase(std::unique(candidates.begin(), candidates.end(),
                                   [](const TreeVertex& a, const TreeVertex& b) { return a == b; }),
                       candidates.end());
    }

    for (const TreeVertex& y : candidates) {
      if (orbit_used[y.orbit()]) continue;
      if (!stab_matches(v, y)) continue;
      bool ok = true;
      for (const auto& [t, y_other] : pins)
        if (tree_distance(act(t, y), y_other) != 1) {
          ok = false;
          break;
        }
      // loops at v: both endpoints map through y itself
      if (ok)
        for (EndRef r : g1->ends_at(v)) {
          const EdgeData& e = g1->edge(r.edge);
          if (!e.is_loop() || r.side != 0) continue;
          std::vector<Token> raw = TreeVertex::lift(g1, v).prefix();
          raw.push_back(Token::edge(r.edge, +1));
          CanonResult cr = canonicalize(*g1, g1->base(), raw);
          cr.tokens.pop_back();
          TreeVertex u2(g1, v, std::move(cr.tokens));
          PathWord t = m2.from_ref(m1.to_ref(transporter(u2)));
          if (tree_distance(act(t, y), y) != 1) {
            ok = false;
            break;
          }
        }
      if (!ok) continue;
      assign[v] = y;
      done[v] = true;
      orbit_used[y.orbit()] = true;
      if (dfs(k + 1)) return true;
      done[v] = false;
      orbit_used[y.orbit()] = false;
    }
    return false;
  };

  if (dfs(0)) {
    MarkedIsoResult res;
    res.verdict = MarkedIsoResult::Isomorphic;
    res.assignment = assign;
    return res;
  }
  if (capped)
    return {MarkedIsoResult::NotProven, "no equivariant assignment found within the search budget",
            {}};
  return {MarkedIsoResult::Distinct, "exhaustive search: no equivariant assignment exists", {}};
}

// ---- enumeration -------------------------------------------------------------

std::vector<int> EnumerationResult::reduced_classes() const {
  std::vector<int> out;
  for (size_t i = 0; i < classes.size(); ++i)
    if (classes[i].reduced) out.push_back(static_cast<int>(i));
  return out;
}

namespace {

struct CandidateMove {
  MoveResult result;
  std::string description;
};

std::vector<CandidateMove> legal_moves(const MarkedGraphOfGroups& m, const EnumerationCaps& caps,
                                       bool* truncated) {
  const GogPtr& g = m.gog();
  std::vector<CandidateMove> out;

  for (int ei = 0; ei < g->edge_count(); ++ei) {
    const EdgeData& e = g->edge(ei);
    if (e.is_loop() || (!e.end[0].surjective() && !e.end[1].surjective())) continue;
    out.push_back({collapse(m, e.id), "collapse(" + e.id + ")"});
  }

  if (g->edge_count() + 1 > caps.max_edges) {
    *truncated = true;
    if (caps.reversed_move_order) std::reverse(out.begin(), out.end());
    return out;
  }

  for (int v = 0; v < g->vertex_count(); ++v) {
    const FiniteGroup& gv = *g->vertex(v).group;
    std::vector<EndRef> ends = g->ends_at(v);
    if (static_cast<int>(ends.size()) > caps.max_valence_for_subsets) {
      *truncated = true;
      ends.resize(caps.max_valence_for_subsets);
    }
    for (const auto& cls : gv.subgroup_classes()) {
      uint64_t a = gv.subgroup_lattice()[cls[0]];
      if (std::popcount(a) > caps.max_subgroup_order) {
        *truncated = true;
        continue;
      }
      for (uint64_t subset = 0; subset < (1ull << ends.size()); ++subset) {
        std::vector<EndRef> chosen;
        for (size_t i = 0; i < ends.size(); ++i)
          if ((subset >> i) & 1) chosen.push_back(ends[i]);
        // enumerate conjugators per chosen end over that end's transversal
        std::vector<std::vector<Elem>> options(chosen.size());
        bool feasible = true;
        for (size_t i = 0; i < chosen.size(); ++i) {
          for (Elem c : g->end(chosen[i]).transversal)
            if ((gv.conj_mask(c, g->end(chosen[i]).image_mask) & ~a) == 0)
              options[i].push_back(c);
          if (options[i].empty()) feasible = false;
        }
        if (!feasible) continue;
        std::vector<size_t> pick(chosen.size(), 0);
        while (true) {
          ExpansionParams p;
          p.vertex_id = g->vertex(v).id;
          p.subgroup_mask = a;
          for (size_t i = 0; i < chosen.size(); ++i) {
            p.ends.emplace_back(g->edge(chosen[i].edge).id, chosen[i].side);
            p.conjugators.push_back(options[i][pick[i]]);
          }
          std::ostringstream desc;
          desc << "expand(" << p.vertex_id << ",|a|=" << std::popcount(a) << ",ends={";
          for (size_t i = 0; i < p.ends.size(); ++i)
            desc << p.ends[i].first << "." << p.ends[i].second
                 << "~" << gv.elem_name(p.conjugators[i]) << (i + 1 < p.ends.size() ? "," : "");
          desc << "})";
          out.push_back({expand(m, p), desc.str()});
          // odometer
          size_t i = 0;
          for (; i < pick.size(); ++i) {
            if (++pick[i] < options[i].size()) break;
            pick[i] = 0;
          }
          if (i == pick.size()) break;
        }
      }
    }
  }
  if (caps.reversed_move_order) std::reverse(out.begin(), out.end());
  return out;
}

}  // namespace

EnumerationResult enumerate_reduced(const MarkedGraphOfGroups& seed, const EnumerationCaps& caps) {
  if (caps.depth < 0 || caps.max_edges <= 0 || caps.max_subgroup_order <= 0)
    throw Error("enumerate_reduced: caps must be positive");
  if (!is_minimal(*seed.gog()).minimal)
    throw Error("enumerate_reduced: the seed graph of groups is not minimal");

  SubgroupCensus census(seed.ref());
  IsoOptions iso_opts;
  iso_opts.ref_census = &census;

  EnumerationResult res;
  std::map<std::string, std::vector<int>> buckets;

  auto classify = [&](MarkedGraphOfGroups mg, int depth) {
    EnumeratedClass c;
    c.fingerprint = fingerprint(*mg.gog());
    c.labeled = labeled_fingerprint(mg, census);
    c.reduced = is_reduced(*mg.gog()).reduced;
    c.minimal = is_minimal(*mg.gog()).minimal;
    c.slide_free = is_strongly_slide_free(*mg.gog()).slide_free;
    c.depth = depth;
    c.marked = std::move(mg);
    return c;
  };

  res.classes.push_back(classify(seed, 0));
  buckets[res.classes[0].fingerprint].push_back(0);

  std::deque<int> frontier{0};
  while (!frontier.empty()) {
    int ci = frontier.front();
    frontier.pop_front();
    if (res.classes[ci].depth >= caps.depth) {
      res.frontier_open = true;
      continue;
    }
    int next_depth = res.classes[ci].depth + 1;
    MarkedGraphOfGroups state = res.classes[ci].marked;

    bool truncated = false;
    std::vector<CandidateMove> moves = legal_moves(state, caps, &truncated);
    if (truncated) res.truncated = true;

    for (CandidateMove& mv : moves) {
      if (caps.verify_every_move) {
        MarkingCheck check = verify_marking(mv.result.marked);
        if (!check.ok)
          throw Error("enumerate_reduced: move broke the marking: " + check.detail);
      }
      std::string fp = fingerprint(*mv.result.marked.gog());
      std::string lfp = labeled_fingerprint(mv.result.marked, census);
      int found = -1;
      for (int other : buckets[fp]) {
        if (res.classes[other].labeled != lfp) continue;
        MarkedIsoResult iso = marked_iso(res.classes[other].marked, mv.result.marked, iso_opts);
        if (iso.verdict == MarkedIsoResult::Isomorphic) {
          found = other;
          break;
        }
        if (iso.verdict == MarkedIsoResult::NotProven) res.dedup_uncertain = true;
      }
      if (found < 0) {
        found = static_cast<int>(res.classes.size());
        res.classes.push_back(classify(std::move(mv.result.marked), next_depth));
        buckets[fp].push_back(found);
        frontier.push_back(found);
      }
      res.moves.push_back({ci, found, mv.description});
    }
  }
  return res;
}

}  // namespace gogtree
