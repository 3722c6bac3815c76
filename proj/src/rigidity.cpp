#include "gogtree/rigidity.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace gogtree {

namespace {

// Enumerates the fixed subtree of a set of elliptic words, starting from one
// known fixed vertex. Fixed sets are connected, so neighbor expansion is a
// complete enumeration whenever it terminates under the cap.
std::vector<TreeVertex> fixed_subtree(const std::vector<PathWord>& gens, const TreeVertex& start,
                                      int cap, bool* capped) {
  std::set<TreeVertex> seen{start};
  std::deque<TreeVertex> queue{start};
  std::vector<TreeVertex> out;
  while (!queue.empty()) {
    TreeVertex cur = queue.front();
    queue.pop_front();
    out.push_back(cur);
    for (TreeVertex& nb : tree_neighbors(cur)) {
      bool fixed = true;
      for (const PathWord& w : gens)
        if (!(act(w, nb) == nb)) {
          fixed = false;
          break;
        }
      if (fixed && seen.insert(nb).second) {
        if (static_cast<int>(seen.size()) > cap) {
          *capped = true;
          return out;
        }
        queue.push_back(nb);
      }
    }
  }
  return out;
}

// The quotient end and coset representative of the tree edge (x, tip),
// viewed from x. tip is either a child (one pair deeper) or the parent.
struct LocalEdge {
  EndRef end;
  Elem rep;  // coset representative of image(end) in the group of x's orbit
};

LocalEdge local_edge(const TreeVertex& x, const TreeVertex& tip) {
  const GraphOfGroups& g = *x.gog();
  if (tip.depth() == x.depth() + 1) {
    const Token& r = tip.prefix()[2 * x.depth()];
    const Token& e = tip.prefix()[2 * x.depth() + 1];
    return {{e.idx, e.val > 0 ? 0 : 1}, r.val};
  }
  if (x.depth() == tip.depth() + 1) {
    const Token& e = x.prefix()[2 * tip.depth() + 1];
    // arrival end at x; the representative of the backtracking edge is trivial
    return {{e.idx, e.val > 0 ? 1 : 0}, g.vertex(x.orbit()).group->identity()};
  }
  throw Error("local_edge: vertices are not adjacent");
}

// Stabilizer element of x carrying the edge (x, tip1) onto (x, tip2), when
// the two edges lie in the same quotient end.
std::optional<PathWord> edge_orbit_witness(const TreeVertex& x, const TreeVertex& tip1,
                                           const TreeVertex& tip2) {
  LocalEdge e1 = local_edge(x, tip1);
  LocalEdge e2 = local_edge(x, tip2);
  if (!(e1.end == e2.end)) return std::nullopt;
  const GogPtr& g = x.gog();
  const FiniteGroup& gv = *g->vertex(x.orbit()).group;
  Elem carry = gv.mul(e2.rep, gv.inv(e1.rep));
  std::vector<Token> raw = x.prefix();
  raw.push_back(Token::vtx(x.orbit(), carry));
  std::vector<Token> inv = invert_tokens(*g, x.prefix());
  raw.insert(raw.end(), inv.begin(), inv.end());
  PathWord w = PathWord::from_raw(g, raw);
  if (!(act(w, tip1) == tip2)) throw Error("edge_orbit_witness: carry check failed");
  return w;
}

// Generators of the stabilizer of the edge (x, tip) as words.
std::vector<PathWord> edge_stab_gens(const TreeVertex& x, const TreeVertex& tip) {
  LocalEdge le = local_edge(x, tip);
  const GogPtr& g = x.gog();
  const FiniteGroup& gv = *g->vertex(x.orbit()).group;
  uint64_t stab_mask = gv.conj_mask(le.rep, g->end(le.end).image_mask);
  std::vector<PathWord> out;
  std::vector<Token> inv = invert_tokens(*g, x.prefix());
  for (Elem e : gv.generating_set(stab_mask)) {
    std::vector<Token> raw = x.prefix();
    raw.push_back(Token::vtx(x.orbit(), e));
    raw.insert(raw.end(), inv.begin(), inv.end());
    out.push_back(PathWord::from_raw(g, raw));
  }
  return out;
}

}  // namespace

TreeVertex map_vertex(const CanonicalMap& cm, const TreeVertex& x) {
  PathWord t = cm.target.from_ref(cm.source.to_ref(transporter(x)));
  return act(t, cm.assignment[x.orbit()]);
}

CanonicalMap canonical_map(const MarkedGraphOfGroups& source, const MarkedGraphOfGroups& target,
                           const CanonicalMapOptions& opts) {
  if (source.ref() != target.ref())
    throw Error("canonical_map: markings have different references");
  CanonicalMap cm;
  cm.source = source;
  cm.target = target;

  const GogPtr& gs = source.gog();
  const GogPtr& gt = target.gog();

  if (!opts.skip_preconditions) {
    auto min_s = is_minimal(*gs);
    auto ssf = is_strongly_slide_free(*gs);
    auto min_t = is_minimal(*gt);
    auto red = is_reduced(*gt);
    if (!min_s.minimal || !ssf.slide_free || !min_t.minimal || !red.reduced) {
      cm.verdict = MapVerdict::PreconditionFailed;
      if (!min_s.minimal)
        cm.detail = "source is not minimal: vertex '" +
                    gs->vertex(*min_s.witness_vertex).id + "' has lift degree < 2";
      else if (!ssf.slide_free)
        cm.detail = "source is not strongly slide-free: witness at vertex '" +
                    gs->vertex(ssf.witness->vertex).id + "' between edges '" +
                    gs->edge(ssf.witness->end1.edge).id + "' and '" +
                    gs->edge(ssf.witness->end2.edge).id + "'";
      else if (!min_t.minimal)
        cm.detail = "target is not minimal";
      else
        cm.detail = "target is not reduced: edge '" + gt->edge(*red.witness_edge).id +
                    "' is collapsible";
      return cm;
    }
  }

  // Vertex assignment: for each source orbit, the fixed vertex of the
  // translated vertex group closest to the target base (ties by canonical
  // prefix order).
  cm.assignment.resize(gs->vertex_count());
  for (int v = 0; v < gs->vertex_count(); ++v) {
    const FiniteGroup& gv = *gs->vertex(v).group;
    std::vector<PathWord> gens;
    for (Elem x : gv.generating_set(gv.full_mask()))
      gens.push_back(target.from_ref(source.to_ref(vertex_element(gs, v, x))));
    if (gens.empty()) gens.push_back(PathWord::identity(gt));
    TreeVertex y0 = fixed_vertex(gens);
    bool capped = false;
    std::vector<TreeVertex> fix = fixed_subtree(gens, y0, opts.subtree_cap, &capped);
    if (capped && fix.empty())
      throw Error("canonical_map: fixed-point search exceeded the subtree cap");
    std::sort(fix.begin(), fix.end());
    cm.assignment[v] = fix.front();
    // the full translated vertex group must fix the assigned vertex
    for (Elem x = 0; x < gv.order(); ++x) {
      PathWord w = target.from_ref(source.to_ref(vertex_element(gs, v, x)));
      if (!(act(w, cm.assignment[v]) == cm.assignment[v]))
        throw Error("canonical_map: assigned vertex is not fixed by the vertex group");
    }
  }

  // Image arcs of the quotient edges fix the verification radius.
  int max_arc = 1;
  std::vector<int> arc_len(gs->edge_count(), 0);
  for (int ei = 0; ei < gs->edge_count(); ++ei) {
    const EdgeData& e = gs->edge(ei);
    std::vector<Token> raw = TreeVertex::lift(gs, e.end[0].vertex).prefix();
    raw.push_back(Token::edge(ei, +1));
    CanonResult cr = canonicalize(*gs, gs->base(), raw);
    cr.tokens.pop_back();
    TreeVertex u2(gs, e.end[1].vertex, std::move(cr.tokens));
    TreeVertex u1 = TreeVertex::lift(gs, e.end[0].vertex);
    arc_len[ei] = tree_distance(map_vertex(cm, u1), map_vertex(cm, u2));
    max_arc = std::max(max_arc, arc_len[ei]);
  }
  cm.radius = opts.radius_override > 0 ? opts.radius_override : 2 * max_arc + 2;

  // (ii) every source edge maps to an arc of length exactly 1
  cm.checks.edge_lengths = true;
  for (int ei = 0; ei < gs->edge_count(); ++ei)
    if (arc_len[ei] != 1) cm.checks.edge_lengths = false;

  // (i) injectivity on the verification ball
  cm.checks.injectivity = true;
  {
    std::set<TreeVertex> images;
    for (const TreeVertex& x : tree_ball(gs, cm.radius))
      if (!images.insert(map_vertex(cm, x)).second) {
        cm.checks.injectivity = false;
        break;
      }
  }

  // (iii) local degrees match
  cm.checks.degrees = true;
  for (int v = 0; v < gs->vertex_count(); ++v)
    if (gs->lift_degree(v) != gt->lift_degree(cm.assignment[v].orbit()))
      cm.checks.degrees = false;

  // uniqueness: each translated vertex group fixes exactly one target vertex
  cm.checks.uniqueness = true;
  for (int v = 0; v < gs->vertex_count(); ++v) {
    const FiniteGroup& gv = *gs->vertex(v).group;
    std::vector<PathWord> gens;
    for (Elem x : gv.generating_set(gv.full_mask()))
      gens.push_back(target.from_ref(source.to_ref(vertex_element(gs, v, x))));
    if (gens.empty()) gens.push_back(PathWord::identity(gt));
    bool capped = false;
    std::vector<TreeVertex> fix = fixed_subtree(gens, cm.assignment[v], opts.subtree_cap, &capped);
    if (capped || fix.size() != 1) cm.checks.uniqueness = false;
  }

  bool all = cm.checks.injectivity && cm.checks.edge_lengths && cm.checks.degrees &&
             cm.checks.uniqueness;
  cm.verdict = all ? MapVerdict::Isomorphism : MapVerdict::FoldDetected;
  if (!all) {
    cm.detail = "verification checks failed:";
    if (!cm.checks.injectivity) cm.detail += " injectivity";
    if (!cm.checks.edge_lengths) cm.detail += " edge-lengths";
    if (!cm.checks.degrees) cm.detail += " degrees";
    if (!cm.checks.uniqueness) cm.detail += " uniqueness";
    // collect fold diagnostics at canonical lifts
    for (int v = 0; v < gs->vertex_count() && cm.diagnostics.size() < 8; ++v) {
      TreeVertex x = TreeVertex::lift(gs, v);
      std::vector<TreeVertex> nbs = tree_neighbors(x);
      for (size_t i = 0; i < nbs.size() && cm.diagnostics.size() < 8; ++i)
        for (size_t j = i + 1; j < nbs.size() && cm.diagnostics.size() < 8; ++j) {
          std::vector<TreeVertex> a1 = tree_path(map_vertex(cm, x), map_vertex(cm, nbs[i]));
          std::vector<TreeVertex> a2 = tree_path(map_vertex(cm, x), map_vertex(cm, nbs[j]));
          size_t common = 0;
          while (common < a1.size() && common < a2.size() && a1[common] == a2[common]) ++common;
          if (common >= 2) cm.diagnostics.push_back(diagnose_fold(cm, x, nbs[i], nbs[j]));
        }
    }
  }
  return cm;
}

FoldReport diagnose_fold(const CanonicalMap& cm, const TreeVertex& common, const TreeVertex& tip1,
                         const TreeVertex& tip2) {
  std::vector<TreeVertex> a1 = tree_path(map_vertex(cm, common), map_vertex(cm, tip1));
  std::vector<TreeVertex> a2 = tree_path(map_vertex(cm, common), map_vertex(cm, tip2));
  size_t shared = 0;
  while (shared < a1.size() && shared < a2.size() && a1[shared] == a2[shared]) ++shared;
  if (shared < 2) throw Error("diagnose_fold: image arcs overlap in at most one vertex, no fold");

  FoldReport rep;
  rep.common = common;
  rep.tip1 = tip1;
  rep.tip2 = tip2;
  rep.overlap_edges = static_cast<int>(shared) - 1;
  rep.orbit_witness = edge_orbit_witness(common, tip1, tip2);
  rep.same_orbit = rep.orbit_witness.has_value();
  rep.joint_group = edge_stab_gens(common, tip1);
  for (PathWord& w : edge_stab_gens(common, tip2)) rep.joint_group.push_back(std::move(w));
  if (rep.joint_group.empty()) rep.joint_group.push_back(PathWord::identity(common.gog()));
  rep.joint_elliptic = is_elliptic_subgroup(rep.joint_group);
  rep.strict_in_1 = shared < a1.size();
  rep.strict_in_2 = shared < a2.size();
  rep.image_lengths_equal = a1.size() == a2.size();
  return rep;
}

TripodResult check_tripod(const CanonicalMap& cm, const TreeVertex& x0, const TreeVertex& x1,
                          const TreeVertex& x2, const TreeVertex& x3) {
  if (tree_distance(x0, x1) != 1 || tree_distance(x1, x2) != 1 || tree_distance(x2, x3) != 1 ||
      x0 == x2 || x1 == x3)
    throw Error("check_tripod: not three consecutive edges");

  std::vector<TreeVertex> a1 = tree_path(map_vertex(cm, x0), map_vertex(cm, x1));
  std::vector<TreeVertex> a2 = tree_path(map_vertex(cm, x1), map_vertex(cm, x2));
  std::vector<TreeVertex> a3 = tree_path(map_vertex(cm, x2), map_vertex(cm, x3));

  TripodResult res;
  std::vector<TreeVertex> meet;
  for (const TreeVertex& p : a1) {
    bool in2 = std::find(a2.begin(), a2.end(), p) != a2.end();
    bool in3 = std::find(a3.begin(), a3.end(), p) != a3.end();
    if (in2 && in3) meet.push_back(p);
  }
  if (meet.empty()) {
    res.empty_intersection = true;
    return res;
  }

  res.detail = "image arcs share " + std::to_string(meet.size()) + " vertex/vertices";
  res.gamma1 = edge_orbit_witness(x1, x0, x2);
  res.gamma2 = edge_orbit_witness(x2, x1, x3);
  if (res.gamma1 && res.gamma2) {
    PathWord prod = element_mul(*res.gamma1, *res.gamma2);
    PathWord translated = cm.target.from_ref(cm.source.to_ref(prod));
    bool fixes_target = true;
    for (const TreeVertex& p : meet)
      if (!(act(translated, p) == p)) fixes_target = false;
    bool hyperbolic_source = translation_length(prod) > 0;
    res.contradiction_certified = fixes_target && hyperbolic_source;
    if (!res.contradiction_certified)
      res.detail += fixes_target ? "; product not hyperbolic at the source"
                                 : "; product does not fix the shared point";
  } else {
    res.detail += "; no same-orbit witnesses (source not strongly slide-free)";
  }
  return res;
}

UniqueSsfReport verify_unique_ssf(const EnumerationResult& space) {
  UniqueSsfReport rep;
  std::vector<int> reduced = space.reduced_classes();
  rep.reduced_count = static_cast<int>(reduced.size());
  for (int ci : reduced)
    if (space.classes[ci].slide_free) rep.slide_free_classes.push_back(ci);
  rep.slide_free_count = static_cast<int>(rep.slide_free_classes.size());

  if (rep.slide_free_count > 1) {
    rep.theorem_violation = true;
    rep.detail = "THEOREM-VIOLATION: " + std::to_string(rep.slide_free_count) +
                 " strongly slide-free reduced classes in one deformation space";
    return rep;
  }
  if (rep.slide_free_count == 1) {
    int ssf = rep.slide_free_classes[0];
    for (int ci : reduced) {
      if (ci == ssf) continue;
      CanonicalMap cmap =
          canonical_map(space.classes[ssf].marked, space.classes[ci].marked);
      rep.map_runs.emplace_back(ci, cmap.verdict);
      if (cmap.verdict != MapVerdict::Isomorphism) {
        rep.theorem_violation = true;
        rep.detail = "THEOREM-VIOLATION: canonical map to reduced class " + std::to_string(ci) +
                     " is not an isomorphism (" + cmap.detail + ")";
      } else {
        rep.detail = "duplicate reduced classes proven isomorphic; deduplication should have "
                     "merged them";
      }
    }
  }
  return rep;
}

}  // namespace gogtree
