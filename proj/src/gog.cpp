#include "gogtree/gog.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace gogtree {

namespace {

EdgeEnd make_end(int vertex, const Mono& incl) {
  EdgeEnd e;
  e.vertex = vertex;
  e.inclusion = incl;
  e.image_mask = incl.image_mask();
  const FiniteGroup& g = *incl.codomain();
  e.rep_of.assign(g.order(), -1);
  e.edgepart_of.assign(g.order(), -1);
  for (Elem x : g.canonical_order()) {
    if (e.rep_of[x] >= 0) continue;
    // x is the canonical representative of a fresh left coset x·image
    e.transversal.push_back(x);
    for (int c = 0; c < incl.domain()->order(); ++c) {
      Elem m = g.mul(x, incl.map(c));
      if (e.rep_of[m] < 0) {
        e.rep_of[m] = x;
        e.edgepart_of[m] = c;
      }
    }
  }
  e.index = static_cast<int>(e.transversal.size());
  return e;
}

}  // namespace

GogPtr GraphOfGroups::build(std::vector<VertexData> vertices, std::vector<EdgeSpec> edges,
                            const std::string& base_id) {
  auto g = std::shared_ptr<GraphOfGroups>(new GraphOfGroups());
  if (vertices.empty()) throw Error("graph of groups needs at least one vertex");

  std::map<std::string, int> vidx;
  for (int i = 0; i < static_cast<int>(vertices.size()); ++i) {
    if (!vidx.emplace(vertices[i].id, i).second)
      throw Error("duplicate vertex id '" + vertices[i].id + "'");
  }
  g->vertices_ = std::move(vertices);

  std::map<std::string, int> eidx;
  for (auto& spec : edges) {
    if (!eidx.emplace(spec.id, static_cast<int>(g->edges_.size())).second)
      throw Error("duplicate edge id '" + spec.id + "'");
    auto va = vidx.find(spec.vertex_a), vb = vidx.find(spec.vertex_b);
    if (va == vidx.end()) throw Error("edge '" + spec.id + "': unknown vertex '" + spec.vertex_a + "'");
    if (vb == vidx.end()) throw Error("edge '" + spec.id + "': unknown vertex '" + spec.vertex_b + "'");
    if (spec.incl_a.domain() != spec.group || spec.incl_b.domain() != spec.group)
      throw Error("edge '" + spec.id + "': inclusion domain is not the edge group");
    if (spec.incl_a.codomain() != g->vertices_[va->second].group)
      throw Error("edge '" + spec.id + "': inclusion codomain is not the group of '" +
                  spec.vertex_a + "'");
    if (spec.incl_b.codomain() != g->vertices_[vb->second].group)
      throw Error("edge '" + spec.id + "': inclusion codomain is not the group of '" +
                  spec.vertex_b + "'");
    EdgeData e;
    e.id = spec.id;
    e.group = spec.group;
    e.end[0] = make_end(va->second, spec.incl_a);
    e.end[1] = make_end(vb->second, spec.incl_b);
    g->edges_.push_back(std::move(e));
  }

  auto base_it = vidx.find(base_id);
  if (base_it == vidx.end()) throw Error("unknown base vertex '" + base_id + "'");
  g->base_ = base_it->second;

  g->ends_at_.assign(g->vertices_.size(), {});
  for (int ei = 0; ei < g->edge_count(); ++ei)
    for (int s = 0; s < 2; ++s) g->ends_at_[g->edges_[ei].end[s].vertex].push_back({ei, s});

  // Deterministic spanning tree: breadth-first from the base vertex, incident
  // edges scanned in lexicographic id order at each step.
  std::vector<int> order(g->edge_count());
  for (int i = 0; i < g->edge_count(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return g->edges_[a].id < g->edges_[b].id; });
  std::vector<int> rank(g->edge_count());
  for (int i = 0; i < g->edge_count(); ++i) rank[order[i]] = i;

  g->tree_edge_.assign(g->edge_count(), false);
  g->tree_steps_.assign(g->vertices_.size(), {});
  std::vector<bool> visited(g->vertices_.size(), false);
  visited[g->base_] = true;
  std::deque<int> queue{g->base_};
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    std::vector<EndRef> inc = g->ends_at_[v];
    std::sort(inc.begin(), inc.end(), [&](EndRef a, EndRef b) {
      return rank[a.edge] != rank[b.edge] ? rank[a.edge] < rank[b.edge] : a.side < b.side;
    });
    for (EndRef r : inc) {
      const EdgeData& e = g->edges_[r.edge];
      if (e.is_loop()) continue;
      int other = e.end[1 - r.side].vertex;
      if (visited[other]) continue;
      visited[other] = true;
      g->tree_edge_[r.edge] = true;
      g->tree_steps_[other] = g->tree_steps_[v];
      g->tree_steps_[other].emplace_back(r.edge, r.side == 0 ? +1 : -1);
      queue.push_back(other);
    }
  }
  for (size_t v = 0; v < visited.size(); ++v)
    if (!visited[v])
      throw Error("graph of groups is not connected (vertex '" + g->vertices_[v].id +
                  "' unreachable from base)");

  return g;
}

std::optional<int> GraphOfGroups::vertex_by_id(const std::string& id) const {
  for (int i = 0; i < vertex_count(); ++i)
    if (vertices_[i].id == id) return i;
  return std::nullopt;
}

std::optional<int> GraphOfGroups::edge_by_id(const std::string& id) const {
  for (int i = 0; i < edge_count(); ++i)
    if (edges_[i].id == id) return i;
  return std::nullopt;
}

int GraphOfGroups::lift_degree(int vertex) const {
  int sum = 0;
  for (EndRef r : ends_at_[vertex]) sum += end(r).index;
  return sum;
}

ReducedVerdict is_reduced(const GraphOfGroups& g) {
  for (int ei = 0; ei < g.edge_count(); ++ei) {
    const EdgeData& e = g.edge(ei);
    if (e.is_loop()) continue;
    if (e.end[0].surjective() || e.end[1].surjective()) return {false, ei};
  }
  return {true, std::nullopt};
}

MinimalVerdict is_minimal(const GraphOfGroups& g) {
  if (g.vertex_count() == 1 && g.edge_count() == 0) return {true, std::nullopt};
  for (int v = 0; v < g.vertex_count(); ++v)
    if (g.lift_degree(v) < 2) return {false, v};
  return {true, std::nullopt};
}

SlideFreeVerdict is_strongly_slide_free(const GraphOfGroups& g) {
  for (int v = 0; v < g.vertex_count(); ++v) {
    const auto& ends = g.ends_at(v);
    const FiniteGroup& gv = *g.vertex(v).group;
    for (size_t i = 0; i < ends.size(); ++i)
      for (size_t j = 0; j < ends.size(); ++j) {
        if (i == j) continue;
        uint64_t im1 = g.end(ends[i]).image_mask;
        uint64_t im2 = g.end(ends[j]).image_mask;
        for (Elem x : gv.canonical_order())
          if ((gv.conj_mask(x, im1) & ~im2) == 0)
            return {false, SlideFreeWitness{v, ends[i], ends[j], x}};
      }
  }
  return {true, std::nullopt};
}

}  // namespace gogtree
