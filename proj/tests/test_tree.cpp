#include <set>

#include "doctest.h"
#include "support.hpp"

using namespace gogtree;
using namespace gogtree::testing;

TEST_CASE("action on tree vertices, SSF1") {
  GogPtr g = load_fixture("SSF1");
  TreeVertex u = TreeVertex::base(g);
  PathWord wa = vertex_element(g, 0, elem(g, 0, "a"));
  PathWord wb = vertex_element(g, 1, elem(g, 1, "b"));

  CHECK(act(PathWord::identity(g), u) == u);
  CHECK(act(wa, u) == u);  // a stabilizes the base

  TreeVertex bu = act(wb, u);
  CHECK_FALSE(bu == u);
  CHECK(tree_distance(u, bu) == 2);
  auto path = tree_path(u, bu);
  REQUIRE(path.size() == 3);
  CHECK(path[1].orbit() == 1);  // through the Z6 neighbor

  TreeVertex abu = act(element_mul(wa, wb), u);
  CHECK(tree_distance(u, abu) == 2);
  CHECK(tree_path(u, abu).size() == 3);
}

TEST_CASE("act is a left action") {
  std::mt19937_64 rng(4242);
  for (const char* name : {"SSF1", "HNN1", "FREE3"}) {
    GogPtr g = load_fixture(name);
    auto ball = tree_ball(g, 3);
    for (int i = 0; i < 60; ++i) {
      PathWord x = random_word(g, rng, 6);
      PathWord y = random_word(g, rng, 6);
      const TreeVertex& v = ball[rng() % ball.size()];
      CHECK(act(x, act(y, v)) == act(element_mul(x, y), v));
    }
  }
}

TEST_CASE("ball structure of SSF1") {
  GogPtr g = load_fixture("SSF1");
  // degrees: lifts of u have degree 2, lifts of v degree 3
  auto b1 = tree_ball(g, 1);
  CHECK(b1.size() == 3);  // base + 2 neighbors
  auto neighbors = tree_neighbors(TreeVertex::base(g));
  CHECK(neighbors.size() == 2);
  for (const auto& n : neighbors) CHECK(tree_neighbors(n).size() == 3);
}

TEST_CASE("stabilizers are conjugates of vertex groups") {
  GogPtr g = load_fixture("SSF1");
  std::mt19937_64 rng(31);
  auto ball = tree_ball(g, 4);
  for (const TreeVertex& v : ball) {
    auto stab = stabilizer_words(v);
    CHECK(static_cast<int>(stab.size()) == g->vertex(v.orbit()).group->order());
    for (const PathWord& w : stab) CHECK(act(w, v) == v);
    // localization sends the stabilizer onto the quotient vertex group
    std::set<Elem> localized;
    for (const PathWord& w : stab) localized.insert(localize_at(w, v));
    CHECK(static_cast<int>(localized.size()) == g->vertex(v.orbit()).group->order());
    // sampled fixing words localize as well
    for (int i = 0; i < 10; ++i) {
      PathWord w = random_word(g, rng, 6);
      if (act(w, v) == v) CHECK_NOTHROW(localize_at(w, v));
    }
  }
}

TEST_CASE("elliptic displacement distances are even") {
  std::mt19937_64 rng(555);
  for (const char* name : {"SSF1", "HNN1"}) {
    GogPtr g = load_fixture(name);
    auto ball = tree_ball(g, 4);
    int sampled = 0;
    for (int i = 0; sampled < 40 && i < 400; ++i) {
      PathWord w = random_word(g, rng, 8);
      if (translation_length(w) != 0) continue;
      ++sampled;
      for (const TreeVertex& v : ball) CHECK(tree_distance(v, act(w, v)) % 2 == 0);
    }
    CHECK(sampled > 0);
  }
}

TEST_CASE("fixed sets in SSF1") {
  GogPtr g = load_fixture("SSF1");
  PathWord wa = vertex_element(g, 0, elem(g, 0, "a"));
  PathWord wa2 = vertex_element(g, 0, elem(g, 0, "a^2"));
  auto ball2 = tree_ball(g, 2);

  auto fix_id = fixed_set({PathWord::identity(g)}, 2);
  CHECK(fix_id.size() == ball2.size());

  auto fix_a = fixed_set({wa}, 2);
  REQUIRE(fix_a.size() == 1);
  CHECK(fix_a[0] == TreeVertex::base(g));

  // a^2 = b^3 is central in both factors: it fixes everything
  auto fix_a2 = fixed_set({wa2}, 2);
  CHECK(fix_a2.size() == ball2.size());
}

TEST_CASE("fixed_vertex returns a fixed vertex") {
  GogPtr g = load_fixture("SSF1");
  PathWord wb = vertex_element(g, 1, elem(g, 1, "b"));
  TreeVertex fv = fixed_vertex({wb});
  CHECK(act(wb, fv) == fv);
  CHECK(fv.orbit() == 1);
  // and it appears in a fixed set of sufficient radius
  auto fs = fixed_set({wb}, tree_distance(TreeVertex::base(g), fv) + 1);
  CHECK(std::find(fs.begin(), fs.end(), fv) != fs.end());

  PathWord hyp = element_mul(vertex_element(g, 0, elem(g, 0, "a")), wb);
  CHECK_THROWS_WITH_AS(fixed_vertex({hyp}), doctest::Contains("hyperbolic"), Error);
}

TEST_CASE("is_elliptic_subgroup via Serre's criterion") {
  GogPtr g = load_fixture("SSF1");
  PathWord wa = vertex_element(g, 0, elem(g, 0, "a"));
  PathWord wa2 = vertex_element(g, 0, elem(g, 0, "a^2"));
  PathWord wb = vertex_element(g, 1, elem(g, 1, "b"));
  CHECK(is_elliptic_subgroup({wa}));
  CHECK_FALSE(is_elliptic_subgroup({wa, wb}));
  CHECK(is_elliptic_subgroup({wa2, wb}));  // a^2 = b^3 lies in <b>
}

TEST_CASE("Serre's Lemma on sampled pairs") {
  std::mt19937_64 rng(2024);
  for (const char* name : {"SSF1", "FREE3", "HNN1"}) {
    GogPtr g = load_fixture(name);
    int checked = 0;
    for (int i = 0; checked < 25 && i < 2000; ++i) {
      PathWord x = random_word(g, rng, 8);
      PathWord y = random_word(g, rng, 8);
      if (translation_length(x) != 0 || translation_length(y) != 0) continue;
      auto fx = fixed_set({x}, 6);
      auto fy = fixed_set({y}, 6);
      if (fx.empty() || fy.empty()) continue;
      // keep only pairs whose fixed trees lie strictly inside the ball, so
      // ball-disjointness is true disjointness
      auto inside = [&](const std::vector<TreeVertex>& f) {
        for (const TreeVertex& v : f)
          if (tree_distance(TreeVertex::base(g), v) >= 6) return false;
        return true;
      };
      if (!inside(fx) || !inside(fy)) continue;
      bool disjoint = true;
      for (const TreeVertex& v : fx)
        for (const TreeVertex& w : fy)
          if (v == w) disjoint = false;
      if (!disjoint) continue;
      ++checked;
      CHECK(translation_length(element_mul(x, y)) > 0);
    }
    CHECK(checked > 0);
  }
}

TEST_CASE("finite subgroup classes") {
  CHECK(finite_subgroup_classes(load_fixture("TRIV")).size() == 4);   // lattice of Z6
  CHECK(finite_subgroup_classes(load_fixture("SSF1")).size() == 5);   // 1, Z2, Z4, Z3, Z6
  CHECK(finite_subgroup_classes(load_fixture("FREE3")).size() == 4);  // 1 and three Z2 factors

  // representatives fix their witness vertices and generate the local form
  GogPtr g = load_fixture("SSF1");
  for (const SubgroupClass& sc : finite_subgroup_classes(g)) {
    for (const PathWord& w : sc.representative) CHECK(act(w, sc.witness_vertex) == sc.witness_vertex);
    std::vector<Elem> local;
    for (const PathWord& w : sc.representative) local.push_back(localize_at(w, sc.witness_vertex));
    CHECK(Subgroup::generated(g->vertex(sc.home_vertex).group, local).mask() ==
          sc.local_form.mask());
  }
}

TEST_CASE("subgroup census lookup glues across edges") {
  GogPtr g = load_fixture("SSF1");
  SubgroupCensus census(g);
  // <a^2> at u and <b^3> at v are the same class
  uint64_t a2 = Subgroup::generated(g->vertex(0).group, {elem(g, 0, "a^2")}).mask();
  uint64_t b3 = Subgroup::generated(g->vertex(1).group, {elem(g, 1, "b^3")}).mask();
  CHECK(census.class_index(0, a2) == census.class_index(1, b3));
  uint64_t a = Subgroup::generated(g->vertex(0).group, {elem(g, 0, "a")}).mask();
  CHECK(census.class_index(0, a) != census.class_index(0, a2));
}
