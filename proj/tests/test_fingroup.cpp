#include "doctest.h"
#include "gogtree/fingroup.hpp"

using namespace gogtree;

TEST_CASE("cyclic groups") {
  auto z1 = FiniteGroup::cyclic(1);
  CHECK(z1->order() == 1);
  CHECK(z1->elem_name(z1->identity()) == "e");

  auto z4 = FiniteGroup::cyclic(4, "a");
  CHECK(z4->order() == 4);
  Elem a = *z4->elem_by_name("a");
  Elem x = a;
  for (int i = 0; i < 3; ++i) x = z4->mul(x, a);
  CHECK(x == z4->identity());  // a^4 = e
  CHECK(z4->elem_name(z4->mul(a, a)) == "a^2");
  CHECK(z4->inv(a) == *z4->elem_by_name("a^3"));
}

TEST_CASE("symmetric group S3") {
  auto s3 = FiniteGroup::symmetric(3);
  CHECK(s3->order() == 6);
  CHECK(s3->elem_by_name("(12)").has_value());
  CHECK(s3->elem_by_name("(123)").has_value());
  Elem t = *s3->elem_by_name("(12)");
  CHECK(s3->mul(t, t) == s3->identity());
  Elem r = *s3->elem_by_name("(123)");
  CHECK(s3->mul(s3->mul(r, r), r) == s3->identity());
  // (12)(123) has order 2 (it is a transposition)
  Elem p = s3->mul(t, r);
  CHECK(s3->mul(p, p) == s3->identity());
}

TEST_CASE("table group validation names the failing triple") {
  // "multiplication" that is not associative: x*y = y except 1*1 = 0 style
  std::vector<std::string> names{"e", "s", "t"};
  std::vector<std::vector<Elem>> bad{{0, 1, 2}, {1, 0, 2}, {2, 2, 0}};
  CHECK_THROWS_WITH_AS(FiniteGroup::from_table(names, bad, "B"),
                       doctest::Contains("associativity fails for triple"), Error);

  std::vector<std::vector<Elem>> noid{{1, 0, 2}, {0, 1, 2}, {2, 1, 0}};
  CHECK_THROWS_WITH_AS(FiniteGroup::from_table(names, noid, "B"),
                       doctest::Contains("identity"), Error);

  // Klein four-group passes
  std::vector<std::string> v4n{"e", "i", "j", "k"};
  std::vector<std::vector<Elem>> v4{{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  auto g = FiniteGroup::from_table(v4n, v4, "V4");
  CHECK(g->order() == 4);
  CHECK(g->inv(1) == 1);
}

TEST_CASE("order cap enforced") {
  CHECK_THROWS_WITH_AS(FiniteGroup::cyclic(49), doctest::Contains("cap"), Error);
  CHECK_NOTHROW(FiniteGroup::cyclic(48));
}

TEST_CASE("subgroup_generated") {
  auto z4 = FiniteGroup::cyclic(4, "a");
  Elem a2 = *z4->elem_by_name("a^2");
  Subgroup h = Subgroup::generated(z4, {a2});
  CHECK(h.order() == 2);
  CHECK(h.contains(z4->identity()));
  CHECK(h.contains(a2));

  auto z6 = FiniteGroup::cyclic(6, "b");
  Subgroup all = Subgroup::generated(z6, {*z6->elem_by_name("b^3"), *z6->elem_by_name("b^2")});
  CHECK(all.order() == 6);  // closure of b^3 and b^2 is everything

  Subgroup triv = Subgroup::generated(z6, {});
  CHECK(triv.order() == 1);

  CHECK_THROWS_AS(Subgroup::generated(z4, {7}), Error);
}

TEST_CASE("subgroup_generated is idempotent") {
  auto s3 = FiniteGroup::symmetric(3);
  for (uint64_t mask : s3->subgroup_lattice()) {
    Subgroup h(s3, mask);
    CHECK(Subgroup::generated(s3, h.members()).mask() == mask);
  }
}

TEST_CASE("subgroup conjugacy") {
  auto z4 = FiniteGroup::cyclic(4, "a");
  Subgroup h = Subgroup::generated(z4, {*z4->elem_by_name("a^2")});
  auto v = is_conjugate_subgroup(h, h);
  CHECK(v.conjugate);
  CHECK(v.witness == z4->identity());

  auto s3 = FiniteGroup::symmetric(3);
  Subgroup t12 = Subgroup::generated(s3, {*s3->elem_by_name("(12)")});
  Subgroup t13 = Subgroup::generated(s3, {*s3->elem_by_name("(13)")});
  auto w = is_conjugate_subgroup(t12, t13);
  CHECK(w.conjugate);
  CHECK(s3->conj_mask(w.witness, t12.mask()) == t13.mask());

  Subgroup full = Subgroup::full(z4);
  CHECK_FALSE(is_conjugate_subgroup(h, full).conjugate);

  CHECK_THROWS_AS(is_conjugate_subgroup(h, t12), Error);
}

TEST_CASE("subgroup conjugacy is an equivalence relation (S4)") {
  auto s4 = FiniteGroup::symmetric(4);
  const auto& lattice = s4->subgroup_lattice();
  CHECK(lattice.size() == 30);
  // symmetric with inverted witness + transitive with composed witness
  for (size_t i = 0; i < lattice.size(); ++i)
    for (size_t j = 0; j < lattice.size(); ++j) {
      Subgroup a(s4, lattice[i]), b(s4, lattice[j]);
      auto ab = is_conjugate_subgroup(a, b);
      if (!ab.conjugate) continue;
      CHECK(s4->conj_mask(s4->inv(ab.witness), b.mask()) == a.mask());
      for (size_t k = 0; k < lattice.size(); ++k) {
        Subgroup c(s4, lattice[k]);
        auto bc = is_conjugate_subgroup(b, c);
        if (bc.conjugate)
          CHECK(s4->conj_mask(s4->mul(bc.witness, ab.witness), a.mask()) == c.mask());
      }
    }
}

TEST_CASE("conjugate containment implies equality in finite groups") {
  auto s4 = FiniteGroup::symmetric(4);
  for (uint64_t mask : s4->subgroup_lattice())
    for (Elem x = 0; x < s4->order(); ++x) {
      uint64_t c = s4->conj_mask(x, mask);
      if ((c & ~mask) == 0) CHECK(c == mask);
    }
}

TEST_CASE("check_monomorphism") {
  auto z2 = FiniteGroup::cyclic(2, "x");
  auto z4 = FiniteGroup::cyclic(4, "a");
  Elem x = *z2->elem_by_name("x");

  Mono m = Mono::check(z2, z4, {{x, *z4->elem_by_name("a^2")}});
  CHECK(m.map(x) == *z4->elem_by_name("a^2"));
  CHECK(m.index() == 2);
  CHECK_FALSE(m.surjective());

  // x -> a is not a homomorphism: x^2 = e but a^2 != e
  CHECK_THROWS_WITH_AS(Mono::check(z2, z4, {{x, *z4->elem_by_name("a")}}),
                       doctest::Contains("not a homomorphism"), Error);

  // Z4 -> Z2 cannot be injective
  CHECK_THROWS_WITH_AS(Mono::check(z4, z2, {{*z4->elem_by_name("a"), x}}),
                       doctest::Contains("collide"), Error);
}

TEST_CASE("subgroup lattice of Z6") {
  auto z6 = FiniteGroup::cyclic(6, "b");
  CHECK(z6->subgroup_lattice().size() == 4);  // 1, Z2, Z3, Z6
  CHECK(z6->subgroup_classes().size() == 4);  // abelian: classes are singletons
}
