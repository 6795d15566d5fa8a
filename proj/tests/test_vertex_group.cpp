#include <random>

#include "doctest.h"
#include "support.hpp"
#include "torusconj/errors.hpp"
#include "torusconj/vertex_group.hpp"

using namespace torusconj;
using testing_support::random_word;
using testing_support::w;

namespace {

GroupElement random_element(std::mt19937& rng, const VertexGroup& g) {
  std::uniform_int_distribution<long> e(-3, 3);
  return {random_word(rng, g.rank(), 5), g.kind() == VertexGroup::Kind::Free ? 0 : e(rng)};
}

}  // namespace

TEST_CASE("group kinds parse and describe") {
  for (const char* kind : {"Z", "F3", "Z2", "F2xZ", "torus 2 | a -> ab, b -> bab"}) {
    VertexGroup g = VertexGroup::parse(kind);
    CHECK(VertexGroup::parse(g.describe()) == g);
  }
  CHECK(VertexGroup::parse("Z2").is_abelian());
  CHECK(VertexGroup::parse("F2xZ").generator_names() == std::vector<std::string>{"a", "b", "z"});
  CHECK(VertexGroup::parse("torus 1 | a -> a'").generator_names() == std::vector<std::string>{"a", "t"});
  CHECK_THROWS_AS(VertexGroup::parse("Q"), FormatError);
  CHECK_THROWS_AS(VertexGroup::parse("F0"), FormatError);
}

TEST_CASE("group laws and relators in every kind") {
  std::mt19937 rng(11);
  std::vector<VertexGroup> groups{VertexGroup::parse("F2"), VertexGroup::parse("Z2"), VertexGroup::parse("F2xZ"),
                                  VertexGroup::parse("torus 2 | a -> ab, b -> bab")};
  for (const VertexGroup& g : groups) {
    for (int trial = 0; trial < 50; ++trial) {
      GroupElement x = random_element(rng, g), y = random_element(rng, g), z = random_element(rng, g);
      CHECK(g.multiply(x, g.inverse(x)) == GroupElement{});
      CHECK(g.multiply(g.multiply(x, y), z) == g.multiply(x, g.multiply(y, z)));
      CHECK(g.evaluate(g.as_word(x)) == x);
      CHECK(g.power(x, 3) == g.multiply(x, g.multiply(x, x)));
      CHECK(g.power(x, -2) == g.inverse(g.multiply(x, x)));
      CHECK(g.parse_element(g.format(x)) == x);
    }
    for (const Word& r : g.relators()) CHECK(g.evaluate(r) == GroupElement{});
  }
  VertexGroup t = VertexGroup::parse("torus 2 | a -> ab, b -> bab");
  CHECK(t.conjugate(t.generator(0), t.generator(2)) == GroupElement{w("ab"), 0});
}

TEST_CASE("centralizers") {
  VertexGroup f = VertexGroup::parse("F2");
  auto c = f.centralizer_generators(std::vector<GroupElement>{{w("abab"), 0}});
  REQUIRE(c.size() == 1);
  CHECK(c[0].word == w("ab"));
  CHECK(f.centralizer_generators(std::vector<GroupElement>{{w("a"), 0}, {w("b"), 0}}).empty());

  VertexGroup p = VertexGroup::parse("F2xZ");
  auto pc = p.centralizer_generators(std::vector<GroupElement>{{w("aa"), 3}});
  CHECK(pc == std::vector<GroupElement>{{w("a"), 0}, {Word(), 1}});
  CHECK(p.centralizer_generators(std::vector<GroupElement>{{Word(), 1}}).size() == 3);

  std::mt19937 rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    GroupElement x = random_element(rng, p);
    for (const auto& z : p.centralizer_generators(std::vector<GroupElement>{x})) CHECK(p.commute(x, z));
  }
}

TEST_CASE("abelian expressions") {
  VertexGroup p = VertexGroup::parse("F2xZ");
  std::vector<GroupElement> gens{{w("ab"), 1}, {w("abab"), 3}};
  CHECK(p.independent_abelian(gens));
  for (long m = -3; m <= 3; ++m)
    for (long n = -3; n <= 3; ++n) {
      GroupElement y = p.multiply(p.power(gens[0], m), p.power(gens[1], n));
      auto e = p.express_abelian(gens, y);
      REQUIRE(e);
      CHECK((*e)[0] == m);
      CHECK((*e)[1] == n);
    }
  CHECK_FALSE(p.express_abelian(gens, {w("a"), 0}));
  CHECK_FALSE(p.independent_abelian(std::vector<GroupElement>{{w("ab"), 1}, {w("abab"), 2}}));
  CHECK_FALSE(p.independent_abelian(std::vector<GroupElement>{{w("ab"), 0}, {w("abab"), 0}}));
  CHECK(power_exponent(w("abab"), w("b'a'")) == -2);
  CHECK_FALSE(power_exponent(w("aba"), w("ab")));
}

TEST_CASE("group maps and inverses") {
  VertexGroup f = VertexGroup::parse("F2");
  GroupMap m(f, f, {{w("ab"), 0}, {w("b"), 0}});
  CHECK(m.is_homomorphism());
  auto inv = m.inverse();
  REQUIRE(inv);
  CHECK(inv->apply({w("a"), 0}) == GroupElement{w("ab'"), 0});
  CHECK_FALSE(GroupMap(f, f, {{w("aa"), 0}, {w("b"), 0}}).is_isomorphism());

  VertexGroup z2 = VertexGroup::parse("Z2");
  GroupMap shear(z2, z2, {{w("a"), 1}, {Word(), 1}});
  REQUIRE(shear.inverse());
  CHECK(compose(*shear.inverse(), shear) == GroupMap::identity(z2));
  CHECK_FALSE(GroupMap(z2, z2, {{w("aa"), 0}, {Word(), 1}}).is_isomorphism());

  VertexGroup p = VertexGroup::parse("F2xZ");
  GroupMap twisted(p, p, {{w("b"), 2}, {w("a"), -1}, {Word(), -1}});
  CHECK(twisted.is_homomorphism());
  auto tinv = twisted.inverse();
  REQUIRE(tinv);
  std::mt19937 rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    GroupElement x = random_element(rng, p);
    CHECK(tinv->apply(twisted.apply(x)) == x);
  }
  CHECK_FALSE(GroupMap(p, p, {{w("a"), 0}, {w("b"), 0}, {w("a"), 0}}).is_homomorphism());

  VertexGroup t = VertexGroup::parse("torus 2 | a -> ab, b -> bab");
  GroupMap inner = GroupMap::inner(t, {w("a"), 1});
  CHECK(inner.is_homomorphism());
  CHECK(inner.is_isomorphism());
  CHECK(compose(inner, GroupMap::inner(t, t.inverse({w("a"), 1}))).images() == GroupMap::identity(t).images());
}
