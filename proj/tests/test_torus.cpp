#include <random>

#include "doctest.h"
#include "support.hpp"
#include "torusconj/errors.hpp"
#include "torusconj/torus.hpp"

using namespace torusconj;
using testing_support::random_word;
using testing_support::w;

namespace {

const FreeGroup F2(2);

MappingTorus torus(const char* monodromy, int rank = 2) {
  FreeGroup f(rank);
  return MappingTorus(f, FreeAut::parse(f, monodromy));
}

TorusElement random_element(std::mt19937& rng, int rank) {
  std::uniform_int_distribution<long> power(-3, 3);
  return {power(rng), random_word(rng, rank, 6)};
}

FreeAut random_aut(std::mt19937& rng, int rank, int length) {
  auto gens = nielsen_generators(rank);
  std::uniform_int_distribution<std::size_t> pick(0, gens.size() - 1);
  FreeAut a = FreeAut::identity(rank);
  for (int i = 0; i < length; ++i) a = compose(gens[pick(rng)], a);
  return a;
}

}  // namespace

TEST_CASE("multiplication follows the defining relation") {
  MappingTorus t = torus("a -> ab, b -> b");
  CHECK(t.multiply({1, w("a")}, {0, w("b")}) == TorusElement{1, w("ab")});
  CHECK(t.multiply({1, w("a")}, {1, w("b")}) == TorusElement{2, w("abb")});
  CHECK(t.parse_element("t^2 * ab") == TorusElement{2, w("ab")});
  CHECK(t.parse_element("a t") == TorusElement{1, w("ab")});
  CHECK(t.parse_element("t' a t") == TorusElement{0, w("ab")});
  CHECK(t.format({2, w("ab")}) == "t^2 * ab");
  CHECK(t.format({0, Word()}) == "1");
  CHECK(t.format({1, Word()}) == "t");
}

TEST_CASE("group laws on random elements") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    MappingTorus t(F2, random_aut(rng, 2, 4));
    TorusElement x = random_element(rng, 2);
    TorusElement y = random_element(rng, 2);
    TorusElement z = random_element(rng, 2);
    CHECK(t.multiply(x, t.inverse(x)) == TorusElement{});
    CHECK(t.multiply(t.inverse(x), x) == TorusElement{});
    CHECK(t.multiply(t.multiply(x, y), z) == t.multiply(x, t.multiply(y, z)));
    CHECK(orientation_degree(t.multiply(x, y)) == orientation_degree(x) + orientation_degree(y));
    for (int g = 0; g < 2; ++g) {
      TorusElement a = MappingTorus::fiber_element(Word::generator(g));
      CHECK(t.conjugate(a, t.stable()) == MappingTorus::fiber_element(t.monodromy().image(g)));
    }
  }
}

TEST_CASE("torus description files") {
  MappingTorus t = MappingTorus::parse(
      "# inner monodromy\n"
      "fiber rank: 2\n"
      "monodromy: a -> a, b -> a'ba\n"
      "conjugator: a\n"
      "peripheral: b ; conjugator: a\n");
  CHECK(t.fiber().rank() == 2);
  CHECK(t.monodromy().image(1) == w("a'ba"));
  REQUIRE(t.declared_conjugator());
  CHECK(*t.declared_conjugator() == w("a"));
  REQUIRE(t.peripherals().size() == 1);
  CHECK(MappingTorus::parse(t.serialize()).serialize() == t.serialize());
  CHECK_THROWS_AS(MappingTorus::parse("monodromy: a -> a"), FormatError);
  CHECK_THROWS_AS(MappingTorus::parse("fiber rank: 2\nmonodromy: a -> aa\n"), DomainError);
}

TEST_CASE("sub-mapping torus examples") {
  auto h = [](const char* text) { return SubgroupGraph::fold(2, std::vector<Word>{w(text)}); };
  auto id = sub_mapping_torus(torus("a -> a"), h("a"));
  REQUIRE(id.status == SubMappingTorus::Status::Found);
  CHECK(id.period == 1);
  CHECK(id.corrector.empty());

  auto swap = sub_mapping_torus(torus("a -> b, b -> a"), h("a"));
  REQUIRE(swap.status == SubMappingTorus::Status::Found);
  CHECK(swap.period == 2);
  CHECK(swap.corrector.empty());

  auto fixed = sub_mapping_torus(torus("a -> ab, b -> b"), h("b"));
  REQUIRE(fixed.status == SubMappingTorus::Status::Found);
  CHECK(fixed.period == 1);

  // a -> ab moves <a> to <ab>, which is not conjugate to <a> at any power.
  auto none = sub_mapping_torus(torus("a -> ab, b -> b"), h("a"), 5);
  CHECK(none.status == SubMappingTorus::Status::Undecided);
}

TEST_CASE("sub-mapping torus corrector conjugates and normalizes") {
  std::mt19937 rng(9);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<Word> gens{random_word(rng, 2, 4), random_word(rng, 2, 4)};
    if (gens[0].empty() && gens[1].empty()) continue;
    SubgroupGraph h = SubgroupGraph::fold(2, gens);

    auto id = sub_mapping_torus(torus("a -> a"), h);
    REQUIRE(id.status == SubMappingTorus::Status::Found);
    CHECK(id.period == 1);
    CHECK(id.corrector.empty());

    Word g = random_word(rng, 2, 4);
    MappingTorus t(F2, compose(FreeAut::inner(2, g), random_aut(rng, 2, 3)));
    auto sub = sub_mapping_torus(t, h, 6);
    if (sub.status != SubMappingTorus::Status::Found) continue;
    std::vector<Word> image;
    for (const Word& b : h.basis()) image.push_back(t.twist(b, sub.period));
    std::vector<Word> conj;
    for (const Word& b : h.basis()) conj.push_back(conjugate(b, sub.corrector));
    if (image.empty()) continue;
    CHECK(SubgroupGraph::fold(2, image) == SubgroupGraph::fold(2, conj));
    const TorusElement& s = sub.generators.back();
    for (const Word& b : h.basis()) {
      TorusElement c = t.conjugate(MappingTorus::fiber_element(b), s);
      CHECK(c.power == 0);
      CHECK(h.contains(c.tail));
    }
  }
}

TEST_CASE("product form") {
  auto id = product_form(torus("a -> a"));
  REQUIRE(id);
  CHECK(id->free_rank == 2);
  CHECK(id->center == TorusElement{1, Word()});

  MappingTorus inner(F2, FreeAut::inner(2, w("a")));
  auto p = product_form(inner);
  REQUIRE(p);
  CHECK(p->center == TorusElement{1, w("a'")});
  for (int g = 0; g < 2; ++g) {
    TorusElement x = MappingTorus::fiber_element(Word::generator(g));
    CHECK(inner.multiply(x, p->center) == inner.multiply(p->center, x));
  }
  CHECK_FALSE(product_form(torus("a -> b, b -> a")));
  CHECK_FALSE(product_form(torus("a -> a'", 1)));
  CHECK(product_form(torus("a -> a", 1)));

  std::mt19937 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    Word g = random_word(rng, 3, 6);
    MappingTorus t(FreeGroup(3), FreeAut::inner(3, g));
    auto pf = product_form(t);
    REQUIRE(pf);
    CHECK(orientation_degree(pf->center) == 1);
    for (int x = 0; x < 3; ++x) {
      TorusElement e = MappingTorus::fiber_element(Word::generator(x));
      CHECK(t.multiply(e, pf->center) == t.multiply(pf->center, e));
    }
  }
}

TEST_CASE("class C isomorphism by rank") {
  CHECK(fop_isomorphic_classC(torus("a -> a"), MappingTorus(F2, FreeAut::inner(2, w("ab")))));
  CHECK_FALSE(fop_isomorphic_classC(torus("a -> a"), torus("a -> a", 3)));
  CHECK_FALSE(fop_isomorphic_classC(torus("a -> a", 1), torus("a -> a")));
  CHECK_THROWS_AS(fop_isomorphic_classC(torus("a -> a"), torus("a -> b, b -> a")), DomainError);
}

TEST_CASE("peripheral products") {
  MappingTorus t = torus("a -> ab, b -> bab");
  auto comm = peripheral_product(t, {{w("aba'b'")}, std::nullopt});
  REQUIRE(comm);
  TorusElement x = MappingTorus::fiber_element(w("aba'b'"));
  CHECK(t.multiply(x, comm->center) == t.multiply(comm->center, x));
  CHECK(orientation_degree(comm->center) == comm->sub.period);

  MappingTorus fix = torus("a -> ab, b -> b");
  auto pb = peripheral_product(fix, {{w("b")}, Word()});
  REQUIRE(pb);
  CHECK(pb->center == TorusElement{1, Word()});
  CHECK_FALSE(peripheral_product(fix, {{w("b")}, w("a")}));
}
