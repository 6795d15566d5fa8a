#include <random>
#include <variant>

#include "doctest.h"
#include "support.hpp"
#include "torusconj/congruence.hpp"
#include "torusconj/errors.hpp"
#include "torusconj/free_aut.hpp"

using namespace torusconj;
using testing_support::random_word;
using testing_support::w;

namespace {

FreeAut random_nielsen_product(std::mt19937& rng, int rank, int length) {
  auto gens = nielsen_generators(rank);
  std::uniform_int_distribution<std::size_t> pick(0, gens.size() - 1);
  std::bernoulli_distribution inv(0.5);
  FreeAut a = FreeAut::identity(rank);
  for (int i = 0; i < length; ++i) {
    const FreeAut& g = gens[pick(rng)];
    a = compose(inv(rng) ? g.inverse() : g, a);
  }
  return a;
}

using Perm = std::vector<int>;

Perm perm_mul(const Perm& p, const Perm& q) {  // apply p then q
  Perm r(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) r[i] = q[static_cast<std::size_t>(p[i])];
  return r;
}

Perm evaluate(const Word& x, const std::vector<Perm>& images) {
  std::size_t d = images.front().size();
  Perm r(d);
  for (std::size_t i = 0; i < d; ++i) r[i] = static_cast<int>(i);
  for (const Letter& l : x) {
    Perm p = images[static_cast<std::size_t>(l.gen)];
    if (l.sign < 0) {
      Perm inv(d);
      for (std::size_t i = 0; i < d; ++i) inv[static_cast<std::size_t>(p[i])] = static_cast<int>(i);
      p = inv;
    }
    r = perm_mul(r, p);
  }
  return r;
}

bool is_identity_perm(const Perm& p) {
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i] != static_cast<int>(i)) return false;
  return true;
}

}  // namespace

TEST_CASE("automorphism recognition") {
  auto nielsen = FreeAut::try_make(2, {w("ab"), w("b")});
  REQUIRE(std::holds_alternative<FreeAut>(nielsen));
  CHECK(std::get<FreeAut>(nielsen).inverse().images() == std::vector<Word>{w("ab'"), w("b")});

  auto square = FreeAut::try_make(2, {w("aa"), w("b")});
  REQUIRE(std::holds_alternative<SubgroupGraph>(square));
  CHECK_FALSE(std::get<SubgroupGraph>(square).contains(w("a")));

  FreeAut swap = FreeAut::make(2, {w("b"), w("a")});
  CHECK(swap.inverse() == swap);
  CHECK(compose(swap, swap).is_identity());
  CHECK_THROWS_AS(FreeAut::make(2, {w("a"), w("a")}), DomainError);
}

TEST_CASE("inverse round trip on random Nielsen products") {
  std::mt19937 rng(101);
  for (int trial = 0; trial < 200; ++trial) {
    FreeAut a = random_nielsen_product(rng, 3, 6);
    // Rebuild from images alone so the inverse is recomputed by folding.
    FreeAut b = FreeAut::make(3, a.images());
    for (int g = 0; g < 3; ++g) {
      CHECK(b.inverse().apply(b.apply(Word::generator(g))) == Word::generator(g));
      CHECK(b.apply(b.inverse().apply(Word::generator(g))) == Word::generator(g));
    }
    CHECK(b.inverse_images() == a.inverse_images());
  }
}

TEST_CASE("composition, powers and innerness") {
  FreeGroup f(2);
  FreeAut m = FreeAut::parse(f, "a -> ab, b -> b");
  CHECK(m.pow(3).image(0) == w("abbb"));
  CHECK(m.pow(-2).image(0) == w("ab'b'"));
  CHECK(m.format(f) == "a -> ab, b -> b");

  FreeAut ad = FreeAut::inner(2, w("ab'"));
  auto g = ad.inner_conjugator();
  REQUIRE(g);
  CHECK(*g == w("ab'"));
  CHECK_FALSE(m.is_inner());
  CHECK(FreeAut::identity(2).inner_conjugator() == Word());
  CHECK(FreeAut::make(1, {w("a'", 1)}).is_inner() == false);

  std::mt19937 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    FreeAut a = random_nielsen_product(rng, 2, 5);
    Word x = random_word(rng, 2, 6);
    FreeAut conj = compose(compose(a, FreeAut::inner(2, x)), a.inverse());
    auto c = conj.inner_conjugator();
    REQUIRE(c);
    CHECK(*c == a.apply(x));
  }
  CHECK_THROWS_AS(FreeAut::parse(f, "c -> a"), FormatError);
}

TEST_CASE("abelianization matrix") {
  FreeAut m = FreeAut::make(2, {w("ab"), w("bab")});
  auto mat = m.abelianization();
  CHECK(mat == std::vector<std::vector<long>>{{1, 1}, {1, 2}});
}

TEST_CASE("congruence kernel of F2 at depth 2 is the mod-2 homology kernel") {
  SubgroupGraph k = congruence_kernel(2, 2);
  CHECK(k.index() == 4);
  // Oracle: intersect the kernels of the three surjections onto Z/2.
  std::vector<Word> ga{w("aa"), w("b"), w("aba'")};
  std::vector<Word> gb{w("bb"), w("a"), w("bab'")};
  std::vector<Word> gab{w("ab"), w("aa"), w("ba")};
  SubgroupGraph oracle = SubgroupGraph::fold(2, ga).intersect(SubgroupGraph::fold(2, gb)).intersect(SubgroupGraph::fold(2, gab));
  CHECK(k == oracle);
}

TEST_CASE("congruence kernel degenerate cases") {
  CHECK(congruence_kernel(1, 3) == SubgroupGraph::fold(1, std::vector<Word>{Word::generator(0).pow(6)}));
  CHECK(congruence_kernel(2, 1).is_whole_group());
  CHECK(subgroups_of_index_at_most(2, 2).size() == 4);
  CHECK(subgroups_of_index_at_most(2, 3).size() == 4 + 13);
}

TEST_CASE("congruence kernel lies in kernels of small quotients") {
  std::vector<std::vector<Perm>> quotients2{
      {{1, 0}, {0, 1}}, {{0, 1}, {1, 0}}, {{1, 0}, {1, 0}}};
  std::vector<std::vector<Perm>> quotients3 = quotients2;
  quotients3.push_back({{1, 2, 0}, {0, 1, 2}});
  quotients3.push_back({{1, 2, 0}, {2, 0, 1}});
  quotients3.push_back({{1, 0, 2}, {1, 2, 0}});  // onto S3
  quotients3.push_back({{1, 0, 2}, {0, 2, 1}});  // onto S3
  for (auto [m, qs] : {std::pair{2, quotients2}, std::pair{3, quotients3}}) {
    SubgroupGraph k = congruence_kernel(2, m);
    for (const auto& q : qs)
      for (const Word& x : k.basis()) CHECK(is_identity_perm(evaluate(x, q)));
  }
}

TEST_CASE("congruence kernel inside a subgroup") {
  SubgroupGraph h = SubgroupGraph::fold(2, std::vector<Word>{w("a")});
  SubgroupGraph k = congruence_kernel(h, 2);
  CHECK(k == SubgroupGraph::fold(2, std::vector<Word>{w("aa")}));
}

TEST_CASE("characteristic checks") {
  auto nielsen = nielsen_generators(2);
  CHECK(nielsen.size() == 4);
  CHECK(is_characteristic(congruence_kernel(2, 2), nielsen));
  CHECK(is_characteristic(congruence_kernel(2, 3), nielsen));
  SubgroupGraph ka = SubgroupGraph::fold(2, std::vector<Word>{w("aa"), w("b"), w("aba'")});
  std::vector<FreeAut> swap{FreeAut::make(2, {w("b"), w("a")})};
  CHECK_FALSE(is_characteristic(ka, swap));
  CHECK(is_characteristic(SubgroupGraph::whole_group(2), nielsen));
  CHECK_THROWS_AS(is_characteristic(SubgroupGraph::fold(2, std::vector<Word>{w("a")}), nielsen), DomainError);
}
