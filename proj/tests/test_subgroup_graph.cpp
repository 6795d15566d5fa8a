#include <algorithm>
#include <random>

#include "doctest.h"
#include "support.hpp"
#include "torusconj/errors.hpp"
#include "torusconj/free_aut.hpp"
#include "torusconj/subgroup_graph.hpp"

using namespace torusconj;
using testing_support::random_word;
using testing_support::w;

namespace {

SubgroupGraph fold2(std::initializer_list<const char*> gens) {
  std::vector<Word> v;
  for (const char* g : gens) v.push_back(w(g));
  return SubgroupGraph::fold(2, v);
}

// All reduced words of F_2 up to the given length.
std::vector<Word> ball(int rank, int radius) {
  std::vector<Word> out{Word()};
  std::vector<Word> layer{Word()};
  for (int r = 0; r < radius; ++r) {
    std::vector<Word> next;
    for (const Word& x : layer)
      for (int k = 0; k < 2 * rank; ++k) {
        Word y = x * Word({Letter::from_key(k)});
        if (y.size() == x.size() + 1) next.push_back(y);
      }
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

}  // namespace

TEST_CASE("folding the standard generators gives the rose") {
  SubgroupGraph g = fold2({"a", "b"});
  CHECK(g.num_states() == 1);
  CHECK(g.is_whole_group());
  CHECK(g == SubgroupGraph::whole_group(2));
  CHECK(g.index() == 1);
  std::mt19937 rng(5);
  for (int i = 0; i < 50; ++i) CHECK(g.contains(random_word(rng, 2, 12)));
}

TEST_CASE("membership in <a^2, b>") {
  SubgroupGraph g = fold2({"aa", "b"});
  CHECK_FALSE(g.contains(w("a")));
  CHECK(g.contains(w("aab")));
  CHECK(g.contains(Word()));
  CHECK_FALSE(g.index().has_value());
  CHECK_THROWS_AS(SubgroupGraph::fold(2, std::vector<Word>{}), DomainError);
}

TEST_CASE("<a^2, b, aba'> is the index-2 kernel of a -> 1, b -> 0") {
  SubgroupGraph g = fold2({"aa", "b", "aba'"});
  CHECK(g.num_states() == 2);
  CHECK(g.index() == 2);
  // Oracle: membership equals even exponent sum of a.
  for (const Word& x : ball(2, 6)) CHECK(g.contains(x) == (exponent_sums(x, 2)[0] % 2 == 0));
}

TEST_CASE("folding is independent of generator order") {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Word> gens;
    for (int i = 0; i < 3; ++i) gens.push_back(random_word(rng, 2, 7));
    if (std::all_of(gens.begin(), gens.end(), [](const Word& x) { return x.empty(); })) continue;
    SubgroupGraph base = SubgroupGraph::fold(2, gens);
    std::sort(gens.begin(), gens.end());
    do {
      CHECK(SubgroupGraph::fold(2, gens) == base);
    } while (std::next_permutation(gens.begin(), gens.end()));
    std::vector<Word> inverted;
    for (const Word& x : gens) inverted.push_back(x.inverse());
    CHECK(SubgroupGraph::fold(2, inverted) == base);
  }
}

TEST_CASE("basis refolds to the same graph and every generator is a member") {
  std::mt19937 rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Word> gens;
    for (int i = 0; i < 3; ++i) gens.push_back(random_word(rng, 3, 8));
    gens.push_back(Word::generator(0));
    SubgroupGraph g = SubgroupGraph::fold(3, gens);
    for (const Word& x : gens) CHECK(g.contains(x));
    auto basis = g.basis();
    CHECK(SubgroupGraph::fold(3, basis) == g);
    for (int s = 1; s < g.num_states(); ++s) CHECK(g.degree(s) >= 2);
  }
}

TEST_CASE("intersection of the index-2 subgroups of F2") {
  SubgroupGraph ka = fold2({"aa", "b", "aba'"});
  SubgroupGraph kb = fold2({"bb", "a", "bab'"});
  SubgroupGraph kab = fold2({"ab", "aa", "ba"});
  SubgroupGraph both = ka.intersect(kb);
  CHECK(both.index() == 4);
  for (const Word& x : ball(2, 6)) {
    auto e = exponent_sums(x, 2);
    CHECK(both.contains(x) == (e[0] % 2 == 0 && e[1] % 2 == 0));
  }
  CHECK(both.intersect(kab) == both);
  CHECK_THROWS_AS(ka.intersect(kb, 2), ResourceError);
}

TEST_CASE("from_action builds the point stabilizer") {
  std::vector<Permutation> perms{{1, 0}, {0, 1}};
  CHECK(SubgroupGraph::from_action(perms) == fold2({"aa", "b", "aba'"}));
}

TEST_CASE("serialization round trips") {
  FreeGroup f(2);
  SubgroupGraph g = fold2({"aab", "ba'b'", "abab"});
  std::string text = g.serialize(f);
  CHECK(text.rfind("base: 0\n", 0) == 0);
  CHECK(SubgroupGraph::parse(f, text) == g);
  CHECK_THROWS_AS(SubgroupGraph::parse(f, "0 --a--> 1\n"), FormatError);
  CHECK_THROWS_AS(SubgroupGraph::parse(f, "base: 0\n0 --a--> 1\n0 --a--> 0\n"), FormatError);
}

TEST_CASE("generator expressions evaluate back to the input") {
  std::mt19937 rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Word> gens;
    for (int i = 0; i < 3; ++i) gens.push_back(random_word(rng, 2, 6));
    GeneratorExpressions expr(2, gens);
    SubgroupGraph g = SubgroupGraph::fold(2, gens);
    for (int j = 0; j < 5; ++j) {
      Word y = random_word(rng, 3, 5);
      Word x = substitute(y, gens);
      auto e = expr.express(x);
      REQUIRE(e);
      CHECK(substitute(*e, gens) == x);
    }
    for (int j = 0; j < 10; ++j) {
      Word x = random_word(rng, 2, 6);
      CHECK(expr.express(x).has_value() == g.contains(x));
    }
    CHECK(expr.generates_whole_group() == g.is_whole_group());
  }
}

TEST_CASE("canonical conjugates identify simultaneous conjugacy classes") {
  std::mt19937 rng(41);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<Word> tuple;
    for (int i = 0; i < 2; ++i) tuple.push_back(random_word(rng, 2, 6));
    Word g = random_word(rng, 2, 6);
    std::vector<Word> conj;
    for (const Word& x : tuple) conj.push_back(conjugate(x, g));
    auto c1 = canonical_conjugate(tuple, 2);
    auto c2 = canonical_conjugate(conj, 2);
    CHECK(c1.tuple == c2.tuple);
    for (std::size_t i = 0; i < tuple.size(); ++i)
      CHECK(c1.conjugator * c1.tuple[i] * c1.conjugator.inverse() == tuple[i]);
    auto t = tuple_conjugator(tuple, conj, 2);
    REQUIRE(t);
    for (std::size_t i = 0; i < tuple.size(); ++i) CHECK(conjugate(tuple[i], *t) == conj[i]);
  }
  CHECK_FALSE(tuple_conjugator(std::vector<Word>{w("a"), w("b")}, std::vector<Word>{w("a"), w("bb")}, 2));
  CHECK(tuple_conjugator(std::vector<Word>{w("a"), w("b")}, std::vector<Word>{w("a"), w("a'ba")}, 2) == w("a"));
  // Fixing a forces a power of a as conjugator, and no power of a sends b to b'ab.
  CHECK_FALSE(tuple_conjugator(std::vector<Word>{w("a"), w("b")}, std::vector<Word>{w("a"), w("b'ab")}, 2));
}

TEST_CASE("conjugate_into finds a conjugator into a subgroup") {
  SubgroupGraph h = fold2({"aa", "b"});
  std::vector<Word> tuple{w("a'ba"), w("a'aaa")};
  auto g = conjugate_into(h, tuple);
  REQUIRE(g);
  for (const Word& x : tuple) CHECK(h.contains(*g * x * g->inverse()));
  CHECK_FALSE(conjugate_into(h, std::vector<Word>{w("a")}));
}

TEST_CASE("conjugate subgroups are recognized with a conjugator") {
  std::mt19937 rng(31);
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<Word> gens{random_word(rng, 2, 5), random_word(rng, 2, 5)};
    if (gens[0].empty() && gens[1].empty()) continue;
    SubgroupGraph h = SubgroupGraph::fold(2, gens);
    Word a = random_word(rng, 2, 6);
    std::vector<Word> conj;
    for (const Word& g : gens) conj.push_back(conjugate(g, a));
    SubgroupGraph k = SubgroupGraph::fold(2, conj);
    auto found = subgroup_conjugator(h, k);
    REQUIRE(found);
    std::vector<Word> check;
    for (const Word& g : h.basis()) check.push_back(conjugate(g, *found));
    CHECK(SubgroupGraph::fold(2, check) == k);
  }
  auto one = [](const char* t) { return SubgroupGraph::fold(2, std::vector<Word>{w(t)}); };
  CHECK_FALSE(subgroup_conjugator(one("a"), one("aa")));
  CHECK_FALSE(subgroup_conjugator(one("ab"), one("a")));
  CHECK(subgroup_conjugator(one("ab"), one("ba")));
}
