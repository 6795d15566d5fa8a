#include <random>

#include "doctest.h"
#include "support.hpp"
#include "torusconj/errors.hpp"
#include "torusconj/free_group.hpp"

using namespace torusconj;
using testing_support::random_word;
using testing_support::w;

namespace {

// Naive cyclic-word comparison: reduce cyclically by hand, then try all rotations.
bool naive_conjugate(const Word& u, const Word& v) {
  auto cyc = [](std::vector<Letter> x) {
    while (x.size() >= 2 && x.front() == x.back().inverse()) {
      x.erase(x.begin());
      x.pop_back();
    }
    return x;
  };
  auto a = cyc(u.letters());
  auto b = cyc(v.letters());
  if (a.size() != b.size()) return false;
  if (a.empty()) return true;
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::vector<Letter> r(a.begin() + static_cast<long>(i), a.end());
    r.insert(r.end(), a.begin(), a.begin() + static_cast<long>(i));
    if (r == b) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("free reduction cancels adjacent inverse pairs") {
  Letter a{0, 1};
  Letter b{1, 1};
  std::vector<Letter> x{a, a.inverse(), b};
  CHECK(reduce(x) == Word{b});
  CHECK(reduce(std::vector<Letter>{}).empty());
  std::vector<Letter> y{a, b, b.inverse(), a};
  CHECK(reduce(y) == Word({a, a}));
}

TEST_CASE("reduce is idempotent on random letter sequences") {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> key(0, 5);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<Letter> raw;
    for (int i = 0; i < 20; ++i) raw.push_back(Letter::from_key(key(rng)));
    Word once = reduce(raw);
    CHECK(reduce(once.letters()) == once);
    for (std::size_t i = 0; i + 1 < once.size(); ++i) CHECK(once[i] != once[i + 1].inverse());
  }
}

TEST_CASE("word syntax round trips") {
  FreeGroup f(2);
  CHECK(f.format(f.parse("a b' a")) == "ab'a");
  CHECK(f.parse("a a'") == Word());
  CHECK(f.format(Word()) == "1");
  CHECK(f.parse("a^3 b^-2") == f.parse("aaab'b'"));
  CHECK(f.parse("b''") == f.parse("b"));
  CHECK_THROWS_AS(f.parse("c"), FormatError);

  FreeGroup g(std::vector<std::string>{"x1", "x2", "x"});
  Word v = g.parse("x1 x2' x");
  CHECK(v.size() == 3);
  CHECK(v[0].gen == 0);
  CHECK(v[2].gen == 2);
  CHECK(g.format(v) == "x1 x2' x");
  CHECK_THROWS_AS(FreeGroup(std::vector<std::string>{"a", "a"}), FormatError);
}

TEST_CASE("shortlex order compares length first") {
  CHECK(w("b") < w("aa"));
  CHECK(w("a") < w("a'"));
  CHECK(w("a'") < w("b"));
}

TEST_CASE("conjugacy examples") {
  auto c = conjugator(w("ab"), w("ba"));
  REQUIRE(c);
  CHECK(*c == w("a"));
  CHECK_FALSE(is_conjugate(w("a"), w("b")));
  // A commutator is not conjugate to its inverse: bab'a' is no rotation of aba'b'.
  CHECK_FALSE(is_conjugate(w("aba'b'"), w("bab'a'")));
  CHECK_FALSE(naive_conjugate(w("aba'b'"), w("bab'a'")));
  auto d = conjugator(w("aba'b'"), w("b'aba'"));
  REQUIRE(d);
  CHECK(conjugate(w("aba'b'"), *d) == w("b'aba'"));
}

TEST_CASE("conjugator witness on random conjugates") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    Word u = random_word(rng, 3, 10);
    Word g = random_word(rng, 3, 8);
    Word v = conjugate(u, g);
    auto c = conjugator(u, v);
    REQUIRE(c);
    CHECK(conjugate(u, *c) == v);
  }
}

TEST_CASE("conjugacy agrees with the naive rotation oracle") {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 2000; ++trial) {
    Word u = random_word(rng, 2, 6);
    Word v = random_word(rng, 2, 6);
    CHECK(is_conjugate(u, v) == naive_conjugate(u, v));
  }
}

TEST_CASE("roots and commuting") {
  CHECK(root(w("abab")) == w("ab"));
  CHECK(root(w("b'ababb")) == w("b'abb"));
  CHECK(root(w("ab")) == w("ab"));
  CHECK(root(Word()) == Word());
  CHECK(commute(w("abab"), w("ab")));
  CHECK_FALSE(commute(w("a"), w("b")));
  CHECK(exponent_sums(w("aba'b'b'"), 2) == std::vector<long>{0, -1});
}
