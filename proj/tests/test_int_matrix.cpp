#include <random>

#include "doctest.h"
#include "torusconj/errors.hpp"
#include "torusconj/int_matrix.hpp"

using namespace torusconj;

namespace {

IntVector vec(std::initializer_list<long> xs) {
  IntVector v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

// Exhaustive search for an integer solution with entries in [-bound, bound].
bool box_solvable(const IntMatrix& a, const IntVector& b, long bound) {
  std::size_t n = a.cols();
  std::vector<long> x(n, -bound);
  while (true) {
    bool ok = true;
    for (std::size_t i = 0; i < a.rows() && ok; ++i) {
      Integer s = 0;
      for (std::size_t j = 0; j < n; ++j) s += a(i, j) * x[j];
      ok = s == b[i];
    }
    if (ok) return true;
    std::size_t k = 0;
    while (k < n && ++x[k] > bound) x[k++] = -bound;
    if (k == n) return false;
  }
}

}  // namespace

TEST_CASE("small systems") {
  auto one = solve(IntMatrix::from_rows({{2}}), vec({4}));
  REQUIRE(one);
  CHECK((*one)[0] == 2);
  CHECK_FALSE(solve(IntMatrix::from_rows({{2}}), vec({3})));
  IntMatrix a = IntMatrix::from_rows({{2, 3}, {0, 0}});
  auto x = solve(a, vec({1, 0}));
  REQUIRE(x);
  CHECK(a * *x == vec({1, 0}));
  CHECK(box_solvable(a, vec({1, 0}), 5));
  CHECK_FALSE(solve(a, vec({1, 1})));
}

TEST_CASE("column Hermite form is a unimodular change of basis") {
  std::mt19937 rng(9);
  std::uniform_int_distribution<long> entry(-6, 6);
  for (int trial = 0; trial < 200; ++trial) {
    IntMatrix a(3, 4);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 4; ++j) a(i, j) = entry(rng);
    ColumnHermite ch = column_hermite(a);
    CHECK(a * ch.u == ch.h);
    auto inv = smith_invariants(ch.u);
    CHECK(inv.size() == 4);
    for (const auto& d : inv) CHECK(d == 1);
    for (std::size_t k = ch.pivot_rows.size(); k < 4; ++k)
      for (std::size_t i = 0; i < 3; ++i) CHECK(ch.h(i, k) == 0);
  }
}

TEST_CASE("solver agrees with exhaustive box search") {
  std::mt19937 rng(2024);
  std::uniform_int_distribution<long> entry(-4, 4);
  std::uniform_int_distribution<std::size_t> dim(1, 3);
  for (int trial = 0; trial < 300; ++trial) {
    std::size_t r = dim(rng);
    std::size_t c = dim(rng);
    IntMatrix a(r, c);
    IntVector b(r);
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t j = 0; j < c; ++j) a(i, j) = entry(rng);
      b[i] = entry(rng);
    }
    auto x = solve(a, b);
    // The box is not a complete search: a solvable system may have only large solutions.
    if (x) CHECK(a * *x == b);
    if (box_solvable(a, b, 10)) CHECK(x.has_value());
  }
}

TEST_CASE("Smith invariants") {
  CHECK(smith_invariants(IntMatrix::from_rows({{2, 0}, {0, 3}})) == std::vector<Integer>{1, 6});
  CHECK(smith_invariants(IntMatrix::from_rows({{2, 4}, {6, 8}})) == std::vector<Integer>{2, 4});
  CHECK(smith_invariants(IntMatrix::from_rows({{0, 0}})).empty());
  CHECK(smith_invariants(IntMatrix(0, 3)).empty());
}

TEST_CASE("system file format") {
  auto s = DiophantineSystem::parse("A:\n2 3\n0 0\nb: 1 0\n");
  CHECK(s.a.rows() == 2);
  CHECK(s.b == vec({1, 0}));
  CHECK(format_vector(vec({-1, 1})) == "-1 1");
  CHECK_THROWS_AS(DiophantineSystem::parse("A:\n1 2\n3\nb: 1 1\n"), FormatError);
  CHECK_THROWS_AS(DiophantineSystem::parse("A:\n1 2\n"), FormatError);
}
