#pragma once

#include <array>
#include <map>
#include <set>
#include <tuple>
#include <vector>

// Brute-force references shared by the tests and the acceptance run.
namespace testing_support {

using Mat2 = std::array<long, 4>;  // row-major

inline Mat2 mul(const Mat2& x, const Mat2& y) {
  return {x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3], x[2] * y[0] + x[3] * y[2],
          x[2] * y[1] + x[3] * y[3]};
}

inline long det(const Mat2& m) { return m[0] * m[3] - m[1] * m[2]; }

// Order of m in GL2(Z) when at most 12, else 0.
inline int order(const Mat2& m) {
  Mat2 p = m;
  for (int k = 1; k <= 12; ++k) {
    if (p == Mat2{1, 0, 0, 1}) return k;
    p = mul(p, m);
  }
  return 0;
}

// Trace, determinant and whether m is the identity mod 2: a complete
// invariant for finite-order conjugacy classes of GL2(Z).
using ClassKey = std::tuple<long, long, bool>;
inline ClassKey class_key(const Mat2& m) {
  bool mod2 = ((m[0] - 1) % 2 == 0) && (m[1] % 2 == 0) && (m[2] % 2 == 0) && ((m[3] - 1) % 2 == 0);
  return {m[0] + m[3], det(m), mod2};
}

// One representative per finite-order class among matrices with |entries| <= bound.
inline std::map<ClassKey, std::pair<Mat2, int>> gl2_finite_order_classes(long bound = 2) {
  std::map<ClassKey, std::pair<Mat2, int>> out;
  for (long a = -bound; a <= bound; ++a)
    for (long b = -bound; b <= bound; ++b)
      for (long c = -bound; c <= bound; ++c)
        for (long d = -bound; d <= bound; ++d) {
          Mat2 m{a, b, c, d};
          long dt = det(m);
          if (dt != 1 && dt != -1) continue;
          int k = order(m);
          if (k == 0) continue;
          out.emplace(class_key(m), std::make_pair(m, k));
        }
  return out;
}

// Multigraphs on at most two vertices with first Betti number 2 and all
// degrees at least 3, as (loops at 0, loops at 1, edges between), up to swap.
inline std::set<std::tuple<int, int, int>> betti_two_multigraphs() {
  std::set<std::tuple<int, int, int>> out;
  out.insert({2, 0, 0});
  for (int l0 = 0; l0 <= 3; ++l0)
    for (int l1 = 0; l1 <= 3; ++l1)
      for (int k = 1; k <= 3; ++k) {
        if (l0 + l1 + k != 3) continue;
        if (2 * l0 + k < 3 || 2 * l1 + k < 3) continue;
        out.insert({std::max(l0, l1), std::min(l0, l1), k});
      }
  return out;
}

}  // namespace testing_support
