#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace torusconj {

using Integer = mpz_class;
using IntVector = std::vector<Integer>;

// Dense row-major matrix of arbitrary-precision integers.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  static IntMatrix identity(std::size_t n);
  static IntMatrix from_rows(const std::vector<std::vector<long>>& rows, std::size_t cols = 0);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Integer& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Integer& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  IntMatrix transpose() const;
  IntVector operator*(const IntVector& v) const;
  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
  friend IntMatrix operator-(const IntMatrix& a, const IntMatrix& b);
  bool is_zero() const;
  bool operator==(const IntMatrix&) const = default;

  // One row per line, entries separated by spaces.
  std::string format() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Integer> data_;
};

// a * u = h with u unimodular and h in column echelon form: the first
// `rank` columns carry pivots in strictly increasing rows, the rest are zero.
struct ColumnHermite {
  IntMatrix h;
  IntMatrix u;
  std::vector<std::size_t> pivot_rows;
};
ColumnHermite column_hermite(const IntMatrix& a);

// Nonzero invariant factors d_1 | d_2 | ... (positive).
std::vector<Integer> smith_invariants(const IntMatrix& a);

struct DiophantineSystem {
  IntMatrix a;
  IntVector b;

  // "A:" followed by integer rows, then "b:" followed by the right-hand side.
  static DiophantineSystem parse(const std::string& text);
};

// Integer x with a x = b when one exists; the returned vector is verified.
std::optional<IntVector> solve(const IntMatrix& a, const IntVector& b);
inline std::optional<IntVector> solve(const DiophantineSystem& s) { return solve(s.a, s.b); }

std::string format_vector(const IntVector& v);

}  // namespace torusconj
