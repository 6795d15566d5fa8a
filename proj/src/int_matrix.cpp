#include "torusconj/int_matrix.hpp"

#include <algorithm>
#include <sstream>

#include "torusconj/errors.hpp"

namespace torusconj {

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<long>>& rows, std::size_t cols) {
  if (!rows.empty()) cols = rows.front().size();
  IntMatrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw DomainError("ragged matrix rows");
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

IntVector IntMatrix::operator*(const IntVector& v) const {
  if (v.size() != cols_) throw DomainError("matrix-vector dimension mismatch");
  IntVector out(rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out[i] += (*this)(i, j) * v[j];
  return out;
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols_ != b.rows_) throw DomainError("matrix product dimension mismatch");
  IntMatrix c(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      if (a(i, k) == 0) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += a(i, k) * b(k, j);
    }
  return c;
}

IntMatrix operator-(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw DomainError("matrix difference dimension mismatch");
  IntMatrix c = a;
  for (std::size_t i = 0; i < c.data_.size(); ++i) c.data_[i] -= b.data_[i];
  return c;
}

bool IntMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const Integer& x) { return x == 0; });
}

std::string IntMatrix::format() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) out << (j ? " " : "") << (*this)(i, j);
    out << "\n";
  }
  return out.str();
}

namespace {

// Replaces columns (c, j) of m by (s*c + t*j, x*c + y*j).
void combine_columns(IntMatrix& m, std::size_t c, std::size_t j, const Integer& s, const Integer& t,
                     const Integer& x, const Integer& y) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Integer a = m(i, c);
    Integer b = m(i, j);
    m(i, c) = s * a + t * b;
    m(i, j) = x * a + y * b;
  }
}

void swap_columns(IntMatrix& m, std::size_t c, std::size_t j) {
  for (std::size_t i = 0; i < m.rows(); ++i) std::swap(m(i, c), m(i, j));
}

}  // namespace

ColumnHermite column_hermite(const IntMatrix& a) {
  IntMatrix h = a;
  IntMatrix u = IntMatrix::identity(a.cols());
  std::vector<std::size_t> pivots;
  std::size_t c = 0;
  for (std::size_t r = 0; r < h.rows() && c < h.cols(); ++r) {
    for (std::size_t j = c + 1; j < h.cols(); ++j) {
      if (h(r, j) == 0) continue;
      if (h(r, c) == 0) {
        swap_columns(h, c, j);
        swap_columns(u, c, j);
        continue;
      }
      Integer g;
      Integer s;
      Integer t;
      mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), h(r, c).get_mpz_t(), h(r, j).get_mpz_t());
      Integer x = -h(r, j) / g;
      Integer y = h(r, c) / g;
      combine_columns(h, c, j, s, t, x, y);
      combine_columns(u, c, j, s, t, x, y);
    }
    if (h(r, c) == 0) continue;
    if (h(r, c) < 0) {
      for (std::size_t i = 0; i < h.rows(); ++i) h(i, c) = -h(i, c);
      for (std::size_t i = 0; i < u.rows(); ++i) u(i, c) = -u(i, c);
    }
    // Reduce entries left of the pivot into [0, pivot).
    for (std::size_t k = 0; k < c; ++k) {
      Integer q;
      mpz_fdiv_q(q.get_mpz_t(), h(r, k).get_mpz_t(), h(r, c).get_mpz_t());
      if (q == 0) continue;
      for (std::size_t i = 0; i < h.rows(); ++i) h(i, k) -= q * h(i, c);
      for (std::size_t i = 0; i < u.rows(); ++i) u(i, k) -= q * u(i, c);
    }
    pivots.push_back(r);
    ++c;
  }
  return {std::move(h), std::move(u), std::move(pivots)};
}

std::vector<Integer> smith_invariants(const IntMatrix& a) {
  IntMatrix m = a;
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  std::vector<Integer> diag;
  for (std::size_t t = 0; t < std::min(rows, cols); ++t) {
    // Pivot: smallest nonzero absolute value in the remaining block.
    while (true) {
      std::size_t pi = rows;
      std::size_t pj = cols;
      for (std::size_t i = t; i < rows; ++i)
        for (std::size_t j = t; j < cols; ++j)
          if (m(i, j) != 0 && (pi == rows || abs(m(i, j)) < abs(m(pi, pj)))) {
            pi = i;
            pj = j;
          }
      if (pi == rows) break;
      for (std::size_t j = 0; j < cols; ++j) std::swap(m(t, j), m(pi, j));
      swap_columns(m, t, pj);
      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        Integer q = m(i, t) / m(t, t);
        if (q != 0)
          for (std::size_t j = t; j < cols; ++j) m(i, j) -= q * m(t, j);
        if (m(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        Integer q = m(t, j) / m(t, t);
        if (q != 0)
          for (std::size_t i = t; i < rows; ++i) m(i, j) -= q * m(i, t);
        if (m(t, j) != 0) clean = false;
      }
      if (!clean) continue;
      // Divisibility: fold any offending row into row t and retry.
      bool divides = true;
      for (std::size_t i = t + 1; i < rows && divides; ++i)
        for (std::size_t j = t + 1; j < cols; ++j)
          if (m(i, j) % m(t, t) != 0) {
            for (std::size_t k = t; k < cols; ++k) m(t, k) += m(i, k);
            divides = false;
            break;
          }
      if (divides) break;
    }
    if (m(t, t) == 0) break;
    diag.push_back(abs(m(t, t)));
  }
  return diag;
}

std::optional<IntVector> solve(const IntMatrix& a, const IntVector& b) {
  if (b.size() != a.rows()) throw DomainError("right-hand side length does not match the matrix");
  ColumnHermite ch = column_hermite(a);
  IntVector y(a.cols());
  for (std::size_t k = 0; k < ch.pivot_rows.size(); ++k) {
    std::size_t r = ch.pivot_rows[k];
    Integer rest = b[r];
    for (std::size_t j = 0; j < k; ++j) rest -= ch.h(r, j) * y[j];
    if (rest % ch.h(r, k) != 0) return std::nullopt;
    y[k] = rest / ch.h(r, k);
  }
  if (ch.h * y != b) return std::nullopt;
  IntVector x = ch.u * y;
  if (a * x != b) throw DomainError("internal error: Diophantine witness failed verification");
  return x;
}

DiophantineSystem DiophantineSystem::parse(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::vector<Integer>> rows;
  IntVector b;
  int section = 0;
  bool have_b = false;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tok;
    std::vector<Integer> values;
    while (ls >> tok) {
      if (tok == "A:") {
        section = 1;
        continue;
      }
      if (tok == "b:") {
        section = 2;
        have_b = true;
        continue;
      }
      Integer v;
      if (v.set_str(tok, 10) != 0) throw FormatError("bad integer '" + tok + "'");
      values.push_back(v);
    }
    if (values.empty()) continue;
    if (section == 1) {
      rows.push_back(std::move(values));
    } else if (section == 2) {
      b.insert(b.end(), values.begin(), values.end());
    } else {
      throw FormatError("numbers before the 'A:' header");
    }
  }
  if (!have_b) throw FormatError("system lacks a 'b:' line");
  std::size_t cols = rows.empty() ? 0 : rows.front().size();
  IntMatrix a(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw FormatError("ragged rows in 'A:' block");
    for (std::size_t j = 0; j < cols; ++j) a(i, j) = rows[i][j];
  }
  if (b.size() != rows.size()) throw FormatError("'b:' length does not match the number of rows");
  return {std::move(a), std::move(b)};
}

std::string format_vector(const IntVector& v) {
  std::ostringstream out;
  for (std::size_t i = 0; i < v.size(); ++i) out << (i ? " " : "") << v[i];
  return out.str();
}

}  // namespace torusconj
