#ifndef GEONUM_INTEGER_HPP
#define GEONUM_INTEGER_HPP

#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <span>
#include <vector>

#include "geonum/error.hpp"

namespace geonum {

using Int = std::int64_t;
using Wide = __int128;

/// gcd of |c_1|, ..., |c_d|; zero only for the zero vector.
inline Int coefficient_gcd(std::span<const Int> coeffs) noexcept {
  Int g = 0;
  for (Int c : coeffs) g = std::gcd(g, c);
  return g;
}

inline Wide wide_abs(Wide v) noexcept { return v < 0 ? -v : v; }

inline Wide wide_gcd(Wide a, Wide b) noexcept {
  a = wide_abs(a);
  b = wide_abs(b);
  while (b != 0) {
    const Wide t = a % b;
    a = b;
    b = t;
  }
  return a;
}

/// Exact determinant of a small integer matrix (row-major, n*n) by
/// fraction-free Bareiss elimination.
inline Wide integer_determinant(std::vector<Wide> m, std::size_t n) {
  Wide sign = 1;
  Wide prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k * n + k] == 0) {
      std::size_t swap = k + 1;
      while (swap < n && m[swap * n + k] == 0) ++swap;
      if (swap == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(m[k * n + j], m[swap * n + j]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        m[i * n + j] = (m[i * n + j] * m[k * n + k] - m[i * n + k] * m[k * n + j]) / prev;
      }
    }
    prev = m[k * n + k];
  }
  return sign * m[(n - 1) * n + (n - 1)];
}

/// Determinant of d integer coefficient vectors of length d.
inline Wide coefficient_determinant(std::span<const std::vector<Int>> columns) {
  const std::size_t n = columns.size();
  std::vector<Wide> m(n * n);
  for (std::size_t j = 0; j < n; ++j) {
    if (columns[j].size() != n) fail(ErrorKind::DimensionMismatch, "coefficient_determinant: ragged input");
    for (std::size_t i = 0; i < n; ++i) m[i * n + j] = columns[j][i];
  }
  return integer_determinant(std::move(m), n);
}

/// Rational span of a growing set of integer vectors, kept in fraction-free
/// echelon form. Independence queries are exact.
class IntegerSpan {
 public:
  explicit IntegerSpan(std::size_t dim) : dim_(dim) {}

  std::size_t dim() const noexcept { return dim_; }
  std::size_t rank() const noexcept { return rows_.size(); }

  bool contains(std::span<const Int> v) const {
    thread_local std::vector<Wide> work;
    reduce(v, work);
    for (Wide x : work) {
      if (x != 0) return false;
    }
    return true;
  }

  /// Adds v; returns false (and leaves the span unchanged) if v is dependent.
  bool insert(std::span<const Int> v) {
    std::vector<Wide> work;
    reduce(v, work);
    std::size_t pivot = dim_;
    for (std::size_t i = 0; i < dim_; ++i) {
      if (work[i] != 0) {
        pivot = i;
        break;
      }
    }
    if (pivot == dim_) return false;
    normalize(work);
    rows_.push_back(Row{pivot, std::move(work)});
    return true;
  }

 private:
  static constexpr Wide kRenormalize = Wide(1) << 60;

  struct Row {
    std::size_t pivot;
    std::vector<Wide> entries;
  };

  void reduce(std::span<const Int> v, std::vector<Wide>& work) const {
    if (v.size() != dim_) fail(ErrorKind::DimensionMismatch, "IntegerSpan: vector length");
    work.assign(v.begin(), v.end());
    for (const Row& row : rows_) {
      const Wide a = work[row.pivot];
      if (a == 0) continue;
      const Wide p = row.entries[row.pivot];
      bool large = false;
      for (std::size_t i = 0; i < dim_; ++i) {
        work[i] = work[i] * p - a * row.entries[i];
        large = large || wide_abs(work[i]) > kRenormalize;
      }
      if (large) normalize(work);
    }
  }

  static void normalize(std::vector<Wide>& v) noexcept {
    Wide g = 0;
    for (Wide x : v) g = wide_gcd(g, x);
    if (g > 1) {
      for (Wide& x : v) x /= g;
    }
  }

  std::size_t dim_;
  std::vector<Row> rows_;
};

}  // namespace geonum

#endif  // GEONUM_INTEGER_HPP
