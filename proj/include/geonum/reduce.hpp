#ifndef GEONUM_REDUCE_HPP
#define GEONUM_REDUCE_HPP

#include <cmath>
#include <utility>

#include "geonum/error.hpp"
#include "geonum/lattice.hpp"

namespace geonum {

/// Basis after reduction, with the unimodular transform that produced it:
/// reduced = original * transform.
struct ReducedBasis {
  Matrix reduced;
  Eigen::Matrix<Int, Eigen::Dynamic, Eigen::Dynamic> transform;
};

namespace detail {

inline Int checked_round(double value) {
  if (!(std::abs(value) < 0x1.0p52)) fail(ErrorKind::InvalidArgument, "basis too skewed to reduce in double precision");
  return static_cast<Int>(std::llround(value));
}

inline void gauss_reduce(ReducedBasis& rb) {
  Matrix& b = rb.reduced;
  for (int iter = 0; iter < 10000; ++iter) {
    if (b.col(0).squaredNorm() > b.col(1).squaredNorm()) {
      b.col(0).swap(b.col(1));
      rb.transform.col(0).swap(rb.transform.col(1));
    }
    const Int m = checked_round(b.col(0).dot(b.col(1)) / b.col(0).squaredNorm());
    if (m == 0) return;
    b.col(1) -= static_cast<double>(m) * b.col(0);
    rb.transform.col(1) -= m * rb.transform.col(0);
  }
}

/// Textbook LLL (delta = 0.99) with Gram-Schmidt recomputed per step; only
/// meant for the small dimensions handled here.
inline void lll_reduce(ReducedBasis& rb) {
  Matrix& b = rb.reduced;
  const int d = static_cast<int>(b.cols());
  auto gram_schmidt = [&](Matrix& star, Matrix& mu) {
    star = b;
    mu = Matrix::Zero(d, d);
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < i; ++j) {
        mu(i, j) = b.col(i).dot(star.col(j)) / star.col(j).squaredNorm();
        star.col(i) -= mu(i, j) * star.col(j);
      }
    }
  };
  Matrix star;
  Matrix mu;
  int k = 1;
  for (int iter = 0; iter < 100000 && k < d; ++iter) {
    gram_schmidt(star, mu);
    for (int j = k - 1; j >= 0; --j) {
      const Int m = checked_round(mu(k, j));
      if (m != 0) {
        b.col(k) -= static_cast<double>(m) * b.col(j);
        rb.transform.col(k) -= m * rb.transform.col(j);
        gram_schmidt(star, mu);
      }
    }
    if (star.col(k).squaredNorm() >= (0.99 - mu(k, k - 1) * mu(k, k - 1)) * star.col(k - 1).squaredNorm()) {
      ++k;
    } else {
      b.col(k).swap(b.col(k - 1));
      rb.transform.col(k).swap(rb.transform.col(k - 1));
      k = std::max(k - 1, 1);
    }
  }
}

}  // namespace detail

/// Gauss reduction in the plane, LLL above. Used to speed up enumeration;
/// the lattice itself is never modified.
inline ReducedBasis reduce_basis(const Lattice& lattice) {
  const int d = lattice.dim();
  ReducedBasis rb{lattice.basis(), Eigen::Matrix<Int, Eigen::Dynamic, Eigen::Dynamic>::Identity(d, d)};
  if (d == 2) {
    detail::gauss_reduce(rb);
  } else {
    detail::lll_reduce(rb);
  }
  return rb;
}

}  // namespace geonum

#endif  // GEONUM_REDUCE_HPP
