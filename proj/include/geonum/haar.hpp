#ifndef GEONUM_HAAR_HPP
#define GEONUM_HAAR_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "geonum/error.hpp"
#include "geonum/lattice.hpp"
#include "geonum/random.hpp"

namespace geonum {

/// A unimodular planar lattice drawn from the Haar probability measure:
/// point tau = x + iy of the modular fundamental domain plus a rotation.
struct HaarSample2D {
  double x;
  double y;
  double rotation;
  Lattice lattice;
};

/// Exact inverse-CDF sampler. On the fundamental domain {|x| <= 1/2,
/// x^2 + y^2 >= 1} the Haar measure has density (3/pi) dx dy / y^2. Its x
/// marginal is (3/pi) / sqrt(1 - x^2), uniform in phi = asin(x); given x,
/// y = sqrt(1 - x^2) / (1 - u) has the conditional 1/y^2 tail. The lattice is
/// spanned by rot * (1, 0) / sqrt(y) and rot * (x, y) / sqrt(y).
inline HaarSample2D sample_unimodular_2d(std::uint64_t seed) {
  Rng rng(seed);
  const double phi = rng.uniform(-std::numbers::pi / 6.0, std::numbers::pi / 6.0);
  const double u = rng.uniform();
  const double rotation = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const double x = std::sin(phi);
  const double y = std::sqrt(1.0 - x * x) / (1.0 - u);
  const double s = 1.0 / std::sqrt(y);
  const double c = std::cos(rotation);
  const double n = std::sin(rotation);
  Matrix basis(2, 2);
  basis(0, 0) = c * s;
  basis(1, 0) = n * s;
  basis(0, 1) = (c * x - n * y) * s;
  basis(1, 1) = (n * x + c * y) * s;
  return HaarSample2D{x, y, rotation, Lattice::from_columns(std::move(basis))};
}

/// Sample `index` of the batch seeded by `seed`; independent of batch layout.
inline HaarSample2D sample_unimodular_2d(std::uint64_t seed, std::uint64_t index) {
  return sample_unimodular_2d(derive_seed(seed, index));
}

/// Rescales the basis so that the determinant becomes target_det.
inline Lattice scale_lattice(const Lattice& lattice, double target_det) {
  if (!(target_det > 0.0) || !std::isfinite(target_det)) {
    fail(ErrorKind::InvalidArgument, "target determinant must be positive");
  }
  const double factor = std::pow(target_det / lattice.det(), 1.0 / lattice.dim());
  return Lattice::from_columns(lattice.basis() * factor);
}

/// The lattice spanned by c times the basis.
inline Lattice dilate_lattice(const Lattice& lattice, double c) {
  return Lattice::from_columns(lattice.basis() * c);
}

}  // namespace geonum

#endif  // GEONUM_HAAR_HPP
