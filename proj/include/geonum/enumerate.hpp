#ifndef GEONUM_ENUMERATE_HPP
#define GEONUM_ENUMERATE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "geonum/error.hpp"
#include "geonum/lattice.hpp"
#include "geonum/reduce.hpp"

namespace geonum {

inline constexpr std::uint64_t kDefaultPointCap = 100'000'000;

/// Relative inflation applied to every coefficient interval so that rounding
/// in the orthogonalization can never drop a point; candidates are then
/// checked exactly against the radius.
inline constexpr double kIntervalInflation = 1e-9;

/// Borrowed view of one enumerated point, valid only inside the visitor call.
struct PointView {
  std::span<const Int> coeffs;
  std::span<const double> coords;
  double norm_sq;

  bool is_origin() const noexcept {
    return std::all_of(coeffs.begin(), coeffs.end(), [](Int c) { return c == 0; });
  }
};

/// Enumerates lattice points in Euclidean balls centred at the origin.
///
/// The basis is reduced once (Gauss in the plane, LLL above) and the search
/// runs depth-first over the Gram-Schmidt coefficient intervals of the
/// reduced basis, from the last coordinate down. Coefficients handed to the
/// visitor are always expressed in the lattice's own basis, and coordinates
/// are recomputed from that basis.
class BallEnumerator {
 public:
  explicit BallEnumerator(const Lattice& lattice, std::uint64_t cap = kDefaultPointCap)
      : lattice_(lattice), cap_(cap), reduced_(reduce_basis(lattice)) {
    const int d = lattice.dim();
    const Matrix& b = reduced_.reduced;
    Matrix star = b;
    mu_ = Matrix::Zero(d, d);
    star_sq_.resize(d);
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < i; ++j) {
        mu_(i, j) = b.col(i).dot(star.col(j)) / star_sq_[j];
        star.col(i) -= mu_(i, j) * star.col(j);
      }
      star_sq_[i] = star.col(i).squaredNorm();
    }
  }

  const Lattice& lattice() const noexcept { return lattice_; }
  std::uint64_t cap() const noexcept { return cap_; }

  /// Upper estimate of the number of candidates the search will visit.
  double predicted_count(double radius) const {
    double count = 1.0;
    for (double s : star_sq_) count *= 2.0 * radius / std::sqrt(s) * (1.0 + kIntervalInflation) + 1.0;
    return count;
  }

  /// Calls visit(PointView) for every lattice point x with ||x|| <= radius,
  /// origin included. Visiting order is deterministic but unspecified.
  template <class Visitor>
  void for_each(double radius, Visitor&& visit) const {
    if (!(radius > 0.0) || !std::isfinite(radius)) {
      fail(ErrorKind::InvalidArgument, "enumeration radius must be a positive finite number");
    }
    const double predicted = predicted_count(radius);
    if (predicted > static_cast<double>(cap_)) {
      fail(ErrorKind::BudgetExceeded, "ball of radius " + std::to_string(radius) + " needs about " +
                                          std::to_string(predicted) + " candidates, cap is " + std::to_string(cap_));
    }
    const int d = lattice_.dim();
    const Matrix& basis = lattice_.basis();
    const auto& transform = reduced_.transform;
    const double radius_sq = radius * radius;
    const double search_sq = radius_sq * (1.0 + 2.0 * kIntervalInflation);

    std::vector<Int> c(d, 0);
    std::vector<Int> hi(d, 0);
    std::vector<double> center(d, 0.0);
    std::vector<double> partial(d + 1, 0.0);
    std::vector<Int> coeffs(d, 0);
    std::vector<double> coords(d, 0.0);
    std::uint64_t visited = 0;

    // Sets c[j] to the low end of level j's interval, hi[j] to the high end.
    auto open_level = [&](int j) {
      double ctr = 0.0;
      for (int k = j + 1; k < d; ++k) ctr -= mu_(k, j) * static_cast<double>(c[k]);
      center[j] = ctr;
      const double rem = search_sq - partial[j + 1];
      if (rem < 0.0) {
        c[j] = 1;
        hi[j] = 0;
        return;
      }
      const double half = std::sqrt(rem / star_sq_[j]) * (1.0 + kIntervalInflation) +
                          kIntervalInflation * (1.0 + std::abs(ctr));
      c[j] = static_cast<Int>(std::ceil(ctr - half));
      hi[j] = static_cast<Int>(std::floor(ctr + half));
    };

    int j = d - 1;
    open_level(j);
    while (true) {
      if (c[j] > hi[j]) {
        ++j;
        if (j == d) break;
        ++c[j];
        continue;
      }
      if (j > 0) {
        const double t = static_cast<double>(c[j]) - center[j];
        partial[j] = partial[j + 1] + star_sq_[j] * t * t;
        --j;
        open_level(j);
        continue;
      }
      if (++visited > cap_) fail(ErrorKind::BudgetExceeded, "enumeration visited more candidates than the cap");
      for (int r = 0; r < d; ++r) {
        Int sum = 0;
        for (int k = 0; k < d; ++k) sum += transform(r, k) * c[k];
        coeffs[r] = sum;
      }
      double norm_sq = 0.0;
      for (int r = 0; r < d; ++r) {
        double x = 0.0;
        for (int k = 0; k < d; ++k) x += basis(r, k) * static_cast<double>(coeffs[k]);
        coords[r] = x;
        norm_sq += x * x;
      }
      if (norm_sq <= radius_sq) visit(PointView{coeffs, coords, norm_sq});
      ++c[0];
    }
  }

  /// All points with ||x|| <= radius, origin included, sorted
  /// lexicographically by coefficients.
  std::vector<LatticePoint> collect(double radius) const {
    std::vector<LatticePoint> out;
    for_each(radius, [&](const PointView& p) {
      LatticePoint lp;
      lp.coeffs.assign(p.coeffs.begin(), p.coeffs.end());
      lp.coords = Eigen::Map<const Vector>(p.coords.data(), static_cast<Eigen::Index>(p.coords.size()));
      out.push_back(std::move(lp));
    });
    std::sort(out.begin(), out.end(),
              [](const LatticePoint& a, const LatticePoint& b) { return a.coeffs < b.coeffs; });
    return out;
  }

 private:
  Lattice lattice_;
  std::uint64_t cap_;
  ReducedBasis reduced_;
  Matrix mu_;
  std::vector<double> star_sq_;
};

/// Exactly the lattice points of norm at most radius, origin included, in
/// lexicographic coefficient order.
inline std::vector<LatticePoint> enumerate_ball(const Lattice& lattice, double radius,
                                                std::uint64_t cap = kDefaultPointCap) {
  return BallEnumerator(lattice, cap).collect(radius);
}

}  // namespace geonum

#endif  // GEONUM_ENUMERATE_HPP
