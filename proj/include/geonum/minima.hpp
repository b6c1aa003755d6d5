#ifndef GEONUM_MINIMA_HPP
#define GEONUM_MINIMA_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "geonum/enumerate.hpp"
#include "geonum/error.hpp"
#include "geonum/integer.hpp"
#include "geonum/lattice.hpp"
#include "geonum/star_body.hpp"

namespace geonum {

/// Successive minima lambda_1..lambda_d together with the points realizing
/// the greedy choice. Values past `attained()` are +inf.
struct MinimaResult {
  std::vector<double> values;
  std::vector<LatticePoint> witnesses;
  bool exact = false;
  /// Fewer than d independent points were found within the search radius.
  bool rank_deficit = false;
  /// Euclidean radius of the final search ball.
  double search_radius = 0.0;

  int attained() const noexcept { return static_cast<int>(witnesses.size()); }
};

struct MinimaOptions {
  std::uint64_t point_cap = kDefaultPointCap;
  int sphere_resolution = kDefaultSphereResolution;
  /// Reuse a floor computed earlier for the same body.
  std::optional<BoundednessCertificate> certificate;
};

/// Safety factor applied to the sampled floor, which may overestimate the
/// true minimum of f on the sphere.
inline constexpr double kFloorSafety = 0.999;

namespace detail {

/// Greedy order: smaller f first; equal f values are ordered by coefficients,
/// lexicographically larger first.
inline bool greedy_precedes(double fa, std::span<const Int> a, double fb, std::span<const Int> b) {
  if (fa != fb) return fa < fb;
  return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

inline MinimaResult greedy_scan(int d, std::vector<std::pair<double, LatticePoint>> scored) {
  std::sort(scored.begin(), scored.end(), [](const auto& x, const auto& y) {
    return greedy_precedes(x.first, x.second.coeffs, y.first, y.second.coeffs);
  });
  MinimaResult result;
  IntegerSpan span(static_cast<std::size_t>(d));
  for (auto& [value, point] : scored) {
    if (span.insert(point.coeffs)) {
      result.values.push_back(value);
      result.witnesses.push_back(std::move(point));
      if (static_cast<int>(span.rank()) == d) break;
    }
  }
  result.rank_deficit = result.attained() < d;
  result.values.resize(d, std::numeric_limits<double>::infinity());
  return result;
}

}  // namespace detail

/// Exact successive minima of a bounded star body.
///
/// Searches balls of radius R = d(L)^{1/d} / floor, 2R, 4R, ... and stops as
/// soon as the greedy rank scan inside the ball yields d independent points
/// with lambda_d <= floor * R: every point with f <= lambda_d then lies in
/// the ball, so the greedy values are the true minima.
inline MinimaResult successive_minima_exact(const DistanceFunction& f, const Lattice& lattice,
                                            const MinimaOptions& options = {}) {
  if (f.dim() != lattice.dim()) fail(ErrorKind::DimensionMismatch, "body and lattice dimensions differ");
  const BoundednessCertificate cert =
      options.certificate ? *options.certificate : boundedness_floor(f, options.sphere_resolution);
  if (!cert.bounded) fail(ErrorKind::UnboundedBody, "exact minima need a bounded body, got " + f.label());
  const double floor = cert.floor * kFloorSafety;
  const int d = lattice.dim();
  const BallEnumerator enumerator(lattice, options.point_cap);
  double radius = std::pow(lattice.det(), 1.0 / d) / floor;
  while (true) {
    std::vector<std::pair<double, LatticePoint>> scored;
    enumerator.for_each(radius, [&](const PointView& p) {
      if (p.is_origin()) return;
      LatticePoint lp{Eigen::Map<const Vector>(p.coords.data(), d), {p.coeffs.begin(), p.coeffs.end()}};
      scored.emplace_back(f(p.coords), std::move(lp));
    });
    MinimaResult result = detail::greedy_scan(d, std::move(scored));
    if (!result.rank_deficit && result.values.back() <= floor * radius) {
      result.exact = true;
      result.search_radius = radius;
      return result;
    }
    radius *= 2.0;
  }
}

/// Greedy minima over the lattice points of norm at most radius_budget.
///
/// By the exchange property of linear independence the i-th greedy value is
/// the smallest max{f(l_1),...,f(l_i)} over independent l_1..l_i inside the
/// ball, so the values are upper bounds on the true minima and never increase
/// when the budget grows. Runs one streaming pass per minimum; nothing is
/// materialized, so large budgets only cost time.
inline MinimaResult minima_upper_bound(const DistanceFunction& f, const Lattice& lattice, double radius_budget,
                                       const MinimaOptions& options = {}) {
  if (f.dim() != lattice.dim()) fail(ErrorKind::DimensionMismatch, "body and lattice dimensions differ");
  if (!(radius_budget > 0.0)) fail(ErrorKind::InvalidArgument, "radius budget must be positive");
  const int d = lattice.dim();
  const BallEnumerator enumerator(lattice, options.point_cap);
  MinimaResult result;
  result.search_radius = radius_budget;
  IntegerSpan span(static_cast<std::size_t>(d));
  std::vector<Int> best_coeffs(d);
  Vector best_coords(d);
  for (int i = 0; i < d; ++i) {
    bool found = false;
    double best = std::numeric_limits<double>::infinity();
    enumerator.for_each(radius_budget, [&](const PointView& p) {
      if (p.is_origin()) return;
      const double v = f(p.coords);
      if (found && !detail::greedy_precedes(v, p.coeffs, best, best_coeffs)) return;
      if (span.contains(p.coeffs)) return;
      found = true;
      best = v;
      std::copy(p.coeffs.begin(), p.coeffs.end(), best_coeffs.begin());
      for (int k = 0; k < d; ++k) best_coords[k] = p.coords[k];
    });
    if (!found) break;
    span.insert(best_coeffs);
    result.values.push_back(best);
    result.witnesses.push_back(LatticePoint{best_coords, best_coeffs});
  }
  result.rank_deficit = result.attained() < d;
  result.values.resize(d, std::numeric_limits<double>::infinity());
  return result;
}

/// |det| of the witness coordinate matrix (zero unless all d were attained).
inline double witness_volume(const MinimaResult& result) {
  const int d = static_cast<int>(result.values.size());
  if (result.attained() < d) return 0.0;
  Matrix m(d, d);
  for (int j = 0; j < d; ++j) m.col(j) = result.witnesses[j].coords;
  return std::abs(m.determinant());
}

}  // namespace geonum

#endif  // GEONUM_MINIMA_HPP
