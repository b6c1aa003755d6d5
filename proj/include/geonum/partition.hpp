#ifndef GEONUM_PARTITION_HPP
#define GEONUM_PARTITION_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include "geonum/error.hpp"
#include "geonum/lattice.hpp"
#include "geonum/random.hpp"

namespace geonum {

struct WeightedPoint {
  double x;
  double y;
  double w = 1.0;
};

/// Two orthogonal lines through `center`, at angles `angle` and
/// angle + pi/2, splitting a planar mass into four parts.
///
/// Quadrants are numbered 1..4 counterclockwise by the signs of the rotated
/// coordinates (a, b) relative to the center: 1 = (+,+), 2 = (-,+),
/// 3 = (-,-), 4 = (+,-). A coordinate that is exactly zero counts as positive.
struct Partition2D {
  std::array<double, 2> center{0.0, 0.0};
  double angle = 0.0;
  std::array<double, 4> masses{0.0, 0.0, 0.0, 0.0};
  double total = 0.0;

  /// Rotated coordinates of p relative to the center.
  std::array<double, 2> local(double x, double y) const noexcept {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    const double dx = x - center[0];
    const double dy = y - center[1];
    return {c * dx + s * dy, -s * dx + c * dy};
  }
};

inline int quadrant_from_signs(double a, double b) noexcept {
  const bool pa = a >= 0.0;
  const bool pb = b >= 0.0;
  if (pa && pb) return 1;
  if (!pa && pb) return 2;
  if (!pa && !pb) return 3;
  return 4;
}

inline int quadrant_of(const Partition2D& partition, double x, double y) noexcept {
  const auto [a, b] = partition.local(x, y);
  return quadrant_from_signs(a, b);
}

inline int quadrant_of(const Partition2D& partition, std::span<const double> x) noexcept {
  return quadrant_of(partition, x[0], x[1]);
}

namespace detail {

/// Position of a line orthogonal to the projection axis that halves the mass.
/// With an even split available the line sits midway between the two
/// neighbouring projections, so no sample point lies on it.
inline double weighted_median(std::vector<std::pair<double, double>>& proj, double total, bool unit_weights) {
  const std::size_t n = proj.size();
  if (unit_weights && n % 2 == 0) {
    auto mid = proj.begin() + static_cast<std::ptrdiff_t>(n / 2);
    std::nth_element(proj.begin(), mid, proj.end());
    const double upper = mid->first;
    const double lower = std::max_element(proj.begin(), mid)->first;
    return 0.5 * (lower + upper);
  }
  std::sort(proj.begin(), proj.end());
  double cum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    cum += proj[k].second;
    if (cum >= 0.5 * total) {
      if (cum == 0.5 * total && k + 1 < n) return 0.5 * (proj[k].first + proj[k + 1].first);
      return proj[k].first;
    }
  }
  return proj.back().first;
}

struct Split {
  std::array<double, 2> center;
  std::array<double, 4> masses;
};

inline Split split_at(std::span<const WeightedPoint> pts, double theta, double total, bool unit_weights) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  std::vector<std::pair<double, double>> pa(pts.size());
  std::vector<std::pair<double, double>> pb(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    pa[i] = {c * pts[i].x + s * pts[i].y, pts[i].w};
    pb[i] = {-s * pts[i].x + c * pts[i].y, pts[i].w};
  }
  const double ma = weighted_median(pa, total, unit_weights);
  const double mb = weighted_median(pb, total, unit_weights);
  Split out{{c * ma - s * mb, s * ma + c * mb}, {0.0, 0.0, 0.0, 0.0}};
  for (const auto& p : pts) {
    const double a = c * p.x + s * p.y - ma;
    const double b = -s * p.x + c * p.y - mb;
    out.masses[quadrant_from_signs(a, b) - 1] += p.w;
  }
  return out;
}

}  // namespace detail

/// Equipartition of a planar weighted sample by two orthogonal lines.
///
/// For every angle theta the lines at theta and theta + pi/2 are placed at
/// weighted medians, which makes opposite quadrants equal: m1 = m3 and
/// m2 = m4. g(theta) = m1 - m4 then satisfies g(theta + pi/2) = -g(theta),
/// so g changes sign on [0, pi/2] and bisection finds an angle where all four
/// masses agree up to the weight of the points crossing a line.
inline Partition2D two_line_equipartition(std::span<const WeightedPoint> points, double tol) {
  if (points.size() < 4) fail(ErrorKind::InvalidArgument, "equipartition needs at least 4 points");
  if (!(tol > 0.0)) fail(ErrorKind::InvalidArgument, "equipartition tolerance must be positive");
  double total = 0.0;
  bool unit = true;
  for (const auto& p : points) {
    if (!(p.w >= 0.0) || !std::isfinite(p.x) || !std::isfinite(p.y)) {
      fail(ErrorKind::InvalidArgument, "weights must be nonnegative, coordinates finite");
    }
    total += p.w;
    unit = unit && p.w == 1.0;
  }
  if (!(total > 0.0)) fail(ErrorKind::InvalidArgument, "total weight must be positive");
  {
    std::vector<WeightedPoint> sorted(points.begin(), points.end());
    std::sort(sorted.begin(), sorted.end(),
              [](const auto& a, const auto& b) { return a.x != b.x ? a.x < b.x : a.y < b.y; });
    double run = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      run = (i > 0 && sorted[i].x == sorted[i - 1].x && sorted[i].y == sorted[i - 1].y) ? run + sorted[i].w
                                                                                          : sorted[i].w;
      if (run > 0.5 * total) fail(ErrorKind::DegenerateMass, "more than half of the mass sits on one point");
    }
  }

  auto g_of = [](const detail::Split& s) { return s.masses[0] - s.masses[3]; };
  auto deviation = [&](const detail::Split& s) {
    double dev = 0.0;
    for (double m : s.masses) dev = std::max(dev, std::abs(m - 0.25 * total));
    return dev;
  };

  double best_theta = 0.0;
  detail::Split best = detail::split_at(points, 0.0, total, unit);
  double best_dev = deviation(best);
  auto consider = [&](double theta, const detail::Split& s) {
    const double dev = deviation(s);
    if (dev < best_dev) {
      best_dev = dev;
      best = s;
      best_theta = theta;
    }
  };

  double lo = 0.0;
  double g_lo = g_of(best);
  if (g_lo != 0.0) {
    // Bracket a sign change: g(pi/2) = -g(0) in exact arithmetic, but scan a
    // coarse grid first so that atoms on the lines cannot hide it.
    constexpr int kScan = 16;
    double hi = std::numbers::pi / 2.0;
    for (int k = 1; k <= kScan; ++k) {
      const double theta = std::numbers::pi / 2.0 * k / kScan;
      const detail::Split s = detail::split_at(points, theta, total, unit);
      consider(theta, s);
      const double g = g_of(s);
      if (g == 0.0 || (g > 0.0) != (g_lo > 0.0)) {
        hi = theta;
        break;
      }
      lo = theta;
      g_lo = g;
    }
    for (int iter = 0; iter < 64 && hi - lo > 1e-15; ++iter) {
      const double mid = 0.5 * (lo + hi);
      const detail::Split s = detail::split_at(points, mid, total, unit);
      consider(mid, s);
      const double g = g_of(s);
      if (g == 0.0) break;
      if ((g > 0.0) == (g_lo > 0.0)) {
        lo = mid;
        g_lo = g;
      } else {
        hi = mid;
      }
    }
  }
  if (best_dev > tol) {
    fail(ErrorKind::NoConvergence, "best equipartition deviates by " + std::to_string(best_dev) +
                                       " from a quarter, tolerance " + std::to_string(tol));
  }
  Partition2D out;
  out.center = best.center;
  out.angle = best_theta;
  out.masses = best.masses;
  out.total = total;
  return out;
}

/// Result of probing a partition with random affine lines.
struct TransversalReport {
  std::uint64_t lines = 0;
  int max_quadrants = 0;
  /// histogram[k] = number of lines meeting exactly k open quadrants.
  std::array<std::uint64_t, 5> histogram{0, 0, 0, 0, 0};
};

/// Number of open quadrants met by the line {(a0, b0) + t (da, db)} given in
/// the partition's local coordinates.
inline int open_quadrants_met(double a0, double b0, double da, double db) noexcept {
  int met = 0;
  for (double sa : {1.0, -1.0}) {
    for (double sb : {1.0, -1.0}) {
      double lo = -std::numeric_limits<double>::infinity();
      double hi = std::numeric_limits<double>::infinity();
      bool empty = false;
      auto constrain = [&](double s, double x0, double dx) {
        if (dx == 0.0) {
          empty = empty || !(s * x0 > 0.0);
          return;
        }
        const double root = -x0 / dx;
        if (s * dx > 0.0) {
          lo = std::max(lo, root);
        } else {
          hi = std::min(hi, root);
        }
      };
      constrain(sa, a0, da);
      constrain(sb, b0, db);
      if (!empty && lo < hi) ++met;
    }
  }
  return met;
}

/// Samples random affine lines and counts the open quadrants each meets.
/// Every tenth line passes through the center and every tenth (offset by
/// one) is parallel to a partition line; the rest have a random offset up to
/// 2 * scale from the center and a random direction.
inline TransversalReport transversal_check(const Partition2D& partition, std::uint64_t lines, std::uint64_t seed,
                                           double scale = 1.0) {
  if (lines < 1) fail(ErrorKind::InvalidArgument, "transversal_check needs at least one line");
  Rng rng(seed);
  TransversalReport report;
  report.lines = lines;
  for (std::uint64_t k = 0; k < lines; ++k) {
    const double beta = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double r = 2.0 * scale * rng.uniform();
    const double alpha = rng.uniform(0.0, 2.0 * std::numbers::pi);
    double a0;
    double b0;
    double da;
    double db;
    if (k % 10 == 0) {
      a0 = 0.0;
      b0 = 0.0;
      da = std::cos(beta);
      db = std::sin(beta);
    } else if (k % 10 == 1) {
      a0 = r * std::cos(alpha);
      b0 = r * std::sin(alpha);
      da = (k / 10) % 2 == 0 ? 1.0 : 0.0;
      db = 1.0 - da;
    } else {
      const auto local = partition.local(partition.center[0] + r * std::cos(alpha),
                                         partition.center[1] + r * std::sin(alpha));
      a0 = local[0];
      b0 = local[1];
      const double c = std::cos(partition.angle);
      const double s = std::sin(partition.angle);
      da = c * std::cos(beta) + s * std::sin(beta);
      db = -s * std::cos(beta) + c * std::sin(beta);
    }
    const int met = open_quadrants_met(a0, b0, da, db);
    ++report.histogram[met];
    report.max_quadrants = std::max(report.max_quadrants, met);
  }
  return report;
}

}  // namespace geonum

#endif  // GEONUM_PARTITION_HPP
