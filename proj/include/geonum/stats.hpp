#ifndef GEONUM_STATS_HPP
#define GEONUM_STATS_HPP

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include "geonum/error.hpp"

namespace geonum {

/// Riemann zeta at an integer d >= 2.
inline double zeta(int d) {
  if (d < 2) fail(ErrorKind::InvalidArgument, "zeta(d) needs d >= 2");
  if (d == 2) return std::numbers::pi * std::numbers::pi / 6.0;
  return std::riemann_zeta(static_cast<double>(d));
}

struct Summary {
  std::size_t count = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  double stderr_mean = 0.0;
};

/// Two-pass mean/variance in index order (order-fixed for reproducibility).
inline Summary summarize(std::span<const double> xs) {
  Summary s;
  s.count = xs.size();
  if (xs.empty()) return s;
  double sum = 0.0;
  for (double x : xs) sum += x;
  s.mean = sum / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.variance = ss / static_cast<double>(xs.size() - 1);
    s.stderr_mean = std::sqrt(s.variance / static_cast<double>(xs.size()));
  }
  return s;
}

struct Interval {
  double lo;
  double hi;
};

/// Wilson score interval for a binomial proportion.
inline Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = 1.96) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double centre = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

struct ChiSquareResult {
  double statistic;
  int dof;
  double p_value;
  double critical;  // at the requested level
};

/// Pearson chi-square test of counts against the uniform distribution.
inline ChiSquareResult chi_square_uniform(std::span<const std::uint64_t> counts, double level = 0.001) {
  if (counts.size() < 2) fail(ErrorKind::InvalidArgument, "chi-square needs at least two bins");
  double total = 0.0;
  for (auto c : counts) total += static_cast<double>(c);
  const double expected = total / static_cast<double>(counts.size());
  double stat = 0.0;
  for (auto c : counts) stat += (static_cast<double>(c) - expected) * (static_cast<double>(c) - expected) / expected;
  const int dof = static_cast<int>(counts.size()) - 1;
  boost::math::chi_squared dist(dof);
  return ChiSquareResult{stat, dof, boost::math::cdf(boost::math::complement(dist, stat)),
                         boost::math::quantile(boost::math::complement(dist, level))};
}

inline double median(std::vector<double> xs) {
  if (xs.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  return n % 2 == 1 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

}  // namespace geonum

#endif  // GEONUM_STATS_HPP
