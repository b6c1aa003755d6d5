#ifndef GEONUM_COUNTING_HPP
#define GEONUM_COUNTING_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "geonum/enumerate.hpp"
#include "geonum/error.hpp"
#include "geonum/haar.hpp"
#include "geonum/minima.hpp"
#include "geonum/parallel.hpp"
#include "geonum/region.hpp"
#include "geonum/stats.hpp"

namespace geonum {

/// Number of primitive lattice points inside a bounded region.
inline std::uint64_t count_primitive(const BallEnumerator& enumerator, const Region& region) {
  if (!region.bounded()) fail(ErrorKind::InvalidArgument, "count_primitive needs a bounded region, got " + region.label());
  if (region.dim() != enumerator.lattice().dim()) fail(ErrorKind::DimensionMismatch, "region and lattice dimensions differ");
  std::uint64_t count = 0;
  enumerator.for_each(region.bounding_radius(), [&](const PointView& p) {
    if (coefficient_gcd(p.coeffs) == 1 && region.contains(p.coords)) ++count;
  });
  return count;
}

inline std::uint64_t count_primitive(const Lattice& lattice, const Region& region,
                                     std::uint64_t cap = kDefaultPointCap) {
  return count_primitive(BallEnumerator(lattice, cap), region);
}

/// Mean and second moment of the primitive count for one region.
struct RegionMoments {
  std::string region;
  double volume = 0.0;
  /// V(A) / zeta(d): the mean-value centring term.
  double centre = 0.0;
  Summary counts;
  /// Mean of (count - centre)^2 and the standard error of that mean.
  double second_moment = 0.0;
  double second_moment_stderr = 0.0;
  /// (sample mean - centre) / standard error.
  double mean_z = 0.0;
  double ratio_volume = 0.0;      // m2 / V
  double ratio_volume_log = 0.0;  // m2 / (V log2 V)
  std::vector<std::uint32_t> per_sample;
};

struct MomentReport {
  int dim = 2;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  std::vector<RegionMoments> regions;
  /// max/min of ratio_volume_log over the family.
  double log_ratio_spread = 0.0;
};

inline constexpr std::uint64_t kMinMomentSamples = 1000;
inline constexpr std::uint64_t kKeepCountsUpTo = 1'000'000;

/// Samples `samples` Haar lattices (index i uses derive_seed(seed, i), the
/// same lattices for every region) and reports the primitive-count moments
/// about V(A)/zeta(2) for each region.
inline MomentReport rogers_moment_report(std::span<const Region> regions, std::uint64_t samples,
                                         std::uint64_t seed, unsigned threads = 1) {
  if (regions.empty()) fail(ErrorKind::InvalidArgument, "rogers_moment_report needs at least one region");
  if (samples < kMinMomentSamples) fail(ErrorKind::InvalidArgument, "rogers_moment_report needs N >= 1000");
  double radius = 0.0;
  for (const Region& r : regions) {
    if (r.dim() != 2) fail(ErrorKind::InvalidArgument, "moment reports are planar (d = 2) only");
    if (!r.bounded() || !(r.area().value > 0.0)) fail(ErrorKind::InvalidArgument, "region must be bounded: " + r.label());
    radius = std::max(radius, r.bounding_radius());
  }
  const std::size_t m = regions.size();
  std::vector<std::uint32_t> counts(samples * m, 0);
  parallel_for_index(samples, threads, [&](std::size_t i) {
    const HaarSample2D s = sample_unimodular_2d(seed, i);
    BallEnumerator(s.lattice).for_each(radius, [&](const PointView& p) {
      if (coefficient_gcd(p.coeffs) != 1) return;
      for (std::size_t r = 0; r < m; ++r) {
        if (regions[r].contains(p.coords)) ++counts[i * m + r];
      }
    });
  });

  MomentReport report;
  report.samples = samples;
  report.seed = seed;
  const double z2 = zeta(2);
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (std::size_t r = 0; r < m; ++r) {
    RegionMoments rm;
    rm.region = regions[r].label();
    rm.volume = regions[r].area().value;
    rm.centre = rm.volume / z2;
    std::vector<double> xs(samples);
    std::vector<double> sq(samples);
    for (std::size_t i = 0; i < samples; ++i) {
      xs[i] = counts[i * m + r];
      sq[i] = (xs[i] - rm.centre) * (xs[i] - rm.centre);
    }
    rm.counts = summarize(xs);
    const Summary sqs = summarize(sq);
    rm.second_moment = sqs.mean;
    rm.second_moment_stderr = sqs.stderr_mean;
    rm.mean_z = rm.counts.stderr_mean > 0.0 ? (rm.counts.mean - rm.centre) / rm.counts.stderr_mean : 0.0;
    rm.ratio_volume = rm.second_moment / rm.volume;
    rm.ratio_volume_log = rm.second_moment / (rm.volume * std::log2(rm.volume));
    if (samples <= kKeepCountsUpTo) {
      rm.per_sample.resize(samples);
      for (std::size_t i = 0; i < samples; ++i) rm.per_sample[i] = counts[i * m + r];
    }
    lo = std::min(lo, rm.ratio_volume_log);
    hi = std::max(hi, rm.ratio_volume_log);
    report.regions.push_back(std::move(rm));
  }
  report.log_ratio_spread = hi / lo;
  return report;
}

/// Budgeted lambda_d of an unbounded planar body over Haar lattices.
struct Theorem2Report {
  std::string body;
  std::vector<double> budgets;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  /// lambda_hat_d[sample][budget]
  std::vector<std::vector<double>> lambda_d;
  std::vector<double> median;
  std::vector<double> thresholds{1.0, 0.5, 0.2};
  /// fraction_below[threshold][budget]
  std::vector<std::vector<double>> fraction_below;
  /// Lattices whose sequence ever increased with the budget (must be zero).
  std::uint64_t monotone_violations = 0;
};

inline Theorem2Report theorem2_experiment(const DistanceFunction& body, std::vector<double> budgets,
                                          std::uint64_t samples, std::uint64_t seed, unsigned threads = 1,
                                          std::uint64_t point_cap = kDefaultPointCap) {
  if (body.dim() != 2) fail(ErrorKind::InvalidArgument, "theorem2 experiment is planar (d = 2) only");
  if (budgets.empty()) fail(ErrorKind::InvalidArgument, "need at least one budget");
  for (std::size_t k = 0; k < budgets.size(); ++k) {
    if (!(budgets[k] > 0.0) || (k > 0 && !(budgets[k] > budgets[k - 1]))) {
      fail(ErrorKind::InvalidArgument, "budgets must be positive and strictly increasing");
    }
  }
  if (boundedness_floor(body).bounded) {
    fail(ErrorKind::InvalidArgument, "theorem2 experiment needs an unbounded body, got " + body.label());
  }
  Theorem2Report report;
  report.body = body.label();
  report.budgets = budgets;
  report.samples = samples;
  report.seed = seed;
  report.lambda_d.assign(samples, std::vector<double>(budgets.size()));
  MinimaOptions options;
  options.point_cap = point_cap;
  parallel_for_index(samples, threads, [&](std::size_t i) {
    const HaarSample2D s = sample_unimodular_2d(seed, i);
    for (std::size_t k = 0; k < budgets.size(); ++k) {
      report.lambda_d[i][k] = minima_upper_bound(body, s.lattice, budgets[k], options).values.back();
    }
  });
  for (const auto& seq : report.lambda_d) {
    for (std::size_t k = 1; k < seq.size(); ++k) {
      if (seq[k] > seq[k - 1]) {
        ++report.monotone_violations;
        break;
      }
    }
  }
  for (std::size_t k = 0; k < budgets.size(); ++k) {
    std::vector<double> column(samples);
    for (std::size_t i = 0; i < samples; ++i) column[i] = report.lambda_d[i][k];
    report.median.push_back(median(column));
  }
  for (double t : report.thresholds) {
    std::vector<double> row;
    for (std::size_t k = 0; k < budgets.size(); ++k) {
      std::uint64_t below = 0;
      for (std::size_t i = 0; i < samples; ++i) below += report.lambda_d[i][k] < t ? 1 : 0;
      row.push_back(samples ? static_cast<double>(below) / static_cast<double>(samples) : 0.0);
    }
    report.fraction_below.push_back(std::move(row));
  }
  return report;
}

}  // namespace geonum

#endif  // GEONUM_COUNTING_HPP
