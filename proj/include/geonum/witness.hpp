#ifndef GEONUM_WITNESS_HPP
#define GEONUM_WITNESS_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "geonum/enumerate.hpp"
#include "geonum/error.hpp"
#include "geonum/haar.hpp"
#include "geonum/integer.hpp"
#include "geonum/parallel.hpp"
#include "geonum/partition.hpp"
#include "geonum/random.hpp"
#include "geonum/region.hpp"
#include "geonum/stats.hpp"

namespace geonum {

/// The piece {x in B : inner < ||x|| <= outer} of an ambient set B.
struct Shell {
  int index = 0;
  double inner_radius = 0.0;
  double outer_radius = 0.0;
  /// Monte Carlo volume estimate of the shell and its standard error.
  double est_volume = 0.0;
  double stderr_volume = 0.0;
  /// 2^d zeta(d) n, the volume the shell must exceed.
  double threshold = 0.0;
  std::shared_ptr<const Region> body;
  /// The Monte Carlo hits inside the shell with their importance weights (planar shells only).
  std::vector<WeightedPoint> mass_sample;

  bool contains(std::span<const double> x) const {
    double n2 = 0.0;
    for (double v : x) n2 += v * v;
    return n2 > inner_radius * inner_radius && n2 <= outer_radius * outer_radius && body->contains(x);
  }
};

struct ShellOptions {
  std::uint64_t mc_points = 100'000;
  /// Give up (VolumeStall) once the outer radius passes this.
  double max_radius = 1e6;
  /// Give up once this many consecutive doublings grow the estimate by < 1%.
  int stall_rounds = 3;
};

namespace detail {

/// Common-random-number volume estimator for the annulus (inner, rho] of B:
/// the same uniforms are mapped into every candidate annulus.
///
/// Radii come from an even mixture of two laws, uniform in volume and
/// uniform in log r. In the plane the angle is likewise an even mixture of
/// uniform and log-uniform distance to the nearest coordinate axis. Each
/// point carries weight 1 / density, so thin unbounded sets hugging the
/// axes, such as {|x y| <= T}, keep getting hits as the annulus grows.
class ShellSampler {
 public:
  /// The log-radius law covers [kLogSpan * rho, rho] when inner is smaller.
  static constexpr double kLogSpan = 1e-4;
  /// The axis law covers offsets in [kMinOffset, pi/4].
  static constexpr double kMinOffset = 1e-10;

  ShellSampler(const Region& body, int d, double inner, std::uint64_t points, std::uint64_t seed)
      : body_(body), d_(d), inner_(inner), samples_(points), dirs_(points * static_cast<std::size_t>(d)) {
    Rng rng(seed);
    const double axis_range = std::log(std::numbers::pi / 4.0 / kMinOffset);
    for (std::uint64_t k = 0; k < points; ++k) {
      Sample& s = samples_[k];
      s.log_radius = rng.uniform() < 0.5;
      s.u = rng.uniform();
      if (d == 2) {
        if (rng.uniform() < 0.5) {
          s.theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
        } else {
          const double axis = std::floor(rng.uniform() * 4.0) * std::numbers::pi / 2.0;
          const double side = rng.uniform() < 0.5 ? -1.0 : 1.0;
          s.theta = axis + side * kMinOffset * std::exp(rng.uniform() * axis_range);
        }
        const double offset = axis_offset(s.theta);
        s.angle_density = 0.5 / (2.0 * std::numbers::pi);
        if (offset >= kMinOffset) s.angle_density += 0.5 / (8.0 * offset * axis_range);
        dirs_[2 * k] = std::cos(s.theta);
        dirs_[2 * k + 1] = std::sin(s.theta);
        continue;
      }
      double n2 = 0.0;
      for (int i = 0; i < d; ++i) {
        const double g = rng.normal();
        dirs_[k * d + i] = g;
        n2 += g * g;
      }
      const double inv = 1.0 / std::sqrt(n2);
      for (int i = 0; i < d; ++i) dirs_[k * d + i] *= inv;
    }
  }

  struct Estimate {
    double volume;
    double stderr_volume;
  };

  /// on_hit(x, weight) sees every sample inside the shell.
  template <class OnHit>
  Estimate estimate(double rho, OnHit&& on_hit) const {
    const double omega = unit_p_ball_volume(d_, 2.0);
    const double lo = std::pow(inner_, d_);
    const double hi = std::pow(rho, d_);
    const double a = std::max(inner_, kLogSpan * rho);
    const double log_range = std::log(rho / a);
    const double sphere = d_ * omega;
    std::vector<double> x(d_);
    const std::size_t n = samples_.size();
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const Sample& s = samples_[k];
      const double r = s.log_radius ? a * std::exp(s.u * log_range) : std::pow(lo + s.u * (hi - lo), 1.0 / d_);
      if (!(r > inner_) || r > rho) continue;
      for (int i = 0; i < d_; ++i) x[i] = r * dirs_[k * d_ + i];
      if (!body_.contains(x)) continue;
      // radial density of r, times the direction density, per unit volume
      double radial = 0.5 * d_ * std::pow(r, d_ - 1) / (hi - lo);
      if (r >= a && log_range > 0.0) radial += 0.5 / (r * log_range);
      const double direction = d_ == 2 ? s.angle_density : 1.0 / sphere;
      const double w = std::pow(r, d_ - 1) / (radial * direction);
      sum += w;
      sum_sq += w * w;
      on_hit(std::span<const double>(x), w);
    }
    const double nn = static_cast<double>(n);
    const double mean = sum / nn;
    const double var = std::max(0.0, sum_sq / nn - mean * mean);
    return {mean, std::sqrt(var / nn)};
  }

  Estimate estimate(double rho) const {
    return estimate(rho, [](std::span<const double>, double) {});
  }

 private:
  struct Sample {
    bool log_radius = false;
    double u = 0.0;
    double theta = 0.0;
    double angle_density = 0.0;
  };

  static double axis_offset(double theta) {
    const double q = std::numbers::pi / 2.0;
    const double t = std::fmod(std::fmod(theta, q) + q, q);
    return std::min(t, q - t);
  }

  const Region& body_;
  int d_;
  double inner_;
  std::vector<Sample> samples_;
  std::vector<double> dirs_;
};

}  // namespace detail

/// Consecutive shells B_1, ..., B_{n_max} of `body`, each just large enough
/// that its volume estimate minus two standard errors exceeds 2^d zeta(d) n.
/// Outer radii are found by doubling and then bisection; shell n draws its
/// Monte Carlo points from derive_seed(seed, n).
inline std::vector<Shell> build_shells(const Region& body, int d, int n_max, std::uint64_t seed,
                                       const ShellOptions& options = {}) {
  if (d != body.dim()) fail(ErrorKind::DimensionMismatch, "body dimension differs from d");
  if (n_max < 1) fail(ErrorKind::InvalidArgument, "need at least one shell");
  if (options.mc_points < 100) fail(ErrorKind::InvalidArgument, "need at least 100 Monte Carlo points per shell");
  auto shared_body = std::make_shared<const Region>(body);
  const double omega = unit_p_ball_volume(d, 2.0);
  std::vector<Shell> shells;
  double inner = 0.0;
  for (int n = 1; n <= n_max; ++n) {
    const double threshold = std::pow(2.0, d) * zeta(d) * n;
    const detail::ShellSampler sampler(*shared_body, d, inner, options.mc_points,
                                       derive_seed(seed, static_cast<std::uint64_t>(n)));
    auto passes = [&](const detail::ShellSampler::Estimate& e) { return e.volume - 2.0 * e.stderr_volume > threshold; };

    double lo = inner;
    double hi = std::pow(std::pow(inner, d) + threshold / omega, 1.0 / d);
    double best_seen = 0.0;
    int flat_rounds = 0;
    while (true) {
      const auto e = sampler.estimate(hi);
      if (passes(e)) break;
      flat_rounds = e.volume > best_seen * 1.01 ? 0 : flat_rounds + 1;
      best_seen = std::max(best_seen, e.volume);
      if (flat_rounds >= options.stall_rounds || hi > options.max_radius) {
        fail(ErrorKind::VolumeStall, "shell " + std::to_string(n) + " of " + body.label() +
                                         " stopped growing near volume " + std::to_string(best_seen) +
                                         " (needs " + std::to_string(threshold) + "); the set looks finite");
      }
      lo = hi;
      hi = inner + 2.0 * (hi - inner);
    }
    for (int iter = 0; iter < 200 && hi - lo > 1e-12 * hi; ++iter) {
      const double mid = 0.5 * (lo + hi);
      if (passes(sampler.estimate(mid))) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    Shell shell;
    shell.index = n;
    shell.inner_radius = inner;
    shell.outer_radius = hi;
    shell.threshold = threshold;
    shell.body = shared_body;
    const auto e = sampler.estimate(hi, [&](std::span<const double> x, double w) {
      if (d == 2) shell.mass_sample.push_back(WeightedPoint{x[0], x[1], w});
    });
    shell.est_volume = e.volume;
    shell.stderr_volume = e.stderr_volume;
    shells.push_back(std::move(shell));
    inner = hi;
  }
  return shells;
}

/// d linearly independent primitive lattice points from one shell, taken
/// from distinct parts of its partition.
struct WitnessTuple {
  int shell = 0;
  std::vector<LatticePoint> points;
  std::vector<int> quadrants;
};

/// Outcome of witness extraction for one shell: a tuple, or the quadrants
/// that held no primitive point within the budget.
struct ShellWitness {
  int shell = 0;
  std::optional<WitnessTuple> tuple;
  std::vector<int> empty_quadrants;
  /// The enumeration budget stopped short of the shell's outer radius.
  bool truncated = false;
};

namespace detail {

struct Representative {
  bool found = false;
  double norm_sq = 0.0;
  std::vector<Int> coeffs;
  std::array<double, 2> coords{0.0, 0.0};

  void offer(const PointView& p) {
    const bool better = !found || p.norm_sq < norm_sq ||
                        (p.norm_sq == norm_sq && std::lexicographical_compare(coeffs.begin(), coeffs.end(),
                                                                               p.coeffs.begin(), p.coeffs.end()));
    if (!better) return;
    found = true;
    norm_sq = p.norm_sq;
    coeffs.assign(p.coeffs.begin(), p.coeffs.end());
    coords = {p.coords[0], p.coords[1]};
  }
};

}  // namespace detail

/// For each shell, the primitive lattice point of smallest norm in each of
/// the four parts; on success two of them with nonzero determinant form the
/// witness pair. Such a pair always exists when all parts are hit: four
/// points on one line through the origin would put that line through all
/// four quadrants. Shells are disjoint, so tuples from different shells
/// share no point.
inline std::vector<ShellWitness> extract_witnesses(const Lattice& lattice, std::span<const Shell> shells,
                                                   std::span<const Partition2D> partitions, double budget,
                                                   std::uint64_t cap = kDefaultPointCap) {
  if (lattice.dim() != 2) fail(ErrorKind::InvalidArgument, "witness extraction is planar (d = 2) only");
  if (shells.size() != partitions.size()) fail(ErrorKind::InvalidArgument, "need one partition per shell");
  if (!(budget > 0.0)) fail(ErrorKind::InvalidArgument, "budget must be positive");
  std::vector<ShellWitness> out(shells.size());
  if (shells.empty()) return out;
  double outer = 0.0;
  for (const Shell& s : shells) outer = std::max(outer, s.outer_radius);
  double min_inner = std::numeric_limits<double>::infinity();
  for (const Shell& s : shells) min_inner = std::min(min_inner, s.inner_radius);
  const double radius = std::min(budget, outer);
  std::vector<std::array<detail::Representative, 4>> reps(shells.size());

  if (radius > min_inner) {
    BallEnumerator(lattice, cap).for_each(radius, [&](const PointView& p) {
      if (p.norm_sq <= min_inner * min_inner) return;
      if (coefficient_gcd(p.coeffs) != 1) return;
      for (std::size_t s = 0; s < shells.size(); ++s) {
        if (shells[s].contains(p.coords)) {
          reps[s][quadrant_of(partitions[s], p.coords) - 1].offer(p);
          break;
        }
      }
    });
  }

  for (std::size_t s = 0; s < shells.size(); ++s) {
    ShellWitness& w = out[s];
    w.shell = shells[s].index;
    w.truncated = budget < shells[s].outer_radius;
    for (int q = 0; q < 4; ++q) {
      if (!reps[s][q].found) w.empty_quadrants.push_back(q + 1);
    }
    if (!w.empty_quadrants.empty()) continue;
    for (int i = 0; i < 4 && !w.tuple; ++i) {
      for (int j = i + 1; j < 4; ++j) {
        const auto& a = reps[s][i];
        const auto& b = reps[s][j];
        const Wide cross = Wide(a.coeffs[0]) * b.coeffs[1] - Wide(a.coeffs[1]) * b.coeffs[0];
        if (cross == 0) continue;
        WitnessTuple t;
        t.shell = shells[s].index;
        for (const auto* r : {&a, &b}) {
          Vector c(2);
          c << r->coords[0], r->coords[1];
          t.points.push_back(LatticePoint{c, r->coeffs});
        }
        t.quadrants = {i + 1, j + 1};
        w.tuple = std::move(t);
        break;
      }
    }
    if (!w.tuple) {
      fail(ErrorKind::NoConvergence, "four quadrant representatives of shell " + std::to_string(w.shell) +
                                         " are collinear with the origin; the partition is broken");
    }
  }
  return out;
}

/// Everything the witness pipeline needs besides the lattice.
struct WitnessConfig {
  Region body = Region::plane();
  ShellOptions shell_options{};
  /// Seed for the shell Monte Carlo (the body-side randomness).
  std::uint64_t shell_seed = 1;
  /// Partition tolerance as a fraction of a quarter of the sample mass.
  double partition_tolerance = 0.01;
  /// Enumeration radius; defaults to the outer radius of the last shell.
  std::optional<double> budget;
  std::uint64_t point_cap = kDefaultPointCap;
  unsigned threads = 1;
  double confidence_z = 1.96;
};

struct WitnessPipeline {
  std::vector<Shell> shells;
  std::vector<Partition2D> partitions;
};

inline WitnessPipeline build_pipeline(const WitnessConfig& config, int n_max) {
  if (config.body.dim() != 2) fail(ErrorKind::InvalidArgument, "the witness pipeline is planar (d = 2) only");
  WitnessPipeline pipeline;
  pipeline.shells = build_shells(config.body, 2, n_max, config.shell_seed, config.shell_options);
  for (const Shell& s : pipeline.shells) {
    double total = 0.0;
    for (const auto& p : s.mass_sample) total += p.w;
    pipeline.partitions.push_back(two_line_equipartition(s.mass_sample, config.partition_tolerance * 0.25 * total));
  }
  return pipeline;
}

struct MissRateReport {
  int shell = 0;
  std::uint64_t samples = 0;
  std::uint64_t misses = 0;
  double rate = 0.0;
  Interval interval{0.0, 1.0};
  /// misses attributed to each quadrant (a lattice may count in several).
  std::array<std::uint64_t, 4> quadrant_misses{0, 0, 0, 0};
};

/// Fraction of Haar lattices (index i drawn from derive_seed(seed, i)) for
/// which some part of shell n holds no primitive point, with a Wilson
/// interval.
inline MissRateReport part_miss_rate(const WitnessPipeline& pipeline, int n, std::uint64_t samples,
                                     const WitnessConfig& config, std::uint64_t seed) {
  if (samples < 100) fail(ErrorKind::InvalidArgument, "part_miss_rate needs at least 100 samples");
  if (n < 1 || n > static_cast<int>(pipeline.shells.size())) fail(ErrorKind::InvalidArgument, "shell index out of range");
  const Shell& shell = pipeline.shells[n - 1];
  const Partition2D& partition = pipeline.partitions[n - 1];
  const double budget = config.budget.value_or(shell.outer_radius);
  std::vector<std::vector<int>> empties(samples);
  parallel_for_index(samples, config.threads, [&](std::size_t i) {
    const HaarSample2D s = sample_unimodular_2d(seed, i);
    const auto w = extract_witnesses(s.lattice, std::span<const Shell>(&shell, 1),
                                     std::span<const Partition2D>(&partition, 1), budget, config.point_cap);
    empties[i] = w.front().empty_quadrants;
  });
  MissRateReport report;
  report.shell = n;
  report.samples = samples;
  for (const auto& e : empties) {
    if (!e.empty()) ++report.misses;
    for (int q : e) ++report.quadrant_misses[q - 1];
  }
  report.rate = static_cast<double>(report.misses) / static_cast<double>(samples);
  report.interval = wilson_interval(report.misses, samples, config.confidence_z);
  return report;
}

inline MissRateReport part_miss_rate(int n, std::uint64_t samples, const WitnessConfig& config, std::uint64_t seed) {
  return part_miss_rate(build_pipeline(config, n), n, samples, config, seed);
}

}  // namespace geonum

#endif  // GEONUM_WITNESS_HPP
