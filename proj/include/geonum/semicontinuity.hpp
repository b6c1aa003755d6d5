#ifndef GEONUM_SEMICONTINUITY_HPP
#define GEONUM_SEMICONTINUITY_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "geonum/error.hpp"
#include "geonum/lattice.hpp"
#include "geonum/minima.hpp"
#include "geonum/random.hpp"
#include "geonum/star_body.hpp"

namespace geonum {

/// How the n-th body of a probe sequence is derived from the limit body.
struct BodySchedule {
  enum class Kind {
    Fixed,     // f_n = f
    Scale,     // S_n = (1 + c/n) S, i.e. f_n = f / (1 + c/n)
    Multiply,  // f_n = (1 + c/n) f
  };
  Kind kind = Kind::Fixed;
  double c = 1.0;

  DistanceFunction at(const DistanceFunction& f, int n) const {
    switch (kind) {
      case Kind::Fixed: return f;
      case Kind::Scale: return scaled_body(f, 1.0 + c / n);
      case Kind::Multiply: return scaled_body(f, 1.0 / (1.0 + c / n));
    }
    return f;
  }
};

/// How the n-th lattice is derived from the limit lattice.
struct LatticeSchedule {
  enum class Kind {
    Fixed,    // L_n = L
    Perturb,  // basis entries moved by uniform offsets of size <= magnitude/n
    Dilate,   // L_n = (1 + magnitude/n) L
  };
  Kind kind = Kind::Fixed;
  double magnitude = 1.0;
  std::uint64_t seed = 0;
  /// Fresh seeds tried when a perturbation degenerates the basis.
  int retries = 8;

  Lattice at(const Lattice& lattice, int n) const {
    switch (kind) {
      case Kind::Fixed: return lattice;
      case Kind::Dilate: return Lattice::from_columns(lattice.basis() * (1.0 + magnitude / n));
      case Kind::Perturb: {
        for (int attempt = 0;; ++attempt) {
          try {
            return perturb_basis(lattice, magnitude / n,
                                 derive_seed(seed, static_cast<std::uint64_t>(n) * 1024u + attempt));
          } catch (const Error& e) {
            if (e.kind() != ErrorKind::SingularBasis || attempt + 1 >= retries) throw;
          }
        }
      }
    }
    return lattice;
  }
};

struct ProbeConfig {
  std::vector<int> schedule;  // the n values, increasing
  BodySchedule body_schedule;
  LatticeSchedule lattice_schedule;
  /// Slack epsilon(n) = slack / n.
  double slack = 10.0;
  /// Radius budget for unbounded bodies.
  double budget = 50.0;
  MinimaOptions minima{};

  double epsilon(int n) const { return slack / n; }
};

struct ProbeRow {
  int n = 0;
  int i = 0;  // 1-based index of the minimum
  double value = 0.0;
  double reference = 0.0;
  bool upper_ok = false;
  /// Only meaningful for bounded limit bodies.
  bool converge_ok = false;
};

struct ProbeFailure {
  int n = 0;
  std::string error;
};

struct ProbeReport {
  std::string body;
  bool bounded = false;
  bool exact = false;
  std::vector<double> reference;
  std::vector<ProbeRow> rows;
  std::vector<ProbeFailure> failures;
  bool all_upper = true;
  bool all_converge = true;
};

/// Evaluates lambda_i(f_n, L_n) along the schedule against lambda_i(f, L).
/// Bounded limit bodies use the exact solver throughout and get both the
/// upper flag (lambda_i(f_n, L_n) <= lambda_i(f, L) + eps(n)) and the
/// convergence flag (|difference| <= eps(n)); unbounded ones use the
/// budgeted solver and only the upper flag. Solver errors at one n are
/// recorded and the probe continues.
inline ProbeReport semicontinuity_probe(const DistanceFunction& f, const Lattice& lattice, const ProbeConfig& config) {
  if (f.dim() != lattice.dim()) fail(ErrorKind::DimensionMismatch, "body and lattice dimensions differ");
  ProbeReport report;
  report.body = f.label();
  const BoundednessCertificate cert = boundedness_floor(f, config.minima.sphere_resolution);
  report.bounded = cert.bounded;
  report.exact = cert.bounded;
  auto solve = [&](const DistanceFunction& g, const Lattice& l) {
    if (report.bounded) return successive_minima_exact(g, l, config.minima);
    return minima_upper_bound(g, l, config.budget, config.minima);
  };
  report.reference = solve(f, lattice).values;
  for (int n : config.schedule) {
    if (n < 1) fail(ErrorKind::InvalidArgument, "schedule entries must be positive");
    try {
      const DistanceFunction fn = config.body_schedule.at(f, n);
      const Lattice ln = config.lattice_schedule.at(lattice, n);
      const auto values = solve(fn, ln).values;
      const double eps = config.epsilon(n);
      for (std::size_t i = 0; i < values.size(); ++i) {
        ProbeRow row;
        row.n = n;
        row.i = static_cast<int>(i) + 1;
        row.value = values[i];
        row.reference = report.reference[i];
        row.upper_ok = values[i] <= report.reference[i] + eps;
        row.converge_ok = report.bounded && std::abs(values[i] - report.reference[i]) <= eps;
        report.all_upper = report.all_upper && row.upper_ok;
        if (report.bounded) report.all_converge = report.all_converge && row.converge_ok;
        report.rows.push_back(row);
      }
    } catch (const Error& e) {
      report.failures.push_back(ProbeFailure{n, e.what()});
    }
  }
  if (!report.bounded) report.all_converge = false;
  return report;
}

/// The lattice spanned by (1, 1) and (theta, theta'), theta = (1 + sqrt 5)/2.
/// Every nonzero point (m + n theta, m + n theta') has
/// |x_1 x_2| = |m^2 + mn - n^2|, a positive integer.
inline Lattice golden_lattice() {
  const double r5 = std::sqrt(5.0);
  Matrix b(2, 2);
  b << 1.0, (1.0 + r5) / 2.0, 1.0, (1.0 - r5) / 2.0;
  return Lattice::from_columns(b);
}

struct NoncontinuityTrial {
  std::uint64_t trial = 0;
  double magnitude = 0.0;
  std::vector<double> values;
};

struct NoncontinuityReport {
  double epsilon = 0.0;
  double radius_budget = 0.0;
  std::uint64_t seed = 0;
  double target = 0.5;
  bool found = false;
  std::optional<Lattice> lattice;
  MinimaResult minima;
  std::uint64_t trials = 0;
  double best_lambda_d = std::numeric_limits<double>::infinity();
  std::vector<NoncontinuityTrial> history;
};

/// Looks for a lattice within `epsilon` (sup-norm on basis entries) of the
/// golden lattice whose budgeted lambda_2 for the hyperbolic body drops
/// below `target`, although lambda_i of the golden lattice itself is 1.
/// Trial k perturbs by magnitude epsilon * (k + 1) / max_trials with seed
/// derive_seed(seed, k). Not finding one is a valid, reported outcome.
inline NoncontinuityReport noncontinuity_demo(double epsilon, double radius_budget, std::uint64_t seed,
                                              std::uint64_t max_trials = 32, double target = 0.5,
                                              const MinimaOptions& options = {}) {
  if (!(epsilon >= 0.0)) fail(ErrorKind::InvalidArgument, "epsilon must be nonnegative");
  if (max_trials < 1) fail(ErrorKind::InvalidArgument, "need at least one trial");
  const DistanceFunction f = hyperbolic_body(2);
  const Lattice golden = golden_lattice();
  NoncontinuityReport report;
  report.epsilon = epsilon;
  report.radius_budget = radius_budget;
  report.seed = seed;
  report.target = target;
  const std::uint64_t trials = epsilon == 0.0 ? 1 : max_trials;
  for (std::uint64_t k = 0; k < trials; ++k) {
    const double magnitude = epsilon * static_cast<double>(k + 1) / static_cast<double>(trials);
    Lattice candidate = golden;
    try {
      candidate = perturb_basis(golden, magnitude, derive_seed(seed, k));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::SingularBasis) throw;
      continue;
    }
    MinimaResult m = minima_upper_bound(f, candidate, radius_budget, options);
    ++report.trials;
    report.history.push_back(NoncontinuityTrial{k, magnitude, m.values});
    report.best_lambda_d = std::min(report.best_lambda_d, m.values.back());
    if (m.values.back() < target) {
      report.found = true;
      report.lattice = candidate;
      report.minima = std::move(m);
      break;
    }
    if (k + 1 == trials) report.minima = std::move(m);
  }
  return report;
}

}  // namespace geonum

#endif  // GEONUM_SEMICONTINUITY_HPP
