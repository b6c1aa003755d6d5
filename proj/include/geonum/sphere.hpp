#ifndef GEONUM_SPHERE_HPP
#define GEONUM_SPHERE_HPP

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "geonum/error.hpp"
#include "geonum/lattice.hpp"

namespace geonum {

/// Deterministic quasi-uniform directions on the unit sphere S^{d-1}.
///
///   d = 2: `resolution` equally spaced angles.
///   d = 3: Fibonacci spiral with about resolution^2 / pi points, which gives
///          the same spacing as a great circle cut into `resolution` arcs.
///   d > 3: normalized integer points on the surface of the cube [-k, k]^d.
inline std::vector<Vector> sphere_sample(int d, int resolution) {
  if (d < 2) fail(ErrorKind::DimensionTooSmall, "sphere sample needs d >= 2");
  if (resolution < 4) fail(ErrorKind::InvalidArgument, "sphere resolution too small");
  std::vector<Vector> dirs;
  if (d == 2) {
    dirs.reserve(resolution);
    for (int k = 0; k < resolution; ++k) {
      const double t = 2.0 * std::numbers::pi * k / resolution;
      Vector v(2);
      v << std::cos(t), std::sin(t);
      dirs.push_back(v);
    }
  } else if (d == 3) {
    const int n = static_cast<int>(std::ceil(resolution * resolution / std::numbers::pi));
    const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
    dirs.reserve(n);
    for (int k = 0; k < n; ++k) {
      const double z = 1.0 - (2.0 * k + 1.0) / n;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double phi = golden_angle * k;
      Vector v(3);
      v << r * std::cos(phi), r * std::sin(phi), z;
      dirs.push_back(v);
    }
  } else {
    const int k = std::clamp(resolution / 16, 2, 6);
    std::vector<int> idx(d, -k);
    while (true) {
      bool on_surface = false;
      for (int x : idx) on_surface = on_surface || std::abs(x) == k;
      if (on_surface) {
        Vector v(d);
        for (int i = 0; i < d; ++i) v[i] = idx[i];
        dirs.push_back(v.normalized());
      }
      int pos = 0;
      while (pos < d && idx[pos] == k) idx[pos++] = -k;
      if (pos == d) break;
      ++idx[pos];
    }
  }
  return dirs;
}

/// Local pattern search on the unit sphere starting at `start`. Returns the
/// best direction found; `sign` = +1 minimizes fn, -1 maximizes it.
template <class Fn>
Vector refine_on_sphere(Fn&& fn, Vector start, double initial_step, double sign) {
  const int d = static_cast<int>(start.size());
  double best = sign * fn(start);
  if (d == 2) {
    double theta = std::atan2(start[1], start[0]);
    double step = initial_step;
    auto at = [](double t) {
      Vector v(2);
      v << std::cos(t), std::sin(t);
      return v;
    };
    for (int iter = 0; iter < 20000 && step > 1e-14; ++iter) {
      bool moved = false;
      for (double s : {+1.0, -1.0}) {
        const double cand = sign * fn(at(theta + s * step));
        if (cand < best) {
          best = cand;
          theta += s * step;
          moved = true;
          break;
        }
      }
      if (!moved) step *= 0.5;
    }
    return at(theta);
  }
  Vector x = std::move(start);
  double step = initial_step;
  for (int iter = 0; iter < 20000 && step > 1e-13; ++iter) {
    bool moved = false;
    for (int k = 0; k < d && !moved; ++k) {
      for (double s : {+1.0, -1.0}) {
        Vector y = x;
        y[k] += s * step;
        y.normalize();
        const double cand = sign * fn(y);
        if (cand < best) {
          best = cand;
          x = std::move(y);
          moved = true;
          break;
        }
      }
    }
    if (!moved) step *= 0.5;
  }
  return x;
}

/// Spacing between neighbouring directions of sphere_sample, used as the
/// initial pattern-search step.
inline double sphere_spacing(int d, int resolution) {
  if (d <= 3) return 2.0 * std::numbers::pi / resolution;
  return 1.0 / std::clamp(resolution / 16, 2, 6);
}

/// Extremum of fn over the sample followed by local refinement around the
/// `starts` best samples. Always returns a value fn actually attains.
template <class Fn>
std::pair<double, Vector> sphere_extremum(Fn&& fn, int d, int resolution, bool minimize, int starts = 4) {
  const double sign = minimize ? 1.0 : -1.0;
  const auto dirs = sphere_sample(d, resolution);
  std::vector<std::pair<double, std::size_t>> scored;
  scored.reserve(dirs.size());
  for (std::size_t i = 0; i < dirs.size(); ++i) scored.emplace_back(sign * fn(dirs[i]), i);
  const std::size_t keep = std::min<std::size_t>(starts, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(keep), scored.end());
  double best = scored.front().first;
  Vector best_dir = dirs[scored.front().second];
  const double step = sphere_spacing(d, resolution);
  for (std::size_t s = 0; s < keep; ++s) {
    Vector x = refine_on_sphere(fn, dirs[scored[s].second], step, sign);
    const double v = sign * fn(x);
    if (v < best) {
      best = v;
      best_dir = std::move(x);
    }
  }
  return {sign * best, best_dir};
}

}  // namespace geonum

#endif  // GEONUM_SPHERE_HPP
