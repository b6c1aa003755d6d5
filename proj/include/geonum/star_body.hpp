#ifndef GEONUM_STAR_BODY_HPP
#define GEONUM_STAR_BODY_HPP

#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "geonum/error.hpp"
#include "geonum/lattice.hpp"
#include "geonum/sphere.hpp"

namespace geonum {

/// A distance function f (nonnegative, continuous, positively homogeneous of
/// degree one). The star body is S = {x : f(x) <= 1}.
class DistanceFunction {
 public:
  using Evaluator = std::function<double(std::span<const double>)>;

  DistanceFunction(int dim, Evaluator evaluator, std::string label, std::vector<double> params = {})
      : dim_(dim), evaluator_(std::move(evaluator)), label_(std::move(label)), params_(std::move(params)) {
    if (dim < 1) fail(ErrorKind::DimensionTooSmall, "distance function needs d >= 1");
  }

  int dim() const noexcept { return dim_; }
  const std::string& label() const noexcept { return label_; }
  const std::vector<double>& params() const noexcept { return params_; }

  /// Lebesgue volume of S when known in closed form (infinite for the
  /// hyperbolic body, empty when unknown).
  std::optional<double> volume() const noexcept { return volume_; }
  /// True for bodies known to be convex and symmetric about the origin.
  bool symmetric_convex() const noexcept { return symmetric_convex_; }

  DistanceFunction& with_volume(std::optional<double> v) {
    volume_ = v;
    return *this;
  }
  DistanceFunction& with_symmetric_convex(bool flag) {
    symmetric_convex_ = flag;
    return *this;
  }

  double operator()(std::span<const double> x) const { return evaluator_(x); }
  double operator()(const Vector& x) const { return evaluator_(std::span<const double>(x.data(), x.size())); }

 private:
  int dim_;
  Evaluator evaluator_;
  std::string label_;
  std::vector<double> params_;
  std::optional<double> volume_;
  bool symmetric_convex_ = false;
};

inline double evaluate(const DistanceFunction& f, const Vector& x) {
  if (x.size() != f.dim()) fail(ErrorKind::DimensionMismatch, "point dimension differs from body dimension");
  return f(x);
}

/// Volume of the unit p-ball in d dimensions.
inline double unit_p_ball_volume(int d, double p) {
  if (std::isinf(p)) return std::pow(2.0, d);
  return std::pow(2.0 * std::tgamma(1.0 + 1.0 / p), d) / std::tgamma(1.0 + d / p);
}

inline std::string format_real(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

/// ||x||_p for p >= 1 (p may be +inf).
inline DistanceFunction p_norm_ball(int d, double p) {
  if (!(p >= 1.0)) fail(ErrorKind::InvalidArgument, "p-norm needs p >= 1");
  DistanceFunction::Evaluator eval;
  if (std::isinf(p)) {
    eval = [](std::span<const double> x) {
      double m = 0.0;
      for (double v : x) m = std::max(m, std::abs(v));
      return m;
    };
  } else if (p == 1.0) {
    eval = [](std::span<const double> x) {
      double s = 0.0;
      for (double v : x) s += std::abs(v);
      return s;
    };
  } else if (p == 2.0) {
    eval = [](std::span<const double> x) {
      double s = 0.0;
      for (double v : x) s += v * v;
      return std::sqrt(s);
    };
  } else {
    eval = [p](std::span<const double> x) {
      double m = 0.0;
      for (double v : x) m = std::max(m, std::abs(v));
      if (m == 0.0) return 0.0;
      double s = 0.0;
      for (double v : x) s += std::pow(std::abs(v) / m, p);
      return m * std::pow(s, 1.0 / p);
    };
  }
  DistanceFunction f(d, std::move(eval), "ball:p=" + format_real(p), {p});
  f.with_volume(unit_p_ball_volume(d, p)).with_symmetric_convex(true);
  return f;
}

inline DistanceFunction euclidean_ball(int d) { return p_norm_ball(d, 2.0); }

inline DistanceFunction sup_norm_box(int d) {
  return p_norm_ball(d, std::numeric_limits<double>::infinity());
}

/// f(x) = |x_1 ... x_d|^{1/d}; the body {|x_1 ... x_d| <= 1} made degree-one
/// homogeneous. Unbounded, infinite volume.
inline DistanceFunction hyperbolic_body(int d) {
  DistanceFunction::Evaluator eval;
  if (d == 2) {
    eval = [](std::span<const double> x) { return std::sqrt(std::abs(x[0] * x[1])); };
  } else {
    eval = [d](std::span<const double> x) {
      double prod = 1.0;
      for (double v : x) prod *= std::abs(v);
      return std::pow(prod, 1.0 / d);
    };
  }
  DistanceFunction f(d, std::move(eval), "hyperbola");
  f.with_volume(std::numeric_limits<double>::infinity());
  return f;
}

/// The body c*S, whose distance function is f/c.
inline DistanceFunction scaled_body(const DistanceFunction& f, double c) {
  if (!(c > 0.0) || !std::isfinite(c)) fail(ErrorKind::InvalidArgument, "scale factor must be positive");
  auto base = std::make_shared<const DistanceFunction>(f);
  std::vector<double> params{c};
  params.insert(params.end(), f.params().begin(), f.params().end());
  DistanceFunction g(
      f.dim(), [base, c](std::span<const double> x) { return (*base)(x) / c; },
      "scale:c=" + format_real(c) + ":" + f.label(), std::move(params));
  if (f.volume()) g.with_volume(*f.volume() * std::pow(c, f.dim()));
  g.with_symmetric_convex(f.symmetric_convex());
  return g;
}

/// The body A*S, whose distance function is f(A^{-1} x).
inline DistanceFunction linear_image(const DistanceFunction& f, const Matrix& a) {
  if (a.rows() != f.dim() || a.cols() != f.dim()) fail(ErrorKind::DimensionMismatch, "linear map has wrong shape");
  const double det = a.determinant();
  if (!(std::abs(det) > 0.0) || !std::isfinite(det)) fail(ErrorKind::SingularBasis, "linear map is not invertible");
  auto base = std::make_shared<const DistanceFunction>(f);
  auto inverse = std::make_shared<const Matrix>(a.inverse());
  const int d = f.dim();
  DistanceFunction g(
      d,
      [base, inverse, d](std::span<const double> x) {
        constexpr int kStack = 8;
        if (d <= kStack) {
          std::array<double, kStack> y{};
          for (int i = 0; i < d; ++i) {
            double s = 0.0;
            for (int k = 0; k < d; ++k) s += (*inverse)(i, k) * x[k];
            y[i] = s;
          }
          return (*base)(std::span<const double>(y.data(), d));
        }
        std::vector<double> y(d, 0.0);
        for (int i = 0; i < d; ++i) {
          for (int k = 0; k < d; ++k) y[i] += (*inverse)(i, k) * x[k];
        }
        return (*base)(std::span<const double>(y));
      },
      "linear:A=" + format_basis(a) + ":" + f.label(), f.params());
  if (f.volume()) g.with_volume(*f.volume() * std::abs(det));
  g.with_symmetric_convex(f.symmetric_convex());
  return g;
}

/// Lower bound on f over the unit sphere, as far as sampling can tell.
struct BoundednessCertificate {
  double floor;
  bool bounded;
  Vector argmin;
};

inline constexpr double kDefaultBoundednessThreshold = 1e-6;
inline constexpr int kDefaultSphereResolution = 128;

/// Minimum of f over a deterministic sphere sample, refined locally around
/// the best samples. The true minimum can only be smaller: `floor` is an
/// upper estimate.
inline BoundednessCertificate boundedness_floor(const DistanceFunction& f, int resolution = kDefaultSphereResolution,
                                                double threshold = kDefaultBoundednessThreshold) {
  if (resolution < 64) fail(ErrorKind::InvalidArgument, "boundedness_floor needs resolution >= 64");
  auto [floor, argmin] = sphere_extremum([&](const Vector& x) { return f(x); }, f.dim(), resolution, true);
  return BoundednessCertificate{floor, floor > threshold, std::move(argmin)};
}

/// sup |f - g| over the unit sphere (equal to the sup over the unit ball by
/// homogeneity), estimated on the deterministic sample plus refinement.
inline double body_distance(const DistanceFunction& f, const DistanceFunction& g,
                            int resolution = kDefaultSphereResolution) {
  if (f.dim() != g.dim()) fail(ErrorKind::DimensionMismatch, "body_distance between different dimensions");
  auto [value, where] =
      sphere_extremum([&](const Vector& x) { return std::abs(f(x) - g(x)); }, f.dim(), resolution, false);
  (void)where;
  return value;
}

/// Parses body specs: "ball:p=2", "ball:p=inf", "box", "hyperbola",
/// "scale:c=2:<body>", "linear:A=<basis>:<body>".
inline DistanceFunction parse_body(std::string_view spec, int d) {
  spec = detail::trim(spec);
  auto starts_with = [&](std::string_view prefix) { return spec.substr(0, prefix.size()) == prefix; };
  if (spec == "ball" || spec == "euclid") return euclidean_ball(d);
  if (starts_with("ball:p=")) return p_norm_ball(d, detail::parse_real(spec.substr(7), "ball:p"));
  if (spec == "box") return sup_norm_box(d);
  if (spec == "hyperbola") return hyperbolic_body(d);
  if (starts_with("scale:c=")) {
    const auto rest = spec.substr(8);
    const auto colon = rest.find(':');
    if (colon == std::string_view::npos) fail(ErrorKind::ParseError, "scale body needs an inner body");
    return scaled_body(parse_body(rest.substr(colon + 1), d), detail::parse_real(rest.substr(0, colon), "scale:c"));
  }
  if (starts_with("linear:A=")) {
    const auto rest = spec.substr(9);
    const auto colon = rest.find(':');
    if (colon == std::string_view::npos) fail(ErrorKind::ParseError, "linear body needs an inner body");
    const Matrix a = parse_basis(rest.substr(0, colon));
    return linear_image(parse_body(rest.substr(colon + 1), d), a);
  }
  fail(ErrorKind::ParseError, "unknown body spec '" + std::string(spec) + "'");
}

}  // namespace geonum

#endif  // GEONUM_STAR_BODY_HPP
