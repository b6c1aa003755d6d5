#ifndef GEONUM_REGION_HPP
#define GEONUM_REGION_HPP

#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "geonum/error.hpp"
#include "geonum/lattice.hpp"
#include "geonum/random.hpp"
#include "geonum/star_body.hpp"

namespace geonum {

/// Volume of a region: exact, or a Monte Carlo estimate with its standard error.
struct Area {
  double value;
  double stderr_value;
  bool exact;
};

/// A Borel set given by a membership predicate: disk, annulus, (rotated)
/// box, sublevel set {f <= t} optionally clipped to a ball, or the whole space.
class Region {
 public:
  enum class Kind { Disk, Annulus, Box, Sublevel, Plane };

  static constexpr std::uint64_t kAreaSamples = 1'000'000;
  static constexpr std::uint64_t kAreaSeed = 0x5eed0fa7ea;

  static Region disk(double r, int d = 2) {
    require_positive(r, "disk radius");
    Region g(Kind::Disk, d);
    g.r1_ = r;
    g.label_ = "disk:r=" + format_real(r);
    g.area_ = Area{unit_p_ball_volume(d, 2.0) * std::pow(r, d), 0.0, true};
    return g;
  }

  /// Ball (disk in the plane) of the given volume.
  static Region disk_of_area(double area, int d = 2) {
    require_positive(area, "disk area");
    Region g = disk(std::pow(area / unit_p_ball_volume(d, 2.0), 1.0 / d), d);
    g.label_ = "disk:area=" + format_real(area);
    g.area_.value = area;
    return g;
  }

  static Region annulus(double r0, double r1, int d = 2) {
    if (!(r0 >= 0.0) || !(r1 > r0)) fail(ErrorKind::InvalidArgument, "annulus needs 0 <= r0 < r1");
    Region g(Kind::Annulus, d);
    g.r0_ = r0;
    g.r1_ = r1;
    g.label_ = "annulus:r0=" + format_real(r0) + ":r1=" + format_real(r1);
    g.area_ = Area{unit_p_ball_volume(d, 2.0) * (std::pow(r1, d) - std::pow(r0, d)), 0.0, true};
    return g;
  }

  /// Cube of side a centred at the origin, rotated by `rotation` radians
  /// (rotation only in the plane).
  static Region box(double a, double rotation = 0.0, int d = 2) {
    require_positive(a, "box side");
    if (rotation != 0.0 && d != 2) fail(ErrorKind::InvalidArgument, "rotated boxes are planar only");
    Region g(Kind::Box, d);
    g.r1_ = a;
    g.rotation_ = rotation;
    g.label_ = "box:a=" + format_real(a) + (rotation != 0.0 ? ":rot=" + format_real(rotation) : "");
    g.area_ = Area{std::pow(a, d), 0.0, true};
    return g;
  }

  /// {x : f(x) <= t}, intersected with the ball of radius clip when given.
  /// The volume of a clipped set is estimated once by Monte Carlo.
  static Region sublevel(const DistanceFunction& f, double t, std::optional<double> clip = std::nullopt) {
    require_positive(t, "sublevel t");
    Region g(Kind::Sublevel, f.dim());
    g.body_ = std::make_shared<const DistanceFunction>(f);
    g.t_ = t;
    g.label_ = "sublevel:body=" + f.label() + ":t=" + format_real(t);
    if (clip) {
      require_positive(*clip, "sublevel clip");
      g.r1_ = *clip;
      g.label_ += ":clip=" + format_real(*clip);
      g.area_ = g.estimate_clipped_area();
    } else {
      g.r1_ = std::numeric_limits<double>::infinity();
      const auto v = f.volume();
      g.area_ = Area{v ? *v * std::pow(t, f.dim()) : std::numeric_limits<double>::infinity(), 0.0, v.has_value()};
    }
    return g;
  }

  static Region plane(int d = 2) {
    Region g(Kind::Plane, d);
    g.r1_ = std::numeric_limits<double>::infinity();
    g.label_ = "plane";
    g.area_ = Area{std::numeric_limits<double>::infinity(), 0.0, true};
    return g;
  }

  Kind kind() const noexcept { return kind_; }
  int dim() const noexcept { return dim_; }
  const std::string& label() const noexcept { return label_; }
  const Area& area() const noexcept { return area_; }
  bool bounded() const noexcept { return std::isfinite(bounding_radius()); }

  /// Radius of a centred ball containing the region (inf when unbounded).
  double bounding_radius() const noexcept {
    switch (kind_) {
      case Kind::Box: return 0.5 * r1_ * std::sqrt(static_cast<double>(dim_));
      default: return r1_;
    }
  }

  bool contains(std::span<const double> x) const {
    switch (kind_) {
      case Kind::Disk: return norm_sq(x) <= r1_ * r1_;
      case Kind::Annulus: {
        const double n2 = norm_sq(x);
        return n2 > r0_ * r0_ && n2 <= r1_ * r1_;
      }
      case Kind::Box: {
        const double h = 0.5 * r1_;
        if (dim_ == 2 && rotation_ != 0.0) {
          const double c = std::cos(rotation_);
          const double s = std::sin(rotation_);
          const double u = c * x[0] + s * x[1];
          const double v = -s * x[0] + c * x[1];
          return std::abs(u) <= h && std::abs(v) <= h;
        }
        for (double v : x) {
          if (std::abs(v) > h) return false;
        }
        return true;
      }
      case Kind::Sublevel:
        if (std::isfinite(r1_) && norm_sq(x) > r1_ * r1_) return false;
        return (*body_)(x) <= t_;
      case Kind::Plane: return true;
    }
    return false;
  }

  bool contains(const Vector& x) const { return contains(std::span<const double>(x.data(), x.size())); }

 private:
  Region(Kind kind, int dim) : kind_(kind), dim_(dim) {
    if (dim < 2) fail(ErrorKind::DimensionTooSmall, "regions need d >= 2");
  }

  static void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) fail(ErrorKind::InvalidArgument, std::string(what) + " must be positive");
  }

  static double norm_sq(std::span<const double> x) noexcept {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
  }

  /// Uniform points in the clip ball; the hit fraction times the ball volume.
  Area estimate_clipped_area() const {
    Rng rng(kAreaSeed);
    const double ball = unit_p_ball_volume(dim_, 2.0) * std::pow(r1_, dim_);
    std::vector<double> x(dim_);
    std::uint64_t hits = 0;
    for (std::uint64_t k = 0; k < kAreaSamples; ++k) {
      double n2 = 0.0;
      for (double& v : x) {
        v = rng.normal();
        n2 += v * v;
      }
      const double scale = r1_ * std::pow(rng.uniform(), 1.0 / dim_) / std::sqrt(n2);
      for (double& v : x) v *= scale;
      if ((*body_)(x) <= t_) ++hits;
    }
    const double p = static_cast<double>(hits) / static_cast<double>(kAreaSamples);
    return Area{ball * p, ball * std::sqrt(p * (1.0 - p) / static_cast<double>(kAreaSamples)), false};
  }

  Kind kind_;
  int dim_;
  double r0_ = 0.0;
  double r1_ = 0.0;
  double rotation_ = 0.0;
  double t_ = 1.0;
  std::shared_ptr<const DistanceFunction> body_;
  std::string label_;
  Area area_{0.0, 0.0, true};
};

/// Parses region specs: "disk:r=2.5", "disk:area=10", "annulus:r0=1:r1=2",
/// "box:a=2", "box:a=2:rot=0.3", "sublevel:body=hyperbola:t=1:clip=10",
/// "plane".
inline Region parse_region(std::string_view spec, int d = 2) {
  spec = detail::trim(spec);
  const auto parts = detail::split(spec, ':');
  const std::string_view kind = parts.front();
  auto value_of = [&](std::string_view key) -> std::optional<double> {
    for (std::size_t i = 1; i < parts.size(); ++i) {
      const auto eq = parts[i].find('=');
      if (eq != std::string_view::npos && parts[i].substr(0, eq) == key) {
        return detail::parse_real(parts[i].substr(eq + 1), spec);
      }
    }
    return std::nullopt;
  };
  auto need = [&](std::string_view key) {
    auto v = value_of(key);
    if (!v) fail(ErrorKind::ParseError, "region '" + std::string(spec) + "' is missing " + std::string(key));
    return *v;
  };
  if (kind == "disk") {
    if (auto area = value_of("area")) return Region::disk_of_area(*area, d);
    return Region::disk(need("r"), d);
  }
  if (kind == "annulus") return Region::annulus(need("r0"), need("r1"), d);
  if (kind == "box") return Region::box(need("a"), value_of("rot").value_or(0.0), d);
  if (kind == "plane") return Region::plane(d);
  if (kind == "sublevel") {
    // Tokens t=, clip= belong to the region; everything else spells the body.
    std::string body;
    for (std::size_t i = 1; i < parts.size(); ++i) {
      std::string_view tok = parts[i];
      if (tok.substr(0, 2) == "t=" || tok.substr(0, 5) == "clip=") continue;
      if (tok.substr(0, 5) == "body=") tok.remove_prefix(5);
      if (!body.empty()) body += ':';
      body += tok;
    }
    if (body.empty()) fail(ErrorKind::ParseError, "sublevel region needs body=<spec>");
    return Region::sublevel(parse_body(body, d), value_of("t").value_or(1.0), value_of("clip"));
  }
  fail(ErrorKind::ParseError, "unknown region spec '" + std::string(spec) + "'");
}

}  // namespace geonum

#endif  // GEONUM_REGION_HPP
