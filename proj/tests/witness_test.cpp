#include <gtest/gtest.h>

#include <numbers>

#include "geonum/haar.hpp"
#include "geonum/witness.hpp"
#include "oracles.hpp"

using namespace geonum;

namespace {

WitnessConfig small_config(Region body = Region::plane()) {
  WitnessConfig c;
  c.body = std::move(body);
  c.shell_options.mc_points = 20000;
  c.shell_seed = 3;
  return c;
}

}  // namespace

TEST(Witness, PlaneShellsAreAnnuli) {
  const auto shells = build_shells(Region::plane(), 2, 6, 1, {});
  double inner = 0.0;
  double cumulative = 0.0;
  for (const auto& s : shells) {
    EXPECT_DOUBLE_EQ(s.inner_radius, inner);
    const double exact = std::numbers::pi * (s.outer_radius * s.outer_radius - inner * inner);
    EXPECT_NEAR(s.est_volume, exact, 4 * s.stderr_volume + 1e-9);
    EXPECT_NEAR(s.threshold, 4 * zeta(2) * s.index, 1e-12);
    EXPECT_GT(s.est_volume - 2 * s.stderr_volume, s.threshold);
    // the bisection stops near the threshold
    EXPECT_LT(exact, 1.05 * s.threshold);
    inner = s.outer_radius;
    cumulative += exact;
  }
  EXPECT_GT(cumulative, 4 * zeta(2) * 21);
  EXPECT_GT(shells[0].outer_radius, std::sqrt(4 * zeta(2) / std::numbers::pi));
  EXPECT_LT(shells[0].outer_radius, 1.6);
}

TEST(Witness, ShellsDeterministic) {
  const auto a = build_shells(Region::plane(), 2, 4, 9, {});
  const auto b = build_shells(Region::plane(), 2, 4, 9, {});
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].outer_radius, b[i].outer_radius);
}

TEST(Witness, BoundedBodyStalls) {
  try {
    build_shells(Region::disk(3.0), 2, 10, 1, {});
    FAIL() << "expected VolumeStall";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::VolumeStall);
  }
}

TEST(Witness, PairsArePrimitiveIndependentAndInside) {
  const auto config = small_config();
  const auto pipe = build_pipeline(config, 8);
  for (std::uint64_t i = 0; i < 30; ++i) {
    const auto s = sample_unimodular_2d(12, i);
    const auto ws = extract_witnesses(s.lattice, pipe.shells, pipe.partitions, pipe.shells.back().outer_radius);
    for (std::size_t k = 0; k < ws.size(); ++k) {
      if (!ws[k].tuple) {
        EXPECT_FALSE(ws[k].empty_quadrants.empty());
        continue;
      }
      const auto& t = *ws[k].tuple;
      ASSERT_EQ(t.points.size(), 2u);
      EXPECT_NE(t.quadrants[0], t.quadrants[1]);
      for (std::size_t j = 0; j < 2; ++j) {
        EXPECT_TRUE(is_primitive(s.lattice, t.points[j]));
        EXPECT_TRUE(pipe.shells[k].contains(std::span<const double>(t.points[j].coords.data(), 2)));
        EXPECT_EQ(quadrant_of(pipe.partitions[k], t.points[j].coords[0], t.points[j].coords[1]), t.quadrants[j]);
      }
      const auto& a = t.points[0].coeffs;
      const auto& b = t.points[1].coeffs;
      EXPECT_NE(a[0] * b[1] - a[1] * b[0], 0);
      Matrix pair(2, 2);
      pair << t.points[0].coords, t.points[1].coords;
      EXPECT_GE(std::abs(pair.determinant()), s.lattice.det() * (1 - 1e-9));
    }
  }
}

TEST(Witness, EmptyQuadrantsMatchBruteForce) {
  const auto config = small_config();
  const auto pipe = build_pipeline(config, 3);
  for (std::uint64_t i = 0; i < 40; ++i) {
    const auto s = sample_unimodular_2d(21, i);
    const auto ws = extract_witnesses(s.lattice, pipe.shells, pipe.partitions, pipe.shells.back().outer_radius);
    for (std::size_t k = 0; k < ws.size(); ++k) {
      std::array<bool, 4> hit{false, false, false, false};
      for (const auto& c : oracle::ball(s.lattice, pipe.shells[k].outer_radius)) {
        if (std::gcd(c[0], c[1]) != 1) continue;
        const Vector x = oracle::coords(s.lattice, c);
        if (!pipe.shells[k].contains(std::span<const double>(x.data(), 2))) continue;
        hit[quadrant_of(pipe.partitions[k], x[0], x[1]) - 1] = true;
      }
      std::vector<int> empty;
      for (int q = 0; q < 4; ++q) {
        if (!hit[q]) empty.push_back(q + 1);
      }
      EXPECT_EQ(ws[k].empty_quadrants, empty);
    }
  }
}

TEST(Witness, HyperbolicSublevel) {
  const auto config = small_config(parse_region("sublevel:body=hyperbola:t=3"));
  const auto pipe = build_pipeline(config, 4);
  EXPECT_EQ(pipe.shells.size(), 4u);
  for (const auto& s : pipe.shells) EXPECT_GT(s.est_volume - 2 * s.stderr_volume, s.threshold);
}

// Area of {|x y| <= T, inner < |x| <= rho}. In phi = 2 theta the radial
// extent is R^2 = 2T / sin(phi); each of the 8 octants contributes J / 4.
double hyperbolic_shell_area(double t, double inner, double rho) {
  auto cutoff = [&](double c) { return c <= 0.0 ? std::numbers::pi / 2 : std::asin(std::min(1.0, 2 * t / c)); };
  const double pr = cutoff(rho * rho);
  const double pi_ = cutoff(inner * inner);
  const double i2 = inner * inner;
  double j = (rho * rho - i2) * pr;
  if (pi_ > pr) j += 2 * t * (std::log(std::tan(pi_ / 2)) - std::log(std::tan(pr / 2))) - i2 * (pi_ - pr);
  return 2 * j;
}

TEST(Witness, HyperbolicShellVolumesMatchClosedForm) {
  EXPECT_NEAR(hyperbolic_shell_area(1e12, 1.0, 2.0), 3 * std::numbers::pi, 1e-9);
  ShellOptions opts;
  opts.mc_points = 50000;
  const auto shells = build_shells(parse_region("sublevel:body=hyperbola:t=3"), 2, 10, 4, opts);
  for (const auto& s : shells) {
    const double exact = hyperbolic_shell_area(9.0, s.inner_radius, s.outer_radius);
    EXPECT_NEAR(s.est_volume, exact, 4 * s.stderr_volume) << "shell " << s.index;
    EXPECT_GT(exact, s.threshold) << "shell " << s.index;
  }
  EXPECT_GT(shells.back().outer_radius, 100.0);
}

TEST(Witness, UnitLatticeFirstShell) {
  Shell shell;
  shell.index = 1;
  shell.outer_radius = 1.6;
  shell.body = std::make_shared<const Region>(Region::plane());
  Partition2D diagonal;
  diagonal.angle = std::numbers::pi / 4;
  const Lattice z2 = make_lattice(Matrix::Identity(2, 2));
  const auto ws = extract_witnesses(z2, std::span<const Shell>(&shell, 1), std::span<const Partition2D>(&diagonal, 1), 1.6);
  ASSERT_TRUE(ws[0].tuple.has_value());
  const auto& p = ws[0].tuple->points;
  EXPECT_GE(std::abs(p[0].coeffs[0] * p[1].coeffs[1] - p[0].coeffs[1] * p[1].coeffs[0]), 1);
}

TEST(Witness, MissRateEnvelope) {
  const auto config = small_config();
  const auto pipe = build_pipeline(config, 10);
  double worst = 0.0;
  for (int n : {1, 2, 5, 10}) {
    const auto r = part_miss_rate(pipe, n, 400, config, 6);
    worst = std::max(worst, n * r.rate);
  }
  EXPECT_LT(worst, 2.0);
}

TEST(Witness, MissRateInterval) {
  const auto config = small_config();
  const auto r = part_miss_rate(2, 200, config, 5);
  EXPECT_EQ(r.samples, 200u);
  EXPECT_LE(r.interval.lo, r.rate);
  EXPECT_GE(r.interval.hi, r.rate);
  EXPECT_THROW(part_miss_rate(2, 50, config, 5), Error);
}
