#include <gtest/gtest.h>

#include <random>

#include "geonum/enumerate.hpp"
#include "oracles.hpp"

using namespace geonum;

TEST(Enumerate, UnitSquareDisk) {
  const Lattice l = make_lattice(Matrix::Identity(2, 2));
  // (0,0), 4 unit vectors, 4 diagonals, 4 at distance 2, 8 at sqrt 5
  EXPECT_EQ(enumerate_ball(l, 2.5).size(), 21u);
  EXPECT_EQ(enumerate_ball(l, 1.0).size(), 5u);
}

TEST(Enumerate, BoundaryIsClosed) {
  Matrix b(2, 2);
  b << 0.1, 0.0, 0.0, 0.1;
  const Lattice l = make_lattice(b);
  // 0.3 = |(3,0)| * 0.1 sits on the boundary up to rounding
  const auto pts = enumerate_ball(l, 0.30000000000000004);
  EXPECT_TRUE(std::any_of(pts.begin(), pts.end(), [](const LatticePoint& p) { return p.coeffs[0] == 3; }));
}

TEST(Enumerate, MatchesBruteForce) {
  std::mt19937_64 rng(5);
  for (int d : {2, 3}) {
    for (int trial = 0; trial < 40; ++trial) {
      const Lattice l = oracle::random_lattice(d, rng, 25);
      const double r = std::uniform_real_distribution<double>(0.5, 6.0)(rng);
      auto expected = oracle::ball(l, r);
      std::vector<std::vector<Int>> got;
      for (const auto& p : enumerate_ball(l, r)) {
        if (!p.is_origin()) got.push_back(p.coeffs);
      }
      std::sort(got.begin(), got.end());
      // points within 1e-9 of the sphere may legitimately differ
      std::vector<std::vector<Int>> diff;
      std::set_symmetric_difference(expected.begin(), expected.end(), got.begin(), got.end(),
                                    std::back_inserter(diff));
      for (const auto& c : diff) EXPECT_NEAR(oracle::coords(l, c).norm(), r, 1e-9 * r) << "d=" << d;
    }
  }
}

TEST(Enumerate, CoordsMatchCoefficients) {
  std::mt19937_64 rng(9);
  const Lattice l = oracle::random_lattice(3, rng);
  BallEnumerator e(l);
  e.for_each(4.0, [&](const PointView& p) {
    const Vector x = l.point(p.coeffs);
    for (int i = 0; i < 3; ++i) EXPECT_DOUBLE_EQ(p.coords[i], x[i]);
    EXPECT_NEAR(p.norm_sq, x.squaredNorm(), 1e-12 * (1 + x.squaredNorm()));
  });
}

TEST(Enumerate, BudgetCapThrows) {
  const Lattice l = make_lattice(Matrix::Identity(3, 3));
  try {
    enumerate_ball(l, 1000.0, 1000);
    FAIL() << "expected BudgetExceeded";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::BudgetExceeded);
  }
}

TEST(Enumerate, SkewedBasisStillExact) {
  Matrix b(2, 2);
  b << 1.0, 1000.0, 0.0, 0.001;
  const Lattice l = make_lattice(b);
  // same lattice as the basis (1,0),(0,0.001)
  const auto pts = enumerate_ball(l, 0.0105);
  EXPECT_EQ(pts.size(), 21u);
}

TEST(Enumerate, SmallExamples) {
  const Lattice z2 = make_lattice(Matrix::Identity(2, 2));
  EXPECT_EQ(enumerate_ball(z2, 1.5).size(), 9u);
  EXPECT_EQ(enumerate_ball(z2, 0.5).size(), 1u);
  Matrix b(2, 2);
  b << 2, 0, 0, 3;
  const auto pts = enumerate_ball(make_lattice(b), 2.0);
  ASSERT_EQ(pts.size(), 3u);
  // lexicographic by coefficients
  EXPECT_EQ(pts[0].coeffs, (std::vector<Int>{-1, 0}));
  EXPECT_EQ(pts[1].coeffs, (std::vector<Int>{0, 0}));
  EXPECT_EQ(pts[2].coeffs, (std::vector<Int>{1, 0}));
}
