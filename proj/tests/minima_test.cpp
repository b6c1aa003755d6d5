#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "geonum/haar.hpp"
#include "geonum/minima.hpp"
#include "geonum/semicontinuity.hpp"
#include "oracles.hpp"

using namespace geonum;

namespace {

struct Named {
  DistanceFunction f;
  double floor;
};

std::vector<Named> catalog(int d) {
  return {{p_norm_ball(d, 1), 1.0}, {euclidean_ball(d), 1.0}, {sup_norm_box(d), 1.0 / std::sqrt(double(d))}};
}

void expect_close(const std::vector<double>& a, const std::vector<double>& b, double tol, const std::string& what) {
  ASSERT_EQ(a.size(), b.size()) << what;
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], tol * std::max(1.0, b[i])) << what << " i=" << i;
}

Matrix random_matrix(int d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2, 2);
  while (true) {
    Matrix a(d, d);
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) a(i, j) = u(rng);
    }
    if (std::abs(a.determinant()) > 0.3) return a;
  }
}

}  // namespace

TEST(Minima, IntegerLattice) {
  const Lattice z2 = make_lattice(Matrix::Identity(2, 2));
  const auto m = successive_minima_exact(euclidean_ball(2), z2);
  EXPECT_EQ(m.values, (std::vector<double>{1.0, 1.0}));
  EXPECT_TRUE(m.exact);
  EXPECT_FALSE(m.rank_deficit);
  EXPECT_EQ(m.attained(), 2);
}

TEST(Minima, AxisAlignedLattice) {
  Matrix b(2, 2);
  b << 2, 0, 0, 3;
  const Lattice l = make_lattice(b);
  EXPECT_EQ(successive_minima_exact(euclidean_ball(2), l).values, (std::vector<double>{2.0, 3.0}));
  const Lattice z2 = make_lattice(Matrix::Identity(2, 2));
  const auto exact = successive_minima_exact(euclidean_ball(2), z2);
  const auto budgeted = minima_upper_bound(euclidean_ball(2), z2, 10.0);
  EXPECT_EQ(budgeted.values, exact.values);
  std::vector<std::vector<Int>> w;
  for (const auto& p : exact.witnesses) w.push_back(p.coeffs);
  std::sort(w.begin(), w.end());
  EXPECT_EQ(w, (std::vector<std::vector<Int>>{{0, 1}, {1, 0}}));
}

TEST(Minima, HexagonalLattice) {
  Matrix b(2, 2);
  b << 1, 0.5, 0, std::sqrt(3.0) / 2;
  const auto m = successive_minima_exact(euclidean_ball(2), make_lattice(b));
  EXPECT_NEAR(m.values[0], 1.0, 1e-12);
  EXPECT_NEAR(m.values[1], 1.0, 1e-12);
}

TEST(Minima, WitnessesAreIndependentAndAttain) {
  std::mt19937_64 rng(2);
  for (int d : {2, 3, 4}) {
    for (int trial = 0; trial < 20; ++trial) {
      const Lattice l = oracle::random_lattice(d, rng, 60);
      for (const auto& [f, floor] : catalog(d)) {
        const auto m = successive_minima_exact(f, l);
        Matrix w(d, d);
        for (int i = 0; i < d; ++i) {
          w.col(i) = m.witnesses[i].coords;
          EXPECT_NEAR(f(m.witnesses[i].coords), m.values[i], 1e-12 * m.values[i]);
          if (i > 0) {
            EXPECT_LE(m.values[i - 1], m.values[i]);
          }
        }
        EXPECT_GT(std::abs(w.determinant()), 1e-9 * l.det());
      }
    }
  }
}

TEST(Minima, MatchesBruteForce) {
  std::mt19937_64 rng(17);
  for (int d : {2, 3}) {
    for (int trial = 0; trial < (d == 2 ? 60 : 15); ++trial) {
      const Lattice l = oracle::random_lattice(d, rng);
      for (const auto& [f, floor] : catalog(d)) {
        expect_close(successive_minima_exact(f, l).values, oracle::minima(f, l, floor), 1e-9, f.label());
      }
    }
  }
}

TEST(Minima, SecondTheoremBounds) {
  // 2^d / d! det <= lambda_1 ... lambda_d V <= 2^d det for symmetric convex bodies
  std::mt19937_64 rng(23);
  for (int d : {2, 3}) {
    for (int trial = 0; trial < 30; ++trial) {
      const Lattice l = oracle::random_lattice(d, rng, 60);
      for (const auto& [f, floor] : catalog(d)) {
        const auto m = successive_minima_exact(f, l);
        double prod = *f.volume();
        for (double v : m.values) prod *= v;
        const double fact = std::tgamma(d + 1.0);
        EXPECT_GE(prod, std::pow(2.0, d) / fact * l.det() * (1 - 1e-9));
        EXPECT_LE(prod, std::pow(2.0, d) * l.det() * (1 + 1e-9));
      }
    }
  }
}

TEST(Minima, ScalingLaws) {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> uc(0.2, 5.0);
  for (int trial = 0; trial < 60; ++trial) {
    const int d = 2 + trial % 2;
    const Lattice l = oracle::random_lattice(d, rng, 60);
    const double c = uc(rng);
    for (const auto& [f, floor] : catalog(d)) {
      const auto base = successive_minima_exact(f, l).values;
      std::vector<double> scaled(base);
      for (double& v : scaled) v *= c;
      expect_close(successive_minima_exact(f, dilate_lattice(l, c)).values, scaled, 1e-9, "cL");
      // body S/c has distance function c f
      expect_close(successive_minima_exact(scaled_body(f, 1.0 / c), l).values, scaled, 1e-9, "S/c");
      const Matrix a = random_matrix(d, rng);
      const Lattice al = make_lattice(a * l.basis());
      expect_close(successive_minima_exact(linear_image(f, a), al).values, base, 1e-9, "AS, AL");
    }
  }
}

TEST(Minima, UnboundedNeedsBudget) {
  const Lattice z2 = make_lattice(Matrix::Identity(2, 2));
  try {
    successive_minima_exact(hyperbolic_body(2), z2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnboundedBody);
  }
  const auto m = minima_upper_bound(hyperbolic_body(2), z2, 2.0);
  EXPECT_EQ(m.values, (std::vector<double>{0.0, 0.0}));
  EXPECT_FALSE(m.exact);
}

TEST(Minima, GoldenLatticeNormForm) {
  const Lattice g = golden_lattice();
  const auto m = minima_upper_bound(hyperbolic_body(2), g, 50.0);
  EXPECT_NEAR(m.values[0], 1.0, 1e-12);
  EXPECT_NEAR(m.values[1], 1.0, 1e-12);
  std::size_t seen = 0;
  BallEnumerator(g).for_each(50.0, [&](const PointView& p) {
    if (p.is_origin()) return;
    const double prod = std::abs(p.coords[0] * p.coords[1]);
    EXPECT_GE(prod, 1.0 - 1e-9);
    EXPECT_NEAR(prod, std::round(prod), 1e-9 * p.norm_sq);
    ++seen;
  });
  EXPECT_GT(seen, 1000u);
}

TEST(Minima, BudgetedIsMonotoneAndUpperBound) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const Lattice l = oracle::random_lattice(2, rng, 60);
    const auto f = euclidean_ball(2);
    const auto exact = successive_minima_exact(f, l).values;
    std::vector<double> prev(2, std::numeric_limits<double>::infinity());
    for (double budget : {0.5, 1.0, 2.0, 4.0, 8.0, 64.0}) {
      const auto v = minima_upper_bound(f, l, budget).values;
      for (int i = 0; i < 2; ++i) {
        EXPECT_LE(v[i], prev[i]);
        EXPECT_GE(v[i], exact[i] - 1e-12);
      }
      prev = v;
    }
    expect_close(prev, exact, 1e-12, "large budget");
  }
}

TEST(Minima, RankDeficitIsFlagged) {
  Matrix b(2, 2);
  b << 1, 0, 0, 1000;
  const auto m = minima_upper_bound(euclidean_ball(2), make_lattice(b), 10.0);
  EXPECT_TRUE(m.rank_deficit);
  EXPECT_EQ(m.attained(), 1);
  EXPECT_TRUE(std::isinf(m.values[1]));
}
