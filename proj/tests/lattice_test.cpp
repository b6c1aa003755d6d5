#include <gtest/gtest.h>

#include <random>

#include "geonum/integer.hpp"
#include "geonum/lattice.hpp"
#include "geonum/reduce.hpp"

using namespace geonum;

namespace {

Matrix m2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no geonum::Error thrown";
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST(Lattice, DeterminantIsAbsolute) {
  const Lattice l = make_lattice(m2(0, 1, 1, 0));
  EXPECT_DOUBLE_EQ(l.det(), 1.0);
  EXPECT_EQ(l.dim(), 2);
}

TEST(Lattice, RejectsBadBases) {
  EXPECT_EQ(kind_of([] { make_lattice(m2(1, 2, 2, 4)); }), ErrorKind::SingularBasis);
  EXPECT_EQ(kind_of([] { make_lattice(Matrix::Identity(1, 1)); }), ErrorKind::DimensionTooSmall);
  EXPECT_EQ(kind_of([] { make_lattice(Matrix::Zero(2, 3)); }), ErrorKind::DimensionMismatch);
  EXPECT_EQ(kind_of([] { make_lattice(Matrix::Zero(2, 2)); }), ErrorKind::SingularBasis);
}

TEST(Lattice, SingularityIsScaleFree) {
  EXPECT_NO_THROW(make_lattice(m2(1e-8, 0, 0, 1e-8)));
  EXPECT_NO_THROW(make_lattice(m2(1e8, 0, 0, 1e8)));
}

TEST(Lattice, PrimitiveIsGcdOne) {
  const Lattice l = make_lattice(m2(2, 1, 0, 3));
  EXPECT_TRUE(is_primitive(l, make_point(l, {1, 0})));
  EXPECT_TRUE(is_primitive(l, make_point(l, {3, -2})));
  EXPECT_FALSE(is_primitive(l, make_point(l, {2, 4})));
  EXPECT_FALSE(is_primitive(l, make_point(l, {0, 0})));
  LatticePoint off = make_point(l, {1, 1});
  off.coords[0] += 0.1;
  EXPECT_EQ(kind_of([&] { is_primitive(l, off); }), ErrorKind::NotLatticePoint);
}

TEST(Lattice, ParseRoundTrip) {
  const Lattice l = parse_lattice("1,0;0.5,0.8660254037844386");
  EXPECT_DOUBLE_EQ(l.basis()(0, 1), 0.5);
  EXPECT_DOUBLE_EQ(l.basis()(1, 0), 0.0);
  const Lattice back = parse_lattice(format_basis(l.basis()));
  EXPECT_EQ(back.basis(), l.basis());
  EXPECT_EQ(kind_of([] { parse_lattice("1,0;0"); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { parse_lattice("1,x;0,1"); }), ErrorKind::ParseError);
}

TEST(Lattice, PerturbIsSeededAndBounded) {
  const Lattice l = make_lattice(Matrix::Identity(3, 3));
  const Lattice a = perturb_basis(l, 0.01, 7);
  const Lattice b = perturb_basis(l, 0.01, 7);
  EXPECT_EQ(a.basis(), b.basis());
  EXPECT_LE((a.basis() - l.basis()).cwiseAbs().maxCoeff(), 0.01);
  EXPECT_NE(perturb_basis(l, 0.01, 8).basis(), a.basis());
}

TEST(Integer, GcdAndDeterminant) {
  const std::vector<Int> v{12, -18, 30};
  EXPECT_EQ(coefficient_gcd(v), 6);
  std::vector<std::vector<Int>> cols{{2, 1}, {1, 3}};
  EXPECT_EQ(static_cast<long long>(coefficient_determinant(cols)), 5);
}

TEST(Integer, SpanRankMatchesDeterminant) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<Int> u(-5, 5);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<std::vector<Int>> cols(3, std::vector<Int>(3));
    for (auto& c : cols) {
      for (auto& v : c) v = u(rng);
    }
    if (trial % 3 == 0) {
      for (int i = 0; i < 3; ++i) cols[2][i] = cols[0][i] * 2 - cols[1][i] * 3;
    }
    IntegerSpan span(3);
    int rank = 0;
    for (const auto& c : cols) rank += span.insert(c) ? 1 : 0;
    EXPECT_EQ(rank == 3, coefficient_determinant(cols) != 0);
    EXPECT_EQ(span.rank(), rank);
  }
}

TEST(Reduce, TransformIsUnimodular) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int d : {2, 3, 4}) {
    for (int trial = 0; trial < 50; ++trial) {
      Matrix b(d, d);
      for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) b(i, j) = u(rng);
      }
      if (std::abs(b.determinant()) < 0.1) continue;
      const Lattice l = make_lattice(b);
      const ReducedBasis rb = reduce_basis(l);
      EXPECT_NEAR(std::abs(rb.transform.cast<double>().determinant()), 1.0, 1e-9);
      EXPECT_LE((l.basis() * rb.transform.cast<double>() - rb.reduced).norm(), 1e-9 * l.basis().norm());
    }
  }
}

TEST(Lattice, SmallDeterminants) {
  EXPECT_DOUBLE_EQ(make_lattice(Matrix::Identity(2, 2)).det(), 1.0);
  EXPECT_DOUBLE_EQ(make_lattice(m2(2, 0, 0, 3)).det(), 6.0);
  const double r5 = std::sqrt(5.0);
  EXPECT_NEAR(make_lattice(m2(1, (1 + r5) / 2, 1, (1 - r5) / 2)).det(), r5, 1e-12);
}

TEST(Lattice, PerturbationKeepsDeterminantClose) {
  const Lattice z2 = make_lattice(Matrix::Identity(2, 2));
  EXPECT_EQ(perturb_basis(z2, 0.0, 123).basis(), z2.basis());
  const double det = perturb_basis(z2, 0.01, 7).det();
  EXPECT_GE(det, 0.98);
  EXPECT_LE(det, 1.02);
  double prev = 1.0;
  for (int n : {1, 10, 100, 1000}) {
    const double gap = (perturb_basis(z2, 1.0 / n, 3).basis() - z2.basis()).cwiseAbs().maxCoeff();
    EXPECT_LE(gap, 1.0 / n);
    EXPECT_LE(gap, prev);
    prev = gap;
  }
}
