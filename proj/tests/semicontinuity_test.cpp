#include <gtest/gtest.h>

#include <random>

#include "geonum/semicontinuity.hpp"
#include "oracles.hpp"

using namespace geonum;

namespace {

ProbeConfig schedule_to(int n_max) {
  ProbeConfig c;
  for (int n = 1; n <= n_max; ++n) c.schedule.push_back(n);
  return c;
}

}  // namespace

TEST(Semicontinuity, ScaledBodiesConverge) {
  const Lattice z2 = make_lattice(Matrix::Identity(2, 2));
  ProbeConfig c = schedule_to(64);
  c.body_schedule = {BodySchedule::Kind::Scale, 1.0};
  const auto r = semicontinuity_probe(euclidean_ball(2), z2, c);
  EXPECT_TRUE(r.bounded);
  EXPECT_TRUE(r.all_converge);
  EXPECT_TRUE(r.all_upper);
  // lambda_i((1 + 1/n) B, Z^2) = n / (n + 1)
  for (const auto& row : r.rows) EXPECT_NEAR(row.value, row.n / (row.n + 1.0), 1e-12);
}

TEST(Semicontinuity, PerturbedUnitLattice) {
  ProbeConfig c = schedule_to(64);
  c.lattice_schedule = {LatticeSchedule::Kind::Perturb, 1.0, 2};
  const auto r = semicontinuity_probe(euclidean_ball(2), make_lattice(Matrix::Identity(2, 2)), c);
  EXPECT_TRUE(r.all_converge);
  for (const auto& row : r.rows) {
    if (row.n >= 32) {
      EXPECT_NEAR(row.value, 1.0, 2.0 / row.n);
    }
  }
}

TEST(Semicontinuity, CatalogSchedules) {
  std::mt19937_64 rng(8);
  const std::vector<BodySchedule> bodies{{BodySchedule::Kind::Fixed, 0.0},
                                         {BodySchedule::Kind::Scale, 1.0},
                                         {BodySchedule::Kind::Multiply, 1.0}};
  const std::vector<LatticeSchedule> lattices{{LatticeSchedule::Kind::Fixed, 0.0, 0},
                                              {LatticeSchedule::Kind::Perturb, 0.3, 5},
                                              {LatticeSchedule::Kind::Dilate, 0.5, 0}};
  for (int d : {2, 3}) {
    const Lattice l = oracle::random_lattice(d, rng, 30);
    for (const auto& f : {p_norm_ball(d, 1), euclidean_ball(d), sup_norm_box(d)}) {
      for (const auto& bs : bodies) {
        for (const auto& ls : lattices) {
          ProbeConfig c = schedule_to(64);
          c.body_schedule = bs;
          c.lattice_schedule = ls;
          const auto r = semicontinuity_probe(f, l, c);
          EXPECT_TRUE(r.failures.empty());
          EXPECT_TRUE(r.all_converge) << f.label() << " d=" << d;
        }
      }
    }
  }
}

TEST(Semicontinuity, UnboundedUpperOnly) {
  ProbeConfig c = schedule_to(64);
  c.lattice_schedule = {LatticeSchedule::Kind::Perturb, 0.05, 3};
  for (const Lattice& l : {golden_lattice(), make_lattice(Matrix::Identity(2, 2))}) {
    const auto r = semicontinuity_probe(hyperbolic_body(2), l, c);
    EXPECT_FALSE(r.bounded);
    EXPECT_FALSE(r.all_converge);
    EXPECT_TRUE(r.all_upper);
  }
}

TEST(Semicontinuity, GoldenLatticeDropsUnderPerturbation) {
  const auto r = noncontinuity_demo(0.05, 100.0, 1);
  EXPECT_TRUE(r.found);
  ASSERT_TRUE(r.lattice.has_value());
  EXPECT_LE((r.lattice->basis() - golden_lattice().basis()).cwiseAbs().maxCoeff(), 0.05);
  EXPECT_LT(r.minima.values.back(), 0.5);
  Matrix w(2, 2);
  w << r.minima.witnesses[0].coords, r.minima.witnesses[1].coords;
  EXPECT_GT(std::abs(w.determinant()), 0.0);
  const auto again = noncontinuity_demo(0.05, 100.0, 1);
  EXPECT_EQ(again.lattice->basis(), r.lattice->basis());
  EXPECT_EQ(again.minima.values, r.minima.values);
  const auto zero = noncontinuity_demo(0.0, 50.0, 1);
  EXPECT_FALSE(zero.found);
  EXPECT_NEAR(zero.best_lambda_d, 1.0, 1e-12);
}
