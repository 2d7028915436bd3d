#include <vector>

#include "gtest/gtest.h"

#include "nhph/itebd.hpp"
#include "nhph/observables.hpp"
#include "test_helpers.hpp"

using nhph::CMatrix;
using nhph::Complex;

TEST(MakeGate, ClosedFormMatchesTheMatrixExponential) {
  const nhph::LocalProjector p = nhph::build_projector(nhph::aklt_pair(0.8), 2);
  const nhph::EvolutionGate gate = nhph::make_gate(p, 0.05);
  const CMatrix expected = oracle::expm_taylor(-0.05 * p.matrix);
  EXPECT_LT((gate.matrix - expected).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_EQ(gate.dtau, 0.05);
}

TEST(MakeGate, RejectsOperatorsThatAreNotIdempotent) {
  nhph::LocalProjector p = nhph::build_projector(nhph::aklt_pair(0.8), 2);
  p.matrix *= 2.0;
  EXPECT_THROW(nhph::make_gate(p, 0.05), nhph::LinalgError);
}

TEST(RandomCell, IsSeededDeterministicAndNormalized) {
  const nhph::UnitCellState a = nhph::random_cell(2, 3, 6, 42);
  const nhph::UnitCellState b = nhph::random_cell(2, 3, 6, 42);
  const nhph::UnitCellState c = nhph::random_cell(2, 3, 6, 43);
  ASSERT_EQ(a.site_tensors.size(), 2u);
  ASSERT_EQ(a.site_tensors[0].size(), 3u);
  double diff_same = 0.0, diff_other = 0.0, norm = 0.0;
  for (int s = 0; s < 2; ++s)
    for (int p = 0; p < 3; ++p) {
      const size_t si = static_cast<size_t>(s), pi = static_cast<size_t>(p);
      diff_same += (a.site_tensors[si][pi] - b.site_tensors[si][pi]).norm();
      diff_other += (a.site_tensors[si][pi] - c.site_tensors[si][pi]).norm();
      if (p == 0) {
        norm = 0.0;
        for (int q = 0; q < 3; ++q)
          norm += a.site_tensors[si][static_cast<size_t>(q)].squaredNorm();
        EXPECT_NEAR(norm, 1.0, 1e-12) << "site " << s;
      }
    }
  EXPECT_EQ(diff_same, 0.0);
  EXPECT_GT(diff_other, 1e-3);
  for (const nhph::RVector& w : a.schmidt_weights)
    EXPECT_NEAR(w.squaredNorm(), 1.0, 1e-12);
}

TEST(CanonicalCell, GroundStateIsStationaryUnderItsOwnGate) {
  const double mu = 1.2;
  const nhph::UnitCellState cell =
      nhph::canonical_cell(nhph::asymmetric_aklt(mu), 2);
  const nhph::EvolutionGate gate =
      nhph::make_gate(nhph::build_projector(nhph::aklt_pair(mu), 2), 5e-3);
  const std::vector<double> before = nhph::detail::weight_snapshot(cell);
  nhph::UnitCellState evolved = cell;
  for (int i = 0; i < 5; ++i) evolved = nhph::itebd_sweep(evolved, gate);
  const std::vector<double> after = nhph::detail::weight_snapshot(evolved);
  ASSERT_EQ(before.size(), after.size());
  double drift = 0.0;
  for (size_t i = 0; i < before.size(); ++i)
    drift += (after[i] - before[i]) * (after[i] - before[i]);
  EXPECT_LT(drift, 1e-20);
}

TEST(ToUniform, RoundTripsTheBlockedInputState) {
  for (double mu : {0.7, 1.0, 1.8}) {
    const nhph::UniformMPS a = nhph::asymmetric_aklt(mu);
    const nhph::UnitCellState cell = nhph::canonical_cell(a, 2);
    const nhph::UniformMPS back = nhph::to_uniform(cell);
    EXPECT_EQ(back.d, 9);
    EXPECT_LT(nhph::infidelity(nhph::blocked(a, 2), back), 1e-12)
        << "mu=" << mu;
  }
}

TEST(FindGroundState, ValidatesItsArguments) {
  const nhph::LocalProjector p = nhph::build_projector(nhph::aklt_pair(1.0), 2);
  EXPECT_THROW(nhph::find_ground_state(p, 1, 5e-3, 1e-14, 100),
               nhph::LinalgError);
  EXPECT_THROW(nhph::find_ground_state(p, 12, 0.0, 1e-14, 100),
               nhph::LinalgError);
  EXPECT_THROW(nhph::find_ground_state(p, 12, 5e-3, 0.0, 100),
               nhph::LinalgError);
}

TEST(FindGroundState, SweepsAreDeterministicPerSeed) {
  const nhph::LocalProjector p = nhph::build_projector(nhph::aklt_pair(1.0), 2);
  const auto [s1, t1] = nhph::find_ground_state(p, 6, 5e-3, 1e-30, 50, false, 7);
  const auto [s2, t2] = nhph::find_ground_state(p, 6, 5e-3, 1e-30, 50, false, 7);
  const auto [s3, t3] = nhph::find_ground_state(p, 6, 5e-3, 1e-30, 50, false, 8);
  EXPECT_EQ(t1.steps, 50);
  EXPECT_FALSE(t1.converged);
  const std::vector<double> w1 = nhph::detail::weight_snapshot(s1);
  const std::vector<double> w2 = nhph::detail::weight_snapshot(s2);
  const std::vector<double> w3 = nhph::detail::weight_snapshot(s3);
  EXPECT_EQ(w1, w2);
  double diff = 0.0;
  for (size_t i = 0; i < w1.size(); ++i) diff += std::abs(w1[i] - w3[i]);
  EXPECT_GT(diff, 1e-12);
}

TEST(FindGroundState, ConvergesToTheSymmetricGroundStateAtFullAccuracy) {
  const nhph::LocalProjector p = nhph::build_projector(nhph::aklt_pair(1.0), 2);
  const auto [cell, trace] =
      nhph::find_ground_state(p, 12, 5e-3, 1e-14, 200000);
  EXPECT_TRUE(trace.converged);
  EXPECT_EQ(trace.probe_window, 200);
  ASSERT_FALSE(trace.e_history.empty());
  EXPECT_LT(trace.e_history.back(), 1e-14);

  const nhph::UniformMPS found = nhph::to_uniform(cell);
  const nhph::UniformMPS target = nhph::blocked(nhph::asymmetric_aklt(1.0), 2);
  EXPECT_LT(nhph::infidelity(target, found), 1e-8);

  for (const nhph::RVector& w : cell.schmidt_weights) {
    int above = 0;
    for (Eigen::Index i = 0; i < w.size(); ++i)
      if (w[i] * w[i] > 1e-6) ++above;
    EXPECT_EQ(above, 2);
  }
}

TEST(FindGroundState, WarmStartFromAConvergedCellFinishesInOneProbe) {
  const nhph::LocalProjector p = nhph::build_projector(nhph::aklt_pair(1.0), 2);
  const nhph::UnitCellState seed =
      nhph::canonical_cell(nhph::asymmetric_aklt(1.0), 2);
  const auto [cell, trace] = nhph::find_ground_state(
      p, 12, 5e-3, 1e-14, 200000, false, 1, seed);
  EXPECT_TRUE(trace.converged);
  EXPECT_LE(trace.steps, trace.probe_window + 1);
  (void)cell;
}
