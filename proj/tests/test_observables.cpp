#include <cmath>
#include <vector>

#include "gtest/gtest.h"

#include "nhph/observables.hpp"
#include "test_helpers.hpp"

using nhph::CMatrix;
using nhph::Complex;
using nhph::ExpectationMode;

TEST(OrderParameters, MixedModeMatchesTheClosedForms) {
  for (double mu : {0.35, 0.5, 0.8, 1.0, 1.7, 2.9}) {
    const nhph::OrderSweepRow row =
        nhph::order_parameters(mu, ExpectationMode::LR);
    EXPECT_NEAR(std::abs(row.o_af - Complex(-4.0 / 9.0, 0.0)), 0.0, 1e-10)
        << "mu=" << mu;
    EXPECT_NEAR(std::abs(row.o_left - Complex(-4.0 * mu / 9.0, 0.0)), 0.0,
                1e-10)
        << "mu=" << mu;
    EXPECT_NEAR(std::abs(row.o_right - Complex(-4.0 / (9.0 * mu), 0.0)), 0.0,
                1e-10)
        << "mu=" << mu;
    EXPECT_NEAR(std::abs(row.o_chiral - (row.o_right - row.o_left)), 0.0,
                1e-12);
  }
}

TEST(OrderParameters, ChiralValueCrossesZeroAtTheSymmetricPoint) {
  const std::vector<double> grid = {0.5, 1.0, 2.0};
  const std::vector<double> expected = {-2.0 / 3.0, 0.0, 2.0 / 3.0};
  for (size_t i = 0; i < grid.size(); ++i) {
    const nhph::OrderSweepRow row =
        nhph::order_parameters(grid[i], ExpectationMode::LR);
    EXPECT_NEAR(std::abs(row.o_chiral - Complex(expected[i], 0.0)), 0.0, 1e-10)
        << "mu=" << grid[i];
  }
}

TEST(OrderParameters, ChiralValueIsOddUnderMuInversion) {
  for (double mu : {0.4, 0.75, 1.6, 2.8}) {
    const Complex at_mu =
        nhph::order_parameters(mu, ExpectationMode::LR).o_chiral;
    const Complex at_inv =
        nhph::order_parameters(1.0 / mu, ExpectationMode::LR).o_chiral;
    EXPECT_NEAR(std::abs(at_mu + at_inv), 0.0, 1e-10) << "mu=" << mu;
  }
}

TEST(OrderParameters, SelfModeChiralExpectationHasNoRealPart) {
  for (double mu : {0.5, 1.0, 2.0}) {
    const nhph::OrderSweepRow row =
        nhph::order_parameters(mu, ExpectationMode::RR);
    EXPECT_NEAR(row.o_chiral.real(), 0.0, 1e-10) << "mu=" << mu;
  }
}

TEST(StringOrder, MixedModeSitsOnTheFlatPlateau) {
  for (double mu : {0.5, 1.0, 2.0})
    for (int m = 2; m <= 10; ++m) {
      const Complex s = nhph::string_order(mu, m, ExpectationMode::LR);
      EXPECT_NEAR(std::abs(s - Complex(-4.0 / 9.0, 0.0)), 0.0, 1e-10)
          << "mu=" << mu << " m=" << m;
    }
}

TEST(StringOrder, MixedModeDecaysOutsideTheCentralWindow) {
  for (double mu : {0.2, 5.0}) {
    const Complex s = nhph::string_order(mu, 40, ExpectationMode::LR);
    EXPECT_LT(std::abs(s), 1e-6) << "mu=" << mu;
  }
}

TEST(StringOrder, SelfModeSaturatesAwayFromTheSymmetricPoint) {
  const double saturation = -0.305874278157;
  for (double mu : {0.5, 2.0})
    for (int m : {30, 40}) {
      const Complex s = nhph::string_order(mu, m, ExpectationMode::RR);
      EXPECT_NEAR(std::abs(s - Complex(saturation, 0.0)), 0.0, 1e-8)
          << "mu=" << mu << " m=" << m;
    }
  const Complex sym = nhph::string_order(1.0, 30, ExpectationMode::RR);
  EXPECT_NEAR(std::abs(sym - Complex(-4.0 / 9.0, 0.0)), 0.0, 1e-10);
}

TEST(StringOrder, RejectsSeparationsBelowTwo) {
  EXPECT_THROW(nhph::string_order(1.0, 1, ExpectationMode::LR),
               nhph::LinalgError);
}

TEST(EntanglementSpectrum, MatchesTheFrozenTwoWeightValues) {
  const double w0 = 0.6755617208, w1 = 0.3244382792;
  for (double mu : {0.5, 2.0}) {
    const nhph::RVector w =
        nhph::entanglement_spectrum(nhph::asymmetric_aklt(mu));
    ASSERT_EQ(w.size(), 2);
    EXPECT_NEAR(w[0], w0, 1e-7) << "mu=" << mu;
    EXPECT_NEAR(w[1], w1, 1e-7) << "mu=" << mu;
  }
  const nhph::RVector sym =
      nhph::entanglement_spectrum(nhph::asymmetric_aklt(1.0));
  EXPECT_NEAR(sym[0], 0.5, 1e-10);
  EXPECT_NEAR(sym[1], 0.5, 1e-10);
}

TEST(EntanglementSpectrum, AgreesWithACenterCutOfAFiniteChain) {
  // A 12-site open chain with generic boundary vectors, Schmidt-decomposed
  // across the center bond, should approach the uniform-state weights.
  for (double mu : {0.6, 1.6}) {
    const nhph::RVector w =
        nhph::entanglement_spectrum(nhph::asymmetric_aklt(mu));
    const nhph::RVector finite = oracle::finite_chain_weights(mu, 12);
    ASSERT_GE(finite.size(), 2);
    EXPECT_NEAR(w[0], finite[0], 5e-3) << "mu=" << mu;
    EXPECT_NEAR(w[1], finite[1], 5e-3) << "mu=" << mu;
  }
}

TEST(Infidelity, VanishesOnIdenticalStatesAndIgnoresScale) {
  const nhph::UniformMPS a = nhph::asymmetric_aklt(0.7);
  EXPECT_LT(nhph::infidelity(a, a), 1e-12);
  nhph::UniformMPS scaled = a;
  for (CMatrix& t : scaled.tensor) t *= 3.0;
  EXPECT_LT(nhph::infidelity(a, scaled), 1e-12);
}

TEST(Infidelity, ProductStateAgainstTheSymmetricStateHasTheClosedValue) {
  nhph::UniformMPS product;
  product.d = 3;
  product.D = 1;
  product.tensor.assign(3, CMatrix::Zero(1, 1));
  product.tensor[1](0, 0) = 1.0;
  const nhph::UniformMPS a = nhph::asymmetric_aklt(1.0);
  const double expected = 1.0 - 1.0 / std::sqrt(3.0);
  EXPECT_NEAR(nhph::infidelity(a, product), expected, 1e-10);
  EXPECT_NEAR(nhph::infidelity(product, a), expected, 1e-10);
}

TEST(Infidelity, SeparatesNearbyStatesWithoutGoingNegative) {
  const double eta =
      nhph::infidelity(nhph::asymmetric_aklt(0.6), nhph::asymmetric_aklt(0.61));
  EXPECT_GT(eta, 0.0);
  EXPECT_LT(eta, 1e-3);
}
