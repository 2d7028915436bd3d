// Acceptance gate: one self-contained check per shipped guarantee, each
// printed as a single PASS/FAIL line with its runtime.  Returns the number
// of failed criteria.  All tolerances are pinned here, in code.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "nhph/exact_diag.hpp"
#include "nhph/itebd.hpp"
#include "nhph/observables.hpp"
#include "nhph/parent_ham.hpp"

using nhph::CMatrix;
using nhph::Complex;
using nhph::CVector;

namespace {

struct Criterion {
  int id;
  std::string name;
  double budget_seconds;
  bool (*body)(std::string& detail);
};

// ---------------------------------------------------------------------------
// 1. Transfer spectrum closed form at random deformations.

bool check_transfer_spectrum(std::string& detail) {
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> dist(1e-3, 3.5);
  for (int trial = 0; trial < 20; ++trial) {
    const double mu = dist(rng);
    const nhph::StatePair pair = nhph::aklt_pair(mu);
    const nhph::TransferObject e = nhph::transfer_matrix(pair.left, pair.right);
    const std::vector<Complex> expected = {
        {0.5, 0.0}, {-1.5 * mu, 0.0}, {0.5 * mu, 0.0}, {0.5 * mu * mu, 0.0}};
    const double spectrum_dist =
        nhph::spectrum_distance(nhph::eigenvalues_only(e.matrix), expected,
                                1e-10);
    if (spectrum_dist > 1e-10) {
      detail = "mu=" + std::to_string(mu);
      return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// 2. Transfer fixed points in both phases; degeneracy error at the boundary.

bool check_fixed_points(std::string& detail) {
  CMatrix expected_high = CMatrix::Zero(4, 4);
  expected_high(1, 1) = 0.5;
  expected_high(1, 2) = -0.5;
  expected_high(2, 1) = -0.5;
  expected_high(2, 2) = 0.5;
  CMatrix expected_low = CMatrix::Zero(4, 4);
  expected_low(0, 0) = 1.0;

  const nhph::StatePair central = nhph::aklt_pair(1.0);
  const CMatrix e_central = nhph::rg_fixed_point(
      nhph::transfer_matrix(central.left, central.right));
  if ((e_central - expected_high).cwiseAbs().maxCoeff() > 1e-10) {
    detail = "mu=1 fixed point";
    return false;
  }
  const nhph::StatePair trivial = nhph::aklt_pair(0.2);
  const CMatrix e_trivial = nhph::rg_fixed_point(
      nhph::transfer_matrix(trivial.left, trivial.right));
  if ((e_trivial - expected_low).cwiseAbs().maxCoeff() > 1e-10) {
    detail = "mu=0.2 fixed point";
    return false;
  }
  for (double mu : {1.0 / 3.0 - 1e-12, 1.0 / 3.0 + 1e-12}) {
    const nhph::StatePair pair = nhph::aklt_pair(mu);
    bool threw = false;
    try {
      nhph::rg_fixed_point(nhph::transfer_matrix(pair.left, pair.right));
    } catch (const nhph::DegenerateDominantError&) {
      threw = true;
    }
    if (!threw) {
      detail = "no degeneracy error at mu=" + std::to_string(mu);
      return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// 3. Order parameters across the central phase.

bool check_order_parameters(std::string& detail) {
  const int points = 40;
  const double lo = 0.34, hi = 1.0 / 0.34;  // reciprocal-symmetric grid
  std::vector<double> grid(points);
  for (int i = 0; i < points; ++i)
    grid[static_cast<size_t>(i)] =
        std::exp(std::log(lo) +
                 (std::log(hi) - std::log(lo)) * i / (points - 1));
  std::vector<Complex> chiral(points);
  for (int i = 0; i < points; ++i) {
    const double mu = grid[static_cast<size_t>(i)];
    const nhph::OrderSweepRow lr =
        nhph::order_parameters(mu, nhph::ExpectationMode::LR);
    if (std::abs(lr.o_af - Complex(-4.0 / 9.0, 0.0)) > 1e-10 ||
        std::abs(lr.o_left - Complex(-4.0 * mu / 9.0, 0.0)) > 1e-10 ||
        std::abs(lr.o_right - Complex(-4.0 / (9.0 * mu), 0.0)) > 1e-10) {
      detail = "LR closed form at mu=" + std::to_string(mu);
      return false;
    }
    chiral[static_cast<size_t>(i)] = lr.o_chiral;
    const nhph::OrderSweepRow rr =
        nhph::order_parameters(mu, nhph::ExpectationMode::RR);
    if (std::abs(rr.o_chiral.real()) > 1e-10) {
      detail = "RR chiral real part at mu=" + std::to_string(mu);
      return false;
    }
  }
  for (int i = 0; i < points; ++i) {
    // grid[i] * grid[points-1-i] == 1: the chiral value must be odd.
    if (std::abs(chiral[static_cast<size_t>(i)] +
                 chiral[static_cast<size_t>(points - 1 - i)]) > 1e-10) {
      detail = "centrosymmetry at mu=" + std::to_string(grid[static_cast<size_t>(i)]);
      return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// 4. String order: flat plateau inside the phase, decay outside.

bool check_string_order(std::string& detail) {
  for (double mu : {0.5, 1.0, 2.0})
    for (int m = 2; m <= 10; ++m) {
      const Complex s = nhph::string_order(mu, m, nhph::ExpectationMode::LR);
      if (std::abs(s - Complex(-4.0 / 9.0, 0.0)) > 1e-10) {
        detail = "plateau at mu=" + std::to_string(mu) + " m=" +
                 std::to_string(m);
        return false;
      }
    }
  for (double mu : {0.2, 5.0}) {
    const Complex s = nhph::string_order(mu, 40, nhph::ExpectationMode::LR);
    if (std::abs(s) > 1e-6) {
      detail = "no decay at mu=" + std::to_string(mu);
      return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// 5. Local projector correctness at both interaction spans.

CMatrix expected_lambda_expansion(double mu) {
  const Complex i(0.0, 1.0);
  const double a = (mu * mu + 1.0) / (4.0 * mu);
  const double b = (mu * mu + 1.0) / (6.0 * mu);
  const double c = (mu * mu - 1.0) / (4.0 * mu);
  const double e = (mu * mu - 1.0) / (6.0 * mu);
  const double f = (std::pow(mu, 4) + 1.0) / (12.0 * mu * mu);
  const double g = (std::pow(mu, 4) - 1.0) / (12.0 * mu * mu);
  CMatrix o = CMatrix::Zero(9, 9);
  o.block(0, 0, 4, 4) << a, b, i * c, i * e,  //
      b, a, i * e, i * c,                     //
      -i * c, -i * e, a, b,                   //
      -i * e, -i * c, b, a;
  o.block(4, 4, 4, 4) << f, 0, -i * g, 0,  //
      0, 1.0 / 3.0, 0, std::sqrt(3.0) / 6.0,
      i * g, 0, f, 0,                      //
      0, std::sqrt(3.0) / 6.0, 0, 2.0 / 3.0;
  o(8, 8) = 5.0 / 3.0;
  return o;
}

bool check_projector(std::string& detail) {
  for (double mu : {0.3, 0.5, 1.0, 2.0, 3.3}) {
    for (int k : {2, 3}) {
      const nhph::StatePair pair = nhph::aklt_pair(mu);
      const nhph::LocalProjector p = nhph::build_projector(pair, k);
      const nhph::BlockedMap tr =
          nhph::blocked_map(pair.right, k, nhph::BlockSide::Right);
      const nhph::BlockedMap tl =
          nhph::blocked_map(pair.left, k, nhph::BlockSide::Left);
      if ((p.matrix * tr.matrix).cwiseAbs().maxCoeff() > 1e-10 ||
          (tl.matrix.adjoint() * p.matrix).cwiseAbs().maxCoeff() > 1e-10) {
        detail = "annihilation mu=" + std::to_string(mu) + " k=" +
                 std::to_string(k);
        return false;
      }
      const Eigen::Index dim = p.matrix.rows();
      std::vector<Complex> expected(static_cast<size_t>(dim), {1.0, 0.0});
      for (int z = 0; z < 4; ++z) expected[static_cast<size_t>(z)] = 0.0;
      if (nhph::spectrum_distance(nhph::eigenvalues_only(p.matrix), expected,
                                  1e-8) > 1e-8) {
        detail = "spectrum mu=" + std::to_string(mu) + " k=" +
                 std::to_string(k);
        return false;
      }
      if (k == 2) {
        if ((p.matrix - nhph::hamiltonian_k2(mu).matrix)
                .cwiseAbs()
                .maxCoeff() > 1e-12) {
          detail = "closed-form cross-check mu=" + std::to_string(mu);
          return false;
        }
        if ((nhph::expand_lambda(p) - expected_lambda_expansion(mu))
                .cwiseAbs()
                .maxCoeff() > 1e-12) {
          detail = "generator expansion mu=" + std::to_string(mu);
          return false;
        }
        const nhph::LocalProjector adj =
            nhph::build_projector(nhph::aklt_pair(1.0 / mu), 2);
        if ((p.matrix.adjoint() - adj.matrix).cwiseAbs().maxCoeff() > 1e-12) {
          detail = "adjoint pairing mu=" + std::to_string(mu);
          return false;
        }
      }
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// 6. Exact diagonalization: ground spaces, similarity, conjugation closure.

double conjugation_distance(const std::vector<Complex>& eig) {
  std::vector<Complex> conj(eig.size());
  for (size_t i = 0; i < eig.size(); ++i) conj[i] = std::conj(eig[i]);
  return nhph::greedy_match_distance(eig, conj);
}

bool check_exact_diag(std::string& detail) {
  // Open chains: fourfold zero-energy ground space at every length and mu.
  for (int n : {4, 5, 6})
    for (double mu : {0.2, 0.5, 1.0, 2.0, 5.0}) {
      const nhph::SpectrumReport rep = nhph::full_spectrum(nhph::build_chain(
          nhph::build_projector(nhph::aklt_pair(mu), 2), n,
          nhph::Boundary::Kind::Open));
      if (std::abs(rep.ground_energy) > 1e-9 || rep.degeneracy != 4) {
        detail = "open chain n=" + std::to_string(n) + " mu=" +
                 std::to_string(mu);
        return false;
      }
    }
  // Similarity to the symmetric point for open chains.
  for (double mu : {0.2, 0.5, 1.0, 2.0, 5.0})
    if (nhph::obc_similarity_check(mu, 4, 2) > 1e-8) {
      detail = "similarity n=4 mu=" + std::to_string(mu);
      return false;
    }
  for (double mu : {0.2, 2.0})
    if (nhph::obc_similarity_check(mu, 5, 2) > 1e-8 ||
        nhph::obc_similarity_check(mu, 5, 3) > 1e-8) {
      detail = "similarity n=5 mu=" + std::to_string(mu);
      return false;
    }
  // Periodic three-site ring: unique ground state everywhere; the zero
  // mode survives only inside the central phase.
  for (double mu : {0.2, 0.25, 0.5, 1.0, 2.0}) {
    const nhph::SpectrumReport rep = nhph::full_spectrum(nhph::build_chain(
        nhph::build_projector(nhph::aklt_pair(mu), 2), 3,
        nhph::Boundary::Kind::Periodic));
    if (rep.degeneracy != 1) {
      detail = "ring degeneracy mu=" + std::to_string(mu);
      return false;
    }
    if (conjugation_distance(rep.eigenvalues) > 1e-9) {
      detail = "conjugation closure mu=" + std::to_string(mu);
      return false;
    }
    const bool negative = rep.ground_energy.real() < -1e-3;
    if (mu <= 0.25 && !negative) {
      detail = "missing negative ground energy mu=" + std::to_string(mu);
      return false;
    }
    if (mu >= 0.5 && std::abs(rep.ground_energy) > 1e-9) {
      detail = "nonzero ground energy mu=" + std::to_string(mu);
      return false;
    }
    if (mu == 0.2 && (std::abs(rep.ground_energy.real() + 2.437221) > 1e-5 ||
                      std::abs(rep.ground_energy.imag()) > 1e-9 ||
                      std::abs(rep.gap - 2.113518) > 1e-5)) {
      detail = "frozen ring values at mu=0.2";
      return false;
    }
  }
  // Periodic ring with three-site terms: doubly degenerate ground space.
  const nhph::SpectrumReport rep3 = nhph::full_spectrum(nhph::build_chain(
      nhph::build_projector(nhph::aklt_pair(0.1), 3), 4,
      nhph::Boundary::Kind::Periodic));
  if (rep3.degeneracy != 2 ||
      std::abs(rep3.ground_energy.real() + 236.802746) > 1e-3 ||
      conjugation_distance(rep3.eigenvalues) > 1e-9) {
    detail = "three-site ring at mu=0.1";
    return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// 7. Imaginary-time ground-state search.

bool check_itebd(std::string& detail) {
  const int dmax = 12;
  const double dtau = 5e-3, e_tol = 1e-14;
  const long max_steps = 200000;
  for (double mu : {0.6, 1.0, 1.6}) {
    const nhph::LocalProjector p =
        nhph::build_projector(nhph::aklt_pair(mu), 2);
    for (bool adjoint : {false, true}) {
      const auto [cell, trace] = nhph::find_ground_state(
          p, dmax, dtau, e_tol, max_steps, adjoint);
      if (!trace.converged) {
        detail = "not converged mu=" + std::to_string(mu) +
                 (adjoint ? " adjoint" : "");
        return false;
      }
      const double target_mu = adjoint ? 1.0 / mu : mu;
      const double eta = nhph::infidelity(
          nhph::blocked(nhph::asymmetric_aklt(target_mu), 2),
          nhph::to_uniform(cell));
      if (eta > 1e-8) {
        detail = "infidelity " + std::to_string(eta) + " at mu=" +
                 std::to_string(mu) + (adjoint ? " adjoint" : "");
        return false;
      }
      for (const nhph::RVector& w : cell.schmidt_weights) {
        int above = 0;
        for (Eigen::Index i = 0; i < w.size(); ++i)
          if (w[i] * w[i] > 1e-6) ++above;
        if (above != 2) {
          detail = "weight count " + std::to_string(above) + " at mu=" +
                   std::to_string(mu);
          return false;
        }
      }
    }
  }
  // Outside the central phase the search must fail or land far away.
  const auto [cell, trace] = nhph::find_ground_state(
      nhph::build_projector(nhph::aklt_pair(0.25), 2), dmax, dtau, e_tol,
      max_steps);
  const double eta = nhph::infidelity(
      nhph::blocked(nhph::asymmetric_aklt(0.25), 2), nhph::to_uniform(cell));
  if (trace.converged && eta <= 1e-2) {
    detail = "trivial-phase run converged with infidelity " +
             std::to_string(eta);
    return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// 8. Finite rings reproduce the thermodynamic-limit expectations.

CVector apply_two_site(const CMatrix& op, const CVector& v) {
  const Eigen::Index rest = v.size() / 9;
  using RowMat =
      Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::Map<const RowMat> m(v.data(), 9, rest);
  CVector out(v.size());
  Eigen::Map<RowMat>(out.data(), 9, rest) = op * m;
  return out;
}

bool check_finite_size_consistency(std::string& detail) {
  for (double mu : {0.9, 1.0, 1.1}) {
    const nhph::StatePair pair = nhph::aklt_pair(mu);
    const double ratio_bound =
        std::max({0.5, 0.5 * mu, 0.5 * mu * mu}) / (1.5 * mu) + 0.05;
    for (const CMatrix& op : {nhph::op_af(), nhph::op_left()}) {
      const Complex limit = nhph::expectation_lr(pair, op, 2);
      double err_prev = 0.0;
      for (int n : {8, 9}) {
        const CVector r =
            nhph::materialize(pair.right, n, nhph::Boundary::periodic());
        const CVector l =
            nhph::materialize(pair.left, n, nhph::Boundary::periodic());
        const Complex finite = l.dot(apply_two_site(op, r)) / l.dot(r);
        const double err = std::abs(finite - limit);
        if (n == 9) {
          if (err >= err_prev) {
            detail = "error not decreasing at mu=" + std::to_string(mu);
            return false;
          }
          if (err / err_prev > ratio_bound) {
            detail = "ratio " + std::to_string(err / err_prev) +
                     " exceeds bound at mu=" + std::to_string(mu);
            return false;
          }
        }
        err_prev = err;
      }
    }
  }
  return true;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "transfer spectrum", 1.0, check_transfer_spectrum},
      {2, "transfer fixed points", 1.0, check_fixed_points},
      {3, "order parameters", 5.0, check_order_parameters},
      {4, "string order", 5.0, check_string_order},
      {5, "local projector", 5.0, check_projector},
      {6, "exact diagonalization", 120.0, check_exact_diag},
      {7, "imaginary-time ground state", 600.0, check_itebd},
      {8, "finite-size consistency", 60.0, check_finite_size_consistency},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    std::string detail;
    bool ok = false;
    const auto start = std::chrono::steady_clock::now();
    try {
      ok = c.body(detail);
    } catch (const std::exception& err) {
      detail = std::string("exception: ") + err.what();
      ok = false;
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (ok && seconds > c.budget_seconds) {
      ok = false;
      detail = "exceeded the " + std::to_string(c.budget_seconds) +
               " s budget";
    }
    if (!ok) ++failures;
    std::printf("criterion %d (%s): %s [%.2f s]%s%s\n", c.id, c.name.c_str(),
                ok ? "PASS" : "FAIL", seconds, detail.empty() ? "" : " -- ",
                detail.c_str());
    std::fflush(stdout);
  }
  std::printf("acceptance: %d/8 criteria passed\n",
              8 - failures);
  return failures;
}
