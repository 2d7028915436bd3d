#ifndef NHPH_OBSERVABLES_HPP
#define NHPH_OBSERVABLES_HPP

// Thermodynamic-limit observables of the asymmetric valence-bond family:
// two-site order parameters (LR and RR), string order, entanglement
// spectrum via the canonical form, and uniform-MPS infidelity.

#include <algorithm>

#include "nhph/linalg.hpp"
#include "nhph/mps.hpp"
#include "nhph/spin_ops.hpp"

namespace nhph {

enum class ExpectationMode { LR, RR };

struct OrderSweepRow {
  double mu = 0.0;
  Complex o_af;
  Complex o_left;
  Complex o_right;
  Complex o_chiral;  // always o_right - o_left
  ExpectationMode mode = ExpectationMode::LR;
};

inline CMatrix op_af() {
  const SpinOperatorSet& s = spin1();
  return kron(s.sz, s.sz);
}

inline CMatrix op_left() {
  const SpinOperatorSet& s = spin1();
  return 0.5 * kron(s.splus, s.sminus);
}

inline CMatrix op_right() {
  const SpinOperatorSet& s = spin1();
  return 0.5 * kron(s.sminus, s.splus);
}

inline CMatrix op_chiral() { return op_right() - op_left(); }

inline OrderSweepRow order_parameters(double mu, ExpectationMode mode,
                                      double tol = 1e-8) {
  StatePair pair = aklt_pair(mu);
  auto ev = [&](const CMatrix& op) {
    return mode == ExpectationMode::LR
               ? expectation_lr(pair, op, 2, tol)
               : expectation_rr(pair.right, op, 2, tol);
  };
  OrderSweepRow row;
  row.mu = mu;
  row.mode = mode;
  row.o_af = ev(op_af());
  row.o_left = ev(op_left());
  row.o_right = ev(op_right());
  row.o_chiral = row.o_right - row.o_left;
  return row;
}

// S^z (prod of diag(-1,1,-1) phases over the m-2 interior sites) S^z across
// an m-site window, contracted against the dominant environments and
// normalized by lambda^m.  m = 2 has no interior phase and reduces to the
// antiferromagnetic correlator.
inline Complex string_order(double mu, int m, ExpectationMode mode,
                            double tol = 1e-8) {
  if (m < 2) throw LinalgError("string_order: separation must be >= 2");
  StatePair pair = aklt_pair(mu);
  const UniformMPS& bra =
      mode == ExpectationMode::LR ? pair.left : pair.right;
  const UniformMPS& ket = pair.right;
  TransferObject e = transfer_matrix(bra, ket);
  DominantEigenpair dom = dominant_eigenpair(e.matrix, tol);
  const CMatrix e_z = transfer_with_op(bra, ket, spin1().sz, 1);
  const CMatrix e_phase = transfer_with_op(bra, ket, string_phase(), 1);
  CMatrix interior = CMatrix::Identity(e_z.rows(), e_z.cols());
  for (int i = 0; i < m - 2; ++i) interior = interior * e_phase;
  const Complex val = dom.left.dot(e_z * interior * e_z * dom.right);
  return val / std::pow(dom.eigenvalue, m);
}

// Squared Schmidt values (probability weights) of a half-infinite cut,
// descending, summing to one.
inline RVector entanglement_spectrum(const UniformMPS& state,
                                     double tol = 1e-8) {
  CanonicalForm cf = canonical_form(state, tol);
  return cf.lambda.array().square();
}

namespace detail {

// Scale the tensors so the dominant RR transfer eigenvalue is exactly one.
inline UniformMPS normalize_rr(const UniformMPS& state) {
  TransferObject e = transfer_matrix(state, state);
  EigenDecomposition d = eig_full(e.matrix, EigSort::ModulusDescending);
  const double lam = std::abs(d.eigenvalues[0]);
  if (lam <= 0.0)
    throw LinalgError("normalize_rr: vanishing transfer spectrum");
  UniformMPS out = state;
  const double scale = 1.0 / std::sqrt(lam);
  for (CMatrix& t : out.tensor) t *= scale;
  return out;
}

}  // namespace detail

// eta = 1 - |dominant mixed transfer eigenvalue| with both states
// normalized to unit RR dominant eigenvalue.  The modulus is insensitive
// to phase/sign ties among the mixed eigenvalues, so no spectral gap is
// required here.
inline double infidelity(const UniformMPS& reference,
                         const UniformMPS& candidate) {
  UniformMPS a = detail::normalize_rr(reference);
  UniformMPS b = detail::normalize_rr(candidate);
  TransferObject mixed = transfer_matrix(a, b);
  EigenDecomposition d = eig_full(mixed.matrix, EigSort::ModulusDescending);
  const double eta = 1.0 - std::abs(d.eigenvalues[0]);
  return std::clamp(eta, 0.0, 1.0);
}

}  // namespace nhph

#endif  // NHPH_OBSERVABLES_HPP
