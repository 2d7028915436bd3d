#ifndef NHPH_MPS_HPP
#define NHPH_MPS_HPP

// Translation-invariant MPS: the asymmetric AKLT family, mixed transfer
// matrices and their RG fixed points, thermodynamic-limit expectations,
// finite-chain materialization, and canonical (Schmidt) form.

#include <cmath>
#include <optional>
#include <vector>

#include "nhph/linalg.hpp"
#include "nhph/spin_ops.hpp"

namespace nhph {

struct NotInjectiveError : LinalgError {
  using LinalgError::LinalgError;
};

// tensor[i] is the D x D virtual matrix for physical index i; the physical
// basis order is S_z = (+1, 0, -1), the virtual basis (up, down).
struct UniformMPS {
  int d = 0;
  int D = 0;
  std::vector<CMatrix> tensor;

  bool finite() const {
    for (const auto& m : tensor)
      if (!m.allFinite()) return false;
    return true;
  }
};

// |R> and |L> of one construction; for the AKLT family left = transpose of
// right and mu records the deformation parameter.
struct StatePair {
  UniformMPS right;
  UniformMPS left;
  std::optional<double> mu;
};

struct TransferObject {
  CMatrix matrix;  // (D_bra * D_ket) square, bra index slow / ket index fast
  int bra_D = 0;
  int ket_D = 0;
};

// Eq-(8)-type tensor: valence bond |up down> - mu |down up| dressed into a
// spin-1 site. Non-zeros: A[+1](down,up) = -sqrt(mu), A[-1](up,down) =
// sqrt(mu), A[0](up,up) = 1/sqrt(2), A[0](down,down) = -mu/sqrt(2).
inline UniformMPS asymmetric_aklt(double mu) {
  if (!(mu > 0.0) || !std::isfinite(mu))
    throw LinalgError("asymmetric_aklt: mu must be positive and finite");
  UniformMPS s;
  s.d = 3;
  s.D = 2;
  s.tensor.assign(3, CMatrix::Zero(2, 2));
  const double rmu = std::sqrt(mu);
  const double r2 = std::sqrt(2.0);
  s.tensor[0](1, 0) = -rmu;      // physical +1
  s.tensor[1](0, 0) = 1.0 / r2;  // physical 0
  s.tensor[1](1, 1) = -mu / r2;
  s.tensor[2](0, 1) = rmu;  // physical -1
  return s;
}

// The ket whose bra is <L|: virtual transpose on every physical leg.
inline UniformMPS left_partner(const UniformMPS& right) {
  UniformMPS l = right;
  for (auto& m : l.tensor) m = m.transpose().eval();
  return l;
}

inline StatePair aklt_pair(double mu) {
  StatePair p;
  p.right = asymmetric_aklt(mu);
  p.left = left_partner(p.right);
  p.mu = mu;
  return p;
}

// E[(alpha beta), (alpha' beta')] = sum_i conj(A_bra[i])_{alpha alpha'}
// (A_ket[i])_{beta beta'}; built as sum_i conj(A_bra[i]) (x) A_ket[i].
inline TransferObject transfer_matrix(const UniformMPS& bra,
                                      const UniformMPS& ket) {
  if (bra.d != ket.d)
    throw LinalgError("transfer_matrix: physical dimension mismatch");
  TransferObject t;
  t.bra_D = bra.D;
  t.ket_D = ket.D;
  t.matrix = CMatrix::Zero(bra.D * ket.D, bra.D * ket.D);
  for (int i = 0; i < bra.d; ++i)
    t.matrix += kron(bra.tensor[i].conjugate(), ket.tensor[i]);
  return t;
}

// Transfer matrix with an operator spanning `span` sites inserted between
// the bra and ket chains.
inline CMatrix transfer_with_op(const UniformMPS& bra, const UniformMPS& ket,
                                const CMatrix& op, int span) {
  if (span < 1) throw LinalgError("transfer_with_op: span < 1");
  const int d = bra.d;
  Eigen::Index dim = 1;
  for (int s = 0; s < span; ++s) dim *= d;
  if (op.rows() != dim || op.cols() != dim)
    throw LinalgError("transfer_with_op: operator dimension mismatch");

  // chain[I] = A[i1] * ... * A[is] with i1 the slowest digit.
  auto chains = [&](const UniformMPS& st) {
    std::vector<CMatrix> out(static_cast<size_t>(dim));
    for (Eigen::Index flat = 0; flat < dim; ++flat) {
      CMatrix prod = CMatrix::Identity(st.D, st.D);
      Eigen::Index rest = flat;
      Eigen::Index div = dim / d;
      for (int s = 0; s < span; ++s) {
        const int digit = static_cast<int>(rest / div);
        prod = prod * st.tensor[static_cast<size_t>(digit)];
        rest %= div;
        div /= d;
      }
      out[static_cast<size_t>(flat)] = prod;
    }
    return out;
  };
  const auto bra_chain = chains(bra);
  const auto ket_chain = chains(ket);

  CMatrix e = CMatrix::Zero(bra.D * ket.D, bra.D * ket.D);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) {
      const Complex c = op(i, j);
      if (c == Complex(0.0, 0.0)) continue;
      e += c * kron(bra_chain[static_cast<size_t>(i)].conjugate(),
                    ket_chain[static_cast<size_t>(j)]);
    }
  return e;
}

// Spectral-projector fixed point E^inf = lim (E/lambda)^k = r l^H with
// l^H r = 1 (normalization supplied by dominant_eigenpair).
inline CMatrix rg_fixed_point(const TransferObject& e, double tol = 1e-8) {
  DominantEigenpair dom = dominant_eigenpair(e.matrix, tol);
  return dom.right * dom.left.adjoint();
}

// Regroup the fixed point into the metric's index convention:
// G[(a a'), (b b')] = E^inf[(a b), (a' b')] for D_bra == D_ket == D.
inline CMatrix metric_fixed_point(const CMatrix& e_inf, int D) {
  CMatrix g = CMatrix::Zero(D * D, D * D);
  for (int a = 0; a < D; ++a)
    for (int ap = 0; ap < D; ++ap)
      for (int b = 0; b < D; ++b)
        for (int bp = 0; bp < D; ++bp)
          g(a * D + ap, b * D + bp) = e_inf(a * D + b, ap * D + bp);
  return g;
}

// <L| O |R> / <L|R> in the thermodynamic limit: dominant environments
// around `span` sites carrying op, divided by lambda^span.
inline Complex expectation_lr(const StatePair& pair, const CMatrix& op,
                              int span, double tol = 1e-8) {
  TransferObject e = transfer_matrix(pair.left, pair.right);
  DominantEigenpair dom = dominant_eigenpair(e.matrix, tol);
  CMatrix e_op = transfer_with_op(pair.left, pair.right, op, span);
  Complex val = dom.left.dot(e_op * dom.right);
  return val / std::pow(dom.eigenvalue, span);
}

// <R| O |R> / <R|R>: same contraction with bra = ket.
inline Complex expectation_rr(const UniformMPS& state, const CMatrix& op,
                              int span, double tol = 1e-8) {
  StatePair self;
  self.right = state;
  self.left = state;
  return expectation_lr(self, op, span, tol);
}

struct Boundary {
  enum class Kind { Periodic, Open };
  Kind kind = Kind::Periodic;
  CVector bl, br;  // boundary vectors, Open only

  static Boundary periodic() { return Boundary{}; }
  static Boundary open(CVector left, CVector right) {
    Boundary b;
    b.kind = Kind::Open;
    b.bl = std::move(left);
    b.br = std::move(right);
    return b;
  }
};

// Coefficient vector of the n-site chain: Tr[A^{i1}..A^{in}] (periodic) or
// bl^T A^{i1}..A^{in} br (open). Capped at d^n <= 3^10.
inline CVector materialize(const UniformMPS& state, int n,
                           const Boundary& boundary) {
  double cap = std::pow(static_cast<double>(state.d), n);
  if (cap > std::pow(3.0, 10) + 0.5)
    throw ResourceCapError("materialize: d^n exceeds the 3^10 cap");
  const Eigen::Index dim = static_cast<Eigen::Index>(cap + 0.5);
  CVector out(dim);

  std::vector<CMatrix> stack(static_cast<size_t>(n) + 1);
  stack[0] = CMatrix::Identity(state.D, state.D);
  std::vector<int> digits(static_cast<size_t>(n), 0);
  Eigen::Index flat = 0;
  int depth = 0;
  while (true) {
    if (depth == n) {
      const CMatrix& prod = stack[static_cast<size_t>(n)];
      if (boundary.kind == Boundary::Kind::Periodic)
        out[flat] = prod.trace();
      else
        out[flat] = boundary.bl.transpose() * prod * boundary.br;
      ++flat;
      --depth;
      while (depth >= 0 && digits[static_cast<size_t>(depth)] == state.d - 1) {
        digits[static_cast<size_t>(depth)] = 0;
        --depth;
      }
      if (depth < 0) break;
      ++digits[static_cast<size_t>(depth)];
    }
    stack[static_cast<size_t>(depth) + 1] =
        stack[static_cast<size_t>(depth)] *
        state.tensor[static_cast<size_t>(digits[static_cast<size_t>(depth)])];
    ++depth;
  }
  return out;
}

// Block k sites into one: physical dimension d^k, first site's index slowest.
inline UniformMPS blocked(const UniformMPS& state, int k) {
  UniformMPS out;
  out.D = state.D;
  Eigen::Index dim = 1;
  for (int s = 0; s < k; ++s) dim *= state.d;
  out.d = static_cast<int>(dim);
  out.tensor.resize(static_cast<size_t>(dim));
  for (Eigen::Index flat = 0; flat < dim; ++flat) {
    CMatrix prod = CMatrix::Identity(state.D, state.D);
    Eigen::Index rest = flat;
    Eigen::Index div = dim / state.d;
    for (int s = 0; s < k; ++s) {
      prod = prod * state.tensor[static_cast<size_t>(rest / div)];
      rest %= div;
      div /= state.d;
    }
    out.tensor[static_cast<size_t>(flat)] = prod;
  }
  return out;
}

// Smallest k <= k_max at which the k-site blocked map reaches rank D^2.
inline int injectivity_blocking(const UniformMPS& state, int k_max,
                                double tol = 1e-10) {
  for (int k = 1; k <= k_max; ++k) {
    double dk = std::pow(static_cast<double>(state.d), k);
    if (dk < static_cast<double>(state.D) * state.D) continue;
    UniformMPS blk = blocked(state, k);
    CMatrix t(blk.d, state.D * state.D);
    for (int i = 0; i < blk.d; ++i)
      for (int a = 0; a < state.D; ++a)
        for (int b = 0; b < state.D; ++b)
          t(i, a * state.D + b) = blk.tensor[static_cast<size_t>(i)](a, b);
    if (rank_tol(t, tol) == state.D * state.D) return k;
  }
  throw NotInjectiveError("injectivity_blocking: not injective up to k_max");
}

struct CanonicalForm {
  std::vector<CMatrix> gamma;  // weight-free site tensor, one per physical i
  RVector lambda;              // Schmidt values, descending, unit square-sum
};

namespace detail {

// Hermitian part after removing the trace phase; RR fixed points are
// Hermitian PSD up to exactly this freedom.
inline CMatrix hermitize(CMatrix x) {
  const Complex tr = x.trace();
  if (std::abs(tr) > 1e-300) x /= std::exp(Complex(0.0, std::arg(tr)));
  CMatrix h = (x + x.adjoint()) / 2.0;
  if (h.trace().real() < 0) h = -h;
  return h;
}

inline CMatrix psd_sqrt(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  RVector w = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint();
}

inline CMatrix pinv(const CMatrix& m, double rel_tol = 1e-12) {
  SvdResult d = svd(m);
  const double cut = rel_tol * (d.s.size() ? d.s[0] : 0.0);
  CMatrix sp = CMatrix::Zero(m.cols(), m.rows());
  for (Eigen::Index i = 0; i < d.s.size(); ++i)
    if (d.s[i] > cut) sp(i, i) = 1.0 / d.s[i];
  return d.vh.adjoint() * sp * d.u.adjoint();
}

}  // namespace detail

// Vidal canonical form of an injective uniform MPS: normalize the dominant
// transfer eigenvalue to 1, split the Hermitian fixed points as X^H X and
// Y Y^H, and SVD X Y. The Schmidt values are the singular values.
inline CanonicalForm canonical_form(const UniformMPS& state,
                                    double tol = 1e-8) {
  TransferObject e = transfer_matrix(state, state);
  DominantEigenpair dom = dominant_eigenpair(e.matrix, tol);
  const double lam = std::abs(dom.eigenvalue);
  UniformMPS norm = state;
  for (auto& m : norm.tensor) m /= std::sqrt(lam);

  CMatrix r(state.D, state.D), l(state.D, state.D);
  for (int a = 0; a < state.D; ++a)
    for (int b = 0; b < state.D; ++b) {
      r(a, b) = dom.right[a * state.D + b];
      l(a, b) = dom.left[a * state.D + b];
    }
  r = detail::hermitize(r);
  l = detail::hermitize(l);

  Eigen::SelfAdjointEigenSolver<CMatrix> el(l);
  CMatrix x = el.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal()
                  .toDenseMatrix().cast<Complex>() *
              el.eigenvectors().adjoint();
  Eigen::SelfAdjointEigenSolver<CMatrix> er(r);
  CMatrix y = er.eigenvectors() *
              er.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal()
                  .toDenseMatrix().cast<Complex>();

  SvdResult xy = svd(x * y);
  RVector s = xy.s / xy.s.norm();

  CanonicalForm out;
  out.lambda = s;
  const CMatrix left_fix = xy.vh * detail::pinv(y);
  const CMatrix right_fix = detail::pinv(x) * xy.u;
  out.gamma.resize(norm.tensor.size());
  for (size_t i = 0; i < norm.tensor.size(); ++i)
    out.gamma[i] = left_fix * norm.tensor[i] * right_fix;
  return out;
}

}  // namespace nhph

#endif  // NHPH_MPS_HPP
