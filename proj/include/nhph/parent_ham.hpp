#ifndef NHPH_PARENT_HAM_HPP
#define NHPH_PARENT_HAM_HPP

// Construction of the k-site local projector Pi = I - T_R G^{-1} T_L^H from
// a state pair, the three existence criteria, the lambda-basis expansion,
// and the explicit closed-form two-site Hamiltonian.

#include <optional>
#include <vector>

#include "nhph/linalg.hpp"
#include "nhph/mps.hpp"
#include "nhph/spin_ops.hpp"

namespace nhph {

struct SingularMetricError : RankDeficientError {
  using RankDeficientError::RankDeficientError;
};

enum class BlockSide { Right, Left };

// The d^k x D^2 map from the virtual boundary pair (alpha, beta) to the
// k-site physical space; column index flattened as alpha * D + beta.
struct BlockedMap {
  CMatrix matrix;
  int k = 0;
  BlockSide side = BlockSide::Right;
  int rank = 0;  // numerical rank at the 1e-10 relative tolerance
};

struct MetricMatrix {
  CMatrix matrix;  // G = T_L^H T_R
  double condition_estimate = 0.0;
};

struct LocalProjector {
  CMatrix matrix;
  int k = 0;
  std::optional<double> mu;
};

namespace detail {

// Recover d from a d^k x d^k local operator.
inline int physical_dim(const LocalProjector& p) {
  const double d = std::round(std::pow(static_cast<double>(p.matrix.rows()),
                                       1.0 / std::max(p.k, 1)));
  Eigen::Index dk = 1;
  for (int i = 0; i < p.k; ++i) dk *= static_cast<Eigen::Index>(d);
  if (dk != p.matrix.rows())
    throw LinalgError("physical_dim: operator size is not d^k");
  return static_cast<int>(d);
}

}  // namespace detail

inline BlockedMap blocked_map(const UniformMPS& state, int k,
                              BlockSide side = BlockSide::Right) {
  const double dk = std::pow(static_cast<double>(state.d), k);
  if (dk < static_cast<double>(state.D) * state.D)
    throw LinalgError("blocked_map: d^k < D^2");
  UniformMPS blk = blocked(state, k);
  BlockedMap t;
  t.k = k;
  t.side = side;
  t.matrix.resize(blk.d, state.D * state.D);
  for (int i = 0; i < blk.d; ++i)
    for (int a = 0; a < state.D; ++a)
      for (int b = 0; b < state.D; ++b)
        t.matrix(i, a * state.D + b) = blk.tensor[static_cast<size_t>(i)](a, b);
  t.rank = rank_tol(t.matrix);
  return t;
}

inline MetricMatrix metric(const BlockedMap& left, const BlockedMap& right) {
  if (left.matrix.rows() != right.matrix.rows() ||
      left.matrix.cols() != right.matrix.cols())
    throw LinalgError("metric: blocked-map shapes disagree");
  MetricMatrix g;
  g.matrix = left.matrix.adjoint() * right.matrix;
  RVector s = singular_values(g.matrix);
  const double smin = s[s.size() - 1];
  g.condition_estimate =
      smin > 0.0 ? s[0] / smin : std::numeric_limits<double>::infinity();
  return g;
}

// Criterion 1: the metric is invertible at tolerance.
inline bool criterion_metric_invertible(const MetricMatrix& g,
                                        double tol = 1e-10) {
  return rank_tol(g.matrix, tol) == g.matrix.rows();
}

// Direct-sum criterion: im(T_R) (+) im(T_L)^perp spans the local space.
inline bool criterion_direct_sum(const BlockedMap& left,
                                 const BlockedMap& right, double tol = 1e-10) {
  const Eigen::Index dim = right.matrix.rows();
  const SvdResult svd_r = svd(right.matrix, /*full=*/true);
  const SvdResult svd_l = svd(left.matrix, /*full=*/true);
  const int rank_r = rank_tol(right.matrix, tol);
  const int rank_l = rank_tol(left.matrix, tol);
  // Basis of im(T_R) plus basis of im(T_L)^perp, concatenated.
  CMatrix joint(dim, rank_r + (dim - rank_l));
  joint.leftCols(rank_r) = svd_r.u.leftCols(rank_r);
  joint.rightCols(dim - rank_l) = svd_l.u.rightCols(dim - rank_l);
  if (joint.cols() != dim) return false;
  return rank_tol(joint, tol) == dim;
}

// Bi-orthogonalization criterion: U_R = G^{-1}, U_L = I gives T_L'^H T_R' = I.
inline bool criterion_biorthogonal(const BlockedMap& left,
                                   const BlockedMap& right,
                                   double tol = 1e-10) {
  MetricMatrix g = metric(left, right);
  if (!criterion_metric_invertible(g, tol)) return false;
  CMatrix ginv;
  try {
    ginv = solve_or_invert(g.matrix, tol);
  } catch (const RankDeficientError&) {
    return false;
  }
  CMatrix should_be_identity = left.matrix.adjoint() * (right.matrix * ginv);
  const Eigen::Index n = should_be_identity.rows();
  return (should_be_identity - CMatrix::Identity(n, n)).cwiseAbs().maxCoeff() <
         1e-10;
}

// Pi = I - T_R G^{-1} T_L^H, with the inversion done as a full-pivot solve.
inline LocalProjector build_projector(const StatePair& pair, int k,
                                      double tol = 1e-10) {
  BlockedMap tr = blocked_map(pair.right, k, BlockSide::Right);
  BlockedMap tl = blocked_map(pair.left, k, BlockSide::Left);
  MetricMatrix g = metric(tl, tr);
  if (!criterion_metric_invertible(g, tol))
    throw SingularMetricError("build_projector: no nH-PH at this k");
  const Eigen::Index dim = tr.matrix.rows();
  CMatrix p = tr.matrix * g.matrix.fullPivLu().solve(tl.matrix.adjoint());
  LocalProjector out;
  out.matrix = CMatrix::Identity(dim, dim) - p;
  out.k = k;
  out.mu = pair.mu;
  return out;
}

// O_{mn} = Tr[(l_m (x) l_n)^H Pi] over the orthonormal two-site basis.
inline CMatrix expand_lambda(const LocalProjector& p) {
  if (p.matrix.rows() != 9)
    throw LinalgError("expand_lambda: expects a two-site spin-1 projector");
  const std::vector<CMatrix> basis = spin1_lambda_basis();
  CMatrix coeff(9, 9);
  for (int m = 0; m < 9; ++m)
    for (int n = 0; n < 9; ++n)
      coeff(m, n) =
          (kron(basis[static_cast<size_t>(m)], basis[static_cast<size_t>(n)])
               .adjoint() *
           p.matrix)
              .trace();
  return coeff;
}

// The closed-form two-site operator, written directly in spin operators
// (S^{pm z} denotes S^pm S^z + S^z S^pm).
inline LocalProjector hamiltonian_k2(double mu) {
  if (!(mu > 0.0) || !std::isfinite(mu))
    throw LinalgError("hamiltonian_k2: mu must be positive");
  const SpinOperatorSet& s = spin1();
  const CMatrix I = CMatrix::Identity(3, 3);
  const CMatrix sz2 = s.sz * s.sz;
  const CMatrix sp2 = s.splus * s.splus;
  const CMatrix sm2 = s.sminus * s.sminus;
  const CMatrix spz = s.splus * s.sz + s.sz * s.splus;
  const CMatrix smz = s.sminus * s.sz + s.sz * s.sminus;

  CMatrix pi =
      (5.0 / 12.0) * (mu / 2.0 * kron(s.sminus, s.splus) +
                      1.0 / (2.0 * mu) * kron(s.splus, s.sminus) +
                      kron(s.sz, s.sz)) +
      (2.0 / 3.0) * kron(I, I) +
      (1.0 / 6.0) * (mu * mu / 4.0 * kron(sm2, sp2) +
                     1.0 / (4.0 * mu * mu) * kron(sp2, sm2) - kron(sz2, I) -
                     kron(I, sz2)) +
      (1.0 / 24.0) * (mu * kron(smz, spz) + (1.0 / mu) * kron(spz, smz)) +
      (1.0 / 4.0) * kron(sz2, sz2);

  LocalProjector out;
  out.matrix = pi;
  out.k = 2;
  out.mu = mu;
  return out;
}

}  // namespace nhph

#endif  // NHPH_PARENT_HAM_HPP
