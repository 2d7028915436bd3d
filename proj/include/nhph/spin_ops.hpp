#ifndef NHPH_SPIN_OPS_HPP
#define NHPH_SPIN_OPS_HPP

// Spin-1 operator algebra on the basis (S_z = +1, 0, -1), the orthonormal
// nine-matrix operator basis used for two-site expansions, and small
// tensor-product helpers.

#include <cmath>
#include <vector>

#include "nhph/linalg.hpp"

namespace nhph {

inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

struct SpinOperatorSet {
  CMatrix sx, sy, sz, splus, sminus;
};

inline const SpinOperatorSet& spin1() {
  static const SpinOperatorSet ops = [] {
    SpinOperatorSet s;
    const double r2 = std::sqrt(2.0);
    s.splus = CMatrix::Zero(3, 3);
    s.splus(0, 1) = r2;
    s.splus(1, 2) = r2;
    s.sminus = s.splus.transpose();
    s.sx = (s.splus + s.sminus) / 2.0;
    s.sy = (s.splus - s.sminus) / Complex(0.0, 2.0);
    s.sz = CMatrix::Zero(3, 3);
    s.sz(0, 0) = 1.0;
    s.sz(2, 2) = -1.0;
    return s;
  }();
  return ops;
}

// exp(i*pi*S_z) = diag(-1, 1, -1), inserted exactly in string correlators.
inline CMatrix string_phase() {
  CMatrix p = CMatrix::Zero(3, 3);
  p(0, 0) = -1.0;
  p(1, 1) = 1.0;
  p(2, 2) = -1.0;
  return p;
}

// exp(-i*pi*S_y) for spin-1: antidiagonal(1, -1, 1). Doubles as the unitary
// part of time reversal (S_z -> -S_z, S^+ -> -S^-, S^- -> -S^+ after
// complex conjugation).
inline CMatrix pi_rotation_y() {
  CMatrix u = CMatrix::Zero(3, 3);
  u(0, 2) = 1.0;
  u(1, 1) = -1.0;
  u(2, 0) = 1.0;
  return u;
}

// Permutation exchanging the two factors of C^d (x) C^d.
inline CMatrix swap_two_sites(int d = 3) {
  CMatrix p = CMatrix::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) p(d * j + i, d * i + j) = 1.0;
  return p;
}

// The orthonormal operator basis lambda_1..lambda_9 (Tr[l_i^H l_j] = delta),
// built from S^x, S^y, S^z, the anticommutators S^{mn} = S^m S^n + S^n S^m,
// and the squares S^{m2} = (S^m)^2.
inline std::vector<CMatrix> spin1_lambda_basis() {
  const SpinOperatorSet& s = spin1();
  const CMatrix I = CMatrix::Identity(3, 3);
  auto anti = [](const CMatrix& a, const CMatrix& b) { return a * b + b * a; };
  const CMatrix sxz = anti(s.sx, s.sz);
  const CMatrix syz = anti(s.sy, s.sz);
  const CMatrix sxy = anti(s.sx, s.sy);
  const CMatrix sx2 = s.sx * s.sx;
  const CMatrix sy2 = s.sy * s.sy;
  const CMatrix sz2 = s.sz * s.sz;
  const double r2 = std::sqrt(2.0);
  const double r3 = std::sqrt(3.0);
  const double r6 = std::sqrt(6.0);
  std::vector<CMatrix> l(9);
  l[0] = (s.sx + sxz) / 2.0;
  l[1] = (s.sx - sxz) / 2.0;
  l[2] = (s.sy + syz) / 2.0;
  l[3] = (s.sy - syz) / 2.0;
  l[4] = sxy / r2;
  l[5] = (s.sz + 3.0 * sz2) / (2.0 * r2) - I / r2;
  l[6] = (sx2 - sy2) / r2;
  l[7] = (3.0 * s.sz - 3.0 * sz2 + 2.0 * I) / (2.0 * r6);
  l[8] = I / r3;
  return l;
}

}  // namespace nhph

#endif  // NHPH_SPIN_OPS_HPP
