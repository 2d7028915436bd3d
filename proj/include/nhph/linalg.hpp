#ifndef NHPH_LINALG_HPP
#define NHPH_LINALG_HPP

// Dense complex linear algebra used throughout: full non-symmetric
// eigendecompositions with left and right vectors, dominant-eigenpair
// extraction, tolerance-based rank / inversion, and SVD. Everything is
// double precision and sized for matrices of at most a few thousand rows.

#include <algorithm>
#include <complex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <Eigen/Dense>

namespace nhph {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using Complex = std::complex<double>;

struct LinalgError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when the two largest eigenvalue moduli coincide within the
// requested window (e.g. the transfer matrix exactly at a level crossing).
struct DegenerateDominantError : LinalgError {
  using LinalgError::LinalgError;
};

// Thrown when a matrix that must be inverted is rank-deficient at the
// working tolerance.
struct RankDeficientError : LinalgError {
  using LinalgError::LinalgError;
};

// Thrown when a request exceeds the dense-size caps.
struct ResourceCapError : LinalgError {
  using LinalgError::LinalgError;
};

enum class EigSort { ModulusDescending, RealAscending };

struct EigenDecomposition {
  CVector eigenvalues;
  CMatrix right_vectors;  // columns v_i with A v_i = lambda_i v_i
  CMatrix left_vectors;   // columns w_i with w_i^H A = lambda_i w_i^H
  EigSort sorted_by = EigSort::RealAscending;
};

namespace detail {

inline void check_finite(const CMatrix& m, const char* who) {
  if (!m.allFinite()) throw LinalgError(std::string(who) + ": non-finite entries");
  if (m.rows() < 1 || m.cols() < 1) throw LinalgError(std::string(who) + ": empty matrix");
}

// zgeev on a copy of m; returns eigenvalues plus both eigenvector sets.
inline void zgeev(const CMatrix& m, CVector& w, CMatrix& vr, CMatrix& vl) {
  const lapack_int n = static_cast<lapack_int>(m.rows());
  CMatrix a = m;  // overwritten by LAPACK
  w.resize(n);
  vr.resize(n, n);
  vl.resize(n, n);
  lapack_int info = LAPACKE_zgeev(
      LAPACK_COL_MAJOR, 'V', 'V', n, a.data(), n, w.data(), vl.data(), n,
      vr.data(), n);
  if (info != 0)
    throw LinalgError("eig_full: zgeev failed to converge (info=" +
                      std::to_string(info) + ")");
}

// Divide-and-conquer SVD.  jobz: 'N' values only, 'S' thin, 'A' full.
inline void zgesdd(const CMatrix& m, CMatrix& u, RVector& s, CMatrix& vh,
                   char jobz) {
  const lapack_int rows = static_cast<lapack_int>(m.rows());
  const lapack_int cols = static_cast<lapack_int>(m.cols());
  const lapack_int mn = std::min(rows, cols);
  CMatrix a = m;  // overwritten by LAPACK
  s.resize(mn);
  if (jobz == 'S') {
    u.resize(rows, mn);
    vh.resize(mn, cols);
  } else if (jobz == 'A') {
    u.resize(rows, rows);
    vh.resize(cols, cols);
  } else {
    u.resize(1, 1);
    vh.resize(1, 1);
  }
  lapack_int info = LAPACKE_zgesdd(
      LAPACK_COL_MAJOR, jobz, rows, cols, a.data(), rows, s.data(), u.data(),
      static_cast<lapack_int>(u.rows()), vh.data(),
      static_cast<lapack_int>(vh.rows()));
  if (info != 0)
    throw LinalgError("svd: zgesdd failed (info=" + std::to_string(info) +
                      ")");
}

// Eigenvalues only ('N','N' path); used where the d^N spectra make the
// eigenvector computation and residual sweep pointless work.
inline std::vector<Complex> zgeev_values(const CMatrix& m) {
  const lapack_int n = static_cast<lapack_int>(m.rows());
  CMatrix a = m;
  CVector w(n);
  lapack_int info =
      LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', n, a.data(), n, w.data(),
                    nullptr, 1, nullptr, 1);
  if (info != 0)
    throw LinalgError("eigenvalues_only: zgeev failed to converge (info=" +
                      std::to_string(info) + ")");
  return std::vector<Complex>(w.data(), w.data() + n);
}

}  // namespace detail

inline std::vector<Complex> eigenvalues_only(const CMatrix& m) {
  detail::check_finite(m, "eigenvalues_only");
  if (m.rows() != m.cols())
    throw LinalgError("eigenvalues_only: non-square input");
  return detail::zgeev_values(m);
}

// Full spectrum with verified residuals on every left/right pair.
inline EigenDecomposition eig_full(const CMatrix& m,
                                   EigSort sort = EigSort::RealAscending) {
  detail::check_finite(m, "eig_full");
  if (m.rows() != m.cols()) throw LinalgError("eig_full: non-square input");
  const Eigen::Index n = m.rows();

  CVector w;
  CMatrix vr, vl;
  detail::zgeev(m, w, vr, vl);

  std::vector<Eigen::Index> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  if (sort == EigSort::ModulusDescending) {
    std::stable_sort(order.begin(), order.end(), [&](auto i, auto j) {
      return std::abs(w[i]) > std::abs(w[j]);
    });
  } else {
    std::stable_sort(order.begin(), order.end(), [&](auto i, auto j) {
      if (w[i].real() != w[j].real()) return w[i].real() < w[j].real();
      return std::abs(w[i].imag()) < std::abs(w[j].imag());
    });
  }

  EigenDecomposition out;
  out.eigenvalues.resize(n);
  out.right_vectors.resize(n, n);
  out.left_vectors.resize(n, n);
  out.sorted_by = sort;
  for (Eigen::Index c = 0; c < n; ++c) {
    out.eigenvalues[c] = w[order[static_cast<size_t>(c)]];
    out.right_vectors.col(c) = vr.col(order[static_cast<size_t>(c)]);
    out.left_vectors.col(c) = vl.col(order[static_cast<size_t>(c)]);
  }

  const double scale = m.norm();
  const double tol = 1e-10 * std::max(scale, 1e-300);
  for (Eigen::Index c = 0; c < n; ++c) {
    const Complex lam = out.eigenvalues[c];
    const double res_r =
        (m * out.right_vectors.col(c) - lam * out.right_vectors.col(c)).norm();
    const double res_l =
        (out.left_vectors.col(c).adjoint() * m -
         lam * out.left_vectors.col(c).adjoint())
            .norm();
    if (res_r > tol || res_l > tol)
      throw LinalgError("eig_full: residual check failed");
  }
  return out;
}

struct DominantEigenpair {
  Complex eigenvalue;
  CVector right;
  CVector left;  // normalized so that left^H * right == 1
};

// Largest-modulus eigenpair. `tol` is the *relative* modulus gap below
// which the dominant eigenvalue counts as degenerate.
inline DominantEigenpair dominant_eigenpair(const CMatrix& m,
                                            double tol = 1e-8) {
  EigenDecomposition d = eig_full(m, EigSort::ModulusDescending);
  const Eigen::Index n = d.eigenvalues.size();
  if (n > 1) {
    const double a0 = std::abs(d.eigenvalues[0]);
    const double a1 = std::abs(d.eigenvalues[1]);
    if (a0 <= 0.0 || (a0 - a1) / a0 < tol)
      throw DegenerateDominantError(
          "dominant_eigenpair: degenerate dominant modulus");
  }
  DominantEigenpair out;
  out.eigenvalue = d.eigenvalues[0];
  out.right = d.right_vectors.col(0);
  out.left = d.left_vectors.col(0);
  const Complex overlap = out.left.dot(out.right);  // conjugates the left arg
  if (std::abs(overlap) < 1e-14)
    throw LinalgError("dominant_eigenpair: defective dominant pair");
  out.left /= std::conj(overlap);
  return out;
}

inline RVector singular_values(const CMatrix& m) {
  CMatrix u, vh;
  RVector s;
  detail::zgesdd(m, u, s, vh, 'N');
  return s;
}

// Number of singular values above tol * (largest singular value).
inline int rank_tol(const CMatrix& m, double tol = 1e-10) {
  detail::check_finite(m, "rank_tol");
  RVector s = singular_values(m);
  if (s.size() == 0) return 0;
  const double cut = tol * s[0];
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s[i] > cut) ++r;
  return r;
}

// Inverse with a verified residual; call sites must treat RankDeficientError
// as "no construction exists at this tolerance".
inline CMatrix solve_or_invert(const CMatrix& m, double tol = 1e-10) {
  detail::check_finite(m, "solve_or_invert");
  if (m.rows() != m.cols()) throw LinalgError("solve_or_invert: non-square");
  if (rank_tol(m, tol) < m.rows())
    throw RankDeficientError("solve_or_invert: rank-deficient within tolerance");
  CMatrix inv = m.fullPivLu().inverse();
  const double resid =
      (m * inv - CMatrix::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff();
  if (resid > 1e-8)
    throw LinalgError("solve_or_invert: inverse residual " +
                      std::to_string(resid) + " exceeds 1e-8");
  return inv;
}

struct SvdResult {
  CMatrix u;
  RVector s;   // non-negative, descending
  CMatrix vh;  // rows are right singular vectors (V^H)
};

// Thin SVD by default; `full` requests square U and V^H (the extra columns
// span the orthogonal complements).  Reconstruction is verified either way.
inline SvdResult svd(const CMatrix& m, bool full = false) {
  detail::check_finite(m, "svd");
  SvdResult out;
  detail::zgesdd(m, out.u, out.s, out.vh, full ? 'A' : 'S');
  const Eigen::Index mn = out.s.size();
  const double scale = std::max(m.norm(), 1e-300);
  const double resid = (m - out.u.leftCols(mn) *
                                (out.s.cast<Complex>().asDiagonal() *
                                 out.vh.topRows(mn)))
                           .norm();
  if (resid > 1e-10 * scale)
    throw LinalgError("svd: reconstruction residual exceeds tolerance");
  return out;
}

// Greedy nearest-neighbour multiset matching; the fallback pairing for
// spectra whose (Re, Im) sort order is unstable under conjugate-pair noise.
inline double greedy_match_distance(std::vector<Complex> a,
                                    std::vector<Complex> b) {
  if (a.size() != b.size())
    throw LinalgError("greedy_match_distance: size mismatch");
  double worst = 0.0;
  for (const Complex& x : a) {
    size_t best = 0;
    double bd = std::abs(x - b[0]);
    for (size_t j = 1; j < b.size(); ++j) {
      const double d = std::abs(x - b[j]);
      if (d < bd) {
        bd = d;
        best = j;
      }
    }
    worst = std::max(worst, bd);
    b.erase(b.begin() + static_cast<std::ptrdiff_t>(best));
  }
  return worst;
}

// Distance between two spectra: lexicographic (Re, Im) pairing first, and
// the greedy assignment as fallback when that pairing exceeds `tol`.
inline double spectrum_distance(std::vector<Complex> a, std::vector<Complex> b,
                                double tol) {
  if (a.size() != b.size())
    throw LinalgError("spectrum_distance: size mismatch");
  auto lex = [](const Complex& x, const Complex& y) {
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  };
  std::sort(a.begin(), a.end(), lex);
  std::sort(b.begin(), b.end(), lex);
  double worst = 0.0;
  for (size_t i = 0; i < a.size(); ++i)
    worst = std::max(worst, std::abs(a[i] - b[i]));
  if (worst <= tol) return worst;
  return greedy_match_distance(a, b);
}

}  // namespace nhph

#endif  // NHPH_LINALG_HPP
