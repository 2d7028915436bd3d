#ifndef NHPH_EXACT_DIAG_HPP
#define NHPH_EXACT_DIAG_HPP

// Dense many-body Hamiltonians H = sum_i Pi_i on small chains (open or
// periodic), their complex spectra, ground-space degeneracy and gap, the
// open-chain similarity check, and quadratic finite-size gap extrapolation.

#include <cmath>
#include <map>
#include <utility>
#include <vector>

#include "nhph/linalg.hpp"
#include "nhph/mps.hpp"
#include "nhph/parent_ham.hpp"

namespace nhph {

struct ChainHamiltonian {
  int n_sites = 0;
  int k = 0;
  Boundary::Kind boundary = Boundary::Kind::Open;
  CMatrix matrix;
};

struct SpectrumReport {
  std::vector<Complex> eigenvalues;  // ascending real part
  Complex ground_energy;
  int degeneracy = 0;
  double gap = 0.0;  // Re E1 - Re E0, E1 = lowest level outside the cluster
};

namespace detail {

inline Eigen::Index ipow(int base, int exp) {
  Eigen::Index v = 1;
  for (int i = 0; i < exp; ++i) v *= base;
  return v;
}

// Accumulate op embedded at the given (ordered, possibly wrapping) sites,
// identity elsewhere.  Site 0 is the slowest physical digit, matching
// materialize() and blocked().
inline void add_embedded(CMatrix& h, const CMatrix& op,
                         const std::vector<int>& sites, int n, int d) {
  const int k = static_cast<int>(sites.size());
  const Eigen::Index dk = ipow(d, k);
  if (op.rows() != dk || op.cols() != dk)
    throw LinalgError("add_embedded: operator/site-count mismatch");

  std::vector<Eigen::Index> weight(static_cast<size_t>(n));
  weight[static_cast<size_t>(n) - 1] = 1;
  for (int s = n - 2; s >= 0; --s)
    weight[static_cast<size_t>(s)] = weight[static_cast<size_t>(s) + 1] * d;

  std::vector<char> used(static_cast<size_t>(n), 0);
  for (int s : sites) used[static_cast<size_t>(s)] = 1;
  std::vector<int> free_sites;
  for (int s = 0; s < n; ++s)
    if (!used[static_cast<size_t>(s)]) free_sites.push_back(s);

  // Column offset contributed by the operator's digits, per flat op index.
  std::vector<Eigen::Index> off(static_cast<size_t>(dk), 0);
  for (Eigen::Index a = 0; a < dk; ++a) {
    Eigen::Index rest = a;
    for (int s = k - 1; s >= 0; --s) {
      off[static_cast<size_t>(a)] +=
          (rest % d) * weight[static_cast<size_t>(sites[static_cast<size_t>(s)])];
      rest /= d;
    }
  }

  const Eigen::Index nfree = ipow(d, n - k);
  for (Eigen::Index r = 0; r < nfree; ++r) {
    Eigen::Index base = 0;
    Eigen::Index rest = r;
    for (int idx = static_cast<int>(free_sites.size()) - 1; idx >= 0; --idx) {
      base += (rest % d) *
              weight[static_cast<size_t>(free_sites[static_cast<size_t>(idx)])];
      rest /= d;
    }
    for (Eigen::Index a = 0; a < dk; ++a)
      for (Eigen::Index ap = 0; ap < dk; ++ap) {
        const Complex c = op(ap, a);
        if (c == Complex(0.0, 0.0)) continue;
        h(base + off[static_cast<size_t>(ap)],
          base + off[static_cast<size_t>(a)]) += c;
      }
  }
}

// Total S^z quantum number of a spin-1 basis state (digit q at a site
// carries m = 1 - q under the (+1, 0, -1) physical ordering).
inline int sz_digit_sum(Eigen::Index x, int n) {
  int sum = 0;
  for (int s = 0; s < n; ++s) {
    sum += 1 - static_cast<int>(x % 3);
    x /= 3;
  }
  return sum;
}

inline bool conserves_sz(const CMatrix& h, int n) {
  const Eigen::Index dim = h.rows();
  std::vector<int> sz(static_cast<size_t>(dim));
  for (Eigen::Index x = 0; x < dim; ++x)
    sz[static_cast<size_t>(x)] = sz_digit_sum(x, n);
  for (Eigen::Index c = 0; c < dim; ++c)
    for (Eigen::Index r = 0; r < dim; ++r)
      if (sz[static_cast<size_t>(r)] != sz[static_cast<size_t>(c)] &&
          std::abs(h(r, c)) > 1e-12)
        return false;
  return true;
}

}  // namespace detail

inline ChainHamiltonian build_chain(const LocalProjector& p, int n,
                                    Boundary::Kind boundary) {
  if (n < p.k) throw LinalgError("build_chain: n < k");
  const int d = detail::physical_dim(p);
  if (std::pow(static_cast<double>(d), n) > std::pow(3.0, 8) + 0.5)
    throw ResourceCapError("build_chain: d^n exceeds the 3^8 cap");
  const Eigen::Index dim = detail::ipow(d, n);

  ChainHamiltonian h;
  h.n_sites = n;
  h.k = p.k;
  h.boundary = boundary;
  h.matrix = CMatrix::Zero(dim, dim);

  const int terms = boundary == Boundary::Kind::Periodic ? n : n - p.k + 1;
  for (int i = 0; i < terms; ++i) {
    std::vector<int> sites(static_cast<size_t>(p.k));
    for (int s = 0; s < p.k; ++s) sites[static_cast<size_t>(s)] = (i + s) % n;
    detail::add_embedded(h.matrix, p.matrix, sites, n, d);
  }
  return h;
}

// All d^N eigenvalues; ground level = minimal real part (ties broken by
// minimal |Im|); degeneracy counts eigenvalues within cluster_tol of it.
// When H conserves total S^z (always true for the valence-bond family) the
// spectrum is assembled from the U(1) blocks, which is dramatically cheaper
// than one dense solve and agrees with it to matching tolerance.
inline SpectrumReport full_spectrum(const ChainHamiltonian& h,
                                    double cluster_tol = 1e-7) {
  const Eigen::Index dim = h.matrix.rows();
  std::vector<Complex> evs;
  evs.reserve(static_cast<size_t>(dim));

  const double dn = std::pow(3.0, h.n_sites);
  const bool spin1_sized = std::abs(dn - static_cast<double>(dim)) < 0.5;
  if (spin1_sized && detail::conserves_sz(h.matrix, h.n_sites)) {
    std::map<int, std::vector<Eigen::Index>> sectors;
    for (Eigen::Index x = 0; x < dim; ++x)
      sectors[detail::sz_digit_sum(x, h.n_sites)].push_back(x);
    for (const auto& [sz, idx] : sectors) {
      const Eigen::Index m = static_cast<Eigen::Index>(idx.size());
      CMatrix block(m, m);
      for (Eigen::Index c = 0; c < m; ++c)
        for (Eigen::Index r = 0; r < m; ++r)
          block(r, c) = h.matrix(idx[static_cast<size_t>(r)],
                                 idx[static_cast<size_t>(c)]);
      std::vector<Complex> w = eigenvalues_only(block);
      evs.insert(evs.end(), w.begin(), w.end());
    }
  } else {
    evs = eigenvalues_only(h.matrix);
  }

  std::sort(evs.begin(), evs.end(), [](const Complex& a, const Complex& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    if (std::abs(a.imag()) != std::abs(b.imag()))
      return std::abs(a.imag()) < std::abs(b.imag());
    return a.imag() < b.imag();
  });

  SpectrumReport rep;
  rep.eigenvalues = std::move(evs);
  rep.ground_energy = rep.eigenvalues[0];
  rep.degeneracy = 0;
  rep.gap = 0.0;
  for (const Complex& e : rep.eigenvalues) {
    if (std::abs(e - rep.ground_energy) <= cluster_tol)
      ++rep.degeneracy;
  }
  for (const Complex& e : rep.eigenvalues) {
    if (std::abs(e - rep.ground_energy) > cluster_tol) {
      rep.gap = e.real() - rep.ground_energy.real();
      break;
    }
  }
  return rep;
}

// Spectrum distance between H(mu) under OBC and the conjugated H(1):
// M H(1) M^{-1} with M = prod_j mu^{j S^z_j} (j = 1..n).  The modification
// operator is diagonal, so the conjugation is a row/column rescaling.
inline double obc_similarity_check(double mu, int n, int k) {
  if (std::pow(3.0, n) > std::pow(3.0, 7) + 0.5)
    throw ResourceCapError("obc_similarity_check: d^n exceeds the 3^7 cap");
  ChainHamiltonian h_mu =
      build_chain(build_projector(aklt_pair(mu), k), n, Boundary::Kind::Open);
  ChainHamiltonian h_one =
      build_chain(build_projector(aklt_pair(1.0), k), n, Boundary::Kind::Open);

  const Eigen::Index dim = h_one.matrix.rows();
  RVector logm(dim);
  for (Eigen::Index x = 0; x < dim; ++x) {
    Eigen::Index rest = x;
    int weighted = 0;
    for (int s = n - 1; s >= 0; --s) {
      weighted += (s + 1) * (1 - static_cast<int>(rest % 3));
      rest /= 3;
    }
    logm[x] = weighted * std::log(mu);
  }
  CMatrix conjugated(dim, dim);
  for (Eigen::Index c = 0; c < dim; ++c)
    for (Eigen::Index r = 0; r < dim; ++r)
      conjugated(r, c) = h_one.matrix(r, c) * std::exp(logm[r] - logm[c]);

  return spectrum_distance(eigenvalues_only(h_mu.matrix),
                           eigenvalues_only(conjugated), 1e-8);
}

struct GapScalingFit {
  double extrapolated_gap = 0.0;
  double residual = 0.0;
};

// Least-squares quadratic in 1/n; the constant term is the n->infinity gap.
inline GapScalingFit gap_scaling(
    const std::vector<std::pair<int, double>>& gaps) {
  if (gaps.size() < 3)
    throw LinalgError("gap_scaling: need at least 3 (n, gap) points");
  Eigen::MatrixXd v(static_cast<Eigen::Index>(gaps.size()), 3);
  Eigen::VectorXd y(static_cast<Eigen::Index>(gaps.size()));
  for (size_t i = 0; i < gaps.size(); ++i) {
    const double x = 1.0 / gaps[i].first;
    v(static_cast<Eigen::Index>(i), 0) = 1.0;
    v(static_cast<Eigen::Index>(i), 1) = x;
    v(static_cast<Eigen::Index>(i), 2) = x * x;
    y[static_cast<Eigen::Index>(i)] = gaps[i].second;
  }
  Eigen::VectorXd coeff = v.colPivHouseholderQr().solve(y);
  GapScalingFit fit;
  fit.extrapolated_gap = coeff[0];
  fit.residual = (v * coeff - y).norm();
  return fit;
}

}  // namespace nhph

#endif  // NHPH_EXACT_DIAG_HPP
