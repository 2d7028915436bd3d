#ifndef NHPH_ITEBD_HPP
#define NHPH_ITEBD_HPP

// Multi-site imaginary-time evolution of a k-site unit-cell MPS under
// gates built from the local projector.  Site tensors are stored
// right-weighted (X = T diag(G)); the bare T is never formed and no
// Schmidt weight is ever inverted inside the sweep - each window update
// rebuilds the left neighbours from overlaps of the old and new
// right-hand factors.

#include <cmath>
#include <deque>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "nhph/linalg.hpp"
#include "nhph/mps.hpp"
#include "nhph/parent_ham.hpp"

namespace nhph {

inline constexpr double kWeightFloor = 1e-14;

struct UnitCellState {
  int k = 0;
  int D_max = 0;
  // site_tensors[i][p](a, b): right-weighted tensor of site i, physical
  // index p, left bond a, right bond b.
  std::vector<std::vector<CMatrix>> site_tensors;
  // schmidt_weights[i]: weights on the bond to the right of site i,
  // descending, unit square-sum.
  std::vector<RVector> schmidt_weights;

  int phys_dim() const {
    return site_tensors.empty() ? 0
                                : static_cast<int>(site_tensors[0].size());
  }
};

struct EvolutionGate {
  CMatrix matrix;
  double dtau = 0.0;
  LocalProjector source;
};

struct ConvergenceTrace {
  long steps = 0;               // sweeps performed
  std::vector<double> e_history;  // weight drift across the probe window
  double e_tol = 0.0;
  bool converged = false;
  unsigned long long seed = 0;
  int probe_window = 0;  // sweeps spanning one unit of imaginary time
  double dtau = 0.0;
};

// gate = e^{-dtau Pi} in closed form: I + (e^{-dtau} - 1) Pi, valid exactly
// because Pi is idempotent (verified here before use).
inline EvolutionGate make_gate(const LocalProjector& p, double dtau) {
  if (dtau < 0.0 || !std::isfinite(dtau))
    throw LinalgError("make_gate: dtau must be non-negative");
  const Eigen::Index n = p.matrix.rows();
  const CMatrix complement = CMatrix::Identity(n, n) - p.matrix;
  const double idem =
      (complement * complement - complement).cwiseAbs().maxCoeff();
  if (idem > 1e-10)
    throw LinalgError("make_gate: operator is not idempotent; closed-form "
                      "exponential invalid");
  EvolutionGate g;
  g.matrix = CMatrix::Identity(n, n) + (std::exp(-dtau) - 1.0) * p.matrix;
  g.dtau = dtau;
  g.source = p;
  return g;
}

inline UnitCellState random_cell(int k, int d, int D_max,
                                 unsigned long long seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  UnitCellState st;
  st.k = k;
  st.D_max = D_max;
  st.site_tensors.resize(static_cast<size_t>(k));
  st.schmidt_weights.resize(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i) {
    auto& site = st.site_tensors[static_cast<size_t>(i)];
    site.assign(static_cast<size_t>(d), CMatrix(D_max, D_max));
    double norm2 = 0.0;
    for (int p = 0; p < d; ++p)
      for (int a = 0; a < D_max; ++a)
        for (int b = 0; b < D_max; ++b) {
          const Complex z(uni(rng), uni(rng));
          site[static_cast<size_t>(p)](a, b) = z;
          norm2 += std::norm(z);
        }
    const double scale = 1.0 / std::sqrt(norm2);
    for (int p = 0; p < d; ++p) site[static_cast<size_t>(p)] *= scale;
    st.schmidt_weights[static_cast<size_t>(i)] =
        RVector::Constant(D_max, 1.0 / std::sqrt(static_cast<double>(D_max)));
  }
  return st;
}

// Exactly-canonical k-site cell seeded from a single-site uniform MPS via
// its canonical form: every site tensor is Gamma diag(lambda) and every
// bond carries lambda.
inline UnitCellState canonical_cell(const UniformMPS& state, int k,
                                    double tol = 1e-8) {
  CanonicalForm cf = canonical_form(state, tol);
  const int d = state.d;
  const int D = static_cast<int>(cf.lambda.size());
  std::vector<CMatrix> x(static_cast<size_t>(d));
  double norm2 = 0.0;
  for (int p = 0; p < d; ++p) {
    x[static_cast<size_t>(p)] =
        cf.gamma[static_cast<size_t>(p)] * cf.lambda.asDiagonal();
    norm2 += x[static_cast<size_t>(p)].squaredNorm();
  }
  const double scale = 1.0 / std::sqrt(norm2);
  for (int p = 0; p < d; ++p) x[static_cast<size_t>(p)] *= scale;

  UnitCellState st;
  st.k = k;
  st.D_max = D;
  st.site_tensors.assign(static_cast<size_t>(k), x);
  st.schmidt_weights.assign(static_cast<size_t>(k), cf.lambda);
  return st;
}

namespace detail {

// One gate application on the window starting at `offset`, followed by the
// inverse-free SVD chain that refreshes every tensor and bond in the
// window from right to left factors of the previous split.
inline void window_update(UnitCellState& st, const EvolutionGate& gate,
                          int offset) {
  const int k = st.k;
  const int d = st.phys_dim();
  Eigen::Index dk = 1;
  for (int j = 0; j < k; ++j) dk *= d;
  if (gate.matrix.rows() != dk)
    throw LinalgError("window_update: gate/cell size mismatch");

  std::vector<int> sites(static_cast<size_t>(k));
  for (int j = 0; j < k; ++j) sites[static_cast<size_t>(j)] = (offset + j) % k;
  const int bond_left = (offset + k - 1) % k;

  // theta[P] = X_{s_0}[p_0] ... X_{s_{k-1}}[p_{k-1}], P = p_0 slowest.
  std::vector<CMatrix> theta(static_cast<size_t>(dk));
  for (Eigen::Index flat = 0; flat < dk; ++flat) {
    Eigen::Index rest = flat;
    Eigen::Index div = dk / d;
    CMatrix prod =
        st.site_tensors[static_cast<size_t>(sites[0])]
                       [static_cast<size_t>(rest / div)];
    rest %= div;
    div /= d;
    for (int j = 1; j < k; ++j) {
      prod = prod * st.site_tensors[static_cast<size_t>(
                        sites[static_cast<size_t>(j)])]
                                   [static_cast<size_t>(rest / div)];
      rest %= div;
      div /= d;
    }
    theta[static_cast<size_t>(flat)] = std::move(prod);
  }

  // Gate on the physical window, then normalize.
  std::vector<CMatrix> y(static_cast<size_t>(dk));
  for (Eigen::Index p = 0; p < dk; ++p) {
    CMatrix acc = CMatrix::Zero(theta[0].rows(), theta[0].cols());
    for (Eigen::Index q = 0; q < dk; ++q) {
      const Complex c = gate.matrix(p, q);
      if (c == Complex(0.0, 0.0)) continue;
      acc += c * theta[static_cast<size_t>(q)];
    }
    y[static_cast<size_t>(p)] = std::move(acc);
  }
  double norm2 = 0.0;
  for (const CMatrix& m : y) norm2 += m.squaredNorm();
  if (!(norm2 > 0.0))
    throw LinalgError("window_update: window annihilated by gate");
  const double inv_norm = 1.0 / std::sqrt(norm2);
  for (CMatrix& m : y) m *= inv_norm;

  // Multiply in the weights on the bond entering the window from the left.
  const RVector& wl = st.schmidt_weights[static_cast<size_t>(bond_left)];
  std::vector<CMatrix> theta_w(static_cast<size_t>(dk));
  for (Eigen::Index p = 0; p < dk; ++p)
    theta_w[static_cast<size_t>(p)] =
        wl.asDiagonal() * y[static_cast<size_t>(p)];

  const Eigen::Index b0 = theta_w[0].cols();
  std::vector<CMatrix> prev_y = y;  // composite physical size d * rest
  Eigen::Index rest = dk / d;

  for (int j = 0; j < k - 1; ++j) {
    const Eigen::Index chi = theta_w[0].rows();
    CMatrix m(chi * d, rest * b0);
    for (Eigen::Index p = 0; p < d; ++p)
      for (Eigen::Index q = 0; q < rest; ++q) {
        const CMatrix& blk = theta_w[static_cast<size_t>(p * rest + q)];
        for (Eigen::Index a = 0; a < chi; ++a)
          for (Eigen::Index b = 0; b < b0; ++b)
            m(a * d + p, q * b0 + b) = blk(a, b);
      }

    SvdResult dec = svd(m);
    if (dec.s[0] <= kWeightFloor)
      throw LinalgError("window_update: bond collapse (all weights below "
                        "the floor)");
    int keep = 0;
    for (Eigen::Index i = 0; i < dec.s.size(); ++i)
      if (dec.s[i] > kWeightFloor) ++keep;
    keep = std::max(1, std::min(keep, st.D_max));

    RVector w = dec.s.head(keep);
    w /= w.norm();
    st.schmidt_weights[static_cast<size_t>(sites[static_cast<size_t>(j)])] = w;

    // next_y[q](c, b) = Vh(c, q*b0 + b), c < keep
    std::vector<CMatrix> next_y(static_cast<size_t>(rest));
    for (Eigen::Index q = 0; q < rest; ++q) {
      CMatrix blk(keep, b0);
      for (int c = 0; c < keep; ++c)
        for (Eigen::Index b = 0; b < b0; ++b)
          blk(c, b) = dec.vh(c, q * b0 + b);
      next_y[static_cast<size_t>(q)] = std::move(blk);
    }

    // New tensor at the split site from overlaps with the previous factor:
    // X'[p] = sum_q prev_y[p*rest + q] next_y[q]^H  - no weight inversion.
    std::vector<CMatrix> new_x(static_cast<size_t>(d));
    double xnorm2 = 0.0;
    for (Eigen::Index p = 0; p < d; ++p) {
      CMatrix acc = CMatrix::Zero(prev_y[0].rows(), keep);
      for (Eigen::Index q = 0; q < rest; ++q)
        acc += prev_y[static_cast<size_t>(p * rest + q)] *
               next_y[static_cast<size_t>(q)].adjoint();
      xnorm2 += acc.squaredNorm();
      new_x[static_cast<size_t>(p)] = std::move(acc);
    }
    const double xscale = 1.0 / std::sqrt(xnorm2);
    for (CMatrix& t : new_x) t *= xscale;
    st.site_tensors[static_cast<size_t>(sites[static_cast<size_t>(j)])] =
        std::move(new_x);

    // Remaining window carries the fresh weights on its left bond.
    theta_w.assign(static_cast<size_t>(rest), CMatrix());
    for (Eigen::Index q = 0; q < rest; ++q)
      theta_w[static_cast<size_t>(q)] =
          w.asDiagonal() * next_y[static_cast<size_t>(q)];
    prev_y = std::move(next_y);
    rest /= d;
  }

  // Last site of the window is the final right factor itself.
  std::vector<CMatrix>& last = prev_y;  // composite size d (rest == 1)
  double lnorm2 = 0.0;
  for (const CMatrix& t : last) lnorm2 += t.squaredNorm();
  const double lscale = 1.0 / std::sqrt(lnorm2);
  for (CMatrix& t : last) t *= lscale;
  st.site_tensors[static_cast<size_t>(
      sites[static_cast<size_t>(k - 1)])] = std::move(last);
}

inline std::vector<double> weight_snapshot(const UnitCellState& st) {
  std::vector<double> snap(static_cast<size_t>(st.k) *
                               static_cast<size_t>(st.D_max),
                           0.0);
  for (int i = 0; i < st.k; ++i) {
    const RVector& w = st.schmidt_weights[static_cast<size_t>(i)];
    for (Eigen::Index j = 0; j < w.size() && j < st.D_max; ++j)
      snap[static_cast<size_t>(i) * static_cast<size_t>(st.D_max) +
           static_cast<size_t>(j)] = w[j];
  }
  return snap;
}

}  // namespace detail

// One full sweep: the k-site window applied at every offset in order.
inline UnitCellState itebd_sweep(UnitCellState state,
                                 const EvolutionGate& gate) {
  for (int offset = 0; offset < state.k; ++offset)
    detail::window_update(state, gate, offset);
  return state;
}

// Imaginary-time evolution until the Schmidt weights are stationary across
// one unit of imaginary time: e compares the current weights with those
// round(1/dtau) sweeps ago, the discretization-robust reading of the
// weight-drift criterion.
inline std::pair<UnitCellState, ConvergenceTrace> find_ground_state(
    const LocalProjector& p, int D_max, double dtau, double e_tol,
    long max_steps, bool adjoint = false, unsigned long long seed = 1,
    const std::optional<UnitCellState>& warm_start = std::nullopt) {
  if (D_max < 2) throw LinalgError("find_ground_state: D_max must be >= 2");
  if (!(dtau > 0.0) || !(e_tol > 0.0))
    throw LinalgError("find_ground_state: dtau and e_tol must be positive");

  LocalProjector evolved = p;
  if (adjoint) evolved.matrix = p.matrix.adjoint();
  const EvolutionGate gate = make_gate(evolved, dtau);
  const int d = detail::physical_dim(p);

  UnitCellState st = warm_start ? *warm_start
                                : random_cell(p.k, d, D_max, seed);

  ConvergenceTrace trace;
  trace.e_tol = e_tol;
  trace.seed = seed;
  trace.dtau = dtau;
  trace.probe_window =
      std::max(1, static_cast<int>(std::llround(1.0 / dtau)));

  std::deque<std::vector<double>> ring;
  ring.push_back(detail::weight_snapshot(st));

  for (long step = 1; step <= max_steps; ++step) {
    st = itebd_sweep(std::move(st), gate);
    trace.steps = step;
    ring.push_back(detail::weight_snapshot(st));
    if (static_cast<int>(ring.size()) >
        trace.probe_window) {  // current vs probe_window sweeps ago
      const std::vector<double>& then = ring.front();
      const std::vector<double>& now = ring.back();
      double e = 0.0;
      for (size_t i = 0; i < now.size(); ++i) {
        const double diff = now[i] - then[i];
        e += diff * diff;
      }
      trace.e_history.push_back(e);
      ring.pop_front();
      if (e < e_tol) {
        trace.converged = true;
        break;
      }
    }
  }
  return {std::move(st), std::move(trace)};
}

// Flatten the cell to a uniform MPS on the coarse-grained k-site physical
// index, splitting the boundary-bond weights symmetrically as square
// roots; weights at or below the floor zero their directions instead of
// being inverted.
inline UniformMPS to_uniform(const UnitCellState& st) {
  const int k = st.k;
  const int d = st.phys_dim();
  Eigen::Index dk = 1;
  for (int j = 0; j < k; ++j) dk *= d;

  const RVector& w = st.schmidt_weights[static_cast<size_t>(k - 1)];
  RVector sqrt_w(w.size()), inv_sqrt_w(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    sqrt_w[i] = std::sqrt(std::max(w[i], 0.0));
    inv_sqrt_w[i] = w[i] > kWeightFloor ? 1.0 / sqrt_w[i] : 0.0;
  }

  UniformMPS out;
  out.d = static_cast<int>(dk);
  out.D = static_cast<int>(w.size());
  out.tensor.resize(static_cast<size_t>(dk));
  for (Eigen::Index flat = 0; flat < dk; ++flat) {
    Eigen::Index rest = flat;
    Eigen::Index div = dk / d;
    CMatrix prod =
        st.site_tensors[0][static_cast<size_t>(rest / div)];
    rest %= div;
    div /= d;
    for (int j = 1; j < k; ++j) {
      prod = prod * st.site_tensors[static_cast<size_t>(j)]
                                   [static_cast<size_t>(rest / div)];
      rest %= div;
      div /= d;
    }
    out.tensor[static_cast<size_t>(flat)] =
        sqrt_w.asDiagonal() * prod * inv_sqrt_w.asDiagonal();
  }
  return out;
}

}  // namespace nhph

#endif  // NHPH_ITEBD_HPP
