#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <string>

#include "hybell/constants.hpp"
#include "hybell/errors.hpp"
#include "hybell/quadrature.hpp"
#include "hybell/state.hpp"

// Brute-force validation backend: everything the analytic modules compute in
// closed form is recomputed here by dense linear algebra in a truncated
// number basis (atom(2) x field(n_max+1)).  Not part of the user-facing
// numeric path; performance is a non-goal.

namespace hybell {

using cmat = Eigen::MatrixXcd;
using cvec = Eigen::VectorXcd;

struct FockOperator {
  int dim = 0;  // field truncation size n_max + 1
  cmat entries;
};

struct FockState {
  int dim = 0;  // field truncation size n_max + 1
  cmat matrix;  // density matrix over atom(2) x field(dim)
};

// P(N > n_max) for N ~ Poisson(lambda), summed over the tail in log space so
// that values down to ~1e-300 are representable.
inline double poisson_tail(double lambda, int n_max) {
  if (lambda <= 0.0) return 0.0;
  double tail = 0.0;
  double logp = -lambda + (n_max + 1) * std::log(lambda) - std::lgamma(n_max + 2.0);
  double p = std::exp(logp);
  for (int k = n_max + 1; k < n_max + 2000; ++k) {
    tail += p;
    p *= lambda / (k + 1);
    if (p < tail * 1e-18 && k > n_max + 10) break;
  }
  return tail;
}

// Smallest truncation whose Poisson tail for amplitude |alpha| stays below
// tail_tol.
inline int required_n_max(double alpha_abs, double tail_tol = 1e-12) {
  const double lambda = alpha_abs * alpha_abs;
  int n = static_cast<int>(lambda) + 1;
  while (poisson_tail(lambda, n) >= tail_tol && n < 4096) ++n;
  return n;
}

// Number-basis expansion of |alpha>, v_n = e^{-|alpha|^2/2} alpha^n / sqrt(n!).
inline cvec coherent_vec(complexd alpha, int n_max) {
  cvec v(n_max + 1);
  v(0) = std::exp(-0.5 * std::norm(alpha));
  for (int n = 0; n < n_max; ++n) v(n + 1) = v(n) * alpha / std::sqrt(n + 1.0);
  return v;
}

// Density matrix of the two-branch state with the off-diagonal atom-field
// block scaled by the coherence factor.  Atom ordering: index 0 = |s>,
// index 1 = |g>; composite index a*(n_max+1) + n.
inline FockState embed_state(const HybridState& s, int n_max) {
  s.validate();
  const double amax = std::max(std::abs(s.alpha_s), std::abs(s.alpha_g));
  if (poisson_tail(amax * amax, n_max) >= 1e-12)
    throw truncation_error(
        "embed_state: Poisson tail beyond n_max exceeds 1e-12; need n_max >= " +
            std::to_string(required_n_max(amax)),
        required_n_max(amax));

  const int d = n_max + 1;
  const cvec vs = coherent_vec(s.alpha_s, n_max);
  const cvec vg = coherent_vec(s.alpha_g, n_max);
  const double c = std::cos(s.nu), sn = std::sin(s.nu);

  FockState out;
  out.dim = d;
  out.matrix = cmat::Zero(2 * d, 2 * d);
  out.matrix.block(0, 0, d, d) = (c * c) * vs * vs.adjoint();
  out.matrix.block(d, d, d, d) = (sn * sn) * vg * vg.adjoint();
  out.matrix.block(0, d, d, d) = (s.coherence * c * sn) * vs * vg.adjoint();
  out.matrix.block(d, 0, d, d) = out.matrix.block(0, d, d, d).adjoint();
  return out;
}

// Photodetection operator: diagonal with entries 2 (1-eta)^n - 1.
inline FockOperator build_B0(double eta, int n_max) {
  if (!(eta >= 0.0 && eta <= 1.0))
    throw domain_error("build_B0: eta must lie in [0, 1]");
  if (n_max < 1) throw domain_error("build_B0: n_max must be >= 1");
  FockOperator op;
  op.dim = n_max + 1;
  op.entries = cmat::Zero(op.dim, op.dim);
  double pw = 1.0;
  for (int n = 0; n <= n_max; ++n) {
    op.entries(n, n) = 2.0 * pw - 1.0;
    pw *= 1.0 - eta;
  }
  return op;
}

namespace fock_detail {

// Hermite functions psi_n(x) (harmonic-oscillator eigenfunctions, unit L2
// norm) via the stable normalized recurrence.
inline void hermite_column(double x, int n_max, std::vector<double>& psi) {
  psi.resize(static_cast<std::size_t>(n_max) + 1);
  psi[0] = std::pow(pi, -0.25) * std::exp(-0.5 * x * x);
  if (n_max >= 1) psi[1] = std::sqrt(2.0) * x * psi[0];
  for (int n = 1; n < n_max; ++n)
    psi[static_cast<std::size_t>(n) + 1] =
        std::sqrt(2.0 / (n + 1.0)) * x * psi[static_cast<std::size_t>(n)] -
        std::sqrt(n / (n + 1.0)) * psi[static_cast<std::size_t>(n) - 1];
}

inline Eigen::MatrixXd b1_bin_integral(double b, int n_max, int panels) {
  const int d = n_max + 1;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
  std::vector<double> psi;
  for (const auto& node : gl_composite(-b, b, panels)) {
    hermite_column(node.x, n_max, psi);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j <= i; ++j)
        m(i, j) += node.w * psi[static_cast<std::size_t>(i)] * psi[static_cast<std::size_t>(j)];
  }
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) m(i, j) = m(j, i);
  return m;
}

}  // namespace fock_detail

// Binned-quadrature operator <m|B1|n> = 2 int_{-b}^{b} psi_m psi_n dx - d_mn.
// Fixed-order Gauss-Legendre panels on [-b, b]; the panel count is doubled
// until entries move by less than 1e-12.
inline FockOperator build_B1(double b, int n_max) {
  if (!(b >= 0.0)) throw domain_error("build_B1: b must be >= 0");
  if (n_max < 1) throw domain_error("build_B1: n_max must be >= 1");
  FockOperator op;
  op.dim = n_max + 1;
  if (b == 0.0) {
    op.entries = -cmat::Identity(op.dim, op.dim);
    return op;
  }
  Eigen::MatrixXd coarse = fock_detail::b1_bin_integral(b, n_max, 8);
  for (int panels = 16; panels <= 256; panels *= 2) {
    Eigen::MatrixXd fine = fock_detail::b1_bin_integral(b, n_max, panels);
    const double diff = (fine - coarse).cwiseAbs().maxCoeff();
    coarse = std::move(fine);
    if (diff < 1e-12) break;
  }
  op.entries =
      (2.0 * coarse - Eigen::MatrixXd::Identity(op.dim, op.dim)).cast<complexd>();
  return op;
}

// Pure-loss channel of power transmittance tau applied to the field factor:
// rho'_ab = sum_k E_k rho_ab E_k^dag on each atom block, with Kraus operators
// <n-k|E_k|n> = sqrt( C(n,k) tau^{n-k} (1-tau)^k ).
inline FockState loss_channel(const FockState& st, double tau) {
  if (!(tau >= 0.0 && tau <= 1.0))
    throw domain_error("loss_channel: tau must lie in [0, 1]");
  if (tau == 1.0) return st;
  const int d = st.dim;

  std::vector<Eigen::MatrixXd> kraus;
  kraus.reserve(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) {
    Eigen::MatrixXd ek = Eigen::MatrixXd::Zero(d, d);
    for (int n = k; n < d; ++n) {
      double logc;
      if (tau == 0.0) {
        if (n != k) continue;  // tau^0 only survives when k = n
        logc = 0.5 * (std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                      std::lgamma(n - k + 1.0));
        // C(n,n) = 1 and (1-tau)^n = 1, so logc reduces to 0
      } else {
        logc = 0.5 * (std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                      std::lgamma(n - k + 1.0) + (n - k) * std::log(tau) +
                      k * std::log(1.0 - tau));
      }
      ek(n - k, n) = std::exp(logc);
    }
    kraus.push_back(std::move(ek));
  }

  FockState out;
  out.dim = d;
  out.matrix = cmat::Zero(2 * d, 2 * d);
  for (int a = 0; a < 2; ++a)
    for (int b2 = 0; b2 < 2; ++b2) {
      const cmat blk = st.matrix.block(a * d, b2 * d, d, d);
      cmat acc = cmat::Zero(d, d);
      for (const auto& ek : kraus)
        acc += ek.cast<complexd>() * blk * ek.transpose().cast<complexd>();
      out.matrix.block(a * d, b2 * d, d, d) = acc;
    }
  return out;
}

namespace fock_detail {

inline cmat kron_atom(const Eigen::Matrix2cd& a, const cmat& f) {
  const int d = static_cast<int>(f.rows());
  cmat out(2 * d, 2 * d);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block(i * d, j * d, d, d) = a(i, j) * f;
  return out;
}

// The orthogonal-quadrature rotation on B1: conjugation by e^{i pi/2 n}
// multiplies <m|B1|n> by i^{n-m}, matching the amplitude rotation by i used
// in the analytic path.
inline cmat rotate_b1(const cmat& b1) {
  const int d = static_cast<int>(b1.rows());
  cmat out(d, d);
  const complexd ip[4] = {1.0, complexd(0.0, 1.0), -1.0, complexd(0.0, -1.0)};
  for (int m = 0; m < d; ++m)
    for (int n = 0; n < d; ++n) out(m, n) = ip[((n - m) % 4 + 4) % 4] * b1(m, n);
  return out;
}

}  // namespace fock_detail

// Tr(rho * Bell) by dense algebra.  The state is first passed through the
// loss channel at transmittance T, mirroring the analytic path.
inline double oracle_chsh(const FockState& st, const MeasurementSettings& m) {
  m.validate();
  const FockState lost = loss_channel(st, m.T);
  const int n_max = st.dim - 1;

  Eigen::Matrix2cd sz, sx;
  sz << 1.0, 0.0, 0.0, -1.0;  // atom basis (|s>, |g>)
  sx << 0.0, 1.0, 1.0, 0.0;
  const Eigen::Matrix2cd a0 = std::cos(m.gamma) * sz + std::sin(m.gamma) * sx;
  const Eigen::Matrix2cd a1 = std::cos(m.gamma) * sz - std::sin(m.gamma) * sx;

  const cmat b0 = build_B0(m.eta, n_max).entries;
  const cmat b1 = fock_detail::rotate_b1(build_B1(m.b, n_max).entries);

  const cmat bell = fock_detail::kron_atom(a0 + a1, b0) +
                    fock_detail::kron_atom(a0 - a1, b1);
  return (lost.matrix * bell).trace().real();
}

inline double state_trace(const FockState& st) {
  return st.matrix.trace().real();
}

inline double purity(const FockState& st) {
  return (st.matrix * st.matrix).trace().real();
}

inline double min_eigenvalue(const FockState& st) {
  const cmat herm = 0.5 * (st.matrix + st.matrix.adjoint());
  Eigen::SelfAdjointEigenSolver<cmat> es(herm, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

// How far the spectrum of a Hermitian operator spills outside [-1, 1].
// Both binary-outcome operators are contractions on the full space, and
// compressing a Hermitian contraction to the truncated basis cannot enlarge
// its spectrum, so this is exactly zero at every n_max up to rounding; any
// sizable positive value indicates a construction bug, not truncation.
// (By contrast, products such as B1^2 pick up O(n_max^{-1/2}) truncation
// error, because the sign flip at the bin edge gives the operator's columns
// algebraically decaying number-basis tails.)
inline double spectral_excess(const FockOperator& op) {
  const cmat herm = 0.5 * (op.entries + op.entries.adjoint());
  Eigen::SelfAdjointEigenSolver<cmat> es(herm, Eigen::EigenvaluesOnly);
  const double top = std::max(std::abs(es.eigenvalues().minCoeff()),
                              std::abs(es.eigenvalues().maxCoeff()));
  return std::max(0.0, top - 1.0);
}

}  // namespace hybell
