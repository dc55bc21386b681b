#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <optional>
#include <vector>

#include "hybell/constants.hpp"
#include "hybell/errors.hpp"
#include "hybell/quadrature.hpp"
#include "hybell/state.hpp"

// Cavity-QED state production: input-output scattering of a weak coherent
// pulse off a three-port cavity (input mirror b, output mirror c, lumped
// mirror/internal loss port L) dispersively coupled to a single atom.
//
// The atom in |s> does not couple (empty cavity, 3-port scattering U_s); in
// |g> it couples with strength g at detuning Delta, adding the spontaneous-
// emission port (4-port scattering U_g).  The |g>-conditioned transmitted
// pulse acquires the dispersive phase/amplitude difference t_g - t_s; after
// displacement on a beam splitter of reflectivity r_BS the kept mode carries
// amplitude alpha_tilde, and every channel that distinguishes the two atomic
// branches (reflection, loss ports, spontaneous emission, displacement
// residual) erodes the branch coherence, giving the production visibility V.
//
// All frequencies are angular (rad/us); detunings are taken relative to the
// cavity resonance omega_c.  The drive is a Gaussian spectral amplitude
// s_L(omega) of 1/e half-width gamma_L centered at omega_L (= omega_c here),
// normalized to unit power integral.

namespace hybell {

struct CavityParams {
  double g = 0.0;        // atom-cavity coupling (rad/us)
  double kappa_b = 0.0;  // input-mirror decay rate
  double kappa_c = 0.0;  // output-mirror decay rate
  double kappa_L = 0.0;  // internal/mirror loss rate
  double Gamma = 0.0;    // atomic spontaneous-emission rate
  double omega_c = 0.0;  // cavity resonance (reference zero)
  double Delta = 0.0;    // atom-cavity detuning (dispersive regime Delta >> g)
  double r_BS = 0.0;     // displacement beam-splitter amplitude reflectivity

  double kappa() const { return kappa_b + kappa_c + kappa_L; }
  double t_BS() const { return std::sqrt(1.0 - r_BS * r_BS); }
  double f_cav() const { return (kappa_b + kappa_L) / kappa_c; }
  double cooperativity() const { return g * g / (Gamma * kappa()); }

  void validate() const {
    if (!(kappa_b >= 0.0 && kappa_c > 0.0 && kappa_L >= 0.0))
      throw domain_error("CavityParams: decay rates must be >= 0, kappa_c > 0");
    if (!(g >= 0.0 && Gamma > 0.0))
      throw domain_error("CavityParams: need g >= 0 and Gamma > 0");
    if (!(r_BS >= 0.0 && r_BS < 1.0))
      throw domain_error("CavityParams: r_BS must lie in [0, 1)");
  }
};

struct PulseSpec {
  double omega_L = 0.0;   // carrier (angular, = omega_c by construction)
  double gamma_L = 0.0;   // spectral 1/e half-width (rad/us)
  complexd alpha_in = 0.0;  // input coherent amplitude (sqrt photons)
  // Optional hard spectral truncation half-width around omega_L; all
  // frequency integrals clip their domain to it when present.
  std::optional<double> window;

  void validate() const {
    if (!(gamma_L > 0.0)) throw domain_error("PulseSpec: gamma_L must be > 0");
    if (window && !(*window > 0.0))
      throw domain_error("PulseSpec: spectral window must be > 0");
  }
};

using mat3c = std::array<std::array<complexd, 3>, 3>;
using mat4c = std::array<std::array<complexd, 4>, 4>;

// ---------------------------------------------------------------------------
// Input-output scattering.

// Empty-cavity (atom in |s>) scattering matrix over ports (b, c, L):
//   diagonal  r_a = -((kappa/2 - kappa_a) + i dc) / (kappa/2 + i dc)
//   off-diag  t_ab = sqrt(kappa_a kappa_b) / (kappa/2 + i dc)
// with dc = omega - omega_c.  Rows are exactly unit norm (unitarity).
inline mat3c scattering_empty(const CavityParams& p, double omega) {
  const double dc = omega - p.omega_c;
  const complexd den(0.5 * p.kappa(), dc);
  const double ks[3] = {p.kappa_b, p.kappa_c, p.kappa_L};
  mat3c m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (i == j)
        m[i][j] = -(complexd(0.5 * p.kappa() - ks[i], dc)) / den;
      else
        m[i][j] = std::sqrt(ks[i] * ks[j]) / den;
    }
  return m;
}

// Coupled (atom in |g>) scattering matrix over ports (b, c, L, atom), with
// the atomic denominator D = (Gamma/2 + i da)(kappa/2 + i dc) + g^2 and
// da = dc - Delta.  Also exactly unitary.
inline mat4c scattering_coupled(const CavityParams& p, double omega) {
  const double dc = omega - p.omega_c;
  const double da = dc - p.Delta;
  const complexd ga(0.5 * p.Gamma, da);
  const complexd ca(0.5 * p.kappa(), dc);
  const complexd d = ga * ca + p.g * p.g;
  const mat3c us = scattering_empty(p, omega);
  const double nu_v[3] = {std::sqrt(p.kappa_b), std::sqrt(p.kappa_c),
                          std::sqrt(p.kappa_L)};
  mat4c m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      m[i][j] = (us[i][j] * ga * ca - (i == j ? p.g * p.g : 0.0)) / d;
  for (int i = 0; i < 3; ++i) {
    const complexd edge =
        complexd(0.0, 1.0) * p.g * std::sqrt(p.Gamma) * nu_v[i] / d;
    m[i][3] = edge;
    m[3][i] = edge;
  }
  m[3][3] = (std::conj(ga) * ca - p.g * p.g) / d;
  return m;
}

// Transmission b -> c for the two atomic branches.
inline complexd transmission_empty(const CavityParams& p, double omega) {
  const double dc = omega - p.omega_c;
  return std::sqrt(p.kappa_b * p.kappa_c) / complexd(0.5 * p.kappa(), dc);
}

inline complexd transmission_coupled(const CavityParams& p, double omega) {
  const double dc = omega - p.omega_c;
  const double da = dc - p.Delta;
  const complexd ga(0.5 * p.Gamma, da);
  const complexd d = ga * complexd(0.5 * p.kappa(), dc) + p.g * p.g;
  return std::sqrt(p.kappa_b * p.kappa_c) * ga / d;
}

// ---------------------------------------------------------------------------
// Pulse spectrum.

// |s_L(omega)|^2, Gaussian with unit integral.
inline double pulse_density(const PulseSpec& pu, double omega) {
  const double u = (omega - pu.omega_L) / pu.gamma_L;
  return std::exp(-u * u) / (pu.gamma_L * std::sqrt(pi));
}

inline double pulse_amplitude(const PulseSpec& pu, double omega) {
  return std::sqrt(pulse_density(pu, omega));
}

namespace cavity_detail {

// Frequency-integration half-width around omega_L: wide enough for both the
// pulse and the cavity response, clipped by the optional hard window.
inline double integration_halfwidth(const CavityParams& p, const PulseSpec& pu) {
  const double w = std::max(10.0 * pu.gamma_L, 10.0 * p.kappa());
  return pu.window ? std::min(w, *pu.window) : w;
}

// Support half-width of the pulse itself (density ~1e-31 at the edge),
// clipped by the optional hard window.  Used for grids weighted by s_L.
inline double pulse_halfwidth(const PulseSpec& pu) {
  const double w = 8.5 * pu.gamma_L;
  return pu.window ? std::min(w, *pu.window) : w;
}

// Piecewise adaptive integration over the spectral domain.  The integrands
// mix features of very different widths (pulse gamma_L, cavity kappa, atomic
// Gamma); a single adaptive panel spanning the whole domain can bisect so
// that a narrow feature falls between quadrature nodes and report a
// spuriously converged ~0.  Seeding panel edges on geometric ladders around
// each feature guarantees every scale is met by a panel of comparable size.
template <typename Fn>
inline double integrate_spectral(const CavityParams& p, const PulseSpec& pu,
                                 Fn&& f, double abs_tol, double rel_tol) {
  const double w = integration_halfwidth(p, pu);
  const double lo = pu.omega_L - w, hi = pu.omega_L + w;
  std::vector<double> cuts{lo, hi};
  const auto ladder = [&](double center, double scale) {
    if (!(scale > 0.0)) return;
    if (center > lo && center < hi) cuts.push_back(center);
    for (double s = scale; s < 2.0 * w; s *= 2.0) {
      if (center - s > lo && center - s < hi) cuts.push_back(center - s);
      if (center + s > lo && center + s < hi) cuts.push_back(center + s);
    }
  };
  ladder(pu.omega_L, pu.gamma_L);
  ladder(p.omega_c, 0.5 * p.kappa());
  ladder(p.omega_c + p.Delta, 0.5 * p.Gamma);  // coupled-branch atomic line
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    total += integrate(f, cuts[i], cuts[i + 1], abs_tol, rel_tol);
  return total;
}

}  // namespace cavity_detail

// ---------------------------------------------------------------------------
// Kept-mode photon number and visibility.

// J = int |s_L|^2 |t_g - t_s|^2 domega: transmitted spectral weight of the
// branch-distinguishing component that survives the displacement.
inline double filtered_transmission_integral(const CavityParams& p,
                                             const PulseSpec& pu) {
  p.validate();
  pu.validate();
  return cavity_detail::integrate_spectral(
      p, pu,
      [&](double omega) {
        return pulse_density(pu, omega) *
               std::norm(transmission_coupled(p, omega) -
                         transmission_empty(p, omega));
      },
      1e-15, 1e-12);
}

// Kept-mode photon number after the displacement beam splitter.
inline double alpha_tilde_sq(const CavityParams& p, const PulseSpec& pu) {
  const double tbs2 = p.t_BS() * p.t_BS();
  return std::norm(pu.alpha_in) * tbs2 * filtered_transmission_integral(p, pu);
}

// Inverse: input photon number needed to reach a target kept-mode photon
// number at the given pulse width.
inline double required_input_photons(const CavityParams& p, double gamma_L,
                                     double alpha_tilde_target_sq,
                                     std::optional<double> window = {}) {
  PulseSpec pu{p.omega_c, gamma_L, 1.0, window};
  const double j = filtered_transmission_integral(p, pu);
  const double tbs2 = p.t_BS() * p.t_BS();
  if (!(j > 1e-30))
    throw numerical_error(
        "required_input_photons: degenerate spectral filter (J ~ 0)");
  return alpha_tilde_target_sq / (tbs2 * j);
}

// Pulse-averaged atomic-absorption weight entering the closed-form
// visibility: the ratio of int |s_L / D|^2 to the same integral with the
// empty-cavity Lorentzian 1 / (1 + 2 i dc / kappa) folded in.
inline double absorption_weight(const CavityParams& p, const PulseSpec& pu) {
  p.validate();
  pu.validate();
  auto dabs2 = [&](double omega) {
    const double dc = omega - p.omega_c;
    const double da = dc - p.Delta;
    const complexd d =
        complexd(0.5 * p.Gamma, da) * complexd(0.5 * p.kappa(), dc) + p.g * p.g;
    return std::norm(d);
  };
  const double num = cavity_detail::integrate_spectral(
      p, pu,
      [&](double omega) { return pulse_density(pu, omega) / dabs2(omega); },
      0.0, 1e-12);
  const double den = cavity_detail::integrate_spectral(
      p, pu,
      [&](double omega) {
        const double dc = omega - p.omega_c;
        return pulse_density(pu, omega) / dabs2(omega) /
               std::norm(complexd(1.0, 2.0 * dc / p.kappa()));
      },
      0.0, 1e-12);
  if (!(den > 1e-30))
    throw numerical_error("absorption_weight: degenerate spectral filter");
  return num / den;
}

// Closed-form production visibility
//   V = exp( -F |alpha_tilde|^2 / (2 t_BS^2) ),
//   F = r_BS^2 + f_cav + I_sL (1/(4C)) (1 + f_cav).
// The kept-mode term itself does not decohere; every other exit channel does.
inline double visibility_closed(const CavityParams& p, const PulseSpec& pu) {
  const double at2 = alpha_tilde_sq(p, pu);
  const double F = p.r_BS * p.r_BS + p.f_cav() +
                   absorption_weight(p, pu) * (1.0 / (4.0 * p.cooperativity())) *
                       (1.0 + p.f_cav());
  const double tbs2 = p.t_BS() * p.t_BS();
  return std::exp(-F * at2 / (2.0 * tbs2));
}

// Overlap-oracle visibility: integrate the per-frequency distinguishability
// of the full scattering outputs (displacement residual in the kept port,
// reflected port, loss port, spontaneous-emission port) against the pulse.
// No dispersive approximation; cross-checks visibility_closed.
inline double visibility_overlap(const CavityParams& p, const PulseSpec& pu) {
  p.validate();
  pu.validate();
  const double rbs2 = p.r_BS * p.r_BS;
  const double s = cavity_detail::integrate_spectral(
      p, pu,
      [&](double omega) {
        const mat3c us = scattering_empty(p, omega);
        const mat4c ug = scattering_coupled(p, omega);
        const double dto = rbs2 * std::norm(ug[0][1] - us[0][1]);
        const double dr = std::norm(ug[0][0] - us[0][0]);
        const double dl = std::norm(ug[0][2] - us[0][2]);
        const double de = std::norm(ug[0][3]);
        return pulse_density(pu, omega) * (dto + dr + dl + de);
      },
      1e-15, 1e-12);
  return std::exp(-0.5 * std::norm(pu.alpha_in) * s);
}

// ---------------------------------------------------------------------------
// Atomic excitation during state production.

struct DispersiveReport {
  double delta_over_gamma = 0.0;    // Delta / Gamma
  double delta_over_support = 0.0;  // Delta / (pulse spectral support)
  bool ok = false;                  // both margins comfortably large
};

inline DispersiveReport dispersive_check(const CavityParams& p,
                                         const PulseSpec& pu) {
  DispersiveReport r;
  const double support =
      std::abs(pu.omega_L - p.omega_c) + cavity_detail::pulse_halfwidth(pu);
  r.delta_over_gamma = p.Delta / p.Gamma;
  r.delta_over_support = p.Delta / support;
  r.ok = r.delta_over_gamma >= 10.0 && r.delta_over_support >= 1.0;
  return r;
}

namespace cavity_detail {

// Precomputed spectral grid for Fourier-type evaluations at many times:
// weighted samples of f(omega), so that F(t) = sum_i h_i exp(-i omega_i t)
// approximates int f(omega) e^{-i omega t} domega.
struct spectral_grid {
  std::vector<double> omega;
  std::vector<complexd> h;

  complexd fourier(double t) const {
    complexd acc = 0.0;
    for (std::size_t i = 0; i < omega.size(); ++i)
      acc += h[i] * std::exp(complexd(0.0, -omega[i] * t));
    return acc;
  }

  double power() const {  // int |f|^2 domega via the same weights
    double acc = 0.0;
    for (std::size_t i = 0; i < omega.size(); ++i)
      acc += std::abs(h[i]) * std::abs(h[i]) / w_[i];
    return acc;
  }

  std::vector<double> w_;  // bare quadrature weights (kept for power())
};

template <class F>
spectral_grid make_spectral_grid(const PulseSpec& pu, double halfwidth,
                                 F&& f, int panels = 192) {
  spectral_grid g;
  const auto nodes =
      gl_composite(pu.omega_L - halfwidth, pu.omega_L + halfwidth, panels);
  g.omega.reserve(nodes.size());
  g.h.reserve(nodes.size());
  g.w_.reserve(nodes.size());
  for (const auto& nd : nodes) {
    g.omega.push_back(nd.x);
    g.h.push_back(nd.w * f(nd.x));
    g.w_.push_back(nd.w);
  }
  return g;
}

// Spectral amplitude of the excited-state component: the atom is excited
// through the cavity by the drive entering mirror b,
//   c_e(omega) = i g sqrt(kappa_b) alpha_in s_L(omega) / Dbar(omega),
//   Dbar = (Gamma/2 - i da)(kappa/2 - i dc) + g^2,
// and P_e(t) = |int c_e e^{-i omega t} domega|^2 / (2 pi).
inline spectral_grid excitation_grid(const CavityParams& p,
                                     const PulseSpec& pu) {
  return make_spectral_grid(pu, pulse_halfwidth(pu), [&](double omega) {
    const double dc = omega - p.omega_c;
    const double da = dc - p.Delta;
    const complexd dbar =
        complexd(0.5 * p.Gamma, -da) * complexd(0.5 * p.kappa(), -dc) +
        p.g * p.g;
    return complexd(0.0, 1.0) * p.g * std::sqrt(p.kappa_b) * pu.alpha_in *
           pulse_amplitude(pu, omega) / dbar;
  });
}

}  // namespace cavity_detail

// Excited-state population at time t (t = 0 is the pulse-center arrival).
inline double excitation_probability(const CavityParams& p, const PulseSpec& pu,
                                     double t) {
  p.validate();
  pu.validate();
  const auto grid = cavity_detail::excitation_grid(p, pu);
  return std::norm(grid.fourier(t)) / two_pi;
}

struct MaxExcitation {
  double p = 0.0;  // max_t P_e(t)
  double t = 0.0;  // time of the maximum
  DispersiveReport dispersive;
};

// Maximum excited-state population over the pulse: coarse scan over the
// pulse duration plus the cavity ringdown, then golden-section refinement.
inline MaxExcitation max_excitation(const CavityParams& p, const PulseSpec& pu) {
  p.validate();
  pu.validate();
  const auto grid = cavity_detail::excitation_grid(p, pu);
  auto pe = [&](double t) { return std::norm(grid.fourier(t)) / two_pi; };

  const double dur = 6.0 * sqrt2 / pu.gamma_L + 10.0 / p.kappa();
  const int n = 241;
  double best_t = -dur, best_p = -1.0;
  for (int i = 0; i < n; ++i) {
    const double t = -dur + 2.0 * dur * i / (n - 1);
    const double v = pe(t);
    if (v > best_p) {
      best_p = v;
      best_t = t;
    }
  }
  // golden-section refine in the bracketing neighborhood
  const double step = 2.0 * dur / (n - 1);
  double a = best_t - step, b = best_t + step;
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = pe(x1), f2 = pe(x2);
  for (int it = 0; it < 60 && (b - a) > 1e-7 * std::max(1.0, std::abs(best_t));
       ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = pe(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = pe(x1);
    }
  }
  const double tm = 0.5 * (a + b);
  const double pm = pe(tm);
  MaxExcitation out;
  out.t = pm > best_p ? tm : best_t;
  out.p = std::max(pm, best_p);
  out.dispersive = dispersive_check(p, pu);
  return out;
}

// Largest pulse linewidth at which the atom stays within the linear regime:
// bisection (relative width 1e-3, log scale) of max_t P_e against
// `p_target`, re-deriving alpha_in at every trial width so the kept-mode
// photon number stays at its target.
inline double gamma_for_excitation(const CavityParams& p, double p_target,
                                   double alpha_tilde_target_sq,
                                   std::optional<double> window = {}) {
  p.validate();
  if (!(p_target > 0.0 && p_target < 1.0))
    throw domain_error("gamma_for_excitation: target must lie in (0, 1)");

  auto max_pe_at = [&](double gamma_L) {
    const double ain2 =
        required_input_photons(p, gamma_L, alpha_tilde_target_sq, window);
    PulseSpec pu{p.omega_c, gamma_L, std::sqrt(ain2), window};
    return max_excitation(p, pu).p;
  };

  double lo = 1e-3 * p.kappa(), hi = p.kappa();
  while (max_pe_at(hi) < p_target) {
    hi *= 2.0;
    if (hi > 1e4 * p.kappa())
      throw numerical_error(
          "gamma_for_excitation: excitation never reaches the target "
          "(no bracketing linewidth below 1e4 kappa)");
  }
  while (max_pe_at(lo) > p_target) {
    lo *= 0.5;
    if (lo < 1e-8 * p.kappa())
      throw numerical_error(
          "gamma_for_excitation: excitation exceeds the target even for "
          "vanishing linewidth");
  }
  while ((hi - lo) / hi > 1e-3) {
    const double mid = std::sqrt(lo * hi);
    (max_pe_at(mid) > p_target ? hi : lo) = mid;
  }
  return std::sqrt(lo * hi);
}

// ---------------------------------------------------------------------------
// Finite measurement-window capture.

struct CaptureResult {
  double fraction = 1.0;      // kept-mode energy inside the best window
  double window_start = 0.0;  // its left edge (us, pulse center at 0)
};

// Fraction of the kept-mode wavepacket |alpha_tilde(t)|^2 captured by the
// best-placed time window of the given duration.  The wavepacket is the
// inverse transform of s_L (t_g - t_s); the total energy is evaluated
// spectrally (Parseval) for accuracy.
inline CaptureResult capture_fraction(const CavityParams& p,
                                      const PulseSpec& pu, double duration) {
  p.validate();
  pu.validate();
  if (!(duration > 0.0))
    throw domain_error("capture_fraction: duration must be > 0");

  const auto grid = cavity_detail::make_spectral_grid(
      pu, cavity_detail::pulse_halfwidth(pu), [&](double omega) {
        return pulse_amplitude(pu, omega) *
               (transmission_coupled(p, omega) - transmission_empty(p, omega));
      });

  const double total = grid.power() / two_pi;
  if (!(total > 1e-30))
    throw numerical_error("capture_fraction: degenerate spectral filter");

  // The filter ringdown can extend to either side of the pulse center
  // depending on the Fourier sign convention; make the grid symmetric.
  const double tail = 15.0 / std::min(p.kappa(), p.Gamma);
  const double t_lo = -(3.5 / pu.gamma_L + tail + 0.25 * duration);
  const double t_hi = 3.5 / pu.gamma_L + tail + duration;
  const int n = 4001;
  const double dt = (t_hi - t_lo) / (n - 1);

  std::vector<double> intensity(n);
  for (int i = 0; i < n; ++i)
    intensity[static_cast<std::size_t>(i)] =
        std::norm(grid.fourier(t_lo + i * dt)) / (two_pi * two_pi);

  // cumulative trapezoid, then slide an integer-width window
  std::vector<double> cum(static_cast<std::size_t>(n), 0.0);
  for (int i = 1; i < n; ++i)
    cum[static_cast<std::size_t>(i)] =
        cum[static_cast<std::size_t>(i) - 1] +
        0.5 * dt * (intensity[static_cast<std::size_t>(i)] + intensity[static_cast<std::size_t>(i) - 1]);
  const int win = std::max(1, static_cast<int>(std::round(duration / dt)));
  double best = 0.0;
  int best_i = 0;
  for (int i = 0; i + win < n; ++i) {
    const double cap = cum[static_cast<std::size_t>(i + win)] - cum[static_cast<std::size_t>(i)];
    if (cap > best) {
      best = cap;
      best_i = i;
    }
  }
  CaptureResult out;
  out.fraction = std::min(1.0, best / total);
  out.window_start = t_lo + best_i * dt;
  return out;
}

}  // namespace hybell
