#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "hybell/cavity.hpp"
#include "hybell/constants.hpp"
#include "hybell/errors.hpp"
#include "hybell/optimize.hpp"
#include "hybell/parallel.hpp"
#include "hybell/rows.hpp"
#include "hybell/state.hpp"

// Locality-loophole timing arithmetic and the end-to-end benchmark pipeline:
// for each cavity row, find the largest linewidth keeping the atom in the
// linear regime, derive the working pulse, its visibility (closed form,
// overlap oracle, finite-window correction), the required input photon
// number, and the minimum propagation distance for space-like separation.

namespace hybell {

struct TimingBudget {
  // Event durations in seconds.
  double dt_at_m = 1e-6;  // atomic measurement
  double dt_at_c = 0.0;   // atomic basis choice
  double dt_ph_c = 0.0;   // photonic basis choice (fast electro-optics)
  // Bandwidth corresponding to the allowed pulse-measurement duration
  // (angular rad/s); the duration itself is 6*sqrt(2)/gamma_Lm.
  double gamma_Lm = two_pi * 1.35e6;

  void validate() const {
    if (!(dt_at_m >= 0.0 && dt_at_c >= 0.0 && dt_ph_c >= 0.0))
      throw domain_error("TimingBudget: times must be >= 0");
    if (!(gamma_Lm > 0.0)) throw domain_error("TimingBudget: gamma_Lm must be > 0");
  }
};

// Duration of the photonic measurement for a pulse of bandwidth gamma_L
// (rad/s): 6*sqrt(2)/gamma_L captures the Gaussian to ~1e-9 in intensity.
inline double photon_measurement_time(double gamma_L_rad_per_s) {
  if (!(gamma_L_rad_per_s > 0.0))
    throw domain_error("photon_measurement_time: gamma_L must be > 0");
  return 6.0 * sqrt2 / gamma_L_rad_per_s;
}

// Minimum propagation distance for space-like separation of the two
// measurement events: light must not connect either side's choice+measurement
// to the other station, so d = c * max(photonic span, atomic span).  The
// photonic measurement duration uses the slower of the actual pulse and the
// budgeted measurement bandwidth.
inline double min_distance(const TimingBudget& budget,
                           double gamma_L_rad_per_s) {
  budget.validate();
  const double g_eff = std::min(gamma_L_rad_per_s, budget.gamma_Lm);
  const double ph = budget.dt_ph_c + photon_measurement_time(g_eff);
  const double at = budget.dt_at_c + budget.dt_at_m;
  return c_m_per_s * std::max(ph, at);
}

// Display rounding: nearest 10 m.
inline double round_distance_10m(double d_m) {
  return 10.0 * std::round(d_m / 10.0);
}

// ---------------------------------------------------------------------------
// Benchmark-table pipeline.

struct RowRecord {
  std::string name;
  // All frequencies below as nu/2pi in MHz.
  double gamma01_MHz = 0.0;     // largest linewidth with max P_e = 0.1
  double gamma_eff_MHz = 0.0;   // working bandwidth min(kappa, gamma01, gamma_Lm)
  double alpha_in_sq = 0.0;     // input photons for the kept-mode target
  double V_closed = 0.0;        // closed-form visibility at the working pulse
  double V_overlap = 0.0;       // overlap-oracle visibility
  double capture_loss = 0.0;    // kept-mode energy outside the best window
  double truncation_factor = 1.0;  // exp(-capture_loss * at2 / 2)
  double V = 0.0;               // headline visibility: V_closed * factor
  double V_overlap_final = 0.0;
  double max_Pe = 0.0;          // at the working pulse
  double distance_raw_m = 0.0;  // from the working bandwidth
  double distance_m = 0.0;      // rounded to 10 m
};

inline RowRecord evaluate_row(const RowSpec& spec, const TimingBudget& budget) {
  spec.validate();
  budget.validate();
  const CavityParams cav = spec.cavity();
  const double at2 = spec.alpha_tilde_target_sq();
  const double gamma_Lm_us = budget.gamma_Lm * 1e-6;  // rad/s -> rad/us

  RowRecord rec;
  rec.name = spec.name;

  const double g01 = gamma_for_excitation(cav, 0.1, at2);
  rec.gamma01_MHz = angular_to_mhz(g01);

  const double g_eff = std::min({cav.kappa(), g01, gamma_Lm_us});
  rec.gamma_eff_MHz = angular_to_mhz(g_eff);

  rec.alpha_in_sq = required_input_photons(cav, g_eff, at2);
  PulseSpec pulse{cav.omega_c, g_eff, std::sqrt(rec.alpha_in_sq), {}};

  rec.V_closed = visibility_closed(cav, pulse);
  rec.V_overlap = visibility_overlap(cav, pulse);
  rec.max_Pe = max_excitation(cav, pulse).p;

  const double window_us = 6.0 * sqrt2 / gamma_Lm_us;
  rec.capture_loss = 1.0 - capture_fraction(cav, pulse, window_us).fraction;
  rec.truncation_factor = std::exp(-0.5 * rec.capture_loss * at2);
  rec.V = rec.V_closed * rec.truncation_factor;
  rec.V_overlap_final = rec.V_overlap * rec.truncation_factor;

  rec.distance_raw_m = min_distance(budget, g_eff * 1e6);
  rec.distance_m = round_distance_10m(rec.distance_raw_m);
  return rec;
}

inline std::vector<RowRecord> table2_pipeline(
    const std::vector<RowSpec>& rows, const TimingBudget& budget = {}) {
  return parallel_map(rows.size(), [&](std::size_t i) {
    return evaluate_row(rows[i], budget);
  });
}

// ---------------------------------------------------------------------------
// Excitation scan across coupling regimes: fixed atom (g, Gamma), varying
// cavity linewidth kappa = g / ratio with the lossless-asymmetric mirror
// split, kept-mode target held at alpha_target by re-deriving the input
// amplitude at every point.  Comparing two detuning ratios g/Delta probes the
// dispersive insensitivity of the maximum excitation.

struct PeScanPoint {
  double g_over_kappa = 0.0;
  double max_pe = 0.0;
  double alpha_in_sq = 0.0;
};

inline std::vector<PeScanPoint> pe_scan(const std::vector<double>& ratios,
                                        double gOverDelta,
                                        double g_MHz = 5.0,
                                        double Gamma_MHz = 3.0,
                                        double alpha_target = 2.1,
                                        double gamma_L_MHz = 1.35) {
  if (!(gOverDelta > 0.0)) throw domain_error("pe_scan: gOverDelta must be > 0");
  return parallel_map(ratios.size(), [&](std::size_t i) {
    const double ratio = ratios[i];
    if (!(ratio > 0.0)) throw domain_error("pe_scan: ratios must be > 0");
    RowSpec spec = row_detail::asym("scan", g_MHz, g_MHz / ratio, Gamma_MHz);
    spec.gOverDelta = gOverDelta;
    spec.alpha_target = alpha_target;
    const CavityParams cav = spec.cavity();
    const double gamma_L = mhz_to_angular(gamma_L_MHz);
    PeScanPoint pt;
    pt.g_over_kappa = ratio;
    pt.alpha_in_sq =
        required_input_photons(cav, gamma_L, spec.alpha_tilde_target_sq());
    PulseSpec pulse{cav.omega_c, gamma_L, std::sqrt(pt.alpha_in_sq), {}};
    pt.max_pe = max_excitation(cav, pulse).p;
    return pt;
  });
}

// ---------------------------------------------------------------------------
// End-to-end: cavity row -> produced state -> optimized CHSH value.

struct EndToEndResult {
  RowRecord production;
  OptResult chsh;  // optimized at the produced coherence with pinned alpha
};

inline EndToEndResult end_to_end(const RowSpec& spec, double eta, double T,
                                 const TimingBudget& budget = {},
                                 std::uint64_t seed = 12345) {
  EndToEndResult out;
  out.production = evaluate_row(spec, budget);
  OptimizationProblem prob;
  prob.eta = eta;
  prob.T = T;
  prob.coherence = out.production.V;
  prob.fixed_alpha = spec.alpha_target;
  prob.seed = seed;
  out.chsh = optimize_chsh(prob);
  return out;
}

}  // namespace hybell
