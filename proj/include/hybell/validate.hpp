#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "hybell/chsh.hpp"
#include "hybell/constants.hpp"
#include "hybell/errors.hpp"
#include "hybell/fock.hpp"
#include "hybell/format.hpp"
#include "hybell/rng.hpp"
#include "hybell/state.hpp"

// Cross-validation of the analytic CHSH machinery against the truncated-Fock
// oracle, plus structural checks of the loss channel (trace preservation,
// positivity, semigroup property) and the quantum/classical bounds.  Used by
// the `validate` subcommand and runnable as a library call.

namespace hybell {

struct CheckResult {
  std::string name;
  bool pass = false;
  double worst = 0.0;  // worst observed deviation / extremal value
  std::string detail;  // offending parameters or summary
};

struct ValidationReport {
  std::vector<CheckResult> checks;
  bool all_pass() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const CheckResult& c) { return c.pass; });
  }
};

namespace validate_detail {

struct Draw {
  HybridState state;  // pre-loss state (transmission applied separately)
  MeasurementSettings settings;
};

// Random physical draw.  Amplitudes are kept real whenever T < 1: the
// analytic loss rule tracks only the magnitude of the branch coherence, and
// the dropped environment phase exp(i(1-tau) Im(conj(alpha_g) alpha_s)) is
// zero exactly when the amplitudes are real (or when T = 1).
inline Draw random_draw(splitmix64& rng, double alpha_max) {
  Draw d;
  d.state.nu = rng.uniform(0.0, 0.5 * pi);
  const double a_s = rng.uniform(0.0, alpha_max);
  d.state.coherence = rng.uniform();
  d.settings.gamma = rng.uniform(0.0, 0.5 * pi);
  d.settings.b = rng.uniform(0.1, 3.0);
  d.settings.eta = rng.uniform(0.0, 1.0);
  d.settings.T = rng.uniform(0.25, 1.0);
  const bool lossless = rng.uniform() < 0.25;
  if (lossless) d.settings.T = 1.0;
  if (d.settings.T == 1.0) {
    const double phs = rng.uniform(0.0, two_pi);
    const double phg = rng.uniform(0.0, two_pi);
    d.state.alpha_s = std::polar(a_s, phs);
    d.state.alpha_g = std::polar(rng.uniform(0.0, alpha_max), phg);
  } else {
    d.state.alpha_s = a_s;
    d.state.alpha_g = rng.uniform(0.0, alpha_max);
  }
  return d;
}

}  // namespace validate_detail

inline ValidationReport validation_suite(std::uint64_t seed, int draws,
                                         int n_max) {
  using validate_detail::Draw;
  using validate_detail::random_draw;
  ValidationReport rep;
  splitmix64 rng(seed);
  const double alpha_max = 2.4;

  CheckResult agree{"oracle-agreement", false, 0.0, ""};
  CheckResult tsirelson{"tsirelson-bound", false, -8.0, ""};
  CheckResult classical{"classical-bound-coherence0", false, -8.0, ""};
  CheckResult semigroup{"loss-semigroup", false, 0.0, ""};
  CheckResult cptp{"loss-cptp", false, 0.0, ""};
  CheckResult contraction{"measurement-contraction", false, 0.0, ""};
  CheckResult embedding{"state-embedding", false, 0.0, ""};

  // Embedding feasibility first: everything Fock-based depends on it.
  try {
    HybridState probe = ideal_state(0.77, alpha_max);
    embed_state(probe, n_max);
    embedding.pass = true;
    embedding.detail = "n_max=" + std::to_string(n_max);
  } catch (const truncation_error& e) {
    embedding.worst = static_cast<double>(e.required_n_max);
    embedding.detail = std::string(e.what());
  }

  for (int k = 0; k < draws; ++k) {
    Draw d = random_draw(rng, alpha_max);

    // chsh_expectation applies the transmission loss internally
    const double analytic = chsh_expectation(d.state, d.settings);

    if (embedding.pass) {
      const FockState emb = embed_state(d.state, n_max);
      const double oracle = oracle_chsh(emb, d.settings);
      const double dev = std::abs(analytic - oracle);
      if (dev > agree.worst) {
        agree.worst = dev;
        agree.detail = "nu=" + std::to_string(d.state.nu) +
                       " |a_s|=" + std::to_string(std::abs(d.state.alpha_s)) +
                       " |a_g|=" + std::to_string(std::abs(d.state.alpha_g)) +
                       " T=" + std::to_string(d.settings.T);
      }
    }

    if (analytic > tsirelson.worst) tsirelson.worst = analytic;

    HybridState incoherent = d.state;
    incoherent.coherence = 0.0;
    const double cls = chsh_expectation(incoherent, d.settings);
    if (cls > classical.worst) classical.worst = cls;

    // analytic semigroup: two-step loss equals one-step product loss
    const double t1 = rng.uniform(0.3, 1.0), t2 = rng.uniform(0.3, 1.0);
    HybridState base = d.state;
    base.alpha_s = std::abs(base.alpha_s);
    base.alpha_g = std::abs(base.alpha_g);
    const HybridState two = apply_loss(apply_loss(base, t1), t2);
    const HybridState one = apply_loss(base, t1 * t2);
    const double sdev =
        std::max({std::abs(two.alpha_s - one.alpha_s),
                  std::abs(two.alpha_g - one.alpha_g),
                  std::abs(two.coherence - one.coherence)});
    semigroup.worst = std::max(semigroup.worst, sdev);
  }

  agree.pass = embedding.pass && agree.worst <= 1e-8;
  if (!embedding.pass) agree.detail = "not run (embedding failed)";
  tsirelson.pass = tsirelson.worst <= 2.0 * sqrt2 + 1e-9;
  tsirelson.detail = "max value " + format_sci(tsirelson.worst);
  classical.pass = classical.worst <= 2.0 + 1e-9;
  classical.detail = "max value " + format_sci(classical.worst);
  semigroup.pass = semigroup.worst <= 1e-12;
  semigroup.detail = "max deviation " + format_sci(semigroup.worst);

  // Density-matrix loss channel: CPTP + semigroup on a fixed embedded state.
  if (embedding.pass) {
    HybridState st = ideal_state(0.77, 2.1);
    st.coherence = 0.9;
    const auto rho = embed_state(st, n_max);
    splitmix64 r2(seed ^ 0x5eedULL);
    double worst_tp = 0.0, worst_pos = 0.0, worst_sg = 0.0;
    for (int i = 0; i < 3; ++i) {
      const double t1 = r2.uniform(0.2, 1.0), t2 = r2.uniform(0.2, 1.0);
      const auto r_a = loss_channel(loss_channel(rho, t1), t2);
      const auto r_b = loss_channel(rho, t1 * t2);
      worst_sg =
          std::max(worst_sg, (r_a.matrix - r_b.matrix).cwiseAbs().maxCoeff());
      worst_tp = std::max(worst_tp, std::abs(state_trace(r_b) - 1.0));
      worst_pos = std::max(worst_pos, std::max(0.0, -min_eigenvalue(r_b)));
    }
    cptp.worst = std::max({worst_tp, worst_pos, worst_sg});
    cptp.pass = worst_tp <= 1e-10 && worst_pos <= 1e-10 && worst_sg <= 1e-10;
    cptp.detail = "trace dev " + format_sci(worst_tp) + ", negativity " +
                  format_sci(worst_pos) + ", semigroup dev " +
                  format_sci(worst_sg);

    // Binary-outcome operators are contractions; compression to the
    // truncated basis must keep the spectrum inside [-1, 1] exactly.
    const double ex_b1 = spectral_excess(build_B1(0.53, n_max));
    const double ex_b0 = spectral_excess(build_B0(0.7, n_max));
    contraction.worst = std::max(ex_b1, ex_b0);
    contraction.pass = contraction.worst <= 1e-10;
    contraction.detail = "spectral excess B1 " + format_sci(ex_b1) + ", B0 " +
                         format_sci(ex_b0);
  } else {
    cptp.detail = "not run (embedding failed)";
    contraction.detail = "not run (embedding failed)";
  }

  rep.checks = {agree,     tsirelson,   classical, semigroup,
                cptp,      contraction, embedding};
  return rep;
}

}  // namespace hybell
