#pragma once

#include <cmath>
#include <complex>

#include "hybell/errors.hpp"

// The two-branch atom-field state and the measurement settings of the hybrid
// Bell test.
//
// The state is
//
//   rho ~ cos(nu)^2 |s,alpha_s><s,alpha_s| + sin(nu)^2 |g,alpha_g><g,alpha_g|
//         + coherence * cos(nu)sin(nu) ( |s,alpha_s><g,alpha_g| + h.c. )
//
// i.e. a coherent superposition cos(nu)|s,alpha_s> + sin(nu)|g,alpha_g> whose
// off-diagonal atom-field block is damped by a real factor in [0,1] (the
// production visibility times any accumulated loss decoherence).  The ideal
// case is alpha_s = 0, coherence = 1.

namespace hybell {

using complexd = std::complex<double>;

struct HybridState {
  double nu = 0.0;             // atomic mixing angle (rad)
  complexd alpha_s = 0.0;      // field amplitude of the |s> branch
  complexd alpha_g = 0.0;      // field amplitude of the |g> branch
  double coherence = 1.0;      // off-diagonal damping factor in [0, 1]

  void validate() const {
    if (!(coherence >= 0.0 && coherence <= 1.0))
      throw domain_error("HybridState: coherence must lie in [0, 1]");
    if (!std::isfinite(nu) || !std::isfinite(alpha_s.real()) ||
        !std::isfinite(alpha_s.imag()) || !std::isfinite(alpha_g.real()) ||
        !std::isfinite(alpha_g.imag()))
      throw domain_error("HybridState: non-finite field");
  }
};

// The ideal production target: vacuum in the |s> branch, full coherence.
inline HybridState ideal_state(double nu, complexd alpha) {
  return HybridState{nu, 0.0, alpha, 1.0};
}

struct MeasurementSettings {
  double gamma = 0.0;  // atomic rotation angle (rad)
  double b = 0.0;      // homodyne bin half-width, X = (a + a^dag)/sqrt(2) units
  double eta = 1.0;    // photodetector intrinsic efficiency in [0, 1]
  double T = 1.0;      // line power transmittance |t_line|^2 in [0, 1]

  void validate() const {
    if (!(eta >= 0.0 && eta <= 1.0))
      throw domain_error("MeasurementSettings: eta must lie in [0, 1]");
    if (!(T >= 0.0 && T <= 1.0))
      throw domain_error("MeasurementSettings: T must lie in [0, 1]");
    if (!(b >= 0.0))
      throw domain_error("MeasurementSettings: bin half-width b must be >= 0");
    if (!std::isfinite(gamma))
      throw domain_error("MeasurementSettings: non-finite gamma");
  }
};

// Pure-loss channel acting on the travelling field: a beam splitter of power
// transmittance tau.  Amplitudes scale by sqrt(tau); tracing out the
// reflected (environment) mode damps the branch coherence by the overlap of
// the two environment states, exp(-(1-tau)|alpha_g - alpha_s|^2 / 2).
inline HybridState apply_loss(const HybridState& state, double tau) {
  state.validate();
  if (!(tau >= 0.0 && tau <= 1.0))
    throw domain_error("apply_loss: transmittance tau must lie in [0, 1]");
  const double rt = std::sqrt(tau);
  HybridState out = state;
  out.alpha_s *= rt;
  out.alpha_g *= rt;
  out.coherence *= std::exp(-0.5 * (1.0 - tau) * std::norm(state.alpha_g - state.alpha_s));
  return out;
}

}  // namespace hybell
