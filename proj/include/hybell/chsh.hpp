#pragma once

#include <array>
#include <cmath>
#include <complex>

#include "hybell/elements.hpp"
#include "hybell/state.hpp"

// CHSH expectation value for the two-branch atom-field state.
//
// Atomic observables (Pauli convention sigma_z = |s><s| - |g><g|,
// sigma_x = |s><g| + |g><s|; any other basis mapping is equivalent up to a
// re-parametrization of gamma and nu — fixed here so golden values are
// stable):
//
//   A_0 = cos(gamma) sigma_z + sin(gamma) sigma_x
//   A_1 = cos(gamma) sigma_z - sin(gamma) sigma_x
//
// Field observables: B0 (photodetection, efficiency eta) and B1 (binned
// X homodyning, half-width b).  The displacement produced upstream lies along
// the quadrature orthogonal to the measured X, so both branch amplitudes are
// rotated by i ("local-oscillator geometry") before evaluating field
// elements; B0 depends only on conj(b1)*b2 and |b|^2 and is unaffected.
//
// With Z_j = cos^2(nu) <B_j>_s - sin^2(nu) <B_j>_g and
// X_j = 2 coherence sin(nu)cos(nu) Re <alpha_g|B_j|alpha_s>, each correlator
// is E_ij = cos(gamma) Z_j + (-1)^i sin(gamma) X_j and the CHSH combination
// E00 + E01 + E10 - E11 collapses to 2 cos(gamma) Z_0 + 2 sin(gamma) X_1.

namespace hybell {

namespace chsh_detail {

struct field_elements {
  double z0, x0, z1, x1;
};

inline field_elements evaluate_field(const HybridState& s,
                                     const MeasurementSettings& m) {
  const complexd rot(0.0, 1.0);  // measure the orthogonal quadrature
  const complexd bs = rot * s.alpha_s;
  const complexd bg = rot * s.alpha_g;
  const double c2 = std::cos(s.nu) * std::cos(s.nu);
  const double s2 = std::sin(s.nu) * std::sin(s.nu);
  const double cross_w = 2.0 * s.coherence * std::sin(s.nu) * std::cos(s.nu);

  const double b0_ss = photodetection_element(bs, bs, m.eta).real();
  const double b0_gg = photodetection_element(bg, bg, m.eta).real();
  const double b0_gs = photodetection_element(bg, bs, m.eta).real();
  const double b1_ss = homodyne_element(bs, bs, m.b).real();
  const double b1_gg = homodyne_element(bg, bg, m.b).real();
  const double b1_gs = homodyne_element(bg, bs, m.b).real();

  return {c2 * b0_ss - s2 * b0_gg, cross_w * b0_gs,
          c2 * b1_ss - s2 * b1_gg, cross_w * b1_gs};
}

}  // namespace chsh_detail

// The four correlators <A_i B_j> after transmission loss T.
inline std::array<double, 4> chsh_correlators(const HybridState& state,
                                              const MeasurementSettings& m) {
  m.validate();
  const HybridState s = apply_loss(state, m.T);
  const auto fe = chsh_detail::evaluate_field(s, m);
  const double cg = std::cos(m.gamma);
  const double sg = std::sin(m.gamma);
  return {cg * fe.z0 + sg * fe.x0, cg * fe.z1 + sg * fe.x1,
          cg * fe.z0 - sg * fe.x0, cg * fe.z1 - sg * fe.x1};
}

// <B> = <A0 B0> + <A0 B1> + <A1 B0> - <A1 B1> = 2 cos(g) Z0 + 2 sin(g) X1.
inline double chsh_expectation(const HybridState& state,
                               const MeasurementSettings& m) {
  m.validate();
  const HybridState s = apply_loss(state, m.T);

  // Only Z0 and X1 survive the CHSH combination; evaluate just those.
  const complexd rot(0.0, 1.0);
  const complexd bs = rot * s.alpha_s;
  const complexd bg = rot * s.alpha_g;
  const double c2 = std::cos(s.nu) * std::cos(s.nu);
  const double s2 = std::sin(s.nu) * std::sin(s.nu);

  const double z0 = c2 * photodetection_element(bs, bs, m.eta).real() -
                    s2 * photodetection_element(bg, bg, m.eta).real();
  const double x1 = 2.0 * s.coherence * std::sin(s.nu) * std::cos(s.nu) *
                    homodyne_element(bg, bs, m.b).real();

  return 2.0 * std::cos(m.gamma) * z0 + 2.0 * std::sin(m.gamma) * x1;
}

// Mean photon number of the field part.
inline double mean_photons(const HybridState& s) {
  const double c2 = std::cos(s.nu) * std::cos(s.nu);
  const double s2 = std::sin(s.nu) * std::sin(s.nu);
  return c2 * std::norm(s.alpha_s) + s2 * std::norm(s.alpha_g);
}

}  // namespace hybell
