#pragma once

#include <cmath>
#include <complex>

#include "hybell/constants.hpp"
#include "hybell/errors.hpp"
#include "hybell/quadrature.hpp"
#include "hybell/state.hpp"

// Coherent-state matrix elements of the two dichotomized field measurements.
//
//   B0 = 2 (1-eta)^n - 1         click / no-click photodetection, where the
//                                no-click POVM element of a detector of
//                                efficiency eta is (1-eta)^n
//   B1 = 2 int_{-b}^{b} |x><x| dx - 1   binned X-quadrature homodyning,
//                                X = (a + a^dag)/sqrt(2), vacuum variance 1/2
//
// Position wavefunction of |beta>:
//   psi_beta(x) = pi^{-1/4} exp(-x^2/2 + sqrt2 beta x - beta^2/2 - |beta|^2/2)

namespace hybell {

inline complexd coherent_overlap(complexd b1, complexd b2) {
  return std::exp(std::conj(b1) * b2 - 0.5 * (std::norm(b1) + std::norm(b2)));
}

// <b1| (2 (1-eta)^n - 1) |b2>, closed form from the displacement expansion of
// the no-click element in the number basis.
inline complexd photodetection_element(complexd b1, complexd b2, double eta) {
  if (!(eta >= 0.0 && eta <= 1.0))
    throw domain_error("photodetection_element: eta must lie in [0, 1]");
  const complexd cross = std::conj(b1) * b2;
  const double damp = -0.5 * (std::norm(b1) + std::norm(b2));
  return std::exp(damp) * (2.0 * std::exp((1.0 - eta) * cross) - std::exp(cross));
}

namespace element_detail {

// Both amplitudes real: the Gaussian integral collapses to error functions,
//   <b1|B1|b2> = <b1|b2> [ erf(b - s) + erf(b + s) - 1 ],  s = (b1+b2)/sqrt2.
inline double homodyne_real(double b1, double b2, double b) {
  const double s = (b1 + b2) / sqrt2;
  const double ovl = std::exp(-0.5 * (b1 - b2) * (b1 - b2));
  return ovl * (std::erf(b - s) + std::erf(b + s) - 1.0);
}

// Both amplitudes purely imaginary, b1 = i x, b2 = i y: the wavefunctions are
// vacuum Gaussians with linear phases, so the element is real,
//   <ix|B1|iy> = 2 pi^{-1/2} int_{-b}^{b} e^{-t^2} cos(sqrt2 (y-x) t) dt
//                - exp(-(x-y)^2/2).
// This is the hot path of the optimizer (real alpha viewed in the rotated
// quadrature frame), so it uses a cheap real-valued adaptive integral.
inline double homodyne_imag(double x, double y, double b) {
  const double d = sqrt2 * (y - x);
  const double integral = integrate(
      [d](double t) { return std::exp(-t * t) * std::cos(d * t); }, -b, b,
      1e-13, 1e-13, 20);
  return 2.0 / std::sqrt(pi) * integral - std::exp(-0.5 * (x - y) * (x - y));
}

// Equal amplitudes: the diagonal element depends only on Re(beta),
//   <beta|B1|beta> = erf(b - sqrt2 Re beta) + erf(b + sqrt2 Re beta) - 1.
inline double homodyne_diag(complexd beta, double b) {
  const double u = sqrt2 * beta.real();
  return std::erf(b - u) + std::erf(b + u) - 1.0;
}

}  // namespace element_detail

// <b1| (2 int_{-b}^{b}|x><x|dx - 1) |b2> for general complex amplitudes.
// Fast paths (both-real, both-imaginary, equal) agree with the general
// quadrature branch to ~1e-13 and are exercised against it in the tests.
inline complexd homodyne_element(complexd b1, complexd b2, double b) {
  if (!(b >= 0.0)) throw domain_error("homodyne_element: b must be >= 0");
  if (b1.imag() == 0.0 && b2.imag() == 0.0)
    return element_detail::homodyne_real(b1.real(), b2.real(), b);
  if (b1.real() == 0.0 && b2.real() == 0.0)
    return element_detail::homodyne_imag(b1.imag(), b2.imag(), b);
  if (b1 == b2) return element_detail::homodyne_diag(b1, b);

  const complexd pref =
      std::exp(-0.5 * (std::conj(b1) * std::conj(b1) + b2 * b2) -
               0.5 * (std::norm(b1) + std::norm(b2))) /
      std::sqrt(pi);
  const complexd lin = sqrt2 * (std::conj(b1) + b2);
  const complexd integral = integrate_c(
      [&](double x) { return std::exp(complexd(-x * x, 0.0) + lin * x); }, -b,
      b, 1e-13, 1e-13, 24);
  return 2.0 * pref * integral - coherent_overlap(b1, b2);
}

}  // namespace hybell
