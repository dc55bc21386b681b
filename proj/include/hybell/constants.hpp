#pragma once

// Shared numeric constants and unit conventions.
//
// Internal units everywhere in this library:
//   angular frequency  rad/us   (omega = 2*pi * nu, nu in MHz)
//   time               us
//   distance           m
// User-facing rates are nu = omega/2pi in MHz; the conversion lives here and
// nowhere else.

namespace hybell {

inline constexpr double pi = 3.141592653589793238462643383279502884;
inline constexpr double two_pi = 2.0 * pi;
inline constexpr double sqrt2 = 1.414213562373095048801688724209698079;

// Speed of light in the two unit systems used by the feasibility module.
inline constexpr double c_m_per_us = 299.792458;
inline constexpr double c_m_per_s = 299792458.0;

constexpr double mhz_to_angular(double nu_mhz) noexcept { return two_pi * nu_mhz; }
constexpr double angular_to_mhz(double omega) noexcept { return omega / two_pi; }

}  // namespace hybell
