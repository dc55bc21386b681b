#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

#include "hybell/errors.hpp"

// Numerical integration on finite intervals.
//
// Two schemes are provided:
//   * adaptive Gauss-Kronrod 7/15 bisection for smooth integrands with a
//     requested absolute/relative tolerance (real- or complex-valued);
//   * fixed composite 16-point Gauss-Legendre grids, used where a
//     deterministic, reusable set of nodes is preferable to adaptivity
//     (operator matrix elements, Fourier-type sums evaluated at many shifts).

namespace hybell {

namespace quad_detail {

// Kronrod-15 abscissae (positive half) and weights; the embedded Gauss-7 rule
// uses the odd-index nodes.
inline constexpr double xgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.000000000000000};
inline constexpr double wgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
inline constexpr double wg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};

template <class T>
double abs_of(const T& v) {
  return std::abs(v);
}

// One Gauss-Kronrod 7/15 evaluation on [a, b]: returns the K15 value and the
// |K15 - G7| error estimate.
template <class T, class F>
std::pair<T, double> gk15(F&& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  T resk = T{};
  T resg = T{};
  for (int j = 0; j < 8; ++j) {
    if (j == 7) {
      const T fc = f(c);
      resk += wgk[7] * h * fc;
      resg += wg[3] * h * fc;
      break;
    }
    const T f1 = f(c - h * xgk[j]);
    const T f2 = f(c + h * xgk[j]);
    resk += wgk[j] * h * (f1 + f2);
    if (j % 2 == 1) resg += wg[j / 2] * h * (f1 + f2);
  }
  return {resk, abs_of(resk - resg)};
}

template <class T, class F>
T adapt(F&& f, double a, double b, double tol, int depth, int max_depth) {
  auto [k, err] = gk15<T>(f, a, b);
  if (err <= tol || depth >= max_depth) return k;
  const double c = 0.5 * (a + b);
  return adapt<T>(f, a, c, 0.5 * tol, depth + 1, max_depth) +
         adapt<T>(f, c, b, 0.5 * tol, depth + 1, max_depth);
}

}  // namespace quad_detail

// Adaptive integral of f over [a, b].  The tolerance actually enforced is
// max(abs_tol, rel_tol * |first-pass estimate|), then halved per bisection.
template <class T, class F>
T integrate_gk(F&& f, double a, double b, double abs_tol = 1e-12,
               double rel_tol = 1e-12, int max_depth = 28) {
  if (!(a <= b)) throw domain_error("integrate_gk: interval with a > b");
  if (a == b) return T{};
  auto [k0, err0] = quad_detail::gk15<T>(f, a, b);
  const double tol = std::max(abs_tol, rel_tol * quad_detail::abs_of(k0));
  if (err0 <= tol) return k0;
  const double c = 0.5 * (a + b);
  return quad_detail::adapt<T>(f, a, c, 0.5 * tol, 1, max_depth) +
         quad_detail::adapt<T>(f, c, b, 0.5 * tol, 1, max_depth);
}

template <class F>
double integrate(F&& f, double a, double b, double abs_tol = 1e-12,
                 double rel_tol = 1e-12, int max_depth = 28) {
  return integrate_gk<double>(std::forward<F>(f), a, b, abs_tol, rel_tol,
                              max_depth);
}

template <class F>
std::complex<double> integrate_c(F&& f, double a, double b,
                                 double abs_tol = 1e-12, double rel_tol = 1e-12,
                                 int max_depth = 28) {
  return integrate_gk<std::complex<double>>(std::forward<F>(f), a, b, abs_tol,
                                            rel_tol, max_depth);
}

// ---------------------------------------------------------------------------
// Fixed composite Gauss-Legendre grid (16-point rule per panel).

struct quad_node {
  double x;
  double w;
};

namespace quad_detail {

inline constexpr double xgl16[8] = {
    0.095012509837637440185, 0.281603550779258913230, 0.458016777657227386342,
    0.617876244402643748447, 0.755404408355003033895, 0.865631202387831743880,
    0.944575023073232576078, 0.989400934991649932596};
inline constexpr double wgl16[8] = {
    0.189450610455068496285, 0.182603415044923588867, 0.169156519395002538189,
    0.149595988816576732081, 0.124628971255533872052, 0.095158511682492784810,
    0.062253523938647892863, 0.027152459411754094852};

}  // namespace quad_detail

// Nodes and weights integrating over [a, b] with `panels` equal panels.
// Ordered left to right; sum(w_i f(x_i)) approximates the integral.
inline std::vector<quad_node> gl_composite(double a, double b, int panels) {
  if (!(b > a) || panels < 1)
    throw domain_error("gl_composite: need b > a and panels >= 1");
  std::vector<quad_node> nodes;
  nodes.reserve(static_cast<std::size_t>(panels) * 16);
  const double width = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double c = a + (p + 0.5) * width;
    const double h = 0.5 * width;
    // fill in ascending x order within the panel
    for (int j = 7; j >= 0; --j)
      nodes.push_back({c - h * quad_detail::xgl16[j], h * quad_detail::wgl16[j]});
    for (int j = 0; j < 8; ++j)
      nodes.push_back({c + h * quad_detail::xgl16[j], h * quad_detail::wgl16[j]});
  }
  return nodes;
}

}  // namespace hybell
