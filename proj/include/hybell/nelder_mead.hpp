#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

// Derivative-free simplex minimizer (Nelder-Mead with the standard
// reflection/expansion/contraction/shrink coefficients 1, 2, 1/2, 1/2).
// Deterministic given the start point; no randomness inside.

namespace hybell {

struct nm_result {
  std::vector<double> x;
  double f = 0.0;
  int iterations = 0;
  bool converged = false;
};

template <class F>
nm_result nelder_mead(F&& f, const std::vector<double>& x0, double step = 0.3,
                      double f_tol = 1e-10, double x_tol = 1e-9,
                      int max_iter = 2000) {
  const std::size_t d = x0.size();
  std::vector<std::vector<double>> pts(d + 1, x0);
  for (std::size_t i = 0; i < d; ++i) pts[i + 1][i] += step;
  std::vector<double> fv(d + 1);
  for (std::size_t i = 0; i <= d; ++i) fv[i] = f(pts[i]);

  std::vector<std::size_t> order(d + 1);
  nm_result res;
  for (res.iterations = 0; res.iterations < max_iter; ++res.iterations) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
    const std::size_t best = order[0], worst = order[d], second = order[d - 1];

    double spread = std::abs(fv[worst] - fv[best]);
    double size = 0.0;
    for (std::size_t i = 0; i < d; ++i)
      size = std::max(size, std::abs(pts[worst][i] - pts[best][i]));
    if (spread < f_tol && size < x_tol) {
      res.converged = true;
      break;
    }

    std::vector<double> centroid(d, 0.0);
    for (std::size_t k = 0; k <= d; ++k) {
      if (k == worst) continue;
      for (std::size_t i = 0; i < d; ++i) centroid[i] += pts[k][i];
    }
    for (double& c : centroid) c /= static_cast<double>(d);

    auto blend = [&](double t) {
      std::vector<double> p(d);
      for (std::size_t i = 0; i < d; ++i)
        p[i] = centroid[i] + t * (centroid[i] - pts[worst][i]);
      return p;
    };

    auto xr = blend(1.0);
    const double fr = f(xr);
    if (fr < fv[best]) {
      auto xe = blend(2.0);
      const double fe = f(xe);
      if (fe < fr) {
        pts[worst] = std::move(xe);
        fv[worst] = fe;
      } else {
        pts[worst] = std::move(xr);
        fv[worst] = fr;
      }
    } else if (fr < fv[second]) {
      pts[worst] = std::move(xr);
      fv[worst] = fr;
    } else {
      const bool outside = fr < fv[worst];
      auto xc = blend(outside ? 0.5 : -0.5);
      const double fc = f(xc);
      if (fc < (outside ? fr : fv[worst])) {
        pts[worst] = std::move(xc);
        fv[worst] = fc;
      } else {
        // shrink toward the best vertex
        for (std::size_t k = 0; k <= d; ++k) {
          if (k == best) continue;
          for (std::size_t i = 0; i < d; ++i)
            pts[k][i] = pts[best][i] + 0.5 * (pts[k][i] - pts[best][i]);
          fv[k] = f(pts[k]);
        }
      }
    }
  }

  const std::size_t ib = static_cast<std::size_t>(
      std::min_element(fv.begin(), fv.end()) - fv.begin());
  res.x = pts[ib];
  res.f = fv[ib];
  return res;
}

}  // namespace hybell
