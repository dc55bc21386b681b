#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "hybell/optimize.hpp"

using namespace hybell;
using Catch::Matchers::WithinAbs;

TEST_CASE("lossless optimum is recovered", "[optimizer]") {
  OptimizationProblem p;  // eta = T = coherence = 1
  const OptResult r = optimize_chsh(p);
  CHECK(r.value > 2.0);
  // the free optimum can only improve on the frozen benchmark point, whose
  // parameters are rounded to two decimals; it stays within ~1e-4 of it
  CHECK(r.value >= 2.32400394870021172 - 1e-9);
  CHECK_THAT(r.value, WithinAbs(2.32400394870021172, 1e-3));
  // the optimizer's own report must match a fresh evaluation at its point
  const HybridState s = ideal_state(r.nu, r.alpha);
  const MeasurementSettings m{r.gamma, r.b, p.eta, p.T};
  CHECK(r.value == chsh_expectation(s, m));
}

TEST_CASE("optimization is deterministic for a fixed seed", "[optimizer]") {
  OptimizationProblem p;
  p.eta = 0.8;
  p.T = 0.85;
  p.n_starts = 24;
  const OptResult a = optimize_chsh(p);
  const OptResult b = optimize_chsh(p);
  CHECK(a.value == b.value);
  CHECK(a.alpha == b.alpha);
  CHECK(a.nu == b.nu);
  CHECK(a.gamma == b.gamma);
  CHECK(a.b == b.b);
}

TEST_CASE("different seeds land on the same optimum", "[optimizer]") {
  OptimizationProblem p;
  p.eta = 0.9;
  p.T = 0.9;
  p.seed = 1;
  const OptResult a = optimize_chsh(p);
  p.seed = 2;
  const OptResult b = optimize_chsh(p);
  CHECK_THAT(a.value, WithinAbs(b.value, 1e-4));
}

TEST_CASE("pinned parameters are honored", "[optimizer]") {
  OptimizationProblem p;
  p.fixed_alpha = 2.1;
  p.fixed_b = 0.53;
  p.n_starts = 24;
  const OptResult r = optimize_chsh(p);
  CHECK(r.alpha == 2.1);
  CHECK(r.b == 0.53);
  CHECK(r.value > 2.3);

  // everything pinned: the "optimum" is just an evaluation
  OptimizationProblem q;
  q.fixed_alpha = 2.1;
  q.fixed_nu = 0.77;
  q.fixed_gamma = 0.55;
  q.fixed_b = 0.53;
  const OptResult e = optimize_chsh(q);
  CHECK_THAT(e.value, WithinAbs(2.32400394870021172, 1e-12));
  CHECK(e.converged);
}

TEST_CASE("domain errors", "[optimizer]") {
  OptimizationProblem p;
  p.eta = 1.2;
  CHECK_THROWS_AS(optimize_chsh(p), domain_error);
  p.eta = 1.0;
  p.T = -0.1;
  CHECK_THROWS_AS(optimize_chsh(p), domain_error);
  p.T = 1.0;
  p.coherence = 1.5;
  CHECK_THROWS_AS(optimize_chsh(p), domain_error);
  p.coherence = 1.0;
  p.n_starts = 0;
  CHECK_THROWS_AS(optimize_chsh(p), domain_error);
}

TEST_CASE("optimized value is monotone in eta and T", "[optimizer]") {
  // On a coarse grid the optimized value never decreases when either channel
  // improves (up to optimizer noise).
  const double grid[5] = {0.6, 0.7, 0.8, 0.9, 1.0};
  double v[5][5];
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) {
      OptimizationProblem p;
      p.eta = grid[i];
      p.T = grid[j];
      p.n_starts = 16;
      v[i][j] = optimize_chsh(p).value;
    }
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) {
      if (i + 1 < 5) CHECK(v[i + 1][j] >= v[i][j] - 1e-6);
      if (j + 1 < 5) CHECK(v[i][j + 1] >= v[i][j] - 1e-6);
    }
}

TEST_CASE("critical transmittance at unit efficiency", "[optimizer]") {
  OptimizationProblem base;
  const CriticalResult c = critical_transmission(base, 1.0);
  CHECK(c.found);
  CHECK_THAT(c.T_star, WithinAbs(0.5386, 2e-3));
  // at the threshold the optimized value sits at the local bound
  CHECK_THAT(c.at_T.value, WithinAbs(2.0, 5e-3));
}

TEST_CASE("no violation reachable at very low efficiency", "[optimizer]") {
  OptimizationProblem base;
  base.n_starts = 24;
  const CriticalResult c = critical_transmission(base, 0.05);
  CHECK_FALSE(c.found);
  CHECK(c.T_star == 1.0);
  CHECK(c.at_T.value <= 2.0 + 1e-7);
}

TEST_CASE("reduced-coherence pinned-alpha optimum", "[optimizer]") {
  OptimizationProblem p;
  p.coherence = 0.727;
  p.fixed_alpha = 2.1;
  const OptResult r = optimize_chsh(p);
  CHECK_THAT(r.value, WithinAbs(2.16724652624070566, 1e-4));
}

TEST_CASE("reference trade-off line", "[optimizer]") {
  const EberhardRef a = eberhard_reference(1.0);
  CHECK(a.T == 2.0 / 3.0);
  CHECK(a.reachable);
  const EberhardRef b = eberhard_reference(2.0 / 3.0);
  CHECK_THAT(b.T, WithinAbs(1.0, 1e-15));
  CHECK(b.reachable);
  const EberhardRef c = eberhard_reference(0.5);
  CHECK(c.T == 2.0 / (3.0 * 0.5));
  CHECK_FALSE(c.reachable);
  CHECK_THROWS_AS(eberhard_reference(0.0), domain_error);
  CHECK_THROWS_AS(eberhard_reference(1.2), domain_error);
}

TEST_CASE("contour rejects unreachable levels", "[optimizer]") {
  OptimizationProblem base;
  CHECK_THROWS_AS(contour(2.0, {1.0}, base), domain_error);
  CHECK_THROWS_AS(contour(2.9, {1.0}, base), domain_error);
}

TEST_CASE("violation predicate", "[optimizer]") {
  CHECK_FALSE(is_violation(2.0));
  CHECK_FALSE(is_violation(2.0 + 1e-8));
  CHECK(is_violation(2.001));
}
