#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "hybell/chsh.hpp"
#include "hybell/fock.hpp"
#include "hybell/rng.hpp"

using namespace hybell;
using Catch::Matchers::WithinAbs;

TEST_CASE("poisson tail sanity", "[fock]") {
  CHECK(poisson_tail(0.0, 5) == 0.0);
  // lambda = 4.41 (alpha = 2.1): direct partial sums
  const double lambda = 4.41;
  double cdf = 0.0, p = std::exp(-lambda);
  for (int k = 0; k <= 20; ++k) {
    cdf += p;
    p *= lambda / (k + 1);
  }
  CHECK_THAT(poisson_tail(lambda, 20), WithinAbs(1.0 - cdf, 1e-15));
  CHECK(poisson_tail(lambda, 40) < 1e-12);
  CHECK(required_n_max(2.1) <= 44);
  CHECK(poisson_tail(4.41, required_n_max(2.1)) < 1e-12);
  CHECK(poisson_tail(4.41, required_n_max(2.1) - 1) >= 1e-12);
}

TEST_CASE("embedded state is a unit-trace pure density matrix", "[fock]") {
  const HybridState s = ideal_state(0.77, 2.1);
  const FockState st = embed_state(s, 48);
  CHECK_THAT(state_trace(st), WithinAbs(1.0, 1e-12));
  CHECK_THAT(purity(st), WithinAbs(1.0, 1e-12));
  CHECK(min_eigenvalue(st) > -1e-12);

  // a damped off-diagonal block makes the state strictly mixed
  HybridState mixed = s;
  mixed.coherence = 0.6;
  const FockState stm = embed_state(mixed, 48);
  CHECK(purity(stm) < 1.0 - 1e-3);
  CHECK_THAT(state_trace(stm), WithinAbs(1.0, 1e-12));
  CHECK(min_eigenvalue(stm) > -1e-12);
}

TEST_CASE("embedding rejects insufficient truncation", "[fock]") {
  try {
    embed_state(ideal_state(0.77, 2.1), 8);
    FAIL("expected truncation_error");
  } catch (const truncation_error& e) {
    CHECK(e.required_n_max > 8);
    CHECK(e.required_n_max == required_n_max(2.1));
  }
}

TEST_CASE("photodetection operator diagonal", "[fock]") {
  const FockOperator b0 = build_B0(0.37, 12);
  for (int n = 0; n <= 12; ++n) {
    CHECK_THAT(b0.entries(n, n).real(),
               WithinAbs(2.0 * std::pow(1.0 - 0.37, n) - 1.0, 1e-14));
  }
  CHECK_THAT(b0.entries.cwiseAbs().sum(),
             WithinAbs(b0.entries.diagonal().cwiseAbs().sum(), 1e-14));
  CHECK_THROWS_AS(build_B0(1.2, 12), domain_error);
}

TEST_CASE("binned-quadrature operator structure", "[fock]") {
  // b = 0: empty bin, B1 = -I exactly
  const FockOperator zero = build_B1(0.0, 10);
  CHECK((zero.entries + cmat::Identity(11, 11)).cwiseAbs().maxCoeff() == 0.0);

  const FockOperator b1 = build_B1(0.53, 40);
  // Hermitian (real symmetric here)
  CHECK((b1.entries - b1.entries.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
  // compression of a +/-1-valued operator: spectrum stays inside [-1, 1]
  CHECK(spectral_excess(b1) < 1e-12);
  // matrix elements against the coherent-state closed form:
  // <alpha|B1|alpha'> = sum_mn conj(v_m) B1_mn v'_n
  const cvec va = coherent_vec(1.3, 40), vb = coherent_vec(-0.7, 40);
  const complexd fock_el = (va.adjoint() * b1.entries * vb)(0, 0);
  const complexd closed = homodyne_element(1.3, -0.7, 0.53);
  CHECK_THAT(std::abs(fock_el - closed), WithinAbs(0.0, 1e-10));
}

TEST_CASE("sign-operator truncation: spectrum exact, squares converge slowly",
          "[fock]") {
  // The squared operator only matches the identity through basis
  // completeness, and the sign flip at the bin edge makes that sum converge
  // algebraically (~n_max^{-1/2}); document the scale and the improvement
  // rather than pretending it is small.  The spectrum, by contrast, is
  // confined to [-1, 1] at machine precision for every basis size.
  const auto block_involution_error = [](const FockOperator& op, int keep) {
    const cmat dev =
        op.entries * op.entries - cmat::Identity(op.dim, op.dim);
    return dev.block(0, 0, keep, keep).cwiseAbs().maxCoeff();
  };
  const FockOperator small = build_B1(0.53, 40);
  const FockOperator large = build_B1(0.53, 64);
  CHECK(spectral_excess(large) < 1e-12);
  const double e_small = block_involution_error(small, 30);
  const double e_large = block_involution_error(large, 30);
  CHECK(e_small < 0.5);
  CHECK(e_large < e_small);
  // algebraic decay: the 64/40 size step should shave off roughly
  // (64/40)^{-1/2} ~ 0.79, certainly not the factor ~2 a geometric tail gives
  CHECK(e_large > 0.25 * e_small);
}

TEST_CASE("loss channel is trace preserving and matches the analytic map",
          "[fock]") {
  splitmix64 rng(43);
  for (int i = 0; i < 6; ++i) {
    HybridState s = ideal_state(rng.uniform(0.2, 1.3), rng.uniform(0.3, 2.0));
    s.coherence = rng.uniform(0.5, 1.0);
    const double tau = rng.uniform(0.3, 0.95);
    const FockState st = embed_state(s, 40);
    const FockState lost = loss_channel(st, tau);
    CHECK_THAT(state_trace(lost), WithinAbs(1.0, 1e-12));
    CHECK(min_eigenvalue(lost) > -1e-12);

    // analytic beam-splitter map embedded at the same truncation
    const FockState direct = embed_state(apply_loss(s, tau), 40);
    CHECK((lost.matrix - direct.matrix).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("loss channel semigroup in the number basis", "[fock]") {
  HybridState s = ideal_state(0.9, 1.7);
  s.coherence = 0.8;
  const FockState st = embed_state(s, 36);
  const FockState two = loss_channel(loss_channel(st, 0.8), 0.7);
  const FockState one = loss_channel(st, 0.56);
  CHECK((two.matrix - one.matrix).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("total loss leaves the field in vacuum", "[fock]") {
  HybridState s = ideal_state(0.8, 1.9);
  const FockState st = embed_state(s, 32);
  const FockState dead = loss_channel(st, 0.0);
  const int d = dead.dim;
  // all field population sits in |0> of each atom block
  const double vac_pop = dead.matrix(0, 0).real() + dead.matrix(d, d).real();
  CHECK_THAT(vac_pop, WithinAbs(1.0, 1e-12));
  CHECK_THAT(state_trace(dead), WithinAbs(1.0, 1e-12));
}

TEST_CASE("oracle agrees with the closed-form evaluator", "[fock]") {
  // the lossless optimum point
  {
    const HybridState s = ideal_state(0.77, 2.1);
    const MeasurementSettings m{0.55, 0.53, 1.0, 1.0};
    const double oracle = oracle_chsh(embed_state(s, 44), m);
    CHECK_THAT(oracle, WithinAbs(chsh_expectation(s, m), 1e-8));
    CHECK_THAT(oracle, WithinAbs(2.32400394870021172, 1e-8));
  }
  // random lossy draws with real amplitudes
  splitmix64 rng(47);
  for (int i = 0; i < 5; ++i) {
    HybridState s = ideal_state(rng.uniform(0.0, 1.5), rng.uniform(0.0, 2.2));
    s.alpha_s = rng.uniform(-0.5, 0.5);
    s.coherence = rng.uniform();
    const MeasurementSettings m{rng.uniform(0.0, 1.5), rng.uniform(0.1, 2.0),
                                rng.uniform(), rng.uniform(0.3, 1.0)};
    CHECK_THAT(oracle_chsh(embed_state(s, 44), m),
               WithinAbs(chsh_expectation(s, m), 1e-8));
  }
  // lossless draws with complex amplitudes
  for (int i = 0; i < 5; ++i) {
    HybridState s = ideal_state(
        rng.uniform(0.0, 1.5),
        complexd(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)));
    s.alpha_s = complexd(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5));
    s.coherence = rng.uniform();
    const MeasurementSettings m{rng.uniform(0.0, 1.5), rng.uniform(0.1, 2.0),
                                rng.uniform(), 1.0};
    CHECK_THAT(oracle_chsh(embed_state(s, 44), m),
               WithinAbs(chsh_expectation(s, m), 1e-8));
  }
}
