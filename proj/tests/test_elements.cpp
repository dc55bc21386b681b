#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "hybell/elements.hpp"
#include "hybell/rng.hpp"

using namespace hybell;
using Catch::Matchers::WithinAbs;

namespace {
complexd rand_c(splitmix64& rng, double r) {
  return {rng.uniform(-r, r), rng.uniform(-r, r)};
}
}  // namespace

TEST_CASE("coherent overlap basics", "[elements]") {
  CHECK_THAT(std::abs(coherent_overlap(0.0, 0.0)), WithinAbs(1.0, 1e-15));
  // |<b1|b2>| = exp(-|b1-b2|^2/2)
  splitmix64 rng(7);
  for (int i = 0; i < 50; ++i) {
    const complexd b1 = rand_c(rng, 2.0), b2 = rand_c(rng, 2.0);
    CHECK_THAT(std::abs(coherent_overlap(b1, b2)),
               WithinAbs(std::exp(-0.5 * std::norm(b1 - b2)), 1e-14));
    // Hermiticity
    const complexd d =
        coherent_overlap(b1, b2) - std::conj(coherent_overlap(b2, b1));
    CHECK_THAT(std::abs(d), WithinAbs(0.0, 1e-15));
  }
}

TEST_CASE("photodetection element closed form", "[elements]") {
  splitmix64 rng(11);
  for (int i = 0; i < 50; ++i) {
    const complexd b1 = rand_c(rng, 2.0), b2 = rand_c(rng, 2.0);
    const double eta = rng.uniform();
    // eta = 0: detector never fires, element reduces to the overlap
    const complexd at0 = photodetection_element(b1, b2, 0.0);
    CHECK_THAT(std::abs(at0 - coherent_overlap(b1, b2)), WithinAbs(0.0, 1e-14));
    // diagonal: 2 exp(-eta |b|^2) - 1
    const complexd diag = photodetection_element(b1, b1, eta);
    CHECK_THAT(diag.real(),
               WithinAbs(2.0 * std::exp(-eta * std::norm(b1)) - 1.0, 1e-14));
    CHECK_THAT(diag.imag(), WithinAbs(0.0, 1e-15));
    // Hermiticity
    const complexd d = photodetection_element(b1, b2, eta) -
                       std::conj(photodetection_element(b2, b1, eta));
    CHECK_THAT(std::abs(d), WithinAbs(0.0, 1e-14));
    // phase covariance: a common phase on both amplitudes drops out
    const complexd ph = std::polar(1.0, rng.uniform(0.0, two_pi));
    const complexd rot = photodetection_element(ph * b1, ph * b2, eta);
    CHECK_THAT(std::abs(rot - photodetection_element(b1, b2, eta)),
               WithinAbs(0.0, 1e-14));
  }
  CHECK_THROWS_AS(photodetection_element(1.0, 1.0, -0.1), domain_error);
  CHECK_THROWS_AS(photodetection_element(1.0, 1.0, 1.1), domain_error);
}

TEST_CASE("homodyne element frozen values", "[elements]") {
  // both-real pair (erf closed form)
  CHECK_THAT(homodyne_element(2.1, 0.0, 0.53).real(),
             WithinAbs(-0.0912336383639287789, 1e-13));
  // both-imaginary pair (oscillatory-cosine form); this is the value entering
  // the branch-coherence term of the CHSH combination at the lossless optimum
  CHECK_THAT(homodyne_element(complexd(0.0, 2.1), 0.0, 0.53).real(),
             WithinAbs(0.6115943186204569963, 1e-12));
}

TEST_CASE("homodyne element limits and symmetry", "[elements]") {
  splitmix64 rng(13);
  for (int i = 0; i < 40; ++i) {
    const complexd b1 = rand_c(rng, 2.0), b2 = rand_c(rng, 2.0);
    const double b = rng.uniform(0.1, 3.0);
    // Hermiticity across the general integration path
    const complexd d = homodyne_element(b1, b2, b) -
                       std::conj(homodyne_element(b2, b1, b));
    CHECK_THAT(std::abs(d), WithinAbs(0.0, 1e-12));
    // b = 0: the inner bin is empty, element = -overlap
    const complexd z = homodyne_element(b1, b2, 0.0) + coherent_overlap(b1, b2);
    CHECK_THAT(std::abs(z), WithinAbs(0.0, 1e-13));
    // huge bin: everything is inside, element -> +overlap
    const complexd w =
        homodyne_element(b1, b2, 25.0) - coherent_overlap(b1, b2);
    CHECK_THAT(std::abs(w), WithinAbs(0.0, 1e-12));
  }
}

TEST_CASE("homodyne diagonal closed form for complex amplitude", "[elements]") {
  splitmix64 rng(17);
  for (int i = 0; i < 40; ++i) {
    const complexd beta = rand_c(rng, 2.0);
    const double b = rng.uniform(0.1, 3.0);
    const double expect = std::erf(b - sqrt2 * beta.real()) +
                          std::erf(b + sqrt2 * beta.real()) - 1.0;
    const complexd got = homodyne_element(beta, beta, b);
    CHECK_THAT(got.real(), WithinAbs(expect, 1e-13));
    CHECK_THAT(got.imag(), WithinAbs(0.0, 1e-14));
  }
}

TEST_CASE("homodyne fast paths agree with the general integrator",
          "[elements]") {
  splitmix64 rng(19);
  for (int i = 0; i < 25; ++i) {
    const double x1 = rng.uniform(-2.0, 2.0), x2 = rng.uniform(-2.0, 2.0);
    const double b = rng.uniform(0.1, 3.0);
    // a vanishing imaginary perturbation forces the general complex path
    const complexd eps(0.0, 1e-18);
    const complexd real_fast = homodyne_element(x1, x2, b);
    const complexd real_gen = homodyne_element(x1 + eps, x2 - eps, b);
    CHECK_THAT(std::abs(real_fast - real_gen), WithinAbs(0.0, 1e-11));

    const complexd imag_fast =
        homodyne_element(complexd(0.0, x1), complexd(0.0, x2), b);
    const complexd imag_gen =
        homodyne_element(complexd(1e-18, x1), complexd(-1e-18, x2), b);
    CHECK_THAT(std::abs(imag_fast - imag_gen), WithinAbs(0.0, 1e-11));
  }
}
