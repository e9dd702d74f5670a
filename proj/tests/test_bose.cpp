#include <doctest.h>

#include <cmath>

#include "core/bose.hpp"
#include "core/errors.hpp"
#include "oracles.hpp"

using namespace ebgas;

TEST_CASE("polylog_half: pinned values") {
  CHECK(bose::polylog_half(0.0) == 0.0);
  // direct-series pins (30-digit series summation)
  CHECK(std::abs(bose::polylog_half(0.5) - 0.8061267230428522613248) < 1e-12);
  CHECK(std::abs(bose::polylog_half(0.1) - 0.1077033401655723633294) < 1e-12);
  CHECK(std::abs(bose::polylog_half(0.9) - 4.021950427473360684898) < 1e-11);
  CHECK(std::abs(bose::polylog_half(0.99) - 16.2218307534281113473) < 1e-10);
}

TEST_CASE("polylog_half: agrees with the 1e6-term direct summation") {
  for (double z : {0.1, 0.5, 0.9, 0.99}) {
    double ref = oracles::polylog_half_series(z, 1000000);
    CHECK(bose::polylog_half(z) == doctest::Approx(ref).epsilon(1e-9));
  }
  // near the cutoff the series needs more terms to settle
  double ref = oracles::polylog_half_series(0.9999, 3000000);
  CHECK(bose::polylog_half(0.9999) == doctest::Approx(ref).epsilon(1e-9));
}

TEST_CASE("polylog_half: monotone with positive derivative") {
  CHECK(bose::polylog_half(0.3) < bose::polylog_half(0.6));
  for (double z : {0.05, 0.3, 0.55, 0.8, 0.95}) {
    double h = 1e-6;
    double d = (bose::polylog_half(z + h) - bose::polylog_half(z - h)) / (2.0 * h);
    CHECK(d > 0.0);
  }
}

TEST_CASE("polylog_half: domain errors") {
  CHECK_THROWS_AS(bose::polylog_half(1.0), ValidationError);
  CHECK_THROWS_AS(bose::polylog_half(0.99995), ValidationError);
  CHECK_THROWS_AS(bose::polylog_half(-0.1), ValidationError);
  CHECK_THROWS_AS(bose::polylog_half(std::nan("")), ValidationError);
}

TEST_CASE("occupation") {
  ThermoState st{0.0, 2.0};
  // E - mu = T ln 2 -> occupation exactly 1
  CHECK(bose::occupation(2.0 * std::log(2.0), st) == doctest::Approx(1.0).epsilon(1e-14));
  // E - mu -> infinity -> 0
  CHECK(bose::occupation(100.0, st) < 2e-22);
  // unphysical ordering
  CHECK_THROWS_AS(bose::occupation(-0.5, st), ValidationError);
  CHECK_THROWS_AS(bose::occupation(0.0, st), ValidationError);

  // gap << T: the paper's ground-state estimate N0 ~ k_B T / (e0 - mu0)
  ThermoState st2{1.65, 2.75};
  double gap = 1e-3 * st2.temperature;
  double occ = bose::occupation(st2.mu0 + gap, st2);
  CHECK(occ == doctest::Approx(st2.temperature / gap).epsilon(1e-3));
}
