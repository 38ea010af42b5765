#include "doctest.h"

#include "ptqa/errors.hpp"
#include "ptqa/lzs.hpp"

#include <cmath>

using namespace ptqa;

TEST_CASE("no gain and loss, no transfer") {
  const auto eff = effective_params(ChainParams::two_qubit(0.0, 0.0));
  for (double k : {1e-4, 1e-2, 1.0}) {
    const auto r = lzs_probability(eff, k);
    CHECK(r.p_ground == 0.0);
    CHECK(r.exponent == 0.0);
  }
}

TEST_CASE("golden exponent and validity") {
  const auto eff = effective_params(ChainParams::two_qubit(0.0, 0.1));
  const auto r = lzs_probability(eff, 1e-3);
  CHECK(r.exponent == doctest::Approx(18.945).epsilon(1e-4));
  CHECK(r.validity == doctest::Approx(27.95).epsilon(1e-3));
  CHECK(r.trusted());
  CHECK(r.p_ground == doctest::Approx(0.5).epsilon(1e-8));

  const auto fast = lzs_probability(eff, 1e-2);
  CHECK_FALSE(fast.trusted());
  CHECK(lzs_validity(eff, 1e-2, 1.0 - eff.s_cr) == doctest::Approx(fast.validity));
}

TEST_CASE("slow limit is one half and no intermediate overflows") {
  const auto eff = effective_params(ChainParams::two_qubit(0.0, 0.3));
  const auto r = lzs_probability(eff, 1e-8);
  CHECK(r.p_ground == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(std::isinf(r.psi_down_sq));
}

TEST_CASE("monotone in the sweep speed and bounded") {
  for (double eps : {0.0, 0.9}) {
    const auto eff = effective_params(ChainParams::two_qubit(eps, 0.1));
    double previous = 0.5;
    for (double k = 1e-4; k < 10.0; k *= 1.3) {
      const auto r = lzs_probability(eff, k);
      CHECK(r.p_ground >= 0.0);
      CHECK(r.p_ground <= 0.5);
      CHECK(r.p_ground <= previous + 1e-15);
      previous = r.p_ground;
    }
  }
}

TEST_CASE("amplitude decomposition") {
  const auto eff = effective_params(ChainParams::two_qubit(0.9, 0.1));
  for (double k : {1e-3, 1e-2, 0.1}) {
    const auto r = lzs_probability(eff, k);
    CHECK(r.psi_down_sq == doctest::Approx(std::exp(r.exponent)).epsilon(1e-14));
    const double p = r.psi_up_sq / (r.psi_up_sq + r.psi_down_sq);
    CHECK(std::abs(p - r.p_ground) < 1e-14);
  }
}

TEST_CASE("domain errors") {
  const auto eff = effective_params(ChainParams::two_qubit(0.0, 0.1));
  CHECK_THROWS_AS(lzs_probability(eff, 0.0), DomainError);
  CHECK_THROWS_AS(lzs_probability(eff, -1.0), DomainError);
  auto flipped = eff;
  flipped.w = eff.g + 0.5;
  CHECK_THROWS_AS(lzs_probability(flipped, 0.01), DomainError);
}
