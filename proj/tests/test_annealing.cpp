#include "doctest.h"

#include "ptqa/annealing.hpp"
#include "ptqa/errors.hpp"
#include "ptqa/lzs.hpp"
#include "test_helpers.hpp"

#include <cmath>

using namespace ptqa;

TEST_CASE("Hermitian eigenbasis") {
  SUBCASE("s = 1, eps = 0.9: levels -g, -eps, eps, g") {
    const auto basis = hermitian_eigenbasis(ChainParams::two_qubit(0.9, 0.3), 1.0);
    REQUIRE(basis.size() == 4);
    CHECK(basis[0].energy == doctest::Approx(-1.0));
    CHECK(basis[1].energy == doctest::Approx(-0.9));
    CHECK(basis[2].energy == doctest::Approx(0.9));
    CHECK(basis[3].energy == doctest::Approx(1.0));
    // the ground state is the singlet (|ud> - |du>)/sqrt 2
    const Amplitudes v = basis[0].vector.amplitudes();
    CHECK(std::abs(v(1)) == doctest::Approx(std::sqrt(0.5)));
    CHECK(std::abs(v(1) + v(2)) < 1e-12);
  }
  SUBCASE("s = 1, eps = 0: the E = 0 pair is degenerate and fixed canonically") {
    const auto basis = hermitian_eigenbasis(ChainParams::two_qubit(0.0, 0.0), 1.0);
    const Amplitudes a = basis[1].vector.amplitudes();
    const Amplitudes b = basis[2].vector.amplitudes();
    CHECK(std::abs(a(0) - 1.0) < 1e-12);
    CHECK(std::abs(b(3) - 1.0) < 1e-12);
  }
  SUBCASE("orthonormal with real positive leading component") {
    ptqa::testing::ParamGenerator gen;
    for (int trial = 0; trial < 50; ++trial) {
      const auto p = gen.next();
      const auto basis = hermitian_eigenbasis(p, gen.unit());
      for (std::size_t i = 0; i < 4; ++i) {
        const Amplitudes& vi = basis[i].vector.amplitudes();
        // first component of (numerically) maximal magnitude
        const double top = vi.cwiseAbs().maxCoeff();
        Eigen::Index big = 0;
        while (std::abs(vi(big)) < top * (1.0 - 1e-8)) ++big;
        CHECK(std::abs(vi(big).imag()) < 1e-14);
        CHECK(vi(big).real() > 0);
        for (std::size_t j = 0; j < 4; ++j) {
          const Complex overlap = vi.dot(basis[j].vector.amplitudes());
          CHECK(std::abs(overlap - (i == j ? 1.0 : 0.0)) < 1e-12);
        }
        if (i > 0) CHECK(basis[i].energy >= basis[i - 1].energy);
      }
    }
  }
}

TEST_CASE("ground probability") {
  const std::vector<Complex> a{Complex(0.6, 0), Complex(0, 0.8), 0.0, 0.0};
  CHECK(ground_probability(a) == doctest::Approx(0.36));
  const std::vector<Complex> b{3.0, 0.0, 4.0, 0.0};
  CHECK(ground_probability(b) == doctest::Approx(9.0 / 25));
  CHECK_THROWS_AS(ground_probability(std::vector<Complex>(4, 0.0)), NumericalError);
}

TEST_CASE("projection conserves weight") {
  const auto p = ChainParams::two_qubit(0.9, 0.1);
  const auto r = run_qaa(p, 0.02);
  double total = 0;
  for (auto c : r.coefficients) total += std::norm(c);
  const double raw = r.final_state.raw_norm();
  CHECK(total == doctest::Approx(raw * raw).epsilon(1e-10));
}

TEST_CASE("frozen limit: fast sweep keeps the initial state") {
  const auto p = ChainParams::two_qubit(0.0, 0.1);
  const auto r = run_qaa(p, 1e3);
  const auto direct = project_final_state(p, 1e3, initial_ground_state(p));
  for (std::size_t i = 0; i < 4; ++i)
    CHECK(std::abs(r.coefficients[i] - direct.coefficients[i]) < 1e-3);
}

TEST_CASE("without gain and loss the singlet is unreachable") {
  for (double eps : {0.0, 0.9}) {
    for (double k : {1e-3, 1e-2}) {
      const auto r = run_qaa(ChainParams::two_qubit(eps, 0.0), k);
      CHECK(r.p_ground < 0.01);
    }
  }
}

TEST_CASE("gain and loss enables the ground state") {
  const auto r = run_qaa(ChainParams::two_qubit(0.0, 0.1), 1e-3);
  CHECK(r.p_ground > 0.4);
  CHECK(r.p_ground == doctest::Approx(0.5).epsilon(1e-2));
}

TEST_CASE("near-degenerate final levels are flagged") {
  const auto r = run_qaa(ChainParams::two_qubit(0.0, 0.1), 0.5);
  CHECK_FALSE(r.near_degenerate);
  const auto d = run_qaa(ChainParams::two_qubit(1.0, 0.1), 0.5);
  CHECK(d.near_degenerate);
}

TEST_CASE("full and effective models agree on the final ground probability") {
  // largest gap on this grid is 0.110 at gamma = 0.05, k = 0.01
  for (double gamma : {0.0, 0.02, 0.05, 0.1}) {
    for (double k : {1e-3, 3e-3, 1e-2, 2e-2}) {
      const auto p = ChainParams::two_qubit(0.0, gamma);
      const auto eff = effective_params(p);
      const std::vector<double> grid{eff.s_tilde_begin(), eff.s_tilde_end()};
      const double p_eff = evolve_driven(effective_model_path(eff), Schedule::linear(k),
                                         effective_initial_state(), grid)
                               .final()
                               .populations[0];
      const double p_full = run_qaa(p, k).p_ground;
      CHECK_MESSAGE(std::abs(p_full - p_eff) < 0.15, "gamma=" << gamma << " k=" << k);
    }
  }
}
