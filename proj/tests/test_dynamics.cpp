#include "doctest.h"

#include "ptqa/dynamics.hpp"
#include "ptqa/effective.hpp"
#include "ptqa/eigensolver.hpp"
#include "ptqa/errors.hpp"
#include "ptqa/spectrum.hpp"
#include "test_helpers.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <random>

using namespace ptqa;
using ptqa::testing::max_abs;

namespace {

StateVector basis_state(Eigen::Index dim, Eigen::Index index) {
  Amplitudes a = Amplitudes::Zero(dim);
  a(index) = 1.0;
  return StateVector(a);
}

}  // namespace

TEST_CASE("matrix exponential against an independent implementation") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  for (int n : {1, 2, 4, 8}) {
    for (double scale : {1e-3, 0.3, 5.0, 40.0}) {
      Operator a(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = scale * Complex(normal(rng), normal(rng)) / double(n);
      const Operator ours = expm(a);
      const Operator oracle = a.exp();
      CHECK(max_abs(ours - oracle) <= 1e-11 * std::max(1.0, max_abs(oracle)));
    }
  }
}

TEST_CASE("propagator of the crossing-point effective Hamiltonian is closed form") {
  // exp(-i t [[0, i l], [i l, 0]]) = cosh(l t) I + sinh(l t) sigma_x
  const auto eff = effective_params(ChainParams::two_qubit(0.0, 0.1));
  const Operator h = effective_hamiltonian(eff, 0.0);
  for (double t : {0.0, 1.0, 10.0, 100.0}) {
    const Operator u = propagator(h, t);
    const double c = std::cosh(eff.ell * t), sh = std::sinh(eff.ell * t);
    Operator expect(2, 2);
    expect << c, sh, sh, c;
    CHECK(max_abs(u - expect) <= 1e-12 * std::max(1.0, c));
  }
}

TEST_CASE("populations") {
  Amplitudes a(2);
  a << Complex(3, 0), Complex(0, 4);
  const auto p = populations(StateVector(a));
  CHECK(p[0] == doctest::Approx(9.0 / 25));
  CHECK(p[1] == doctest::Approx(16.0 / 25));

  // scale exponent does not change populations
  const auto q = populations(StateVector(a, 900));
  CHECK(q[0] == doctest::Approx(9.0 / 25));

  CHECK_THROWS_AS(populations(StateVector(Amplitudes::Zero(2))), NumericalError);
}

TEST_CASE("static evolution saturates at one half at the crossing") {
  const auto eff = effective_params(ChainParams::two_qubit(0.0, 0.1));
  const Operator h = effective_hamiltonian(eff, 0.0);
  const auto grid = linspace(0.0, 400.0, 401);
  const auto traj = evolve_static(h, effective_initial_state(), grid);
  for (const auto& smp : traj.samples) {
    const double expect = 0.5 - 0.5 / std::cosh(2 * eff.ell * smp.x);
    CHECK(smp.populations[0] == doctest::Approx(expect).epsilon(1e-10).scale(1.0));
  }
  // amplitude grows like cosh(l t) without overflowing the representation
  const auto& last = traj.final();
  CHECK(last.state.log_raw_norm() ==
        doctest::Approx(std::log(std::sqrt(std::cosh(2 * eff.ell * 400.0)))).epsilon(1e-9));
}

TEST_CASE("Hermitian evolution conserves the norm") {
  const auto p = ChainParams::two_qubit(0.9, 0.0);
  const Operator h = build_hamiltonian(p, 0.37);
  const auto traj = evolve_static(h, initial_ground_state(p), linspace(0.0, 50.0, 101));
  for (const auto& smp : traj.samples) CHECK(std::abs(smp.raw_norm - 1.0) < 1e-12);
}

TEST_CASE("constant schedule matches exact propagation") {
  const auto p = ChainParams::two_qubit(0.5, 0.15);
  const double s0 = 0.45;
  const auto grid = linspace(0.0, 30.0, 61);
  const auto psi0 = initial_ground_state(p);
  const auto exact = evolve_static(build_hamiltonian(p, s0), psi0, grid);
  const auto ode = evolve_driven(full_model_path(p), Schedule::constant(s0), psi0, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Amplitudes a = exact.samples[i].state.physical_amplitudes();
    const Amplitudes b = ode.samples[i].state.physical_amplitudes();
    CHECK((a - b).norm() <= 1e-9 * a.norm());
  }
}

TEST_CASE("driven Hermitian evolution keeps unit norm") {
  const auto p = ChainParams::two_qubit(0.9, 0.0);
  const auto traj = evolve_driven(full_model_path(p), Schedule::linear(0.01),
                                  initial_ground_state(p), linspace(0.0, 1.0, 11));
  for (const auto& smp : traj.samples) CHECK(std::abs(smp.raw_norm - 1.0) < 1e-8);
}

TEST_CASE("driven result is stable under tighter tolerances") {
  const auto p = ChainParams::two_qubit(0.0, 0.1);
  const std::vector<double> ends{0.0, 1.0};
  OdeOptions tight;
  tight.rtol = 1e-12;
  tight.atol = 1e-14;
  OdeStats loose_stats, tight_stats;
  const auto a = evolve_driven(full_model_path(p), Schedule::linear(0.02), initial_ground_state(p),
                               ends, {}, &loose_stats);
  const auto b = evolve_driven(full_model_path(p), Schedule::linear(0.02), initial_ground_state(p),
                               ends, tight, &tight_stats);
  CHECK(tight_stats.accepted > loose_stats.accepted);
  for (std::size_t i = 0; i < 4; ++i)
    CHECK(std::abs(a.final().populations[i] - b.final().populations[i]) < 1e-6);
}

TEST_CASE("driven evolution rejects a bad grid") {
  const auto p = ChainParams::two_qubit(0.0, 0.1);
  const std::vector<double> backwards{0.5, 0.2};
  CHECK_THROWS_AS(evolve_driven(full_model_path(p), Schedule::linear(0.1),
                                initial_ground_state(p), backwards),
                  DomainError);
  CHECK_THROWS_AS(evolve_driven(full_model_path(p), Schedule::linear(0.0),
                                initial_ground_state(p), std::vector<double>{0.0, 1.0}),
                  DomainError);
}

TEST_CASE("dominant frequency of a synthetic signal") {
  std::vector<double> t, v;
  for (int i = 0; i < 2000; ++i) {
    t.push_back(0.05 * i);
    v.push_back(0.4 + 0.3 * std::cos(1.37 * t.back() + 0.2) + 0.05 * std::cos(4.1 * t.back()));
  }
  CHECK(dominant_angular_frequency(t, v) == doctest::Approx(1.37).epsilon(1e-2));
}

TEST_CASE("population oscillation frequency equals the real gap") {
  const auto eff = effective_params(ChainParams::two_qubit(0.0, 0.1));
  const double st = 0.15;
  const double omega = effective_gap(eff, st).omega;
  const auto grid = linspace(0.0, 600.0, 6001);
  const auto traj = evolve_static(effective_hamiltonian(eff, st), effective_initial_state(), grid);
  const auto pu = traj.population_series(0);
  CHECK(dominant_angular_frequency(grid, pu) == doctest::Approx(omega).epsilon(1e-2));
}

TEST_CASE("decay rate fit") {
  std::vector<double> t, v;
  for (int i = 0; i < 400; ++i) {
    t.push_back(0.1 * i);
    v.push_back(0.3 + 0.005 * std::exp(-0.7 * t.back()));
  }
  CHECK(fit_decay_rate(t, v, 0.3) == doctest::Approx(0.7).epsilon(1e-6));
  CHECK_THROWS_AS(fit_decay_rate(t, std::vector<double>(400, 0.3), 0.3), NumericalError);
}

TEST_CASE("relaxation rate in the broken phase equals the imaginary gap") {
  const auto eff = effective_params(ChainParams::two_qubit(0.0, 0.1));
  const double st = 0.02;
  const Operator h = effective_hamiltonian(eff, st);
  const double decay = effective_gap(eff, st).decay;
  REQUIRE(decay > 0);
  // the amplified eigenvector sets the asymptote
  const auto e = effective_eigenvalues(eff, st);
  const Complex grow = e[0].imag() > e[1].imag() ? e[0] : e[1];
  const Amplitudes v = eigenvector(h, grow);
  const double asymptote = std::norm(v(0)) / v.squaredNorm();
  const auto grid = linspace(0.0, 400.0, 4001);
  const auto traj = evolve_static(h, effective_initial_state(), grid);
  const double rate = fit_decay_rate(grid, traj.population_series(0), asymptote);
  CHECK(rate == doctest::Approx(decay).epsilon(5e-2));
}

TEST_CASE("effective model under a linear sweep") {
  auto run = [&](double gamma, double k) {
    const auto eff = effective_params(ChainParams::two_qubit(0.0, gamma));
    const std::vector<double> grid{eff.s_tilde_begin(), eff.s_tilde_end()};
    return evolve_driven(effective_model_path(eff), Schedule::linear(k), effective_initial_state(),
                         grid)
        .final()
        .populations;
  };
  CHECK(run(0.0, 0.01)[1] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(run(0.1, 0.001)[0] == doctest::Approx(0.5).epsilon(1e-3));
  const auto fast = run(0.1, 0.02);
  CHECK(fast[1] > fast[0]);
}

TEST_CASE("large amplification does not overflow") {
  const auto eff = effective_params(ChainParams::two_qubit(0.0, 0.1));
  const auto traj = evolve_static(effective_hamiltonian(eff, 0.0), effective_initial_state(),
                                  std::vector<double>{0.0, 1e4});
  CHECK(std::isfinite(traj.final().state.log_raw_norm()));
  CHECK(traj.final().populations[0] == doctest::Approx(0.5));
}
