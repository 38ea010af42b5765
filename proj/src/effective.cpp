#include "ptqa/effective.hpp"

#include "ptqa/errors.hpp"
#include "ptqa/spectrum.hpp"

#include <cmath>

namespace ptqa {

double crossing_slope_w(double s_cr, double g, double epsilon, double delta) {
  const double d2 = delta * delta;
  const double e2 = epsilon * epsilon;
  const double s2 = s_cr * s_cr;
  const double numerator = g * s_cr * (2.0 * d2 * (s_cr - 1.0) - g * g * s_cr + 5.0 * s_cr * e2);
  const double inner = -5.0 * g * g * s2 + s2 * e2 + d2 * (s_cr - 1.0) * (s_cr - 1.0);
  const double tail = -d2 + 5.0 * g * g * s2 - d2 * s2 - s2 * e2 + 2.0 * d2 * s_cr;
  return numerator / (inner * inner) * tail;
}

EffectiveModel effective_params(const ChainParams& params) {
  params.validate();
  if (params.n_qubits != 2) throw DomainError("effective model is defined for two qubits");
  if (!(params.gamma < params.delta)) {
    throw DomainError("effective model assumes weak gain/loss, gamma < delta");
  }
  const auto crossing = crossing_point(params);
  EffectiveModel eff;
  eff.s_cr = crossing.s_cr;
  eff.e_cr = crossing.e_cr;
  eff.g = params.g();
  eff.w = crossing_slope_w(eff.s_cr, eff.g, params.epsilon, params.delta);
  eff.ell = 2.0 * params.gamma * eff.s_cr *
            std::sqrt(eff.g * eff.g - params.epsilon * params.epsilon);
  eff.source_params = params;
  return eff;
}

Operator effective_hamiltonian(const EffectiveModel& eff, double s_tilde) {
  Operator h(2, 2);
  h << -eff.g * s_tilde, kI * eff.ell,
       kI * eff.ell, -eff.w * s_tilde;
  return h;
}

std::array<Complex, 2> effective_eigenvalues(const EffectiveModel& eff, double s_tilde) {
  // E = -(g+w)s/2 +- sqrt(((g-w)s/2)^2 - ell^2)
  const double mean = -0.5 * (eff.g + eff.w) * s_tilde;
  const double half = 0.5 * (eff.g - eff.w) * s_tilde;
  const double disc = half * half - eff.ell * eff.ell;
  if (disc >= 0.0) {
    const double r = std::sqrt(disc);
    return {Complex{mean - r, 0.0}, Complex{mean + r, 0.0}};
  }
  const double r = std::sqrt(-disc);
  return {Complex{mean, -r}, Complex{mean, r}};
}

Gap effective_gap(const EffectiveModel& eff, double s_tilde) {
  const auto e = effective_eigenvalues(eff, s_tilde);
  const Complex diff = e[0] - e[1];
  return {std::abs(diff.real()), std::abs(diff.imag())};
}

double effective_ep_offset(const EffectiveModel& eff) {
  return 2.0 * eff.ell / std::abs(eff.g - eff.w);
}

}  // namespace ptqa
