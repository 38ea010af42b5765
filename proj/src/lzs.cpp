#include "ptqa/lzs.hpp"

#include "ptqa/errors.hpp"

#include <cmath>

namespace ptqa {

namespace {

void check_domain(const EffectiveModel& eff, double k) {
  if (!(k > 0.0)) throw DomainError("LZS formula requires k > 0");
  if (!(eff.g - eff.w > 0.0)) throw DomainError("LZS formula requires g - w > 0");
}

}  // namespace

double lzs_validity(const EffectiveModel& eff, double k, double s_tilde_f) {
  check_domain(eff, k);
  const double delta = eff.source_params.delta;
  return s_tilde_f * std::sqrt((eff.g - eff.w) / (k * delta));
}

LzsResult lzs_probability(const EffectiveModel& eff, double k) {
  check_domain(eff, k);
  const double delta = eff.source_params.delta;
  LzsResult r;
  r.exponent = 2.0 * M_PI * eff.ell * eff.ell / ((eff.g - eff.w) * k * delta);
  const double q = -std::expm1(-r.exponent);  // 1 - e^-X in [0, 1)
  r.p_ground = q / (1.0 + q);
  r.psi_down_sq = std::exp(r.exponent);
  r.psi_up_sq = std::expm1(r.exponent);
  r.validity = lzs_validity(eff, k, eff.s_tilde_end());
  return r;
}

}  // namespace ptqa
