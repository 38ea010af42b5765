#pragma once

#include "ptqa/effective.hpp"

namespace ptqa {

/// Operational cut for the asymptotic condition s~_f sqrt((g-w)/(k delta)) >> 1.
inline constexpr double kLzsValidityThreshold = 10.0;

struct LzsResult {
  double p_ground = 0.0;     ///< probability of the Hermitian ground state |up> at the end
  double exponent = 0.0;     ///< X = 2 pi ell^2 / ((g-w) k delta)
  double psi_down_sq = 1.0;  ///< |psi_down|^2 = e^X (inf once X > ~709)
  double psi_up_sq = 0.0;    ///< |psi_up|^2 = e^X - 1
  double validity = 0.0;     ///< s~_f sqrt((g-w)/(k delta))

  bool trusted() const { return validity >= kLzsValidityThreshold; }
};

/// s~_f sqrt((g - w)/(k delta)).  Throws DomainError unless k > 0 and g > w.
double lzs_validity(const EffectiveModel& eff, double k, double s_tilde_f);

/// Closed-form non-Hermitian Landau-Zener-Stueckelberg ground-state probability
/// P = (e^X - 1)/(2 e^X - 1), evaluated as q/(1+q) with q = 1 - e^-X so that
/// no intermediate overflows.  validity uses s~_f = 1 - s_cr.
LzsResult lzs_probability(const EffectiveModel& eff, double k);

}  // namespace ptqa
