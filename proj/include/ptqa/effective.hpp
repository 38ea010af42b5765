#pragma once

#include "ptqa/model.hpp"

#include <array>

namespace ptqa {

/// Two-level reduction of the two-qubit model around the crossing of its two
/// lowest levels.  s_tilde = s - s_cr and energies are measured from e_cr.
struct EffectiveModel {
  double s_cr = 0.0;
  double e_cr = 0.0;
  double g = 1.0;    ///< slope of the exchange-antisymmetric branch (-g s_tilde)
  double w = 0.0;    ///< slope of the second branch (-w s_tilde)
  double ell = 0.0;  ///< off-diagonal gain/loss coupling, 2 gamma s_cr sqrt(g^2 - eps^2)
  ChainParams source_params;

  double s_tilde_begin() const { return -s_cr; }
  double s_tilde_end() const { return 1.0 - s_cr; }
};

/// Closed-form slope w as a function of the crossing point and bias.
double crossing_slope_w(double s_cr, double g, double epsilon, double delta);

/// Throws NoCrossingError when |epsilon| >= |g| and DomainError unless gamma < delta.
EffectiveModel effective_params(const ChainParams& params);

/// [[-g s~, i ell], [i ell, -w s~]] in the sigma_x basis (|up>, |down>).
Operator effective_hamiltonian(const EffectiveModel& eff, double s_tilde);

/// Roots of (E + g s~)(E + w s~) + ell^2 = 0, lower real part first.
std::array<Complex, 2> effective_eigenvalues(const EffectiveModel& eff, double s_tilde);

struct Gap {
  double omega = 0.0;  ///< |Re(E1 - E2)|
  double decay = 0.0;  ///< |Im(E1 - E2)|
};

Gap effective_gap(const EffectiveModel& eff, double s_tilde);

/// Half-width of the PT-broken window, |s~| < 2 ell / |g - w|.
double effective_ep_offset(const EffectiveModel& eff);

}  // namespace ptqa
