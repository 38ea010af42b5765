#pragma once

#include "ptqa/dynamics.hpp"
#include "ptqa/model.hpp"

#include <span>
#include <vector>

namespace ptqa {

struct Eigenpair {
  double energy = 0.0;
  StateVector vector;
};

/// Eigenpairs of the Hermitian part (gamma ignored) of H(s), ascending in energy,
/// orthonormal.  Degenerate levels are fixed by Gram-Schmidt over the canonical
/// basis vectors taken in index order; each vector's largest-magnitude component
/// is made real and positive.
std::vector<Eigenpair> hermitian_eigenbasis(const ChainParams& params, double s);

/// Levels closer than this at s = 1 are reported as near-degenerate.
inline constexpr double kNearDegenerateGap = 1e-6;

struct QaaResult {
  std::vector<Complex> coefficients;  ///< a_i = <psi_i(1), Psi(1)>
  double p_ground = 0.0;
  StateVector final_state;
  ChainParams params;
  double k = 0.0;
  bool near_degenerate = false;  ///< E_2 - E_1 < kNearDegenerateGap at s = 1
};

/// |a_1|^2 / sum |a_i|^2.  Throws NumericalError if the total weight vanished.
double ground_probability(std::span<const Complex> coefficients);
inline double ground_probability(const QaaResult& result) {
  return ground_probability(result.coefficients);
}

/// Expands a final state in the Hermitian eigenbasis at s = 1.
QaaResult project_final_state(const ChainParams& params, double k, const StateVector& final_state);

/// Prepare the s = 0 Hermitian ground state, integrate i k dPsi/ds = H(s)/delta Psi
/// over s in [0, 1] with the full non-Hermitian H(s), project onto the s = 1 basis.
QaaResult run_qaa(const ChainParams& params, double k, const OdeOptions& options = {});

}  // namespace ptqa
