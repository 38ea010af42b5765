#pragma once

#include "ptqa/effective.hpp"
#include "ptqa/model.hpp"

#include <span>
#include <vector>

namespace ptqa {

// ---------------------------------------------------------------------------
// Matrix exponential
// ---------------------------------------------------------------------------

/// exp(A) by scaling and squaring with a diagonal [6/6] Pade approximant.
Operator expm(const Operator& a);

inline constexpr double kExpmTolerance = 1e-11;

/// exp(-i H t), checked by comparing exp(-iHt/2)^2 against exp(-iHt).
/// Throws NumericalError if the two disagree beyond kExpmTolerance (relative).
Operator propagator(const Operator& h, double t);

// ---------------------------------------------------------------------------
// Trajectories
// ---------------------------------------------------------------------------

struct Sample {
  double x = 0.0;  ///< time (static / constant schedule) or s, s~ (linear schedule)
  StateVector state;
  double raw_norm = 0.0;
  std::vector<double> populations;
};

struct Trajectory {
  std::vector<Sample> samples;

  const Sample& final() const { return samples.back(); }
  /// Population of basis state `index` across all samples.
  std::vector<double> population_series(std::size_t index) const;
  std::vector<double> abscissae() const;
};

/// |psi_i|^2 / sum_j |psi_j|^2.  Throws NumericalError if the norm vanished.
std::vector<double> populations(const StateVector& state);

/// Psi(t) = exp(-i H t) Psi(0) on an increasing grid starting at t >= 0.
/// H is in units of delta with hbar = 1.
Trajectory evolve_static(const Operator& h, const StateVector& psi0,
                         std::span<const double> t_grid);

/// H(x) = base + x * slope: both model Hamiltonians are affine in their control
/// parameter.  energy_unit is delta.
struct AffinePath {
  Operator base;
  Operator slope;
  double energy_unit = 1.0;

  Operator at(double x) const { return base + x * slope; }
};

AffinePath full_model_path(const ChainParams& params);
/// Parameterised by s~ = s - s_cr.
AffinePath effective_model_path(const EffectiveModel& eff);

struct Schedule {
  enum class Kind { Constant, Linear };
  Kind kind = Kind::Linear;
  double s0 = 0.0;  ///< frozen control value (Constant)
  double k = 1.0;   ///< speed hbar/(delta T) (Linear)

  static Schedule constant(double s0) { return {Kind::Constant, s0, 0.0}; }
  static Schedule linear(double k) { return {Kind::Linear, 0.0, k}; }
};

struct OdeOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  std::size_t max_steps = 100'000'000;
};

struct OdeStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
};

/// Adaptive Dormand-Prince 5(4) integration of
///   Linear:   i k dPsi/dx = H(x)/delta Psi   over the grid of control values x
///   Constant: i   dPsi/dt = H(s0)/delta Psi  over the grid of times t
/// Samples are taken at every grid value by dense output; the raw norm is never
/// renormalised.  Throws NumericalError on step-size underflow.
Trajectory evolve_driven(const AffinePath& path, const Schedule& schedule,
                         const StateVector& psi0, std::span<const double> grid,
                         const OdeOptions& options = {}, OdeStats* stats = nullptr);

/// Basis state |down> = (0, 1) of the effective two-level model.
StateVector effective_initial_state();

// ---------------------------------------------------------------------------
// Signal analysis
// ---------------------------------------------------------------------------

/// Angular frequency of the dominant peak of the Hann-windowed discrete Fourier
/// transform of a uniformly sampled, mean-subtracted signal.
double dominant_angular_frequency(std::span<const double> t, std::span<const double> values);

/// Least-squares rate r of |v - asymptote| ~ exp(-r t), using only samples with
/// lo < |v - asymptote| < hi.
double fit_decay_rate(std::span<const double> t, std::span<const double> values,
                      double asymptote, double lo = 1e-10, double hi = 1e-2);

}  // namespace ptqa
