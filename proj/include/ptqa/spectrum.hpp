#pragma once

#include "ptqa/model.hpp"

#include <array>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace ptqa {

/// PT phase of one spectrum.  broken_pairs == 0 means every eigenvalue is real.
struct Phase {
  int broken_pairs = 0;
  /// False when the spectrum is not closed under conjugation (non-PT input).
  bool conjugation_closed = true;

  bool all_real() const { return conjugation_closed && broken_pairs == 0; }
  friend bool operator==(const Phase&, const Phase&) = default;
};

/// 1e-9 * max(1, spectral radius): the real/complex cut for a spectrum.
double phase_tolerance(std::span<const Complex> eigs);

/// Throws NumericalError if the multiset is not closed under conjugation within tol.
Phase classify_phase(std::span<const Complex> eigs, double tol);

/// Coefficients of the two-qubit secular quartic, E^4 first.
std::array<double, 5> secular_coefficients(const ChainParams& params, double s);

/// |quartic(E)| for the two-qubit model.
double secular_residual(const ChainParams& params, double s, Complex energy);

struct SpectrumPoint {
  double s = 0.0;
  std::vector<Complex> eigenvalues;  ///< continuity-ordered after a sweep
  Phase phase;
};

struct SpectrumCurve {
  std::vector<SpectrumPoint> points;

  std::size_t branch_count() const {
    return points.empty() ? 0 : points.front().eigenvalues.size();
  }
  /// Values of one continuity-ordered branch across the grid.
  std::vector<Complex> branch(std::size_t index) const;
};

using OperatorPath = std::function<Operator(double)>;

/// Hungarian assignment: result[j] is the column assigned to row j, minimising
/// the summed cost.
std::vector<int> min_cost_assignment(const std::vector<std::vector<double>>& cost);

/// Reorders every point's eigenvalues so branch j continues branch j of the
/// previous point (nearest match to a linear extrapolation).  The first point is
/// sorted by real part, then imaginary part.  Throws AmbiguousMatchError when two
/// distinct histories cannot be told apart.
void order_branches(std::vector<SpectrumPoint>& points);

SpectrumCurve spectrum_sweep(const OperatorPath& path, std::span<const double> grid);
SpectrumCurve spectrum_sweep(const ChainParams& params, std::span<const double> s_grid);

/// Uniform grid helper: count >= 2 points from lo to hi inclusive.
std::vector<double> linspace(double lo, double hi, std::size_t count);

struct Crossing {
  double s_cr = 0.0;
  double e_cr = 0.0;
};

/// Intersection of the two lowest Hermitian levels.  Throws NoCrossingError
/// when |epsilon| >= |g|.
Crossing crossing_point(const ChainParams& params);

struct ExceptionalPoint {
  double s_ep = 0.0;
  Complex energy;
  /// Zero-based continuity-ordered branch indices that coalesce.
  std::pair<int, int> branch_pair{0, 0};
};

inline constexpr double kEpBracket = 1e-8;
inline constexpr double kEpOverlap = 0.999;

/// True if a and b are closer than the EP tolerance and their inverse-iteration
/// eigenvectors are parallel (overlap > kEpOverlap).
bool is_coalescence(const Operator& op, Complex a, Complex b);

/// Second-order EPs in [s_min, s_max]: phase boundaries on a scan grid refined
/// by bisection and kept only if they pass is_coalescence().
std::vector<ExceptionalPoint> find_exceptional_points(const ChainParams& params, double s_min,
                                                      double s_max,
                                                      std::size_t scan_points = 801);

}  // namespace ptqa
