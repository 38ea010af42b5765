#include "ptqa/spectrum.hpp"

#include "ptqa/eigensolver.hpp"
#include "ptqa/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace ptqa {

namespace {

constexpr double kPhaseTol = 1e-9;
// Swapping two branches must cost more than this fraction of their squared
// separation for the match to count as decided.  A perfect prediction gives 2.
constexpr double kMatchTol = 1e-3;
// Values closer than this (relative to scale) are treated as the same level.
constexpr double kSameLevelTol = 1e-7;
constexpr double kEpEnergyTol = 1e-3;

double spectral_scale(std::span<const Complex> eigs) {
  double r = 1.0;
  for (const auto& e : eigs) r = std::max(r, std::abs(e));
  return r;
}

bool level_less(Complex a, Complex b, double tol) {
  if (std::abs(a.real() - b.real()) > tol) return a.real() < b.real();
  return a.imag() < b.imag();
}

void sort_levels(std::vector<Complex>& values) {
  const double tol = kPhaseTol * spectral_scale(values);
  // insertion sort: the comparator is tolerance-based, so avoid std::sort
  for (std::size_t i = 1; i < values.size(); ++i) {
    for (std::size_t j = i; j > 0 && level_less(values[j], values[j - 1], tol); --j) {
      std::swap(values[j], values[j - 1]);
    }
  }
}

Phase safe_phase(std::span<const Complex> eigs) {
  try {
    return classify_phase(eigs, phase_tolerance(eigs));
  } catch (const NumericalError&) {
    return Phase{0, false};
  }
}

}  // namespace

double phase_tolerance(std::span<const Complex> eigs) {
  return kPhaseTol * spectral_scale(eigs);
}

Phase classify_phase(std::span<const Complex> eigs, double tol) {
  const std::size_t n = eigs.size();
  std::vector<bool> used(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    if (used[i]) continue;
    if (std::abs(eigs[i].imag()) < tol) {
      used[i] = true;
      continue;
    }
    std::size_t best = n;
    double best_dist = tol;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i || used[j]) continue;
      const double d = std::abs(eigs[j] - std::conj(eigs[i]));
      if (d < best_dist) {
        best_dist = d;
        best = j;
      }
    }
    if (best == n) {
      std::ostringstream os;
      os.precision(17);
      os << "classify_phase: eigenvalue " << eigs[i] << " has no conjugate partner within "
         << tol;
      throw NumericalError(os.str());
    }
    used[i] = used[best] = true;
  }
  int pairs = 0;
  for (const auto& e : eigs) {
    if (e.imag() >= tol) ++pairs;
  }
  return Phase{pairs, true};
}

std::array<double, 5> secular_coefficients(const ChainParams& params, double s) {
  if (params.n_qubits != 2) throw DomainError("secular equation is defined for two qubits");
  const double d2 = params.delta * params.delta;
  const double g = params.g();
  const double eps = params.epsilon;
  const double gam = params.gamma;
  const double s2 = s * s;
  return {
      1.0,
      0.0,
      4.0 * gam * gam - d2 - g * g * s2 - d2 * s2 - s2 * eps * eps + 2.0 * d2 * s,
      -d2 * g * s2 * s + 2.0 * d2 * g * s2 - d2 * g * s,
      -4.0 * gam * gam * s2 * eps * eps + g * g * s2 * s2 * eps * eps,
  };
}

double secular_residual(const ChainParams& params, double s, Complex energy) {
  const auto c = secular_coefficients(params, s);
  Complex p = 0.0;
  for (double x : c) p = p * energy + x;
  return std::abs(p);
}

std::vector<Complex> SpectrumCurve::branch(std::size_t index) const {
  std::vector<Complex> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(p.eigenvalues.at(index));
  return out;
}

std::vector<int> min_cost_assignment(const std::vector<std::vector<double>>& cost) {
  const int n = static_cast<int>(cost.size());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> assignment(n, -1);
  for (int j = 1; j <= n; ++j) assignment[p[j] - 1] = j - 1;
  return assignment;
}

void order_branches(std::vector<SpectrumPoint>& points) {
  if (points.empty()) return;
  sort_levels(points.front().eigenvalues);
  const std::size_t n = points.front().eigenvalues.size();

  for (std::size_t m = 1; m < points.size(); ++m) {
    const auto& prev = points[m - 1].eigenvalues;
    auto& next = points[m].eigenvalues;
    if (next.size() != n) throw DomainError("order_branches: dimension changes along the grid");

    std::vector<Complex> predicted = prev;
    if (m >= 2) {
      const double h0 = points[m - 1].s - points[m - 2].s;
      const double h1 = points[m].s - points[m - 1].s;
      const double ratio = h0 != 0.0 ? h1 / h0 : 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        predicted[j] = prev[j] + (prev[j] - points[m - 2].eigenvalues[j]) * ratio;
      }
    }
    std::vector<std::vector<double>> cost(n, std::vector<double>(n));
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < n; ++i) cost[j][i] = std::norm(predicted[j] - next[i]);
    }
    const auto col = min_cost_assignment(cost);
    std::vector<Complex> ordered(n);
    for (std::size_t j = 0; j < n; ++j) ordered[j] = next[col[j]];

    const double scale = std::max(spectral_scale(prev), spectral_scale(next));
    const double same = kSameLevelTol * scale;
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) {
        const double swap_penalty = cost[j][col[k]] + cost[k][col[j]] - cost[j][col[j]] -
                                    cost[k][col[k]];
        const Complex a = ordered[j];
        const Complex b = ordered[k];
        if (swap_penalty > kMatchTol * std::norm(a - b)) continue;
        if (std::abs(a - b) < same) continue;
        const bool degenerate_before = std::abs(prev[j] - prev[k]) < same;
        const bool conjugate_before = std::abs(prev[j] - std::conj(prev[k])) < same;
        const bool conjugate_after = std::abs(a - std::conj(b)) < same;
        if (degenerate_before || conjugate_before || conjugate_after) {
          // symmetric tie: lower branch takes the smaller level
          if (level_less(b, a, kPhaseTol * scale)) std::swap(ordered[j], ordered[k]);
          continue;
        }
        std::ostringstream os;
        os << "order_branches: ambiguous match of branches " << j << " and " << k
           << " at grid value " << points[m].s << "; refine the grid";
        throw AmbiguousMatchError(os.str(), points[m].s);
      }
    }
    next = std::move(ordered);
  }
}

SpectrumCurve spectrum_sweep(const OperatorPath& path, std::span<const double> grid) {
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw DomainError("spectrum_sweep: grid must be strictly increasing");
  }
  SpectrumCurve curve;
  curve.points.reserve(grid.size());
  for (double s : grid) {
    SpectrumPoint p;
    p.s = s;
    p.eigenvalues = eigenvalues(path(s));
    curve.points.push_back(std::move(p));
  }
  order_branches(curve.points);
  for (auto& p : curve.points) p.phase = safe_phase(p.eigenvalues);
  return curve;
}

SpectrumCurve spectrum_sweep(const ChainParams& params, std::span<const double> s_grid) {
  params.validate();
  return spectrum_sweep([&params](double s) { return build_hamiltonian(params, s); }, s_grid);
}

std::vector<double> linspace(double lo, double hi, std::size_t count) {
  if (count < 2) throw DomainError("linspace: need at least two points");
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  out.back() = hi;
  return out;
}

Crossing crossing_point(const ChainParams& params) {
  const double g = params.g();
  const double eps = params.epsilon;
  if (!(std::abs(eps) < std::abs(g))) {
    throw NoCrossingError("no crossing of the two lowest levels: |epsilon| >= |g|");
  }
  const double delta = params.delta;
  const double root = delta * std::sqrt(g * g - eps * eps);
  // (sqrt2*root - delta^2) / (2(g^2 - eps^2) - delta^2), with the common factor
  // (sqrt2*root - delta^2) cancelled so the point 2(g^2-eps^2) = delta^2 is regular.
  const double s_cr = delta * delta / (delta * delta + std::sqrt(2.0) * root);
  return {s_cr, -g * s_cr};
}

bool is_coalescence(const Operator& op, Complex a, Complex b) {
  const double scale = std::max(1.0, op.cwiseAbs().maxCoeff());
  if (std::abs(a - b) >= kEpEnergyTol * scale) return false;
  const Amplitudes va = eigenvector(op, a, 1);
  const Amplitudes vb = eigenvector(op, b, 2);
  const double overlap = std::abs(va.dot(vb)) / (va.norm() * vb.norm());
  return overlap > kEpOverlap;
}

std::vector<ExceptionalPoint> find_exceptional_points(const ChainParams& params, double s_min,
                                                      double s_max, std::size_t scan_points) {
  params.validate();
  if (params.gamma == 0.0) return {};
  if (!(s_max > s_min)) throw DomainError("find_exceptional_points: empty range");

  const auto grid = linspace(s_min, s_max, scan_points);
  const auto curve = spectrum_sweep(params, grid);
  auto phase_at = [&params](double s) { return safe_phase(eigenvalues(build_hamiltonian(params, s))); };

  std::vector<ExceptionalPoint> found;
  for (std::size_t m = 0; m + 1 < curve.points.size(); ++m) {
    const Phase left_phase = curve.points[m].phase;
    const Phase right_phase = curve.points[m + 1].phase;
    if (left_phase == right_phase) continue;

    double lo = curve.points[m].s;
    double hi = curve.points[m + 1].s;
    while (hi - lo > kEpBracket) {
      const double mid = 0.5 * (lo + hi);
      if (phase_at(mid) == left_phase) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    const double s_ep = 0.5 * (lo + hi);
    const Operator h = build_hamiltonian(params, s_ep);
    const auto eigs = eigenvalues(h);

    std::size_t ia = 0, ib = 1;
    double closest = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < eigs.size(); ++i) {
      for (std::size_t j = i + 1; j < eigs.size(); ++j) {
        const double d = std::abs(eigs[i] - eigs[j]);
        if (d < closest) {
          closest = d;
          ia = i;
          ib = j;
        }
      }
    }
    if (!is_coalescence(h, eigs[ia], eigs[ib])) continue;
    const Complex energy = 0.5 * (eigs[ia] + eigs[ib]);

    // Branches that are complex on the broken side of the bracket.
    const bool right_broken = right_phase.broken_pairs > left_phase.broken_pairs;
    const auto& broken_side = curve.points[right_broken ? m + 1 : m];
    const double tol = phase_tolerance(broken_side.eigenvalues);
    std::vector<std::pair<double, int>> candidates;
    for (std::size_t j = 0; j < broken_side.eigenvalues.size(); ++j) {
      const Complex e = broken_side.eigenvalues[j];
      if (std::abs(e.imag()) >= tol) candidates.emplace_back(std::abs(e - energy), static_cast<int>(j));
    }
    std::sort(candidates.begin(), candidates.end());
    std::pair<int, int> branches{0, 0};
    if (candidates.size() >= 2) {
      branches = {std::min(candidates[0].second, candidates[1].second),
                  std::max(candidates[0].second, candidates[1].second)};
    }
    found.push_back({s_ep, energy, branches});
  }
  return found;
}

}  // namespace ptqa
