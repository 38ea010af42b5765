#include "ptqa/annealing.hpp"

#include "ptqa/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace ptqa {

namespace {

constexpr double kDegenerateTol = 1e-9;

void fix_phase(Amplitudes& v) {
  Eigen::Index best = 0;
  double best_mag = -1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    // first index wins among (numerically) equal magnitudes
    if (std::abs(v(i)) > best_mag * (1.0 + 1e-9) + 1e-15) {
      best_mag = std::abs(v(i));
      best = i;
    }
  }
  if (best_mag > 0.0) v *= std::conj(v(best)) / best_mag;
}

// Deterministic orthonormal basis of span(block) built from projected unit vectors.
Eigen::MatrixXcd canonical_basis(const Eigen::MatrixXcd& block) {
  const Eigen::Index n = block.rows();
  const Eigen::Index m = block.cols();
  const Eigen::MatrixXcd projector = block * block.adjoint();
  Eigen::MatrixXcd out(n, m);
  Eigen::Index filled = 0;
  for (Eigen::Index c = 0; c < n && filled < m; ++c) {
    Amplitudes v = projector.col(c);
    for (Eigen::Index j = 0; j < filled; ++j) v -= out.col(j).dot(v) * out.col(j);
    const double norm = v.norm();
    if (norm > 1e-8) out.col(filled++) = v / norm;
  }
  return out;
}

}  // namespace

std::vector<Eigenpair> hermitian_eigenbasis(const ChainParams& params, double s) {
  ChainParams hermitian = params;
  hermitian.gamma = 0.0;
  const Operator h = build_hamiltonian(hermitian, s);
  Eigen::SelfAdjointEigenSolver<Operator> solver(h);
  if (solver.info() != Eigen::Success) throw NumericalError("hermitian_eigenbasis: solver failed");
  const auto& values = solver.eigenvalues();
  Eigen::MatrixXcd vectors = solver.eigenvectors();

  const Eigen::Index n = values.size();
  const double scale = std::max(1.0, values.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < n;) {
    Eigen::Index j = i + 1;
    while (j < n && values(j) - values(i) < kDegenerateTol * scale) ++j;
    if (j - i > 1) vectors.middleCols(i, j - i) = canonical_basis(vectors.middleCols(i, j - i));
    i = j;
  }

  std::vector<Eigenpair> out;
  out.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    Amplitudes v = vectors.col(i);
    fix_phase(v);
    out.push_back({values(i), StateVector(std::move(v))});
  }
  return out;
}

double ground_probability(std::span<const Complex> coefficients) {
  double total = 0.0;
  for (const auto& a : coefficients) total += std::norm(a);
  if (coefficients.empty() || !(total > 1e-300) || !std::isfinite(total)) {
    throw NumericalError("ground_probability: total weight vanished");
  }
  return std::norm(coefficients.front()) / total;
}

QaaResult project_final_state(const ChainParams& params, double k, const StateVector& final_state) {
  const auto basis = hermitian_eigenbasis(params, 1.0);
  QaaResult r;
  r.params = params;
  r.k = k;
  r.final_state = final_state;
  const Amplitudes psi = final_state.physical_amplitudes();
  r.coefficients.reserve(basis.size());
  for (const auto& pair : basis) r.coefficients.push_back(pair.vector.amplitudes().dot(psi));
  r.p_ground = ground_probability(r.coefficients);
  r.near_degenerate = basis.size() > 1 && basis[1].energy - basis[0].energy < kNearDegenerateGap;
  return r;
}

QaaResult run_qaa(const ChainParams& params, double k, const OdeOptions& options) {
  params.validate();
  if (!(k > 0.0)) throw DomainError("run_qaa: k must be positive");
  const auto path = full_model_path(params);
  const std::vector<double> grid{0.0, 1.0};
  const auto traj = evolve_driven(path, Schedule::linear(k), initial_ground_state(params), grid, options);
  return project_final_state(params, k, traj.final().state);
}

}  // namespace ptqa
