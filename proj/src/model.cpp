#include "ptqa/model.hpp"

#include "ptqa/errors.hpp"

#include <bit>
#include <cmath>
#include <string>

namespace ptqa {

namespace {

// Hilbert spaces beyond this are far outside the dense-matrix regime.
constexpr int kMaxQubits = 12;

constexpr double kRescaleLow = 1e-150;
constexpr double kRescaleHigh = 1e150;

int qubit_bit(std::size_t basis_index, int qubit_index, int n_qubits) {
  return static_cast<int>((basis_index >> (n_qubits - qubit_index)) & 1U);
}

std::size_t reverse_bits(std::size_t index, int n_qubits) {
  std::size_t out = 0;
  for (int b = 0; b < n_qubits; ++b) {
    out = (out << 1) | ((index >> b) & 1U);
  }
  return out;
}

}  // namespace

ChainParams ChainParams::two_qubit(double epsilon, double gamma, double g, double delta) {
  ChainParams p;
  p.n_qubits = 2;
  p.delta = delta;
  p.epsilon = epsilon;
  p.gamma = gamma;
  p.coupling = {{1, g}};
  return p;
}

double ChainParams::g() const {
  auto it = coupling.find(1);
  return it == coupling.end() ? 0.0 : it->second;
}

void ChainParams::validate() const {
  if (n_qubits < 1 || n_qubits > kMaxQubits) {
    throw DomainError("n_qubits must be in [1, " + std::to_string(kMaxQubits) + "], got " +
                      std::to_string(n_qubits));
  }
  if (!std::isfinite(delta) || !std::isfinite(epsilon) || !std::isfinite(gamma)) {
    throw DomainError("chain parameters must be finite");
  }
  if (delta <= 0.0) throw DomainError("delta must be positive");
  if (gamma < 0.0) throw DomainError("gamma must be non-negative");
  for (const auto& [distance, strength] : coupling) {
    if (distance < 1) throw DomainError("coupling distance must be >= 1");
    if (!std::isfinite(strength)) throw DomainError("coupling strengths must be finite");
  }
}

std::size_t hilbert_dim(int n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxQubits) {
    throw DomainError("unsupported qubit count " + std::to_string(n_qubits));
  }
  return std::size_t{1} << n_qubits;
}

StateVector::StateVector(Amplitudes amplitudes, int scale_exponent)
    : amplitudes_(std::move(amplitudes)), scale_exponent_(scale_exponent) {}

double StateVector::raw_norm() const {
  return std::ldexp(amplitudes_.stableNorm(), scale_exponent_);
}

double StateVector::log_raw_norm() const {
  return std::log(amplitudes_.stableNorm()) + scale_exponent_ * std::log(2.0);
}

Amplitudes StateVector::physical_amplitudes() const {
  return amplitudes_ * std::ldexp(1.0, scale_exponent_);
}

void StateVector::rescale_if_needed() {
  const double n = amplitudes_.stableNorm();
  if (n == 0.0 || !std::isfinite(n)) return;
  if (n < kRescaleLow || n > kRescaleHigh) {
    int e = 0;
    std::frexp(n, &e);
    amplitudes_ *= std::ldexp(1.0, -e);
    scale_exponent_ += e;
  }
}

Operator pauli_operator(PauliAxis axis, int qubit_index, int n_qubits) {
  const auto dim = hilbert_dim(n_qubits);
  if (qubit_index < 1 || qubit_index > n_qubits) {
    throw DomainError("qubit index " + std::to_string(qubit_index) + " outside [1, " +
                      std::to_string(n_qubits) + "]");
  }
  const std::size_t flip = std::size_t{1} << (n_qubits - qubit_index);
  Operator op = Operator::Zero(dim, dim);
  for (std::size_t b = 0; b < dim; ++b) {
    const bool up = qubit_bit(b, qubit_index, n_qubits) == 0;
    switch (axis) {
      case PauliAxis::X:
        op(b ^ flip, b) = 1.0;
        break;
      case PauliAxis::Y:
        op(b ^ flip, b) = up ? kI : -kI;
        break;
      case PauliAxis::Z:
        op(b, b) = up ? 1.0 : -1.0;
        break;
    }
  }
  return op;
}

Operator initial_hamiltonian(const ChainParams& params) {
  const auto dim = hilbert_dim(params.n_qubits);
  Operator h = Operator::Zero(dim, dim);
  for (int n = 1; n <= params.n_qubits; ++n) {
    h += 0.5 * params.delta * pauli_operator(PauliAxis::X, n, params.n_qubits);
  }
  return h;
}

Operator final_hamiltonian(const ChainParams& params) {
  const int N = params.n_qubits;
  const auto dim = hilbert_dim(N);
  Operator h = Operator::Zero(dim, dim);
  for (int n = 1; n <= N; ++n) {
    for (int m = n + 1; m <= N; ++m) {
      auto it = params.coupling.find(m - n);
      if (it == params.coupling.end() || it->second == 0.0) continue;
      const Operator xx = pauli_operator(PauliAxis::X, n, N) * pauli_operator(PauliAxis::X, m, N);
      const Operator yy = pauli_operator(PauliAxis::Y, n, N) * pauli_operator(PauliAxis::Y, m, N);
      h += 0.5 * it->second * (xx + yy);
    }
    h += 0.5 * params.epsilon * pauli_operator(PauliAxis::Z, n, N);
  }
  return h;
}

Operator gain_loss_term(const ChainParams& params) {
  const auto dim = hilbert_dim(params.n_qubits);
  Operator h = Operator::Zero(dim, dim);
  for (int n = 1; n <= params.n_qubits; ++n) {
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    h += sign * kI * params.gamma * pauli_operator(PauliAxis::Z, n, params.n_qubits);
  }
  return h;
}

Operator build_hamiltonian(const ChainParams& params, double s) {
  params.validate();
  return (1.0 - s) * initial_hamiltonian(params) + s * final_hamiltonian(params) +
         gain_loss_term(params);
}

Operator pt_transform(const Operator& op, int n_qubits) {
  const auto dim = hilbert_dim(n_qubits);
  if (op.rows() != op.cols() || static_cast<std::size_t>(op.rows()) != dim) {
    throw DomainError("pt_transform: operator dimension " + std::to_string(op.rows()) + "x" +
                      std::to_string(op.cols()) + " does not match 2^" +
                      std::to_string(n_qubits));
  }
  Operator out(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      out(reverse_bits(i, n_qubits), reverse_bits(j, n_qubits)) = std::conj(op(i, j));
    }
  }
  return out;
}

StateVector initial_ground_state(const ChainParams& params) {
  params.validate();
  const auto dim = hilbert_dim(params.n_qubits);
  const double amplitude = std::pow(2.0, -0.5 * params.n_qubits);
  Amplitudes psi(dim);
  for (std::size_t b = 0; b < dim; ++b) {
    // each down spin contributes a factor -1 from (1, -1)/sqrt(2)
    const int downs = std::popcount(b);
    psi(b) = (downs % 2 == 0) ? amplitude : -amplitude;
  }
  return StateVector(std::move(psi));
}

}  // namespace ptqa
