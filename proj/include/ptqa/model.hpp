#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <map>

namespace ptqa {

using Complex = std::complex<double>;
using Operator = Eigen::MatrixXcd;
using Amplitudes = Eigen::VectorXcd;

inline constexpr Complex kI{0.0, 1.0};

enum class PauliAxis { X, Y, Z };

/// Physical parameters of an XX-coupled chain, all energies in units of delta.
struct ChainParams {
  int n_qubits = 2;
  double delta = 1.0;
  double epsilon = 0.0;
  double gamma = 0.0;
  /// Coupling strength g(d) keyed by qubit-pair distance d >= 1.
  std::map<int, double> coupling{{1, 1.0}};

  static ChainParams two_qubit(double epsilon, double gamma, double g = 1.0,
                               double delta = 1.0);

  /// Nearest-neighbour strength g(1); the single scalar g of the two-qubit model.
  double g() const;
  void set_g(double value) { coupling[1] = value; }

  /// Throws DomainError unless n_qubits >= 1, gamma >= 0 and every value is finite.
  void validate() const;

  /// The staggered gain/loss term is only PT-balanced on an even chain.
  bool pt_guaranteed() const { return n_qubits % 2 == 0; }
};

std::size_t hilbert_dim(int n_qubits);

/// Wave function with a tracked power-of-two scale so that strongly amplified or
/// damped non-unitary evolution never overflows.  raw_norm() is always recomputed.
class StateVector {
 public:
  StateVector() = default;
  explicit StateVector(Amplitudes amplitudes, int scale_exponent = 0);

  const Amplitudes& amplitudes() const { return amplitudes_; }
  Amplitudes& mutable_amplitudes() { return amplitudes_; }
  Eigen::Index dim() const { return amplitudes_.size(); }
  int scale_exponent() const { return scale_exponent_; }

  /// Euclidean norm of the physical (unscaled) state; may overflow to inf.
  double raw_norm() const;
  /// log of raw_norm(), finite whenever the stored amplitudes are nonzero.
  double log_raw_norm() const;

  /// Amplitudes multiplied back by 2^scale_exponent.
  Amplitudes physical_amplitudes() const;

  /// Moves the magnitude into scale_exponent when the stored norm leaves
  /// [1e-150, 1e150].  Populations are unaffected.
  void rescale_if_needed();

 private:
  Amplitudes amplitudes_;
  int scale_exponent_ = 0;
};

/// Single-qubit Pauli matrix on qubit `qubit_index` (1-based) embedded in the
/// 2^N space.  Basis |s_1 s_2 ... s_N> with qubit 1 the most significant factor
/// and sigma_z|up> = +|up>, so index 0 is |up up ...>.
Operator pauli_operator(PauliAxis axis, int qubit_index, int n_qubits);

Operator initial_hamiltonian(const ChainParams& params);
Operator final_hamiltonian(const ChainParams& params);
/// sum_n (-1)^n i gamma sigma_n^z with n starting at 1.
Operator gain_loss_term(const ChainParams& params);

/// (1-s) H_in + s H_f + staggered gain/loss.  s outside [0, 1] is allowed for
/// diagnostics; see in_schedule_range().
Operator build_hamiltonian(const ChainParams& params, double s);
inline bool in_schedule_range(double s) { return s >= 0.0 && s <= 1.0; }

/// P conj(op) P^-1 with P the chain reversal j <-> N+1-j (qubit exchange for N=2).
Operator pt_transform(const Operator& op, int n_qubits);

/// Ground state of the Hermitian s=0 Hamiltonian: the product of single-qubit
/// sigma_x ground states (1, -1)/sqrt(2), built analytically.
StateVector initial_ground_state(const ChainParams& params);

}  // namespace ptqa
