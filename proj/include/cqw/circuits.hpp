#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cqw/coin.hpp"
#include "cqw/noise.hpp"
#include "cqw/types.hpp"

namespace cqw {

inline constexpr int kMaxQubits = 10;  // position qubits

enum class GateKind { kH, kP, kCP, kRY, kRZ, kSwap, kCX };

/// A gate on one or two qubits. For controlled kinds qubits[0] is the
/// control and qubits[1] the target; SWAP is symmetric.
struct Gate {
  GateKind kind;
  std::vector<int> qubits;
  double angle = 0.0;

  friend bool operator==(const Gate&, const Gate&) = default;
};

/// Gate list over a register of n position qubits and an optional coin qubit.
///
/// Basis index convention: with a coin qubit, qubit 0 is the coin and
/// position bit b lives on qubit b + 1, so basis index = 2 * site + coin,
/// the WalkState layout. Without a coin qubit, position bit b is qubit b.
struct CircuitIR {
  int n_position_qubits = 0;
  bool has_coin = false;
  std::vector<Gate> gates;

  int n_qubits() const { return n_position_qubits + (has_coin ? 1 : 0); }
  int coin_qubit() const { return 0; }
  int position_qubit(int bit) const { return has_coin ? bit + 1 : bit; }

  void append(const CircuitIR& other);

  friend bool operator==(const CircuitIR&, const CircuitIR&) = default;
};

CircuitIR make_circuit(int n_position_qubits, bool has_coin);

// Single-gate matrices in the standard convention R(t) = exp(-i t sigma / 2).
Eigen::Matrix2cd rz_matrix(double angle);
Eigen::Matrix2cd ry_matrix(double angle);
Eigen::Matrix2cd phase_matrix(double angle);

void apply_gate(const Gate& gate, int n_qubits, ComplexVector& state);
ComplexVector simulate(const CircuitIR& circuit, ComplexVector state);
ComplexMatrix circuit_unitary(const CircuitIR& circuit);

CircuitIR coin_circuit(const CoinParams& params);
CircuitIR qft_circuit(int n_qubits);
CircuitIR inverse_qft_circuit(int n_qubits);
CircuitIR clock_circuit(int n_qubits, int power, bool adjoint);
CircuitIR step_circuit(int n_qubits, const CoinParams& coin);
CircuitIR walk_circuit(int n_qubits, const CoinParams& coin, int steps,
                       const std::optional<NoiseProfile>& noise = std::nullopt);

/// Dense reference for one (optionally noisy) step on 2^n sites, built
/// directly from the shift matrices so n = 1 (two sites) is covered too.
ComplexMatrix reference_step_matrix(int n_qubits, const CoinParams& coin,
                                    const std::vector<double>& site_phases = {});
ComplexMatrix reference_walk_matrix(int n_qubits, const CoinParams& coin, int steps,
                                    const std::optional<NoiseProfile>& noise = std::nullopt);

/// diag(e^{i phases[s]}) over the position register, up to global phase,
/// using parity phases walked in Gray-code order (CX + P).
CircuitIR diagonal_circuit(int n_qubits, const std::vector<double>& phases, bool has_coin);

struct EquivalenceResult {
  bool equivalent = false;
  double max_deviation = 0.0;
};

/// Aligns v to u by the phase ratio at the largest-magnitude entry of u and
/// reports max |u - e^{i chi} v|.
EquivalenceResult equiv_up_to_global_phase(const ComplexMatrix& u, const ComplexMatrix& v,
                                           double tol = 1e-9);

struct GateCounts {
  int total = 0;
  int single_qubit = 0;
  int two_qubit = 0;
  int h = 0, p = 0, cp = 0, ry = 0, rz = 0, swap = 0, cx = 0;
  int depth = 0;
};

GateCounts count_gates(const CircuitIR& circuit);
std::string gate_counts_to_json(const GateCounts& counts);

std::string emit_qasm(const CircuitIR& circuit);
/// Parses the subset emit_qasm writes. The register layout comes from the
/// "// cqw-layout" comment when present; otherwise all qubits are position
/// qubits.
CircuitIR parse_qasm(std::string_view text);

std::string_view gate_name(GateKind kind);

}  // namespace cqw
