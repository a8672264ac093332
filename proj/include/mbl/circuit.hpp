#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace mbl {

using Complex = std::complex<double>;

/// Basis state or classical register value, one 0/1 byte per wire.
using Bits = std::vector<std::uint8_t>;

/// Parses "0110" into Bits. Throws std::invalid_argument on other characters.
Bits parse_bits(std::string_view text);
std::string format_bits(const Bits& bits);

class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class GateKind { Toffoli, Cnot, Not, H, X, Cz, T, Generic };

std::string_view to_string(GateKind kind);
GateKind gate_kind_from_string(std::string_view name);

/// Number of wires a gate of this kind acts on; 0 for GENERIC (taken from the gate).
std::size_t fixed_arity(GateKind kind);

/// Row-major 2^k x 2^k matrix. wires[0] of the gate is the most significant bit
/// of the row/column index.
using Matrix = std::vector<Complex>;

struct Gate {
  GateKind kind;
  std::vector<std::size_t> wires;
  std::optional<Matrix> matrix;  // GENERIC only

  static Gate toffoli(std::size_t c1, std::size_t c2, std::size_t target);
  static Gate cnot(std::size_t control, std::size_t target);
  static Gate not_gate(std::size_t wire);
  static Gate h(std::size_t wire);
  static Gate x(std::size_t wire);
  static Gate cz(std::size_t a, std::size_t b);
  static Gate t(std::size_t wire);
  static Gate generic(std::vector<std::size_t> wires, Matrix matrix);

  bool is_reversible() const {
    return kind == GateKind::Toffoli || kind == GateKind::Cnot || kind == GateKind::Not;
  }

  friend bool operator==(const Gate&, const Gate&) = default;
};

/// The unitary of a gate as a dense row-major matrix.
Matrix unitary(const Gate& gate);

/// Checks arity, distinct wires, wires < width and (for GENERIC) unitarity.
void validate_gate(const Gate& gate, std::size_t width);

struct WireRoles {
  std::vector<std::size_t> inputs;
  std::vector<std::size_t> ancillas;
  std::size_t output = 0;

  friend bool operator==(const WireRoles&, const WireRoles&) = default;
};

/// Reversible circuit over {TOFFOLI, CNOT, NOT} with an explicit
/// input/ancilla/output partition of its wires.
class ReversibleCircuit {
 public:
  ReversibleCircuit(std::size_t width, WireRoles roles, std::vector<Gate> gates = {});

  std::size_t width() const { return width_; }
  std::size_t size() const { return gates_.size(); }
  const std::vector<Gate>& gates() const { return gates_; }
  const WireRoles& roles() const { return roles_; }
  std::size_t num_inputs() const { return roles_.inputs.size(); }

  friend bool operator==(const ReversibleCircuit&, const ReversibleCircuit&) = default;

 private:
  std::size_t width_;
  WireRoles roles_;
  std::vector<Gate> gates_;
};

class QuantumCircuit {
 public:
  explicit QuantumCircuit(std::size_t num_qubits, std::vector<Gate> gates = {},
                          std::optional<WireRoles> roles = std::nullopt);

  std::size_t num_qubits() const { return num_qubits_; }
  std::size_t size() const { return gates_.size(); }
  const std::vector<Gate>& gates() const { return gates_; }
  const std::optional<WireRoles>& roles() const { return roles_; }

  friend bool operator==(const QuantumCircuit&, const QuantumCircuit&) = default;

 private:
  std::size_t num_qubits_;
  std::vector<Gate> gates_;
  std::optional<WireRoles> roles_;
};

struct CircuitMetrics {
  std::size_t size;
  std::size_t width;
  friend bool operator==(const CircuitMetrics&, const CircuitMetrics&) = default;
};

Bits apply_reversible(const ReversibleCircuit& c, const Bits& x);
ReversibleCircuit inverse(const ReversibleCircuit& c);
CircuitMetrics metrics(const ReversibleCircuit& c);
CircuitMetrics metrics(const QuantumCircuit& c);

/// Circuit depth under as-soon-as-possible layering.
std::size_t depth(const QuantumCircuit& c);

/// Boolean function on n bits; bit k of the argument is input k.
using BooleanFunction = std::function<bool(std::uint64_t)>;

/// True iff c maps (x, 0^a, y) to (x, 0^a, y xor f(x)) for every x and y.
/// Exhaustive; requires n <= 16.
bool check_tidy(const ReversibleCircuit& c, const BooleanFunction& f);

/// Output-wire value of c on (x, 0, 0) for every x in [0, 2^n), n <= 20.
std::vector<bool> output_truth_table(const ReversibleCircuit& c);

QuantumCircuit lift_to_quantum(const ReversibleCircuit& c);

/// Runs the gate list on 64 independent registers at once. lanes[w] holds the
/// 64 values of wire w. Only reversible gates are accepted.
void apply_bitsliced(std::span<const Gate> gates, std::span<std::uint64_t> lanes);

// JSON: {width, roles: {inputs, ancillas, output}, gates: [{kind, wires, matrix?}]}
nlohmann::json to_json(const Gate& g);
Gate gate_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ReversibleCircuit& c);
nlohmann::json to_json(const QuantumCircuit& c);
ReversibleCircuit reversible_from_json(const nlohmann::json& j);
QuantumCircuit quantum_from_json(const nlohmann::json& j);

}  // namespace mbl
