#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "mbl/circuit.hpp"
#include "mbl/monotone.hpp"
#include "mbl/polynomial.hpp"
#include "mbl/tensor_network.hpp"

namespace mbl {

struct RunConfig {
  /// Live-amplitude budget of the sparse statevector, 2^20 by default.
  std::size_t amplitude_budget = std::size_t{1} << 20;
  double tolerance = 1e-9;
  PlanMode plan = PlanMode::Greedy;
  std::uint64_t seed = 0;
  bool exact = false;
};

enum class Method { Statevector, Contraction, MonotoneEval };

std::string_view to_string(Method m);

struct AmplitudeResult {
  Complex value;
  Method method;
  std::optional<std::uint64_t> multiplications;
  double elapsed = 0;  // seconds
};

/// Timing is left out so that output is reproducible.
nlohmann::json to_json(const AmplitudeResult& r);

class IntegrityError : public std::runtime_error {
 public:
  IntegrityError(const std::string& what, std::vector<AmplitudeResult> results)
      : std::runtime_error(what), results_(std::move(results)) {}
  const std::vector<AmplitudeResult>& results() const { return results_; }

 private:
  std::vector<AmplitudeResult> results_;
};

/// <out|C|in> by sparse state evolution over up to 64 qubits. Throws
/// CapExceeded when more than cfg.amplitude_budget amplitudes are live.
Complex statevector_amplitude(const QuantumCircuit& c, const Bits& in_state, const Bits& out_state,
                              const RunConfig& cfg = {});

/// Amplitude k * 2^(-h/2) with integer k, where h counts Hadamard gates.
struct ExactAmplitude {
  BigInt numerator;
  std::size_t hadamards = 0;

  /// The exact value when it is rational (h even or k = 0).
  std::optional<Rational> rational() const;
  double value() const;
  std::string str() const;
};

/// Exact evolution for circuits over {H, X, NOT, CNOT, TOFFOLI, CZ}.
ExactAmplitude exact_amplitude(const QuantumCircuit& c, const Bits& in_state, const Bits& out_state,
                               const RunConfig& cfg = {});

using NetworkHook = std::function<TensorNetwork(const TensorNetwork&)>;

/// Statevector, direct contraction and monotone evaluation of the compiled
/// skeleton. Throws IntegrityError when two methods differ by more than the
/// tolerance. The hook, if given, rewrites the network before the two
/// network-based methods run.
std::vector<AmplitudeResult> crosscheck_amplitude(const QuantumCircuit& c, const Bits& in_state,
                                                  const Bits& out_state, const RunConfig& cfg = {},
                                                  const NetworkHook& hook = {});

}  // namespace mbl
