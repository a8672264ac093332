#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mbl/monotone.hpp"
#include "mbl/polynomial.hpp"
#include "mbl/skeleton.hpp"
#include "mbl/tensor_network.hpp"

namespace mbl {

template <class T>
using SquareMatrix = std::vector<std::vector<T>>;

/// Sum over all permutations; n <= 10.
BigInt permanent_bruteforce(const SquareMatrix<BigInt>& m);
Complex permanent_bruteforce(const SquareMatrix<Complex>& m);

/// n(2^(n-1) - 1).
BigInt jerrum_snir_bound(std::size_t n);

/// Column-gadget network realising the permanent.
///
/// Tensor ids: left boundaries 0..n-1 (row wires pinned to 0), gadgets
/// n..2n-1 (one per column, slots (out rows..., in rows...)), right boundaries
/// 2n..3n-1 (row wires pinned to 1). A gadget entry is nonzero exactly when it
/// flips one row wire from 0 to 1.
struct PermInstance {
  std::size_t n;
  TensorNetwork network;
  Skeleton skeleton;
  VariableTable variables;
  SubstitutionMap substitution;  // gadget variables -> x_{ij}, boundary variables -> 1
};

inline constexpr std::size_t kMaxTpermOrder = 13;

PermInstance build_tperm(std::size_t n);

/// The same network with gadget entries carrying matrix values.
TensorNetwork tperm_network(const SquareMatrix<Complex>& m);

struct BoundReport {
  std::size_t n = 0;
  std::uint64_t size = 0;
  std::uint64_t plus_gates = 0;
  std::uint64_t times_gates = 0;
  BigInt lower_bound = 0;
  double ratio = 0;        // size / lower bound (0 when the bound is 0)
  double scaled = 0;       // size / (n^2 2^n)
};

nlohmann::json to_json(const BoundReport& r);

inline constexpr std::size_t kMaxPermEmit = 16;
inline constexpr std::size_t kMaxPermCount = 20;

/// Subset recursion f(j, S) = sum_{i in S} x_{i,j} f(j-1, S - {i}), subsets in
/// (popcount, value) order. Variable x_{i,j} has id i*n + j.
std::pair<MonotoneCircuit, BoundReport> compile_perm_monotone(std::size_t n);

/// Gate counts of compile_perm_monotone without building the circuit; n <= 20.
BoundReport perm_size_report(std::size_t n);

/// Exact evaluation of the permanent circuit at an integer matrix.
BigInt eval_perm_circuit(const MonotoneCircuit& mc, const SquareMatrix<BigInt>& m);

/// Literal left-to-right contraction of build_tperm(n) followed by the
/// permanent substitution.
MonotoneCircuit perm_circuit_via_contraction(std::size_t n);

/// Width n+2 circuit over {H, CNOT}: rows 0..n-1 plus two parity wires used on
/// alternate columns. For row i in column j: CNOT(row -> parity), H(row),
/// CNOT(row -> parity); each column ends with H on its parity wire.
struct PermCircuit {
  std::size_t n;
  QuantumCircuit circuit;
  Bits in_state;
  Bits out_state;
  std::size_t depth;
  std::size_t target_depth;  // 3n^2 + 1
};

inline constexpr std::size_t kMaxPermCircuitOrder = 12;

PermCircuit build_permanent_circuit(std::size_t n);

/// Substitution on the skeleton of the circuit network: row-H entries become
/// 1, x_{ij}, 1, 0 (for out,in = 00, 10, 11, 01), parity-H keeps only the
/// entry out=0,in=1, everything else maps to 1.
SubstitutionMap permanent_circuit_substitution(const PermCircuit& pc, const VariableTable& vars);

nlohmann::json to_json(const PermCircuit& pc);

}  // namespace mbl
