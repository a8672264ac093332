#pragma once

#include "mbl/circuit.hpp"
#include "mbl/monotone.hpp"
#include "mbl/polynomial.hpp"
#include "mbl/tensor_network.hpp"

namespace mbl {

/// Two qubits: H on both, CNOT 0 -> 1, H on qubit 0. <00|C|00> = 1/sqrt(2).
QuantumCircuit bell_hadamard_circuit();

/// x1 x10 x11 x20 (x2 x6 x12 x16 + x3 x8 x14 x18), variable k with id k.
SparsePolynomial bell_hadamard_reference_polynomial();

/// Open three-tensor fragment: CZ on (q1, q2), then T and H on q1. Tensor ids
/// 0 = CZ, 1 = T, 2 = H.
TensorNetwork diagonal_fragment_network();

/// (x1 + 2 x2) x3 over variable ids 1, 2, 3.
MonotoneCircuit weighted_sum_circuit();

}  // namespace mbl
