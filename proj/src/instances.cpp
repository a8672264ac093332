#include "mbl/instances.hpp"

namespace mbl {

QuantumCircuit bell_hadamard_circuit() {
  return QuantumCircuit(2, {Gate::h(0), Gate::h(1), Gate::cnot(0, 1), Gate::h(0)});
}

SparsePolynomial bell_hadamard_reference_polynomial() {
  auto x = [](VarId k) { return SparsePolynomial::variable(k); };
  return x(1) * x(10) * x(11) * x(20) * (x(2) * x(6) * x(12) * x(16) + x(3) * x(8) * x(14) * x(18));
}

TensorNetwork diagonal_fragment_network() {
  std::vector<Tensor> tensors{Tensor(4, unitary(Gate::cz(0, 1))), Tensor(2, unitary(Gate::t(0))),
                              Tensor(2, unitary(Gate::h(0)))};
  // Slots are (outputs..., inputs...). CZ output on q1 feeds T, T feeds H.
  std::vector<Hyperedge> edges{{{{0, 0}, {1, 1}}, false}, {{{1, 0}, {2, 1}}, false}};
  return TensorNetwork(std::move(tensors), std::move(edges));
}

MonotoneCircuit weighted_sum_circuit() {
  MonotoneCircuit mc;
  const NodeId x1 = mc.add_var(1), x2 = mc.add_var(2), x3 = mc.add_var(3);
  const NodeId two = mc.add_const(2);
  const NodeId sum = mc.add_plus(x1, mc.add_times(two, x2));
  mc.set_output(mc.add_times(sum, x3));
  return mc;
}

}  // namespace mbl
