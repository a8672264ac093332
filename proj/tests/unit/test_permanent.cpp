#include <doctest.h>

#include <random>

#include "mbl/permanent.hpp"
#include "mbl/simulator.hpp"
#include "oracles.hpp"

using namespace mbl;

TEST_CASE("permanent_bruteforce") {
  CHECK(permanent_bruteforce(SquareMatrix<BigInt>{{1, 0}, {0, 1}}) == 1);
  CHECK(permanent_bruteforce(SquareMatrix<BigInt>{{1, 2}, {3, 4}}) == 10);
  CHECK(permanent_bruteforce(SquareMatrix<BigInt>(3, std::vector<BigInt>(3, 1))) == 6);
  CHECK(permanent_bruteforce(SquareMatrix<Complex>{{1, 2}, {3, 4}}) == Complex(10));
  std::mt19937_64 rng(1);
  for (std::size_t n = 1; n <= 7; ++n) {
    const auto m = oracle::random_matrix(rng, n, -5, 9);
    CHECK(permanent_bruteforce(m) == oracle::ryser(m));
  }
  CHECK_THROWS_AS(permanent_bruteforce(SquareMatrix<BigInt>(11, std::vector<BigInt>(11, 1))), CapExceeded);
}

TEST_CASE("jerrum_snir_bound") {
  CHECK(jerrum_snir_bound(1) == 0);
  CHECK(jerrum_snir_bound(3) == 9);
  CHECK(jerrum_snir_bound(10) == 5110);
}

TEST_CASE("build_tperm structure and restriction") {
  const auto one = build_tperm(1);
  CHECK(restrict(associated_polynomial(one.skeleton), one.substitution) == permanent_polynomial(1));
  for (std::size_t n = 2; n <= 4; ++n) {
    const auto inst = build_tperm(n);
    CHECK(inst.network.num_live() == 3 * n);
    const auto p = restrict(associated_polynomial(inst.skeleton), inst.substitution);
    CHECK(p == permanent_polynomial(n));
    if (n == 4) {
      CHECK(p.num_terms() == 24);
      for (const auto& [m, c] : p.terms()) CHECK(c == 1);
    }
  }
}

TEST_CASE("numeric permanent network") {
  std::mt19937_64 rng(8);
  for (std::size_t n = 1; n <= 5; ++n) {
    const auto m = oracle::random_matrix(rng, n);
    SquareMatrix<Complex> mc(n, std::vector<Complex>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) mc[i][j] = static_cast<double>(m[i][j]);
    const auto net = tperm_network(mc);
    CHECK(contract_all(net) == Complex(static_cast<double>(oracle::ryser(m))));
  }
}

TEST_CASE("compile_perm_monotone") {
  const auto [mc2, r2] = compile_perm_monotone(2);
  CHECK(eval_perm_circuit(mc2, {{1, 2}, {3, 4}}) == 10);
  std::mt19937_64 rng(6);
  const auto [mc6, r6] = compile_perm_monotone(6);
  for (int trial = 0; trial < 3; ++trial) {
    const auto m = oracle::random_matrix(rng, 6);
    CHECK(eval_perm_circuit(mc6, m) == oracle::ryser(m));
  }
  const auto [mc3, r3] = compile_perm_monotone(3);
  CHECK(r3.size >= 9);
  for (std::size_t n = 1; n <= 5; ++n) CHECK(expand_symbolic(compile_perm_monotone(n).first) == permanent_polynomial(n));
  // No constants at all, so nothing negative.
  for (const auto& node : mc6.nodes()) CHECK(node.kind != NodeKind::Const);
}

TEST_CASE("size accounting matches the emitted circuit") {
  for (std::size_t n = 1; n <= 12; ++n) {
    const auto [mc, r] = compile_perm_monotone(n);
    const auto counted = perm_size_report(n);
    CHECK(counted.size == r.size);
    CHECK(counted.plus_gates == mc.num_plus());
    CHECK(counted.times_gates == mc.num_times());
    CHECK(BigInt(r.size) >= jerrum_snir_bound(n));
  }
  CHECK(perm_size_report(20).size > 0);
  CHECK_THROWS_AS(perm_size_report(21), CapExceeded);
}

TEST_CASE("literal left-to-right contraction gives the same circuit size") {
  for (std::size_t n = 1; n <= 5; ++n) {
    const auto via = perm_circuit_via_contraction(n);
    const auto [direct, r] = compile_perm_monotone(n);
    CHECK(expand_symbolic(via) == permanent_polynomial(n));
    CHECK(via.size() == direct.size());
  }
}

TEST_CASE("permanent circuit over H and CNOT") {
  const auto pc5 = build_permanent_circuit(5);
  CHECK(pc5.circuit.num_qubits() == 7);
  for (const auto& g : pc5.circuit.gates()) CHECK((g.kind == GateKind::H || g.kind == GateKind::Cnot));
  CHECK(pc5.target_depth == 76);
  for (std::size_t n = 1; n <= 4; ++n) {
    const auto pc = build_permanent_circuit(n);
    const auto net = circuit_to_network(pc.circuit, pc.in_state, pc.out_state);
    auto [s, vars] = extract_skeleton(net);
    const auto p = restrict(associated_polynomial(s), permanent_circuit_substitution(pc, vars));
    CHECK(p == permanent_polynomial(n));
    CHECK(pc.depth == depth(pc.circuit));
  }
}
