#include <doctest.h>

#include <random>

#include "mbl/instances.hpp"
#include "mbl/permanent.hpp"
#include "mbl/tensor_network.hpp"
#include "oracles.hpp"

using namespace mbl;

namespace {

const double kInvSqrt2 = 1 / std::sqrt(2.0);

bool close(Complex a, Complex b, double tol = 1e-9) { return std::abs(a - b) <= tol; }

Tensor random_tensor(std::mt19937_64& rng, std::size_t rank) {
  std::uniform_real_distribution<double> d(-1, 1);
  Tensor t(rank);
  for (std::uint64_t i = 0; i < t.entries().size(); ++i) t[i] = Complex(d(rng), d(rng));
  return t;
}

// Closed network of k random tensors over random pairwise or 3-way hyperedges.
TensorNetwork random_closed_network(std::mt19937_64& rng, std::size_t k, std::size_t max_rank) {
  std::vector<Tensor> ts;
  std::vector<SlotRef> slots;
  for (std::size_t id = 0; id < k; ++id) {
    const std::size_t r = 1 + rng() % max_rank;
    ts.push_back(random_tensor(rng, r));
    for (std::size_t s = 0; s < r; ++s) slots.push_back({id, s});
  }
  std::shuffle(slots.begin(), slots.end(), rng);
  std::vector<Hyperedge> edges;
  for (std::size_t p = 0; p < slots.size();) {
    const std::size_t take = std::min<std::size_t>(slots.size() - p, 1 + rng() % 3);
    Hyperedge h;
    for (std::size_t q = 0; q < take; ++q) h.slots.push_back(slots[p + q]);
    edges.push_back(std::move(h));
    p += take;
  }
  return TensorNetwork(std::move(ts), std::move(edges));
}

ContractionPlan random_plan(std::mt19937_64& rng, const TensorNetwork& net) {
  auto ids = net.live_ids();
  ContractionPlan plan;
  while (ids.size() > 1) {
    std::shuffle(ids.begin(), ids.end(), rng);
    const auto a = ids[0], b = ids[1];
    plan.steps.emplace_back(a, b);
    ids.erase(ids.begin() + 1);
    ids[0] = std::min(a, b);
  }
  return plan;
}

}  // namespace

TEST_CASE("circuit_to_network on <0|H|0>") {
  const auto net = circuit_to_network(QuantumCircuit(1, {Gate::h(0)}), {0}, {0});
  CHECK(net.num_live() == 3);
  CHECK(net.closed());
  CHECK(close(contract_all(net), kInvSqrt2));
  CHECK(close(contract_all(net), oracle::brute_force_value(net)));
}

TEST_CASE("identity circuit gives 1 on matching states") {
  const auto net = circuit_to_network(QuantumCircuit(3), {1, 0, 1}, {1, 0, 1});
  CHECK(close(contract_all(net), 1));
  CHECK(close(contract_all(circuit_to_network(QuantumCircuit(3), {1, 0, 1}, {1, 1, 1})), 0));
  CHECK_THROWS_AS(circuit_to_network(QuantumCircuit(2), {0}, {0, 0}), ShapeError);
}

TEST_CASE("bell-hadamard circuit network") {
  const auto c = bell_hadamard_circuit();
  const auto net = circuit_to_network(c, {0, 0}, {0, 0});
  CHECK(net.num_live() == 8);
  CHECK(close(contract_all(net), oracle::dense_amplitude(c, {0, 0}, {0, 0})));
  CHECK(close(contract_all(net), kInvSqrt2));
}

TEST_CASE("contract_pair basics") {
  TensorNetwork dot(std::vector<Tensor>{Tensor(1, {2, 3}), Tensor(1, {5, 7})}, {{{{0, 0}, {1, 0}}, false}});
  const auto one = contract_pair(dot, 0, 1);
  CHECK(one.num_live() == 1);
  CHECK(one.tensor(0).rank() == 0);
  CHECK(one.tensor(0)[0] == Complex(2 * 5 + 3 * 7));
  CHECK_THROWS_AS(contract_pair(dot, 0, 0), PlanError);
  CHECK_THROWS_AS(contract_pair(dot, 0, 4), PlanError);

  // Matrix times vector: M slots (row, col), v joined on col, row left open.
  TensorNetwork mv(std::vector<Tensor>{Tensor(2, {1, 2, 3, 4}), Tensor(1, {5, 6})}, {{{{0, 1}, {1, 0}}, false}});
  const auto r = contract_pair(mv, 0, 1);
  CHECK(r.tensor(0).rank() == 1);
  CHECK(r.tensor(0)[0] == Complex(17));
  CHECK(r.tensor(0)[1] == Complex(39));
  CHECK(contract_to_tensor(mv, {{{0, 1}}}).entries() == std::vector<Complex>{17, 39});
}

TEST_CASE("plan independence and brute-force equivalence on random networks") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 60; ++trial) {
    const auto net = random_closed_network(rng, 2 + rng() % 4, 4);
    if (net.shape().hyperedges.size() > 12) continue;
    const Complex ref = oracle::brute_force_value(net);
    CHECK(close(contract_all(net, find_plan(net, PlanMode::Greedy)), ref));
    CHECK(close(contract_all(net, find_plan(net, PlanMode::Exhaustive)), ref));
    CHECK(close(contract_all(net, find_plan(net, PlanMode::LeftToRight)), ref));
    CHECK(close(contract_all(net, random_plan(rng, net)), ref));
    // Stepwise contract_pair preserves the value.
    TensorNetwork cur = net;
    for (auto [i, j] : random_plan(rng, net).steps) cur = contract_pair(cur, i, j);
    CHECK(close(contract_all(cur, ContractionPlan{}), ref));
  }
}

TEST_CASE("integer networks contract exactly under any plan") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    auto net = random_closed_network(rng, 4, 3);
    std::vector<std::optional<Tensor>> ts = net.tensors();
    for (auto& t : ts)
      for (std::uint64_t i = 0; i < t->entries().size(); ++i) (*t)[i] = Complex(static_cast<double>(rng() % 5));
    TensorNetwork ints(ts, net.shape().hyperedges);
    const Complex a = contract_all(ints, find_plan(ints, PlanMode::Greedy));
    CHECK(a == contract_all(ints, find_plan(ints, PlanMode::LeftToRight)));
    CHECK(a == contract_all(ints, random_plan(rng, ints)));
  }
}

TEST_CASE("permanent network for [[1,2],[3,4]]") {
  const auto net = tperm_network({{1, 2}, {3, 4}});
  CHECK(close(contract_all(net), 10));
}

TEST_CASE("find_plan") {
  TensorNetwork two(std::vector<Tensor>{Tensor(1, {1, 1}), Tensor(1, {1, 1})}, {{{{0, 0}, {1, 0}}, false}});
  const auto p = find_plan(two, PlanMode::Exhaustive);
  REQUIRE(p.steps.size() == 1);
  CHECK(p.steps[0] == std::pair<std::size_t, std::size_t>{0, 1});

  // Chain v0 - M1 - M2 - M3 - v4 of matrices: exhaustive is never worse than greedy.
  std::mt19937_64 rng(9);
  std::vector<Tensor> ts{random_tensor(rng, 1), random_tensor(rng, 2), random_tensor(rng, 2), random_tensor(rng, 2),
                         random_tensor(rng, 1)};
  std::vector<Hyperedge> edges{{{{0, 0}, {1, 0}}, false},
                               {{{1, 1}, {2, 0}}, false},
                               {{{2, 1}, {3, 0}}, false},
                               {{{3, 1}, {4, 0}}, false}};
  TensorNetwork chain(ts, edges);
  const auto ex = find_plan(chain, PlanMode::Exhaustive);
  const auto gr = find_plan(chain, PlanMode::Greedy);
  CHECK(multiplication_count(chain, ex) <= multiplication_count(chain, gr));
  CHECK(close(contract_all(chain, ex), oracle::brute_force_value(chain)));

  // Exhaustive really is the minimum over every pairwise merge sequence.
  std::uint64_t best = UINT64_MAX;
  auto search = [&](auto&& self, std::vector<std::size_t> alive, ContractionPlan plan) -> void {
    if (alive.size() == 1) {
      best = std::min(best, multiplication_count(chain, plan));
      return;
    }
    for (std::size_t a = 0; a < alive.size(); ++a)
      for (std::size_t b = a + 1; b < alive.size(); ++b) {
        auto next = alive;
        auto p2 = plan;
        p2.steps.emplace_back(alive[a], alive[b]);
        next.erase(next.begin() + static_cast<std::ptrdiff_t>(b));
        self(self, next, p2);
      }
  };
  search(search, {0, 1, 2, 3, 4}, {});
  CHECK(multiplication_count(chain, ex) == best);

  const auto nine = random_closed_network(rng, 9, 2);
  CHECK_THROWS_AS(find_plan(nine, PlanMode::Exhaustive), CapExceeded);
}

TEST_CASE("validate_plan rejects bad plans") {
  const auto net = circuit_to_network(QuantumCircuit(1, {Gate::h(0)}), {0}, {0});
  CHECK_THROWS_AS(contract_all(net, ContractionPlan{{{0, 1}}}), PlanError);
  CHECK_THROWS_AS(contract_all(net, ContractionPlan{{{0, 1}, {1, 2}}}), PlanError);
  CHECK_THROWS_AS(contract_all(net, ContractionPlan{{{0, 0}}}), PlanError);
  TensorNetwork open(std::vector<Tensor>{Tensor(1, {1, 2})}, {});
  CHECK_FALSE(open.closed());
  CHECK_THROWS_AS(contract_all(open, ContractionPlan{}), ShapeError);
}

TEST_CASE("multiplication_count") {
  TensorNetwork dot(std::vector<Tensor>{Tensor(1, {2, 3}), Tensor(1, {5, 7})}, {{{{0, 0}, {1, 0}}, false}});
  CHECK(multiplication_count(dot, {{{0, 1}}}) == 2);
  const auto frag = diagonal_fragment_network();
  CHECK(multiplication_count(frag, find_plan(frag, PlanMode::Greedy)) == 40);
  CHECK(multiplication_count(frag, find_plan(frag, PlanMode::Exhaustive)) == 40);
  const auto pre = preprocess_diagonal(frag);
  CHECK(multiplication_count(pre, find_plan(pre, PlanMode::Greedy)) == 12);
  CHECK(multiplication_count(pre, find_plan(pre, PlanMode::Exhaustive)) == 12);
}

TEST_CASE("preprocess_diagonal") {
  // One-qubit diagonal gate between two boundary states: rank 1 on a 3-way hyperedge.
  const auto t_net = circuit_to_network(QuantumCircuit(1, {Gate::t(0)}), {1}, {1});
  const auto t_pre = preprocess_diagonal(t_net);
  CHECK(t_pre.tensor(1).rank() == 1);
  bool three_way = false;
  for (const auto& h : t_pre.shape().hyperedges) three_way = three_way || h.slots.size() == 3;
  CHECK(three_way);
  CHECK(close(contract_all(t_pre), contract_all(t_net)));

  // CZ becomes rank 2.
  const auto cz = circuit_to_network(QuantumCircuit(2, {Gate::cz(0, 1)}), {1, 1}, {1, 1});
  const auto cz_pre = preprocess_diagonal(cz);
  CHECK(cz_pre.tensor(2).rank() == 2);
  CHECK(close(contract_all(cz_pre), -1));

  // Fragment: CZ rank 2, T rank 1, H untouched.
  const auto frag = preprocess_diagonal(diagonal_fragment_network());
  CHECK(frag.tensor(0).rank() == 2);
  CHECK(frag.tensor(1).rank() == 1);
  CHECK(frag.tensor(2).rank() == 2);
  // Open tensors agree as functions of the open indices.
  const auto a = contract_to_tensor(diagonal_fragment_network(), find_plan(diagonal_fragment_network(), PlanMode::Greedy));
  const auto b = contract_to_tensor(frag, find_plan(frag, PlanMode::Greedy));
  CHECK(a.rank() == 4);
  CHECK(b.rank() == 3);  // q1 input and output share a fused index

  // Soundness on random circuits with diagonal gates.
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 40; ++trial) {
    const auto c = oracle::random_circuit(rng, 1 + rng() % 3, 1 + rng() % 6,
                                          {GateKind::H, GateKind::T, GateKind::Cz, GateKind::X, GateKind::Cnot});
    const auto in = oracle::random_bits(rng, c.num_qubits());
    const auto out = oracle::random_bits(rng, c.num_qubits());
    const auto net = circuit_to_network(c, in, out);
    CHECK(close(contract_all(preprocess_diagonal(net)), contract_all(net)));
  }
}

TEST_CASE("network json round trip") {
  const auto net = preprocess_diagonal(diagonal_fragment_network());
  const auto back = network_from_json(nlohmann::json::parse(to_json(net).dump()));
  CHECK(back.shape() == net.shape());
  CHECK(back.tensors() == net.tensors());
}
