#include "mbl/permanent.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

namespace mbl {

namespace {

template <class T>
T permanent_sum(const SquareMatrix<T>& m) {
  const std::size_t n = m.size();
  if (n > 10) throw CapExceeded("brute-force permanent is limited to n <= 10");
  for (const auto& row : m)
    if (row.size() != n) throw ShapeError("permanent needs a square matrix");
  std::vector<std::size_t> sigma(n);
  std::iota(sigma.begin(), sigma.end(), 0);
  T total = 0;
  do {
    T prod = 1;
    for (std::size_t i = 0; i < n; ++i) prod *= m[i][sigma[i]];
    total += prod;
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return total;
}

}  // namespace

BigInt permanent_bruteforce(const SquareMatrix<BigInt>& m) { return permanent_sum(m); }
Complex permanent_bruteforce(const SquareMatrix<Complex>& m) { return permanent_sum(m); }

BigInt jerrum_snir_bound(std::size_t n) {
  if (n == 0) throw std::invalid_argument("n must be positive");
  return BigInt(n) * ((BigInt(1) << (n - 1)) - 1);
}

namespace {

// Entry index of the gadget flipping row i from input `in` (slots: out rows, then in rows).
std::uint64_t gadget_index(std::size_t n, std::uint64_t in, std::size_t i) {
  const std::uint64_t out = in | (std::uint64_t{1} << (n - 1 - i));
  return (out << n) | in;
}

TensorNetwork tperm_with(std::size_t n, const std::function<Complex(std::size_t, std::size_t)>& value) {
  if (n == 0) throw std::invalid_argument("n must be positive");
  if (n > kMaxTpermOrder) throw CapExceeded("permanent network is limited to n <= 13");
  std::vector<Tensor> tensors;
  for (std::size_t i = 0; i < n; ++i) tensors.emplace_back(1, std::vector<Complex>{1, 0});
  for (std::size_t j = 0; j < n; ++j) {
    Tensor g(2 * n);
    for (std::uint64_t in = 0; in < (std::uint64_t{1} << n); ++in)
      for (std::size_t i = 0; i < n; ++i)
        if (!((in >> (n - 1 - i)) & 1u)) g[gadget_index(n, in, i)] = value(i, j);
    tensors.push_back(std::move(g));
  }
  for (std::size_t i = 0; i < n; ++i) tensors.emplace_back(1, std::vector<Complex>{0, 1});

  std::vector<Hyperedge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    SlotRef prev{i, 0};
    for (std::size_t j = 0; j < n; ++j) {
      edges.push_back({{prev, {n + j, n + i}}, false});
      prev = {n + j, i};
    }
    edges.push_back({{prev, {2 * n + i, 0}}, false});
  }
  return TensorNetwork(std::move(tensors), std::move(edges));
}

}  // namespace

PermInstance build_tperm(std::size_t n) {
  auto net = tperm_with(n, [](std::size_t, std::size_t) { return Complex(1); });
  auto [skel, vars] = extract_skeleton(net);
  SubstitutionMap sub;
  for (VarId v = 0; v < vars.size(); ++v) {
    const auto [id, index] = vars.entry(v);
    if (id < n || id >= 2 * n) {
      sub[v] = Substitution::one();
      continue;
    }
    const std::size_t j = id - n;
    const std::uint64_t in = index & ((std::uint64_t{1} << n) - 1);
    const std::uint64_t flipped = (index >> n) ^ in;
    const std::size_t i = n - 1 - static_cast<std::size_t>(std::countr_zero(flipped));
    sub[v] = Substitution::to_var(matrix_var(n, i, j));
  }
  return {n, std::move(net), std::move(skel), std::move(vars), std::move(sub)};
}

TensorNetwork tperm_network(const SquareMatrix<Complex>& m) {
  const std::size_t n = m.size();
  for (const auto& row : m)
    if (row.size() != n) throw ShapeError("permanent needs a square matrix");
  return tperm_with(n, [&](std::size_t i, std::size_t j) { return m[i][j]; });
}

nlohmann::json to_json(const BoundReport& r) {
  return {{"n", r.n},
          {"size", r.size},
          {"plus_gates", r.plus_gates},
          {"times_gates", r.times_gates},
          {"lower_bound", r.lower_bound.str()},
          {"ratio", r.ratio},
          {"size_over_n2_2n", r.scaled},
          {"size_counts", "internal gates only, leaves excluded"}};
}

namespace {

// Subsets of [0, n) with k bits, ascending.
std::vector<std::uint32_t> subsets_of_size(std::size_t n, std::size_t k) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t s = 0; s < (std::uint32_t{1} << n); ++s)
    if (static_cast<std::size_t>(std::popcount(s)) == k) out.push_back(s);
  return out;
}

void finish_report(BoundReport& r) {
  r.size = r.plus_gates + r.times_gates;
  r.lower_bound = jerrum_snir_bound(r.n);
  r.ratio = r.lower_bound == 0 ? 0.0 : static_cast<double>(r.size) / static_cast<double>(r.lower_bound);
  r.scaled = static_cast<double>(r.size) / (static_cast<double>(r.n * r.n) * std::ldexp(1.0, static_cast<int>(r.n)));
}

}  // namespace

std::pair<MonotoneCircuit, BoundReport> compile_perm_monotone(std::size_t n) {
  if (n == 0) throw std::invalid_argument("n must be positive");
  if (n > kMaxPermEmit) throw CapExceeded("permanent circuit emission is limited to n <= 16");
  MonotoneCircuit mc;
  std::vector<NodeId> var(n * n);
  for (std::size_t v = 0; v < n * n; ++v) var[v] = mc.add_var(static_cast<VarId>(v));
  // f[S] for the current column; row subsets are row bitmasks (bit i = row i).
  std::vector<NodeId> f(std::size_t{1} << n, 0);
  for (std::size_t i = 0; i < n; ++i) f[std::size_t{1} << i] = var[matrix_var(n, i, 0)];
  for (std::size_t j = 1; j < n; ++j) {
    std::vector<NodeId> next(f.size(), 0);
    for (auto S : subsets_of_size(n, j + 1)) {
      std::optional<NodeId> acc;
      for (std::size_t i = 0; i < n; ++i) {
        if (!((S >> i) & 1u)) continue;
        const NodeId term = mc.add_times(var[matrix_var(n, i, j)], f[S & ~(std::uint32_t{1} << i)]);
        acc = acc ? mc.add_plus(*acc, term) : term;
      }
      next[S] = *acc;
    }
    f = std::move(next);
  }
  mc.set_output(f[(std::size_t{1} << n) - 1]);
  BoundReport r;
  r.n = n;
  r.plus_gates = mc.num_plus();
  r.times_gates = mc.num_times();
  finish_report(r);
  return {std::move(mc), r};
}

BoundReport perm_size_report(std::size_t n) {
  if (n == 0) throw std::invalid_argument("n must be positive");
  if (n > kMaxPermCount) throw CapExceeded("permanent size accounting is limited to n <= 20");
  BoundReport r;
  r.n = n;
  // Column j >= 1 touches every subset of size j+1: |S| products and |S|-1 sums.
  std::uint64_t binom = n;  // C(n, 1)
  for (std::size_t k = 2; k <= n; ++k) {
    binom = binom * (n - k + 1) / k;
    r.times_gates += binom * k;
    r.plus_gates += binom * (k - 1);
  }
  finish_report(r);
  return r;
}

BigInt eval_perm_circuit(const MonotoneCircuit& mc, const SquareMatrix<BigInt>& m) {
  std::vector<Rational> x;
  for (const auto& row : m)
    for (const auto& v : row) x.emplace_back(v);
  const Rational r = eval_exact(mc, x);
  if (denominator(r) != 1) throw std::logic_error("integer matrix gave a non-integer permanent");
  return numerator(r);
}

MonotoneCircuit perm_circuit_via_contraction(std::size_t n) {
  const auto inst = build_tperm(n);
  const auto [mc, report] = compile_contraction(inst.skeleton, find_plan(inst.skeleton.shape, PlanMode::LeftToRight));
  return substitute_leaves(mc, inst.substitution);
}

PermCircuit build_permanent_circuit(std::size_t n) {
  if (n == 0) throw std::invalid_argument("n must be positive");
  if (n > kMaxPermCircuitOrder) throw CapExceeded("permanent circuit is limited to n <= 12");
  std::vector<Gate> gates;
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t parity = n + (j % 2);
    for (std::size_t i = 0; i < n; ++i) {
      gates.push_back(Gate::cnot(i, parity));
      gates.push_back(Gate::h(i));
      gates.push_back(Gate::cnot(i, parity));
    }
    gates.push_back(Gate::h(parity));
  }
  QuantumCircuit c(n + 2, std::move(gates));
  Bits in(n + 2, 0);
  Bits out(n + 2, 0);
  std::fill(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(n), 1);
  const std::size_t d = depth(c);
  return {n, std::move(c), std::move(in), std::move(out), d, 3 * n * n + 1};
}

SubstitutionMap permanent_circuit_substitution(const PermCircuit& pc, const VariableTable& vars) {
  const std::size_t n = pc.n;
  const std::size_t q = n + 2;
  // Gate tensors follow the q input boundary tensors; remember which column each row H belongs to.
  std::vector<std::optional<std::pair<std::size_t, std::size_t>>> row_h(pc.circuit.size());  // (row, column)
  std::vector<bool> parity_h(pc.circuit.size(), false);
  for (std::size_t g = 0; g < pc.circuit.size(); ++g) {
    const auto& gate = pc.circuit.gates()[g];
    if (gate.kind != GateKind::H) continue;
    const std::size_t w = gate.wires[0];
    if (w >= n) {
      parity_h[g] = true;
      continue;
    }
    // Every column contributes 3n+1 gates; the row H is the middle of a triple.
    row_h[g] = std::pair{w, g / (3 * n + 1)};
  }
  SubstitutionMap sub;
  for (VarId v = 0; v < vars.size(); ++v) {
    const auto [id, index] = vars.entry(v);
    sub[v] = Substitution::one();
    if (id < q || id >= q + pc.circuit.size()) continue;
    const std::size_t g = id - q;
    const bool out = (index >> 1) & 1u;
    const bool in = index & 1u;
    if (parity_h[g]) {
      if (out || !in) sub[v] = Substitution::zero();
    } else if (row_h[g]) {
      if (!out && in) sub[v] = Substitution::zero();
      else if (out && !in) sub[v] = Substitution::to_var(matrix_var(n, row_h[g]->first, row_h[g]->second));
    }
  }
  return sub;
}

nlohmann::json to_json(const PermCircuit& pc) {
  return {{"n", pc.n},
          {"circuit", to_json(pc.circuit)},
          {"in_state", format_bits(pc.in_state)},
          {"out_state", format_bits(pc.out_state)},
          {"depth", pc.depth},
          {"target_depth", pc.target_depth},
          {"depth_gap", static_cast<long long>(pc.depth) - static_cast<long long>(pc.target_depth)},
          {"width", pc.circuit.num_qubits()}};
}

}  // namespace mbl
