#include "mbl/simulator.hpp"

#include <chrono>
#include <cmath>
#include <sstream>
#include <unordered_map>

#include "mbl/skeleton.hpp"

namespace mbl {

std::string_view to_string(Method m) {
  switch (m) {
    case Method::Statevector: return "statevector";
    case Method::Contraction: return "contraction";
    case Method::MonotoneEval: return "monotone-eval";
  }
  return "?";
}

nlohmann::json to_json(const AmplitudeResult& r) {
  nlohmann::json j = {{"method", to_string(r.method)}, {"value", {r.value.real(), r.value.imag()}}};
  j["multiplications"] = r.multiplications ? nlohmann::json(*r.multiplications) : nlohmann::json(nullptr);
  return j;
}

namespace {

std::uint64_t to_key(const Bits& b) {
  if (b.size() > 64) throw CapExceeded("statevector simulation is limited to 64 qubits");
  std::uint64_t k = 0;
  for (std::size_t w = 0; w < b.size(); ++w)
    if (b[w]) k |= std::uint64_t{1} << w;
  return k;
}

void check_states(const QuantumCircuit& c, const Bits& in, const Bits& out) {
  if (in.size() != c.num_qubits() || out.size() != c.num_qubits())
    throw ShapeError("boundary states must have one bit per qubit");
  if (c.num_qubits() > 64) throw CapExceeded("statevector simulation is limited to 64 qubits");
}

// Local index of `key` on the gate's wires, wires[0] most significant.
std::uint64_t local_index(std::uint64_t key, const std::vector<std::size_t>& wires) {
  std::uint64_t idx = 0;
  for (auto w : wires) idx = (idx << 1) | ((key >> w) & 1u);
  return idx;
}

std::uint64_t with_local(std::uint64_t key, const std::vector<std::size_t>& wires, std::uint64_t idx) {
  const std::size_t k = wires.size();
  for (std::size_t p = 0; p < k; ++p) {
    const std::uint64_t bit = (idx >> (k - 1 - p)) & 1u;
    key = (key & ~(std::uint64_t{1} << wires[p])) | (bit << wires[p]);
  }
  return key;
}

// Image of a basis state under a permutation gate.
std::uint64_t permute(const Gate& g, std::uint64_t key) {
  switch (g.kind) {
    case GateKind::Not:
    case GateKind::X: return key ^ (std::uint64_t{1} << g.wires[0]);
    case GateKind::Cnot: return ((key >> g.wires[0]) & 1u) ? key ^ (std::uint64_t{1} << g.wires[1]) : key;
    case GateKind::Toffoli:
      return (((key >> g.wires[0]) & 1u) && ((key >> g.wires[1]) & 1u)) ? key ^ (std::uint64_t{1} << g.wires[2])
                                                                          : key;
    default: throw std::logic_error("not a permutation gate");
  }
}

bool is_permutation(GateKind k) {
  return k == GateKind::Not || k == GateKind::X || k == GateKind::Cnot || k == GateKind::Toffoli;
}

template <class V>
using State = std::unordered_map<std::uint64_t, V>;

template <class V>
void check_budget(const State<V>& s, const RunConfig& cfg) {
  if (s.size() > cfg.amplitude_budget) throw CapExceeded("statevector exceeds the live-amplitude budget");
}

}  // namespace

Complex statevector_amplitude(const QuantumCircuit& c, const Bits& in_state, const Bits& out_state,
                              const RunConfig& cfg) {
  check_states(c, in_state, out_state);
  State<Complex> state{{to_key(in_state), Complex(1)}};
  for (const auto& g : c.gates()) {
    State<Complex> next;
    next.reserve(state.size());
    if (is_permutation(g.kind)) {
      for (const auto& [k, a] : state) next.emplace(permute(g, k), a);
    } else {
      const Matrix u = unitary(g);
      const std::uint64_t dim = std::uint64_t{1} << g.wires.size();
      for (const auto& [k, a] : state) {
        const std::uint64_t col = local_index(k, g.wires);
        for (std::uint64_t row = 0; row < dim; ++row) {
          const Complex f = u[row * dim + col];
          if (f != Complex(0)) next[with_local(k, g.wires, row)] += f * a;
        }
      }
      std::erase_if(next, [](const auto& kv) { return kv.second == Complex(0); });
    }
    check_budget(next, cfg);
    state = std::move(next);
  }
  auto it = state.find(to_key(out_state));
  return it == state.end() ? Complex(0) : it->second;
}

std::optional<Rational> ExactAmplitude::rational() const {
  if (numerator == 0) return Rational(0);
  if (hadamards % 2) return std::nullopt;
  return Rational(numerator, BigInt(1) << (hadamards / 2));
}

double ExactAmplitude::value() const {
  return static_cast<double>(numerator) * std::pow(2.0, -static_cast<double>(hadamards) / 2);
}

std::string ExactAmplitude::str() const {
  if (auto r = rational()) return r->str();
  std::ostringstream os;
  os << numerator << "*2^(-" << hadamards << "/2)";
  return os.str();
}

ExactAmplitude exact_amplitude(const QuantumCircuit& c, const Bits& in_state, const Bits& out_state,
                               const RunConfig& cfg) {
  check_states(c, in_state, out_state);
  State<BigInt> state{{to_key(in_state), BigInt(1)}};
  std::size_t h = 0;
  for (const auto& g : c.gates()) {
    State<BigInt> next;
    next.reserve(state.size());
    if (is_permutation(g.kind)) {
      for (auto& [k, a] : state) next.emplace(permute(g, k), std::move(a));
    } else if (g.kind == GateKind::Cz) {
      const std::uint64_t mask = (std::uint64_t{1} << g.wires[0]) | (std::uint64_t{1} << g.wires[1]);
      for (auto& [k, a] : state) next.emplace(k, (k & mask) == mask ? BigInt(-a) : std::move(a));
    } else if (g.kind == GateKind::H) {
      const std::uint64_t bit = std::uint64_t{1} << g.wires[0];
      for (const auto& [k, a] : state) {
        next[k & ~bit] += a;
        next[k | bit] += (k & bit) ? BigInt(-a) : a;
      }
      std::erase_if(next, [](const auto& kv) { return kv.second == 0; });
      ++h;
    } else {
      throw std::invalid_argument("exact mode supports H, X, NOT, CNOT, TOFFOLI and CZ only");
    }
    check_budget(next, cfg);
    state = std::move(next);
  }
  auto it = state.find(to_key(out_state));
  return {it == state.end() ? BigInt(0) : it->second, h};
}

std::vector<AmplitudeResult> crosscheck_amplitude(const QuantumCircuit& c, const Bits& in_state,
                                                  const Bits& out_state, const RunConfig& cfg,
                                                  const NetworkHook& hook) {
  using clock = std::chrono::steady_clock;
  auto seconds = [](clock::time_point t0) { return std::chrono::duration<double>(clock::now() - t0).count(); };
  std::vector<AmplitudeResult> results;

  auto t0 = clock::now();
  const Complex sv = statevector_amplitude(c, in_state, out_state, cfg);
  results.push_back({sv, Method::Statevector, std::nullopt, seconds(t0)});

  auto net = circuit_to_network(c, in_state, out_state);
  if (hook) net = hook(net);
  const auto plan = find_plan(net, cfg.plan);

  t0 = clock::now();
  const Complex direct = contract_all(net, plan);
  results.push_back({direct, Method::Contraction, multiplication_count(net, plan), seconds(t0)});

  t0 = clock::now();
  const auto [skel, vars] = extract_skeleton(net);
  const auto [mc, report] = compile_contraction(skel, plan);
  const auto values = entry_values(net, vars);
  const Complex mono = eval_numeric(mc, values);
  results.push_back({mono, Method::MonotoneEval, report.times_gates, seconds(t0)});

  for (std::size_t a = 0; a < results.size(); ++a)
    for (std::size_t b = a + 1; b < results.size(); ++b)
      if (std::abs(results[a].value - results[b].value) > cfg.tolerance) {
        std::ostringstream os;
        os << "amplitude methods disagree: " << to_string(results[a].method) << " = " << results[a].value << ", "
           << to_string(results[b].method) << " = " << results[b].value;
        throw IntegrityError(os.str(), results);
      }
  return results;
}

}  // namespace mbl
