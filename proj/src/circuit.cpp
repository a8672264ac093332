#include "mbl/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

namespace mbl {

namespace {

bool disjoint_cover(const WireRoles& roles, std::size_t width) {
  std::vector<int> seen(width, 0);
  auto mark = [&](std::size_t w) {
    if (w >= width) return false;
    return ++seen[w] == 1;
  };
  for (auto w : roles.inputs)
    if (!mark(w)) return false;
  for (auto w : roles.ancillas)
    if (!mark(w)) return false;
  if (!mark(roles.output)) return false;
  return std::all_of(seen.begin(), seen.end(), [](int s) { return s == 1; });
}

}  // namespace

Bits parse_bits(std::string_view text) {
  Bits out;
  out.reserve(text.size());
  for (char ch : text) {
    if (ch != '0' && ch != '1') throw std::invalid_argument("bitstring may only contain 0 and 1");
    out.push_back(static_cast<std::uint8_t>(ch - '0'));
  }
  return out;
}

std::string format_bits(const Bits& bits) {
  std::string s;
  for (auto b : bits) s.push_back(b ? '1' : '0');
  return s;
}

std::string_view to_string(GateKind kind) {
  switch (kind) {
    case GateKind::Toffoli: return "TOFFOLI";
    case GateKind::Cnot: return "CNOT";
    case GateKind::Not: return "NOT";
    case GateKind::H: return "H";
    case GateKind::X: return "X";
    case GateKind::Cz: return "CZ";
    case GateKind::T: return "T";
    case GateKind::Generic: return "GENERIC";
  }
  return "?";
}

GateKind gate_kind_from_string(std::string_view name) {
  for (auto k : {GateKind::Toffoli, GateKind::Cnot, GateKind::Not, GateKind::H, GateKind::X,
                 GateKind::Cz, GateKind::T, GateKind::Generic})
    if (to_string(k) == name) return k;
  throw std::invalid_argument("unknown gate kind: " + std::string(name));
}

std::size_t fixed_arity(GateKind kind) {
  switch (kind) {
    case GateKind::Toffoli: return 3;
    case GateKind::Cnot:
    case GateKind::Cz: return 2;
    case GateKind::Not:
    case GateKind::H:
    case GateKind::X:
    case GateKind::T: return 1;
    case GateKind::Generic: return 0;
  }
  return 0;
}

Gate Gate::toffoli(std::size_t c1, std::size_t c2, std::size_t target) {
  return {GateKind::Toffoli, {c1, c2, target}, std::nullopt};
}
Gate Gate::cnot(std::size_t control, std::size_t target) {
  return {GateKind::Cnot, {control, target}, std::nullopt};
}
Gate Gate::not_gate(std::size_t wire) { return {GateKind::Not, {wire}, std::nullopt}; }
Gate Gate::h(std::size_t wire) { return {GateKind::H, {wire}, std::nullopt}; }
Gate Gate::x(std::size_t wire) { return {GateKind::X, {wire}, std::nullopt}; }
Gate Gate::cz(std::size_t a, std::size_t b) { return {GateKind::Cz, {a, b}, std::nullopt}; }
Gate Gate::t(std::size_t wire) { return {GateKind::T, {wire}, std::nullopt}; }
Gate Gate::generic(std::vector<std::size_t> wires, Matrix matrix) {
  return {GateKind::Generic, std::move(wires), std::move(matrix)};
}

Matrix unitary(const Gate& gate) {
  const double r = 1.0 / std::numbers::sqrt2;
  switch (gate.kind) {
    case GateKind::Not:
    case GateKind::X: return {0, 1, 1, 0};
    case GateKind::H: return {r, r, r, -r};
    case GateKind::T: return {1, 0, 0, std::polar(1.0, std::numbers::pi / 4)};
    case GateKind::Cz: {
      Matrix m(16, 0.0);
      for (int i = 0; i < 4; ++i) m[i * 4 + i] = (i == 3) ? -1.0 : 1.0;
      return m;
    }
    case GateKind::Cnot:
    case GateKind::Toffoli: {
      const std::size_t k = fixed_arity(gate.kind);
      const std::size_t dim = std::size_t{1} << k;
      const std::size_t controls = dim - 2;  // all control bits set, target clear
      Matrix m(dim * dim, 0.0);
      for (std::size_t in = 0; in < dim; ++in) {
        std::size_t out = ((in & controls) == controls) ? (in ^ 1u) : in;
        m[out * dim + in] = 1.0;
      }
      return m;
    }
    case GateKind::Generic:
      if (!gate.matrix) throw ShapeError("GENERIC gate without matrix");
      return *gate.matrix;
  }
  return {};
}

void validate_gate(const Gate& gate, std::size_t width) {
  const std::size_t k = gate.kind == GateKind::Generic ? gate.wires.size() : fixed_arity(gate.kind);
  if (gate.wires.size() != k || k == 0)
    throw ShapeError(std::string(to_string(gate.kind)) + " gate has wrong number of wires");
  std::set<std::size_t> distinct(gate.wires.begin(), gate.wires.end());
  if (distinct.size() != gate.wires.size()) throw ShapeError("gate wires must be distinct");
  for (auto w : gate.wires)
    if (w >= width) throw ShapeError("gate wire index out of range");
  if (gate.kind == GateKind::Generic) {
    if (!gate.matrix) throw ShapeError("GENERIC gate needs a matrix");
    const std::size_t dim = std::size_t{1} << k;
    const auto& m = *gate.matrix;
    if (m.size() != dim * dim) throw ShapeError("GENERIC matrix has wrong dimension");
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j) {
        Complex dot = 0;
        for (std::size_t r = 0; r < dim; ++r) dot += std::conj(m[r * dim + i]) * m[r * dim + j];
        if (std::abs(dot - Complex(i == j ? 1.0 : 0.0)) > 1e-9)
          throw ShapeError("GENERIC matrix is not unitary");
      }
  } else if (gate.matrix) {
    throw ShapeError("only GENERIC gates carry a matrix");
  }
}

ReversibleCircuit::ReversibleCircuit(std::size_t width, WireRoles roles, std::vector<Gate> gates)
    : width_(width), roles_(std::move(roles)), gates_(std::move(gates)) {
  if (!disjoint_cover(roles_, width_))
    throw ShapeError("wire roles must partition [0, width)");
  for (const auto& g : gates_) {
    if (!g.is_reversible()) throw ShapeError("reversible circuits accept TOFFOLI, CNOT and NOT only");
    validate_gate(g, width_);
  }
}

QuantumCircuit::QuantumCircuit(std::size_t num_qubits, std::vector<Gate> gates,
                               std::optional<WireRoles> roles)
    : num_qubits_(num_qubits), gates_(std::move(gates)), roles_(std::move(roles)) {
  for (const auto& g : gates_) validate_gate(g, num_qubits_);
  if (roles_ && !disjoint_cover(*roles_, num_qubits_))
    throw ShapeError("wire roles must partition [0, num_qubits)");
}

Bits apply_reversible(const ReversibleCircuit& c, const Bits& x) {
  if (x.size() != c.width()) throw ShapeError("input length does not match circuit width");
  Bits s = x;
  for (const auto& g : c.gates()) {
    const auto& w = g.wires;
    switch (g.kind) {
      case GateKind::Not: s[w[0]] ^= 1; break;
      case GateKind::Cnot: s[w[1]] ^= s[w[0]]; break;
      case GateKind::Toffoli: s[w[2]] ^= (s[w[0]] & s[w[1]]); break;
      default: throw ShapeError("non-reversible gate");
    }
  }
  return s;
}

void apply_bitsliced(std::span<const Gate> gates, std::span<std::uint64_t> lanes) {
  for (const auto& g : gates) {
    const auto& w = g.wires;
    switch (g.kind) {
      case GateKind::Not:
      case GateKind::X: lanes[w[0]] = ~lanes[w[0]]; break;
      case GateKind::Cnot: lanes[w[1]] ^= lanes[w[0]]; break;
      case GateKind::Toffoli: lanes[w[2]] ^= (lanes[w[0]] & lanes[w[1]]); break;
      default: throw ShapeError("bit-sliced evaluation needs reversible gates");
    }
  }
}

ReversibleCircuit inverse(const ReversibleCircuit& c) {
  std::vector<Gate> gates(c.gates().rbegin(), c.gates().rend());
  return ReversibleCircuit(c.width(), c.roles(), std::move(gates));
}

CircuitMetrics metrics(const ReversibleCircuit& c) { return {c.size(), c.width()}; }
CircuitMetrics metrics(const QuantumCircuit& c) { return {c.size(), c.num_qubits()}; }

std::size_t depth(const QuantumCircuit& c) {
  std::vector<std::size_t> level(c.num_qubits(), 0);
  std::size_t d = 0;
  for (const auto& g : c.gates()) {
    std::size_t l = 0;
    for (auto w : g.wires) l = std::max(l, level[w]);
    ++l;
    for (auto w : g.wires) level[w] = l;
    d = std::max(d, l);
  }
  return d;
}

namespace {

// Fills lanes for inputs x in [base, base + 64): input k gets bit k of x.
void load_inputs(const WireRoles& roles, std::uint64_t base, std::span<std::uint64_t> lanes) {
  for (std::size_t k = 0; k < roles.inputs.size(); ++k) {
    std::uint64_t lane = 0;
    for (unsigned t = 0; t < 64; ++t)
      if (((base + t) >> k) & 1u) lane |= std::uint64_t{1} << t;
    lanes[roles.inputs[k]] = lane;
  }
}

}  // namespace

bool check_tidy(const ReversibleCircuit& c, const BooleanFunction& f) {
  const auto& roles = c.roles();
  const std::size_t n = roles.inputs.size();
  if (n + roles.ancillas.size() + 1 != c.width()) throw ShapeError("role sizes do not add up to width");
  if (n > 16) throw ShapeError("check_tidy is exhaustive and limited to n <= 16");
  const std::uint64_t total = std::uint64_t{1} << n;
  std::vector<std::uint64_t> lanes(c.width());
  for (std::uint64_t base = 0; base < total; base += 64) {
    const unsigned live = static_cast<unsigned>(std::min<std::uint64_t>(64, total - base));
    const std::uint64_t mask = live == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << live) - 1);
    std::uint64_t fx = 0;
    for (unsigned t = 0; t < live; ++t)
      if (f(base + t)) fx |= std::uint64_t{1} << t;
    for (std::uint64_t y : {std::uint64_t{0}, ~std::uint64_t{0}}) {
      std::fill(lanes.begin(), lanes.end(), 0);
      load_inputs(roles, base, lanes);
      lanes[roles.output] = y;
      std::vector<std::uint64_t> before = lanes;
      apply_bitsliced(c.gates(), lanes);
      for (auto w : roles.inputs)
        if ((lanes[w] ^ before[w]) & mask) return false;
      for (auto w : roles.ancillas)
        if (lanes[w] & mask) return false;
      if ((lanes[roles.output] ^ (y ^ fx)) & mask) return false;
    }
  }
  return true;
}

std::vector<bool> output_truth_table(const ReversibleCircuit& c) {
  const std::size_t n = c.num_inputs();
  if (n > 20) throw ShapeError("truth tables are limited to n <= 20");
  const std::uint64_t total = std::uint64_t{1} << n;
  std::vector<bool> table(total);
  std::vector<std::uint64_t> lanes(c.width());
  for (std::uint64_t base = 0; base < total; base += 64) {
    std::fill(lanes.begin(), lanes.end(), 0);
    load_inputs(c.roles(), base, lanes);
    apply_bitsliced(c.gates(), lanes);
    for (std::uint64_t t = 0; t < 64 && base + t < total; ++t)
      table[base + t] = (lanes[c.roles().output] >> t) & 1u;
  }
  return table;
}

QuantumCircuit lift_to_quantum(const ReversibleCircuit& c) {
  std::vector<Gate> gates;
  gates.reserve(c.size());
  for (const auto& g : c.gates()) {
    if (g.kind == GateKind::Not)
      gates.push_back(Gate::x(g.wires[0]));
    else
      gates.push_back(g);
  }
  return QuantumCircuit(c.width(), std::move(gates), c.roles());
}

nlohmann::json to_json(const Gate& g) {
  nlohmann::json j;
  j["kind"] = std::string(to_string(g.kind));
  j["wires"] = g.wires;
  if (g.matrix) {
    nlohmann::json m = nlohmann::json::array();
    for (const auto& z : *g.matrix) m.push_back({z.real(), z.imag()});
    j["matrix"] = std::move(m);
  }
  return j;
}

Gate gate_from_json(const nlohmann::json& j) {
  Gate g{gate_kind_from_string(j.at("kind").get<std::string>()),
         j.at("wires").get<std::vector<std::size_t>>(), std::nullopt};
  if (j.contains("matrix")) {
    Matrix m;
    for (const auto& z : j.at("matrix")) m.emplace_back(z.at(0).get<double>(), z.at(1).get<double>());
    g.matrix = std::move(m);
  }
  return g;
}

namespace {

nlohmann::json roles_json(const WireRoles& r) {
  return {{"inputs", r.inputs}, {"ancillas", r.ancillas}, {"output", r.output}};
}

WireRoles roles_from_json(const nlohmann::json& j) {
  return {j.at("inputs").get<std::vector<std::size_t>>(),
          j.at("ancillas").get<std::vector<std::size_t>>(), j.at("output").get<std::size_t>()};
}

std::vector<Gate> gates_from_json(const nlohmann::json& j) {
  std::vector<Gate> gates;
  for (const auto& g : j.at("gates")) gates.push_back(gate_from_json(g));
  return gates;
}

}  // namespace

nlohmann::json to_json(const ReversibleCircuit& c) {
  nlohmann::json gates = nlohmann::json::array();
  for (const auto& g : c.gates()) gates.push_back(to_json(g));
  return {{"width", c.width()}, {"roles", roles_json(c.roles())}, {"gates", std::move(gates)}};
}

nlohmann::json to_json(const QuantumCircuit& c) {
  nlohmann::json gates = nlohmann::json::array();
  for (const auto& g : c.gates()) gates.push_back(to_json(g));
  nlohmann::json j = {{"width", c.num_qubits()}, {"gates", std::move(gates)}};
  if (c.roles()) j["roles"] = roles_json(*c.roles());
  return j;
}

ReversibleCircuit reversible_from_json(const nlohmann::json& j) {
  return ReversibleCircuit(j.at("width").get<std::size_t>(), roles_from_json(j.at("roles")),
                           gates_from_json(j));
}

QuantumCircuit quantum_from_json(const nlohmann::json& j) {
  std::optional<WireRoles> roles;
  if (j.contains("roles")) roles = roles_from_json(j.at("roles"));
  return QuantumCircuit(j.at("width").get<std::size_t>(), gates_from_json(j), std::move(roles));
}

}  // namespace mbl
