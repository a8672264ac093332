#include "mbl/sat.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <sstream>
#include <thread>

#include "mbl/tensor_network.hpp"

namespace mbl {

bool SatFormula::eval(std::uint64_t x) const {
  for (const auto& c : clauses) {
    bool sat = false;
    for (const auto& l : c)
      if ((((x >> l.var) & 1u) != 0) != l.negated) {
        sat = true;
        break;
      }
    if (!sat) return false;
  }
  return true;
}

void validate_formula(const SatFormula& f) {
  for (const auto& c : f.clauses) {
    if (c.empty()) throw DimacsError("empty clause");
    if (c.size() > 2 * f.n) throw DimacsError("clause longer than the literal count");
    for (std::size_t a = 0; a < c.size(); ++a) {
      if (c[a].var >= f.n) throw DimacsError("literal out of range");
      for (std::size_t b = a + 1; b < c.size(); ++b)
        if (c[a] == c[b]) throw DimacsError("literal repeated within a clause");
    }
  }
}

SatFormula parse_dimacs(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  SatFormula f;
  std::size_t declared_m = 0;
  bool header = false;
  Clause current;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    if (first == "c") continue;
    if (first == "%") break;
    if (first == "p") {
      std::string fmt;
      long long n = -1, m = -1;
      if (header || !(ls >> fmt >> n >> m) || fmt != "cnf" || n < 0 || m < 0)
        throw DimacsError("malformed header: " + line);
      std::string extra;
      if (ls >> extra) throw DimacsError("malformed header: " + line);
      f.n = static_cast<std::size_t>(n);
      declared_m = static_cast<std::size_t>(m);
      header = true;
      continue;
    }
    if (!header) throw DimacsError("clause before the p cnf header");
    ls.clear();
    ls.str(line);
    long long lit = 0;
    while (ls >> lit) {
      if (lit == 0) {
        if (current.empty()) throw DimacsError("empty clause");
        f.clauses.push_back(std::move(current));
        current.clear();
        continue;
      }
      const auto v = static_cast<std::size_t>(std::llabs(lit));
      if (v > f.n) throw DimacsError("literal out of range: " + std::to_string(lit));
      current.push_back({v - 1, lit < 0});
    }
    if (!ls.eof()) throw DimacsError("bad token in: " + line);
  }
  if (!header) throw DimacsError("missing p cnf header");
  if (!current.empty()) throw DimacsError("clause not terminated by 0");
  if (f.clauses.size() != declared_m) throw DimacsError("clause count does not match the header");
  validate_formula(f);
  return f;
}

std::string to_dimacs(const SatFormula& f) {
  std::ostringstream os;
  os << "p cnf " << f.n << ' ' << f.m() << '\n';
  for (const auto& c : f.clauses) {
    for (const auto& l : c) os << (l.negated ? "-" : "") << l.var + 1 << ' ';
    os << "0\n";
  }
  return os.str();
}

namespace {

std::size_t worker_count() {
  std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("MBL_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) hw = std::min(hw, static_cast<std::size_t>(v));
  }
  return hw;
}

}  // namespace

std::uint64_t count_sat_bruteforce(const SatFormula& f) {
  if (f.n > kMaxBruteforceVars) throw CapExceeded("brute-force counting is limited to 24 variables");
  validate_formula(f);
  // Clause i is satisfied by x iff (x & pos) != 0 or (~x & neg) != 0.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> masks;
  for (const auto& c : f.clauses) {
    std::uint64_t pos = 0, neg = 0;
    for (const auto& l : c) (l.negated ? neg : pos) |= std::uint64_t{1} << l.var;
    masks.emplace_back(pos, neg);
  }
  const std::uint64_t total = std::uint64_t{1} << f.n;
  auto count_range = [&](std::uint64_t lo, std::uint64_t hi) {
    std::uint64_t c = 0;
    for (std::uint64_t x = lo; x < hi; ++x) {
      bool ok = true;
      for (auto [pos, neg] : masks)
        if (!((x & pos) | (~x & neg))) {
          ok = false;
          break;
        }
      c += ok;
    }
    return c;
  };
  const std::size_t workers = std::min<std::uint64_t>(worker_count(), std::max<std::uint64_t>(1, total >> 12));
  if (workers <= 1) return count_range(0, total);
  std::vector<std::uint64_t> partial(workers, 0);
  std::vector<std::thread> threads;
  for (std::size_t t = 0; t < workers; ++t)
    threads.emplace_back([&, t] { partial[t] = count_range(total * t / workers, total * (t + 1) / workers); });
  for (auto& th : threads) th.join();
  return std::accumulate(partial.begin(), partial.end(), std::uint64_t{0});
}

ReversibleCircuit literal_circuit(const Literal& l, std::size_t n) {
  if (l.var >= n) throw ShapeError("literal variable out of range");
  std::vector<std::size_t> inputs(n);
  std::iota(inputs.begin(), inputs.end(), 0);
  std::vector<Gate> gates{Gate::cnot(l.var, n)};
  if (l.negated) gates.push_back(Gate::not_gate(n));
  return ReversibleCircuit(n + 1, {inputs, {}, n}, std::move(gates));
}

namespace {

// Untidy circuits in this module keep inputs at [0, n) and the output on the last wire.
void check_layout(const ReversibleCircuit& u) {
  const auto& r = u.roles();
  for (std::size_t k = 0; k < r.inputs.size(); ++k)
    if (r.inputs[k] != k) throw ShapeError("inputs must occupy the first wires");
  if (r.output != u.width() - 1) throw ShapeError("output must be the last wire");
}

ReversibleCircuit gadget(const ReversibleCircuit& u1, const ReversibleCircuit& u2, bool is_or) {
  check_layout(u1);
  check_layout(u2);
  const std::size_t n = u1.num_inputs();
  if (u2.num_inputs() != n) throw ShapeError("gadget operands must share the input register");
  const std::size_t w = std::max(u1.width(), u2.width()) + 2;
  const std::size_t a = w - 2, b = w - 1;
  const std::size_t o1 = u1.roles().output, o2 = u2.roles().output;

  std::vector<Gate> gates;
  gates.reserve(2 * u1.size() + u2.size() + (is_or ? 5 : 2));
  gates.insert(gates.end(), u1.gates().begin(), u1.gates().end());
  gates.push_back(Gate::cnot(o1, a));
  if (is_or) gates.push_back(Gate::not_gate(a));
  gates.insert(gates.end(), u1.gates().rbegin(), u1.gates().rend());
  gates.insert(gates.end(), u2.gates().begin(), u2.gates().end());
  if (is_or) gates.push_back(Gate::not_gate(o2));
  gates.push_back(Gate::toffoli(a, o2, b));
  if (is_or) gates.push_back(Gate::not_gate(b));

  std::vector<std::size_t> inputs(n), ancillas;
  std::iota(inputs.begin(), inputs.end(), 0);
  for (std::size_t k = n; k < b; ++k) ancillas.push_back(k);
  ReversibleCircuit out(w, {inputs, ancillas, b}, std::move(gates));
  const std::size_t expected = 2 * u1.size() + u2.size() + (is_or ? 5 : 2);
  if (out.size() != expected) throw std::logic_error("gadget size formula violated");
  return out;
}

template <class Combine>
ReversibleCircuit tree(const std::vector<ReversibleCircuit>& cs, std::size_t lo, std::size_t hi, Combine&& combine) {
  if (hi - lo == 1) return cs[lo];
  const std::size_t mid = lo + (hi - lo + 1) / 2;
  return combine(tree(cs, lo, mid, combine), tree(cs, mid, hi, combine));
}

}  // namespace

ReversibleCircuit and_gadget(const ReversibleCircuit& u1, const ReversibleCircuit& u2) { return gadget(u1, u2, false); }
ReversibleCircuit or_gadget(const ReversibleCircuit& u1, const ReversibleCircuit& u2) { return gadget(u1, u2, true); }

ReversibleCircuit tree_and(const std::vector<ReversibleCircuit>& circuits) {
  if (circuits.empty()) throw std::invalid_argument("tree_and needs at least one circuit");
  return tree(circuits, 0, circuits.size(), and_gadget);
}

ReversibleCircuit tree_or(const std::vector<ReversibleCircuit>& circuits) {
  if (circuits.empty()) throw std::invalid_argument("tree_or needs at least one circuit");
  return tree(circuits, 0, circuits.size(), or_gadget);
}

ReversibleCircuit tidy_wrap(const ReversibleCircuit& u) {
  const std::size_t c = u.width();
  const std::size_t o = u.roles().output;
  std::vector<Gate> gates(u.gates().begin(), u.gates().end());
  gates.push_back(Gate::cnot(o, c));
  gates.insert(gates.end(), u.gates().rbegin(), u.gates().rend());
  auto ancillas = u.roles().ancillas;
  ancillas.push_back(o);
  std::sort(ancillas.begin(), ancillas.end());
  return ReversibleCircuit(c + 1, {u.roles().inputs, std::move(ancillas), c}, std::move(gates));
}

std::size_t ceil_log2(std::size_t k) {
  if (k == 0) throw std::invalid_argument("ceil_log2(0)");
  std::size_t r = 0;
  while ((std::size_t{1} << r) < k) ++r;
  return r;
}

bool CompileCert::pass() const {
  return std::all_of(lines.begin(), lines.end(), [](const BoundLine& l) { return l.pass(); });
}

nlohmann::json to_json(const CompileCert& c) {
  nlohmann::json lines = nlohmann::json::array();
  for (const auto& l : c.lines)
    lines.push_back({{"name", l.name}, {"measured", l.measured.str()}, {"bound", l.bound.str()}, {"pass", l.pass()}});
  return {{"n", c.n},
          {"m", c.m},
          {"untidy", {{"size", c.untidy_size}, {"width", c.untidy_width}}},
          {"tidy", {{"size", c.tidy_size}, {"width", c.tidy_width}}},
          {"bounds", std::move(lines)},
          {"pass", c.pass()}};
}

namespace {

BigInt pow3(std::size_t e) {
  BigInt r = 1;
  for (std::size_t k = 0; k < e; ++k) r *= 3;
  return r;
}

// Smaller circuits first so the larger ones land on the right, where the gadgets use them once.
void order_by_size(std::vector<ReversibleCircuit>& cs) {
  std::stable_sort(cs.begin(), cs.end(), [](const auto& a, const auto& b) { return a.size() < b.size(); });
}

}  // namespace

std::pair<ReversibleCircuit, CompileCert> compile_untidy(const SatFormula& f) {
  if (f.n == 0 || f.m() == 0) throw std::invalid_argument("compilation needs n, m >= 1");
  validate_formula(f);
  CompileCert cert;
  cert.n = f.n;
  cert.m = f.m();
  const std::size_t L = ceil_log2(f.n), M = ceil_log2(f.m());

  std::vector<ReversibleCircuit> clause_circuits;
  std::size_t max_clause = 0;
  for (std::size_t i = 0; i < f.m(); ++i) {
    std::vector<ReversibleCircuit> lits;
    std::size_t s = 0;
    for (const auto& l : f.clauses[i]) {
      lits.push_back(literal_circuit(l, f.n));
      s = std::max(s, lits.back().size());
    }
    order_by_size(lits);
    auto c = lits.size() == 1 ? lits.front() : tree_or(lits);
    // floor(3^K (s + 5/2) - 5/2) = (3^K (2s + 5) - 5) / 2, always an integer.
    const std::size_t K = ceil_log2(lits.size());
    cert.lines.push_back({"or_tree[" + std::to_string(i) + "] size", c.size(), (pow3(K) * (2 * s + 5) - 5) / 2});
    cert.lines.push_back(
        {"or_tree[" + std::to_string(i) + "] width", c.width(), BigInt(f.n + 1 + 2 * K)});
    max_clause = std::max(max_clause, c.size());
    clause_circuits.push_back(std::move(c));
  }
  const std::size_t max_clause_width =
      std::max_element(clause_circuits.begin(), clause_circuits.end(), [](const auto& a, const auto& b) {
        return a.width() < b.width();
      })->width();
  order_by_size(clause_circuits);
  auto u = tree_and(clause_circuits);
  cert.lines.push_back({"and_tree size", u.size(), pow3(M) * (max_clause + 1) - 1});
  cert.lines.push_back({"and_tree width", u.width(), BigInt(max_clause_width + 2 * M)});
  cert.untidy_size = u.size();
  cert.untidy_width = u.width();
  cert.lines.push_back({"untidy size", u.size(), 4 * pow3(L + M) - 1});
  cert.lines.push_back({"untidy width", u.width(), BigInt(f.n + 1 + 2 * (L + M))});
  return {std::move(u), std::move(cert)};
}

std::pair<ReversibleCircuit, CompileCert> compile_tidy(const SatFormula& f) {
  auto [u, cert] = compile_untidy(f);
  auto t = tidy_wrap(u);
  const std::size_t L = ceil_log2(f.n), M = ceil_log2(f.m());
  cert.tidy_size = t.size();
  cert.tidy_width = t.width();
  cert.lines.push_back({"tidy size = 2s+1", t.size(), BigInt(2 * u.size() + 1)});
  cert.lines.push_back({"tidy size", t.size(), 8 * pow3(L + M) - 1});
  cert.lines.push_back({"tidy width", t.width(), BigInt(f.n + 2 * (L + M))});
  return {std::move(t), std::move(cert)};
}

QuantumCircuit build_cphi(const SatFormula& f) {
  const auto [tidy, cert] = compile_tidy(f);
  const auto lifted = lift_to_quantum(tidy);
  std::vector<Gate> gates;
  for (auto w : tidy.roles().inputs) gates.push_back(Gate::h(w));
  gates.insert(gates.end(), lifted.gates().begin(), lifted.gates().end());
  for (auto w : tidy.roles().inputs) gates.push_back(Gate::h(w));
  gates.push_back(Gate::x(tidy.roles().output));
  return QuantumCircuit(tidy.width(), std::move(gates), tidy.roles());
}

bool decide_sat(double amp_estimate, std::size_t n) {
  return amp_estimate >= std::ldexp(1.0, -static_cast<int>(n)) / 2;
}

SatFormula random_cnf(std::mt19937_64& rng, std::size_t n_max, std::size_t m_max) {
  if (n_max == 0 || m_max == 0) throw std::invalid_argument("random_cnf needs n_max, m_max >= 1");
  SatFormula f;
  f.n = std::uniform_int_distribution<std::size_t>(1, n_max)(rng);
  const std::size_t m = std::uniform_int_distribution<std::size_t>(1, m_max)(rng);
  std::vector<std::size_t> vars(f.n);
  std::iota(vars.begin(), vars.end(), 0);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t k = std::uniform_int_distribution<std::size_t>(1, f.n)(rng);
    std::shuffle(vars.begin(), vars.end(), rng);
    Clause c;
    for (std::size_t t = 0; t < k; ++t) c.push_back({vars[t], std::bernoulli_distribution(0.5)(rng)});
    std::sort(c.begin(), c.end(), [](const Literal& a, const Literal& b) { return a.var < b.var; });
    f.clauses.push_back(std::move(c));
  }
  return f;
}

}  // namespace mbl
