// Runs every acceptance criterion and prints one PASS/FAIL line per criterion.
// Exit status is nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "corpus.hpp"
#include "mbl/instances.hpp"
#include "mbl/monotone.hpp"
#include "mbl/permanent.hpp"
#include "mbl/sat.hpp"
#include "mbl/simulator.hpp"
#include "mbl/skeleton.hpp"
#include "oracles.hpp"

using namespace mbl;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double time_limit;  // seconds
  std::function<Outcome()> body;
};

template <class... T>
std::string fmt(const char* f, T... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Outcome bell_polynomial() {
  const auto net = circuit_to_network(bell_hadamard_circuit(), {0, 0}, {0, 0});
  const auto [s, vars] = extract_skeleton(net);
  const auto p = associated_polynomial(s);
  bool unit = true;
  for (const auto& [m, c] : p.terms()) unit = unit && c == 1;
  const bool iso = isomorphic(p, bell_hadamard_reference_polynomial());
  return {iso && unit && p.num_terms() == 2 && p.degree() == 8,
          fmt("%zu monomials, degree %zu, %zu variables, isomorphic=%d", p.num_terms(), p.degree(), vars.size(),
              int(iso))};
}

Outcome fragment_counts() {
  const auto frag = diagonal_fragment_network();
  const auto naive = multiplication_count(frag, find_plan(frag, PlanMode::Greedy));
  const auto pre = preprocess_diagonal(frag);
  const auto fused = multiplication_count(pre, find_plan(pre, PlanMode::Greedy));
  return {naive == 40 && fused == 12,
          fmt("naive %llu, preprocessed %llu", (unsigned long long)naive, (unsigned long long)fused)};
}

Outcome monotone_soundness() {
  std::mt19937_64 rng(3001);
  const std::vector<GateKind> kinds{GateKind::H, GateKind::Cnot, GateKind::T, GateKind::Cz, GateKind::X};
  std::size_t checked = 0, bad = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto c = oracle::random_circuit(rng, 1 + rng() % 4, rng() % 7, kinds);
    const auto net =
        circuit_to_network(c, oracle::random_bits(rng, c.num_qubits()), oracle::random_bits(rng, c.num_qubits()));
    const auto [s, vars] = extract_skeleton(net);
    const auto reference = associated_polynomial(s);
    for (auto mode : {PlanMode::Greedy, PlanMode::LeftToRight}) {
      const auto [mc, report] = compile_contraction(s, find_plan(s.shape, mode));
      bad += expand_symbolic(mc) != reference;
      ++checked;
    }
  }
  return {bad == 0, fmt("%zu of %zu (circuit, plan) pairs match", checked - bad, checked)};
}

Outcome permanent_oracle() {
  std::mt19937_64 rng(3002);
  std::size_t checked = 0, bad = 0;
  for (std::size_t n = 2; n <= 7; ++n) {
    const auto [mc, report] = compile_perm_monotone(n);
    for (int k = 0; k < 20; ++k) {
      const auto m = oracle::random_matrix(rng, n, 0, 20);
      bad += eval_perm_circuit(mc, m) != permanent_bruteforce(m);
      ++checked;
    }
  }
  std::size_t sym_bad = 0;
  for (std::size_t n = 2; n <= 5; ++n) sym_bad += expand_symbolic(compile_perm_monotone(n).first) != permanent_polynomial(n);
  return {bad == 0 && sym_bad == 0,
          fmt("%zu of %zu evaluations exact, %zu symbolic mismatches for n <= 5", checked - bad, checked, sym_bad)};
}

Outcome size_window() {
  bool above = true;
  double c_fit = 0;
  std::ostringstream sizes;
  for (std::size_t n = 1; n <= 14; ++n) {
    const auto [mc, report] = compile_perm_monotone(n);
    above = above && BigInt(mc.size()) >= jerrum_snir_bound(n);
    c_fit = std::max(c_fit, double(mc.size()) / (double(n * n) * std::ldexp(1.0, int(n))));
    sizes << (n > 1 ? "," : "") << mc.size();
  }
  return {above && c_fit >= 0.1 && c_fit <= 10,
          fmt("all sizes above the lower bound: %d; fitted c = %.5f; sizes n=1..14: ", int(above), c_fit) + sizes.str()};
}

// A random gadget tree over literals of an n-variable register. Every
// instantiation is checked for its size formula and its truth table.
struct GadgetStats {
  std::size_t nodes = 0, size_bad = 0, semantics_bad = 0;
};

ReversibleCircuit random_gadget_tree(std::mt19937_64& rng, std::size_t n, std::size_t depth, GadgetStats& st,
                                     std::size_t budget) {
  if (depth == 0 || st.nodes >= budget || rng() % 4 == 0) {
    const Literal l{static_cast<std::size_t>(rng() % n), (rng() & 1u) != 0};
    return literal_circuit(l, n);
  }
  const auto u1 = random_gadget_tree(rng, n, depth - 1, st, budget);
  const auto u2 = random_gadget_tree(rng, n, depth - 1, st, budget);
  const bool is_or = rng() & 1u;
  const auto g = is_or ? or_gadget(u1, u2) : and_gadget(u1, u2);
  ++st.nodes;
  st.size_bad += g.size() != 2 * u1.size() + u2.size() + (is_or ? 5 : 2);
  const auto t1 = output_truth_table(u1), t2 = output_truth_table(u2), tg = output_truth_table(g);
  for (std::size_t x = 0; x < tg.size(); ++x)
    if (tg[x] != (is_or ? (t1[x] || t2[x]) : (t1[x] && t2[x]))) {
      ++st.semantics_bad;
      break;
    }
  return g;
}

Outcome gadget_exactness() {
  std::mt19937_64 rng(3003);
  GadgetStats st;
  while (st.nodes < 1000) random_gadget_tree(rng, 1 + rng() % 8, 1 + rng() % 5, st, 1000);
  return {st.size_bad == 0 && st.semantics_bad == 0,
          fmt("%zu gadget instantiations, %zu size mismatches, %zu truth-table mismatches", st.nodes, st.size_bad,
              st.semantics_bad)};
}

Outcome main_certificates() {
  std::mt19937_64 rng(3004);
  std::size_t size_fail = 0, width_fail = 0, tidy_checked = 0, tidy_fail = 0, corrected_fail = 0;
  long worst_width_excess = 0;
  for (int k = 0; k < 100; ++k) {
    const auto f = random_cnf(rng, 16, 16);
    const auto [t, cert] = compile_tidy(f);
    const std::size_t L = ceil_log2(f.n), M = ceil_log2(f.m());
    const BigInt size_bound = 8 * BigInt(boost::multiprecision::pow(BigInt(3), unsigned(L + M))) - 1;
    const std::size_t width_bound = f.n + 2 * (L + M);
    size_fail += BigInt(t.size()) > size_bound;
    width_fail += t.width() > width_bound;
    worst_width_excess = std::max(worst_width_excess, long(t.width()) - long(width_bound));
    // Width counted with the input register plus one output wire.
    corrected_fail += t.width() > f.n + 2 + 2 * (L + M);
    if (f.n <= 8) {
      ++tidy_checked;
      tidy_fail += !check_tidy(t, [&](std::uint64_t x) { return f.eval(x); });
    }
  }
  std::printf("  info: width <= n+2+2(ceil log n + ceil log m) fails on %zu of 100\n", corrected_fail);
  return {size_fail == 0 && width_fail == 0 && tidy_fail == 0,
          fmt("size bound fails %zu/100, width bound fails %zu/100 (worst excess %ld), tidy fails %zu/%zu", size_fail,
              width_fail, worst_width_excess, tidy_fail, tidy_checked)};
}

Outcome counting_identity() {
  const auto formulas = corpus::formulas(44, 10, 10);
  std::size_t exact_bad = 0, float_bad = 0, unsat = 0, taut = 0;
  for (const auto& f : formulas) {
    const auto c = build_cphi(f);
    const Bits z(c.num_qubits(), 0);
    const auto count = count_sat_bruteforce(f);
    const Rational want(BigInt(count), BigInt(1) << f.n);
    exact_bad += exact_amplitude(c, z, z).rational() != want;
    float_bad += std::abs(statevector_amplitude(c, z, z) - Complex(std::ldexp(double(count), -int(f.n)))) > 1e-9;
    unsat += count == 0;
    taut += count == (std::uint64_t{1} << f.n);
  }
  return {exact_bad == 0 && float_bad == 0 && unsat > 0 && taut > 0,
          fmt("%zu formulas, exact mismatches %zu, float mismatches %zu, unsatisfiable %zu, tautologies %zu",
              formulas.size(), exact_bad, float_bad, unsat, taut)};
}

Outcome decision_rule() {
  const auto formulas = corpus::formulas(44, 10, 10);
  std::mt19937_64 rng(3005);
  std::size_t bad = 0;
  for (const auto& f : formulas) {
    const auto c = build_cphi(f);
    const Bits z(c.num_qubits(), 0);
    const double amp = statevector_amplitude(c, z, z).real();
    const double half = std::ldexp(1.0, -int(f.n)) / 2;
    // Open interval (-half, half).
    double noise = std::uniform_real_distribution<double>(-half, half)(rng);
    if (noise <= -half) noise = 0;
    bad += decide_sat(amp + noise, f.n) != (oracle::count_cnf(f) > 0);
  }
  return {bad == 0, fmt("%zu of %zu decisions match brute force", formulas.size() - bad, formulas.size())};
}

Outcome cross_method() {
  const auto cases = corpus::circuits(200);
  std::size_t failures = 0;
  double worst = 0;
  for (const auto& cc : cases) {
    try {
      const auto r = crosscheck_amplitude(cc.circuit, cc.in, cc.out);
      for (std::size_t a = 0; a < r.size(); ++a)
        for (std::size_t b = a + 1; b < r.size(); ++b) worst = std::max(worst, std::abs(r[a].value - r[b].value));
    } catch (const IntegrityError& e) {
      ++failures;
      std::printf("  info: %s: %s\n", cc.name.c_str(), e.what());
    }
  }
  return {failures == 0, fmt("%zu circuits including permanent circuits n <= 3, %zu disagreements, max deviation %.3g",
                             cases.size(), failures, worst)};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "two-qubit skeleton polynomial", 1, bell_polynomial},
      {2, "diagonal preprocessing multiplication counts", 1, fragment_counts},
      {3, "monotone method soundness", 60, monotone_soundness},
      {4, "permanent circuit against brute force", 60, permanent_oracle},
      {5, "permanent circuit size window", 30, size_window},
      {6, "gadget size formulas and semantics", 60, gadget_exactness},
      {7, "tidy compilation size and width certificates", 120, main_certificates},
      {8, "counting amplitude identity", 120, counting_identity},
      {9, "satisfiability decision rule", 10, decision_rule},
      {10, "cross-method amplitude agreement", 60, cross_method},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool pass = o.ok && secs < c.time_limit;
    failed += !pass;
    std::printf("[%s] criterion %d: %s (%.3fs, limit %gs) %s\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(), secs,
                c.time_limit, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", int(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
