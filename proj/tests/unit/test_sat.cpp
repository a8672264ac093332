#include <doctest.h>

#include <random>

#include "corpus.hpp"
#include "mbl/sat.hpp"
#include "mbl/simulator.hpp"
#include "oracles.hpp"

using namespace mbl;

namespace {

SatFormula formula(std::size_t n, std::vector<std::vector<int>> clauses) {
  SatFormula f;
  f.n = n;
  for (const auto& c : clauses) {
    Clause cl;
    for (int l : c) cl.push_back({static_cast<std::size_t>(std::abs(l)) - 1, l < 0});
    f.clauses.push_back(cl);
  }
  return f;
}

std::vector<bool> truth_table_of(std::size_t n, const std::function<bool(std::uint64_t)>& f) {
  std::vector<bool> t;
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) t.push_back(f(x));
  return t;
}

}  // namespace

TEST_CASE("parse_dimacs") {
  const auto f = parse_dimacs(corpus::read_data("or2.cnf"));
  CHECK(f == formula(2, {{1, 2}}));
  CHECK(parse_dimacs(to_dimacs(f)) == f);
  const auto mixed = parse_dimacs(corpus::read_data("mixed.cnf"));
  CHECK(mixed == formula(5, {{1, -2, 3}, {-4}, {2, 5, -1}, {3, 4, -5, 1}}));
  CHECK(parse_dimacs(corpus::read_data("taut.cnf")).clauses[0].size() == 2);

  CHECK_THROWS_AS(parse_dimacs("1 2 0\n"), DimacsError);
  CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\n1 3 0\n"), DimacsError);
  CHECK_THROWS_AS(parse_dimacs("p cnf 2 2\n1 2 0\n"), DimacsError);
  CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\n1 2\n"), DimacsError);
  CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\n1 x 0\n"), DimacsError);
  CHECK_THROWS_AS(parse_dimacs("p dnf 2 1\n1 2 0\n"), DimacsError);
  CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\n1 1 0\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_dimacs(""), DimacsError);
}

TEST_CASE("count_sat_bruteforce") {
  CHECK(count_sat_bruteforce(formula(2, {{1, 2}})) == 3);
  CHECK(count_sat_bruteforce(formula(2, {{1}, {2, -2}})) == 2);
  CHECK(count_sat_bruteforce(formula(1, {{1}, {-1}})) == 0);
  CHECK(count_sat_bruteforce(parse_dimacs(corpus::read_data("php3.cnf"))) == 0);
  CHECK(count_sat_bruteforce(parse_dimacs(corpus::read_data("xor3.cnf"))) == 4);
  for (const auto& f : corpus::formulas(40, 16, 12)) CHECK(count_sat_bruteforce(f) == oracle::count_cnf(f));
}

TEST_CASE("literal circuits") {
  const auto pos = literal_circuit({1, false}, 3);
  const auto neg = literal_circuit({1, true}, 3);
  CHECK(metrics(pos) == CircuitMetrics{1, 4});
  CHECK(metrics(neg) == CircuitMetrics{2, 4});
  CHECK(output_truth_table(pos) == truth_table_of(3, [](std::uint64_t x) { return ((x >> 1) & 1u) != 0; }));
  CHECK(output_truth_table(neg) == truth_table_of(3, [](std::uint64_t x) { return ((x >> 1) & 1u) == 0; }));
  CHECK_THROWS_AS(literal_circuit({3, false}, 3), ShapeError);
}

TEST_CASE("gadget sizes and semantics") {
  const auto a = literal_circuit({0, false}, 2), b = literal_circuit({1, false}, 2);
  const auto g_and = and_gadget(a, b);
  const auto g_or = or_gadget(a, b);
  CHECK(metrics(g_and) == CircuitMetrics{5, 5});
  CHECK(metrics(g_or) == CircuitMetrics{8, 5});
  CHECK(output_truth_table(g_and) == std::vector<bool>{false, false, false, true});
  CHECK(output_truth_table(g_or) == std::vector<bool>{false, true, true, true});
  CHECK_THROWS_AS(and_gadget(a, literal_circuit({0, false}, 3)), ShapeError);
}

TEST_CASE("tree depth and width") {
  CHECK(ceil_log2(1) == 0);
  CHECK(ceil_log2(2) == 1);
  CHECK(ceil_log2(5) == 3);
  CHECK(ceil_log2(8) == 3);
  for (std::size_t k = 1; k <= 9; ++k) {
    std::vector<ReversibleCircuit> lits;
    for (std::size_t v = 0; v < k; ++v) lits.push_back(literal_circuit({v, v % 2 == 1}, 9));
    const auto t = tree_or(lits);
    CHECK(t.width() == 10 + 2 * ceil_log2(k));
    CHECK(output_truth_table(t) == truth_table_of(9, [&](std::uint64_t x) {
            bool any = false;
            for (std::size_t v = 0; v < k; ++v) any = any || (((x >> v) & 1u) != (v % 2));
            return any;
          }));
    const auto u = tree_and(lits);
    CHECK(output_truth_table(u) == truth_table_of(9, [&](std::uint64_t x) {
            bool all = true;
            for (std::size_t v = 0; v < k; ++v) all = all && (((x >> v) & 1u) != (v % 2));
            return all;
          }));
  }
}

TEST_CASE("tidy_wrap") {
  const auto u = or_gadget(literal_circuit({0, true}, 2), literal_circuit({1, false}, 2));
  const auto t = tidy_wrap(u);
  CHECK(t.size() == 2 * u.size() + 1);
  CHECK(t.width() == u.width() + 1);
  CHECK(t.roles().output == u.width());
  CHECK(check_tidy(t, [](std::uint64_t x) { return (x & 1u) == 0 || (x & 2u) != 0; }));
  CHECK_FALSE(check_tidy(u, [](std::uint64_t x) { return (x & 1u) == 0 || (x & 2u) != 0; }));
}

TEST_CASE("compiled formulas compute the formula") {
  for (const auto& f : corpus::formulas(30, 8, 8)) {
    const auto [u, ucert] = compile_untidy(f);
    const auto want = truth_table_of(f.n, [&](std::uint64_t x) { return oracle::eval_cnf(f, x); });
    CHECK(output_truth_table(u) == want);
    const auto [t, cert] = compile_tidy(f);
    CHECK(check_tidy(t, [&](std::uint64_t x) { return oracle::eval_cnf(f, x); }));
    CHECK(cert.tidy_size == 2 * cert.untidy_size + 1);
    CHECK(cert.tidy_width == cert.untidy_width + 1);
  }
  CHECK_THROWS_AS(compile_untidy(SatFormula{2, {}}), std::invalid_argument);
}

TEST_CASE("certificate lines") {
  const auto [t, cert] = compile_tidy(formula(2, {{1, 2}}));
  CHECK(cert.untidy_size == 8);
  CHECK(cert.tidy_size == 17);
  CHECK(cert.tidy_width == 6);
  const auto j = to_json(cert);
  CHECK(j["tidy"]["size"] == 17);
  CHECK(j["bounds"].size() == cert.lines.size());
  // The or-tree, and-tree and untidy lines hold for the corpus.
  for (const auto& f : corpus::formulas(60, 16, 16)) {
    const auto [c, cc] = compile_untidy(f);
    for (const auto& line : cc.lines) CHECK_MESSAGE(line.pass(), line.name);
  }
}

TEST_CASE("counting circuit amplitudes") {
  const auto or2 = build_cphi(formula(2, {{1, 2}}));
  const Bits z(or2.num_qubits(), 0);
  CHECK(std::abs(statevector_amplitude(or2, z, z) - Complex(0.75)) < 1e-12);
  CHECK(exact_amplitude(or2, z, z).rational() == Rational(3, 4));
  for (const auto& f : corpus::formulas(10, 6, 6)) {
    const auto c = build_cphi(f);
    const Bits zeros(c.num_qubits(), 0);
    const Rational want(static_cast<long long>(oracle::count_cnf(f)), BigInt(1) << f.n);
    CHECK(exact_amplitude(c, zeros, zeros).rational() == want);
  }
  const auto unsat = build_cphi(formula(1, {{1}, {-1}}));
  const Bits zu(unsat.num_qubits(), 0);
  CHECK(exact_amplitude(unsat, zu, zu).rational() == Rational(0));
  const auto taut = build_cphi(formula(2, {{1, -1}}));
  const Bits zt(taut.num_qubits(), 0);
  CHECK(exact_amplitude(taut, zt, zt).rational() == Rational(1));
}

TEST_CASE("decide_sat threshold") {
  CHECK(decide_sat(0.25, 2));
  CHECK(decide_sat(0.125, 2));
  CHECK_FALSE(decide_sat(0.12, 2));
  CHECK_FALSE(decide_sat(0, 5));
  CHECK(decide_sat(std::ldexp(1.0, -10), 10));
}

TEST_CASE("random_cnf") {
  std::mt19937_64 a(5), b(5);
  for (int k = 0; k < 20; ++k) {
    const auto f = random_cnf(a, 16, 16);
    CHECK(f == random_cnf(b, 16, 16));
    CHECK(f.n >= 1);
    CHECK(f.n <= 16);
    CHECK(f.m() >= 1);
    CHECK(f.m() <= 16);
    CHECK_NOTHROW(validate_formula(f));
  }
}
