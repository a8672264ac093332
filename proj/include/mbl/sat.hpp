#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mbl/circuit.hpp"
#include "mbl/polynomial.hpp"

namespace mbl {

struct Literal {
  std::size_t var;  // 0-based
  bool negated = false;
  friend bool operator==(const Literal&, const Literal&) = default;
};

using Clause = std::vector<Literal>;

struct SatFormula {
  std::size_t n = 0;
  std::vector<Clause> clauses;

  std::size_t m() const { return clauses.size(); }
  /// Bit k of x is variable k.
  bool eval(std::uint64_t x) const;
  friend bool operator==(const SatFormula&, const SatFormula&) = default;
};

class DimacsError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Rejects a literal repeated inside a clause. A clause may hold both x and
/// not-x (a tautological clause).
void validate_formula(const SatFormula& f);

SatFormula parse_dimacs(std::string_view text);
std::string to_dimacs(const SatFormula& f);

inline constexpr std::size_t kMaxBruteforceVars = 24;

/// Exact count by enumeration, split across MBL_THREADS workers.
std::uint64_t count_sat_bruteforce(const SatFormula& f);

/// Width n+1, no ancillas, output wire n.
ReversibleCircuit literal_circuit(const Literal& l, std::size_t n);

/// U1, CNOT(o1 -> a), U1^-1, U2, TOFFOLI(a, o2 -> b). Size 2 s1 + s2 + 2.
ReversibleCircuit and_gadget(const ReversibleCircuit& u1, const ReversibleCircuit& u2);
/// U1, CNOT(o1 -> a), NOT a, U1^-1, U2, NOT o2, TOFFOLI(a, o2 -> b), NOT b. Size 2 s1 + s2 + 5.
ReversibleCircuit or_gadget(const ReversibleCircuit& u1, const ReversibleCircuit& u2);

/// Balanced recursion; the left half receives ceil(k/2) circuits. Sibling
/// subtrees share work wires and the two fresh wires sit above both.
ReversibleCircuit tree_and(const std::vector<ReversibleCircuit>& circuits);
ReversibleCircuit tree_or(const std::vector<ReversibleCircuit>& circuits);

/// U, CNOT(o -> c), U^-1 on one extra wire c, which becomes the output.
ReversibleCircuit tidy_wrap(const ReversibleCircuit& u);

/// ceil(log2 k), with ceil_log2(1) = 0.
std::size_t ceil_log2(std::size_t k);

struct BoundLine {
  std::string name;
  BigInt measured;
  BigInt bound;
  bool pass() const { return measured <= bound; }
};

struct CompileCert {
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t untidy_size = 0;
  std::size_t untidy_width = 0;
  std::size_t tidy_size = 0;
  std::size_t tidy_width = 0;
  std::vector<BoundLine> lines;

  bool pass() const;
};

nlohmann::json to_json(const CompileCert& c);

std::pair<ReversibleCircuit, CompileCert> compile_untidy(const SatFormula& f);
std::pair<ReversibleCircuit, CompileCert> compile_tidy(const SatFormula& f);

/// H on the inputs, the lifted tidy circuit, H on the inputs, X on the output.
QuantumCircuit build_cphi(const SatFormula& f);

/// Satisfiable iff the amplitude estimate reaches 2^-n / 2.
bool decide_sat(double amp_estimate, std::size_t n);

/// n and m uniform in [1, n_max] / [1, m_max]; clause length uniform in
/// [1, n]; distinct variables and fair signs per clause.
SatFormula random_cnf(std::mt19937_64& rng, std::size_t n_max, std::size_t m_max);

}  // namespace mbl
