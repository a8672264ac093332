#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "mbl/circuit.hpp"

namespace mbl {

using BigInt = boost::multiprecision::cpp_int;
using VarId = std::uint32_t;

/// Sorted multiset of variable ids.
using Monomial = std::vector<VarId>;

Monomial multiply(const Monomial& a, const Monomial& b);

/// Polynomial with positive integer coefficients over commuting variables.
/// Terms are kept in canonical (lexicographic monomial) order; zero
/// coefficients are never stored.
class SparsePolynomial {
 public:
  using Terms = std::map<Monomial, BigInt>;

  SparsePolynomial() = default;
  static SparsePolynomial variable(VarId v);
  static SparsePolynomial constant(const BigInt& c);

  const Terms& terms() const { return terms_; }
  std::size_t num_terms() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  std::size_t degree() const;
  std::vector<VarId> variables() const;

  /// Adds c * m. Throws std::domain_error for negative c.
  void add_term(const Monomial& m, const BigInt& c);

  SparsePolynomial& operator+=(const SparsePolynomial& other);
  friend SparsePolynomial operator+(SparsePolynomial a, const SparsePolynomial& b) { return a += b; }
  friend SparsePolynomial operator*(const SparsePolynomial& a, const SparsePolynomial& b);
  friend bool operator==(const SparsePolynomial&, const SparsePolynomial&) = default;

  Complex evaluate(std::span<const Complex> assignment) const;

  /// One line per term, "coeff: v3 v7 v7 v10", in canonical term order.
  std::string dump() const;

 private:
  Terms terms_;
};

/// Target of a variable under restriction.
struct Substitution {
  enum class Kind { Var, Zero, One };
  Kind kind = Kind::Var;
  VarId var = 0;

  static Substitution to_var(VarId v) { return {Kind::Var, v}; }
  static Substitution zero() { return {Kind::Zero, 0}; }
  static Substitution one() { return {Kind::One, 0}; }
};

using SubstitutionMap = std::unordered_map<VarId, Substitution>;

/// Applies the map to every variable; the map must cover every variable of p.
SparsePolynomial restrict(const SparsePolynomial& p, const SubstitutionMap& map);

/// Id of the matrix variable x_{row,col} (0-based) in an n x n permanent.
inline VarId matrix_var(std::size_t n, std::size_t row, std::size_t col) {
  return static_cast<VarId>(row * n + col);
}

/// Sum over permutations of x_{1,s(1)} ... x_{n,s(n)}, n <= 8.
SparsePolynomial permanent_polynomial(std::size_t n);

/// True iff some bijection between the variables of p and q maps p onto q.
bool isomorphic(const SparsePolynomial& p, const SparsePolynomial& q);

}  // namespace mbl
