#include "mbl/polynomial.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "mbl/tensor_network.hpp"

namespace mbl {

Monomial multiply(const Monomial& a, const Monomial& b) {
  Monomial out;
  out.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

SparsePolynomial SparsePolynomial::variable(VarId v) {
  SparsePolynomial p;
  p.terms_.emplace(Monomial{v}, 1);
  return p;
}

SparsePolynomial SparsePolynomial::constant(const BigInt& c) {
  SparsePolynomial p;
  p.add_term({}, c);
  return p;
}

std::size_t SparsePolynomial::degree() const {
  std::size_t d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.size());
  return d;
}

std::vector<VarId> SparsePolynomial::variables() const {
  std::set<VarId> vs;
  for (const auto& [m, c] : terms_) vs.insert(m.begin(), m.end());
  return {vs.begin(), vs.end()};
}

void SparsePolynomial::add_term(const Monomial& m, const BigInt& c) {
  if (c < 0) throw std::domain_error("coefficients must be nonnegative");
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) it->second += c;
}

SparsePolynomial& SparsePolynomial::operator+=(const SparsePolynomial& other) {
  for (const auto& [m, c] : other.terms_) add_term(m, c);
  return *this;
}

SparsePolynomial operator*(const SparsePolynomial& a, const SparsePolynomial& b) {
  SparsePolynomial out;
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) out.add_term(multiply(ma, mb), ca * cb);
  return out;
}

Complex SparsePolynomial::evaluate(std::span<const Complex> assignment) const {
  Complex total = 0;
  for (const auto& [m, c] : terms_) {
    Complex t = static_cast<double>(c);
    for (auto v : m) {
      if (v >= assignment.size()) throw std::out_of_range("assignment misses a variable");
      t *= assignment[v];
    }
    total += t;
  }
  return total;
}

std::string SparsePolynomial::dump() const {
  std::ostringstream os;
  for (const auto& [m, c] : terms_) {
    os << c << ':';
    for (auto v : m) os << " v" << v;
    os << '\n';
  }
  return os.str();
}

SparsePolynomial restrict(const SparsePolynomial& p, const SubstitutionMap& map) {
  SparsePolynomial out;
  for (const auto& [m, c] : p.terms()) {
    Monomial image;
    bool vanished = false;
    for (auto v : m) {
      auto it = map.find(v);
      if (it == map.end()) throw std::invalid_argument("substitution does not cover v" + std::to_string(v));
      const auto& s = it->second;
      if (s.kind == Substitution::Kind::Zero) {
        vanished = true;
        break;
      }
      if (s.kind == Substitution::Kind::Var) image.push_back(s.var);
    }
    if (vanished) continue;
    std::sort(image.begin(), image.end());
    out.add_term(image, c);
  }
  return out;
}

SparsePolynomial permanent_polynomial(std::size_t n) {
  if (n > 8) throw CapExceeded("permanent_polynomial is limited to n <= 8");
  SparsePolynomial p;
  std::vector<std::size_t> sigma(n);
  std::iota(sigma.begin(), sigma.end(), 0);
  do {
    Monomial m;
    for (std::size_t i = 0; i < n; ++i) m.push_back(matrix_var(n, i, sigma[i]));
    std::sort(m.begin(), m.end());
    p.add_term(m, 1);
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return p;
}

namespace {

// Per-variable invariant: sorted list of (multiplicity, monomial degree, coefficient) triples.
using Signature = std::vector<std::tuple<std::size_t, std::size_t, std::string>>;

std::map<VarId, Signature> signatures(const SparsePolynomial& p) {
  std::map<VarId, Signature> sig;
  for (const auto& [m, c] : p.terms()) {
    std::map<VarId, std::size_t> mult;
    for (auto v : m) ++mult[v];
    for (auto [v, k] : mult) sig[v].emplace_back(k, m.size(), c.str());
  }
  for (auto& [v, s] : sig) std::sort(s.begin(), s.end());
  return sig;
}

struct IsoSearch {
  const SparsePolynomial& p;
  const SparsePolynomial& q;
  std::vector<VarId> p_vars;
  std::map<VarId, Signature> sp, sq;
  std::map<VarId, VarId> fwd;
  std::set<VarId> used;

  bool consistent() const {
    // Every monomial of p whose variables are all mapped must appear in q with the same coefficient.
    for (const auto& [m, c] : p.terms()) {
      Monomial image;
      bool complete = true;
      for (auto v : m) {
        auto it = fwd.find(v);
        if (it == fwd.end()) {
          complete = false;
          break;
        }
        image.push_back(it->second);
      }
      if (!complete) continue;
      std::sort(image.begin(), image.end());
      auto it = q.terms().find(image);
      if (it == q.terms().end() || it->second != c) return false;
    }
    return true;
  }

  bool search(std::size_t k) {
    if (k == p_vars.size()) return true;
    const VarId v = p_vars[k];
    for (const auto& [w, s] : sq) {
      if (used.count(w) || s != sp.at(v)) continue;
      fwd[v] = w;
      used.insert(w);
      if (consistent() && search(k + 1)) return true;
      fwd.erase(v);
      used.erase(w);
    }
    return false;
  }
};

}  // namespace

bool isomorphic(const SparsePolynomial& p, const SparsePolynomial& q) {
  if (p.num_terms() != q.num_terms()) return false;
  IsoSearch s{p, q, p.variables(), signatures(p), signatures(q), {}, {}};
  if (s.p_vars.size() != q.variables().size()) return false;
  std::multiset<Signature> a, b;
  for (const auto& [v, sig] : s.sp) a.insert(sig);
  for (const auto& [v, sig] : s.sq) b.insert(sig);
  if (a != b) return false;
  return s.search(0);
}

}  // namespace mbl
