#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <json.hpp>

#include "mbl/polynomial.hpp"
#include "mbl/skeleton.hpp"
#include "mbl/tensor_network.hpp"

namespace mbl {

using Rational = boost::multiprecision::cpp_rational;
using NodeId = std::uint32_t;

enum class NodeKind { Var, Const, Plus, Times };

std::string_view to_string(NodeKind kind);

struct MonotoneNode {
  NodeKind kind;
  VarId var = 0;        // Var
  Rational value = 0;   // Const
  NodeId left = 0;      // Plus, Times
  NodeId right = 0;

  friend bool operator==(const MonotoneNode&, const MonotoneNode&) = default;
};

/// Fan-in-2 DAG of + and x gates over variable and nonnegative constant leaves.
/// Arguments always have smaller ids than the node using them, so the node
/// list is a topological order.
class MonotoneCircuit {
 public:
  NodeId add_var(VarId v);
  NodeId add_const(const Rational& c);
  NodeId add_plus(NodeId a, NodeId b);
  NodeId add_times(NodeId a, NodeId b);
  void set_output(NodeId id);

  const std::vector<MonotoneNode>& nodes() const { return nodes_; }
  const MonotoneNode& node(NodeId id) const { return nodes_.at(id); }
  NodeId output() const;
  bool has_output() const { return output_.has_value(); }

  std::size_t num_plus() const { return plus_; }
  std::size_t num_times() const { return times_; }
  /// Internal gates only; leaves are not counted.
  std::size_t size() const { return plus_ + times_; }

  friend bool operator==(const MonotoneCircuit&, const MonotoneCircuit&) = default;

 private:
  NodeId push(MonotoneNode n);

  std::vector<MonotoneNode> nodes_;
  std::optional<NodeId> output_;
  std::size_t plus_ = 0;
  std::size_t times_ = 0;
};

/// Structural check: acyclic order, fan-in 2, nonnegative constants, output set.
void validate_monotone(const MonotoneCircuit& mc);

Complex eval_numeric(const MonotoneCircuit& mc, std::span<const Complex> assignment);
/// Exact evaluation at rational points.
Rational eval_exact(const MonotoneCircuit& mc, std::span<const Rational> assignment);

/// Constants must be integers. Throws CapExceeded past `term_cap` terms.
SparsePolynomial expand_symbolic(const MonotoneCircuit& mc, std::size_t term_cap = kMaxPolyTerms);

struct MethodReport {
  ContractionPlan plan;
  std::size_t size = 0;
  std::size_t plus_gates = 0;
  std::size_t times_gates = 0;
  std::size_t num_variables = 0;
};

nlohmann::json to_json(const MethodReport& r);

/// One x gate per product of structural nonzeros and a left-leaning + chain per
/// output entry. Leaf ids equal variable ids.
std::pair<MonotoneCircuit, MethodReport> compile_contraction(const Skeleton& s, const ContractionPlan& plan);

bool verify_method(const Skeleton& s, const MonotoneCircuit& mc);

/// Rewrites variable leaves through the map and folds the resulting 0/1 constants.
MonotoneCircuit substitute_leaves(const MonotoneCircuit& mc, const SubstitutionMap& map);

/// Merges structurally identical nodes and drops nodes the output does not use.
MonotoneCircuit dedup(const MonotoneCircuit& mc);

nlohmann::json to_json(const MonotoneCircuit& mc);
MonotoneCircuit monotone_from_json(const nlohmann::json& j);

}  // namespace mbl
