#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mbl/circuit.hpp"

namespace mbl {

inline constexpr std::size_t kMaxDenseRank = 26;

class PlanError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dense tensor over binary indices. Slot 0 is the most significant bit of the
/// entry index, so a gate tensor with slots (outputs..., inputs...) stores the
/// gate's row-major matrix verbatim.
class Tensor {
 public:
  explicit Tensor(std::size_t rank);
  Tensor(std::size_t rank, std::vector<Complex> entries);

  std::size_t rank() const { return rank_; }
  const std::vector<Complex>& entries() const { return entries_; }
  Complex operator[](std::uint64_t index) const { return entries_[index]; }
  Complex& operator[](std::uint64_t index) { return entries_[index]; }

  friend bool operator==(const Tensor&, const Tensor&) = default;

 private:
  std::size_t rank_;
  std::vector<Complex> entries_;
};

struct SlotRef {
  std::size_t tensor;
  std::size_t slot;
  auto operator<=>(const SlotRef&) const = default;
};

/// A set of identified slots. Open hyperedges are external indices of the network.
struct Hyperedge {
  std::vector<SlotRef> slots;
  bool open = false;
  friend bool operator==(const Hyperedge&, const Hyperedge&) = default;
};

/// Tensor ranks and hyperedges, without entries. ranks[id] is empty for ids
/// that have been contracted away.
struct NetworkShape {
  std::vector<std::optional<std::size_t>> ranks;
  std::vector<Hyperedge> hyperedges;

  /// slot_edges()[id][slot] = hyperedge index.
  std::vector<std::vector<std::size_t>> slot_edges() const;
  std::vector<std::size_t> live_ids() const;
  bool closed() const;

  friend bool operator==(const NetworkShape&, const NetworkShape&) = default;
};

/// Validates slot references and normalises the hyperedge list: every slot
/// ends up in exactly one hyperedge, unlisted slots become singleton open
/// hyperedges and empty hyperedges are dropped.
NetworkShape make_shape(std::vector<std::optional<std::size_t>> ranks,
                        std::vector<Hyperedge> hyperedges);

class TensorNetwork {
 public:
  TensorNetwork(std::vector<Tensor> tensors, std::vector<Hyperedge> hyperedges);
  TensorNetwork(std::vector<std::optional<Tensor>> tensors, std::vector<Hyperedge> hyperedges);

  const NetworkShape& shape() const { return shape_; }
  const std::vector<std::optional<Tensor>>& tensors() const { return tensors_; }
  const Tensor& tensor(std::size_t id) const;
  bool has_tensor(std::size_t id) const { return id < tensors_.size() && tensors_[id].has_value(); }
  std::vector<std::size_t> live_ids() const { return shape_.live_ids(); }
  std::size_t num_live() const { return live_ids().size(); }
  bool closed() const { return shape_.closed(); }

 private:
  std::vector<std::optional<Tensor>> tensors_;
  NetworkShape shape_;
};

/// Pairs of tensor ids merged in order; the merged tensor keeps the smaller id.
struct ContractionPlan {
  std::vector<std::pair<std::size_t, std::size_t>> steps;
  friend bool operator==(const ContractionPlan&, const ContractionPlan&) = default;
};

enum class PlanMode { Exhaustive, Greedy, LeftToRight };

PlanMode plan_mode_from_string(std::string_view name);
std::string_view to_string(PlanMode mode);

/// Network for <out|C|in>: one rank-1 tensor per boundary qubit and one tensor
/// per gate with slots (outputs..., inputs...). Tensor ids: input boundaries
/// 0..q-1, then gates in order, then output boundaries.
TensorNetwork circuit_to_network(const QuantumCircuit& c, const Bits& in_state, const Bits& out_state);

TensorNetwork contract_pair(const TensorNetwork& net, std::size_t i, std::size_t j);

/// Throws PlanError unless the plan reduces the network to one tensor.
void validate_plan(const NetworkShape& shape, const ContractionPlan& plan);

Complex contract_all(const TensorNetwork& net, const ContractionPlan& plan);
Complex contract_all(const TensorNetwork& net);

/// Contracts an open or closed network down to a single dense tensor over its
/// open hyperedges (in hyperedge order).
Tensor contract_to_tensor(const TensorNetwork& net, const ContractionPlan& plan);

/// Exhaustive mode (<= 8 tensors) minimises multiplication_count; greedy merges
/// the pair with the smallest result rank, ties broken by the smallest (i, j).
ContractionPlan find_plan(const NetworkShape& shape, PlanMode mode);
inline ContractionPlan find_plan(const TensorNetwork& net, PlanMode mode) {
  return find_plan(net.shape(), mode);
}

/// Replaces every tensor that is diagonal in some slot pair by a lower-rank
/// tensor whose fused slot joins both hyperedges.
TensorNetwork preprocess_diagonal(const TensorNetwork& net, double zero_tolerance = 0.0);

/// Dense accounting: each step costs 2^(number of distinct hyperedges on the
/// two operands), one product per (output entry, summand) pair.
std::uint64_t multiplication_count(const NetworkShape& shape, const ContractionPlan& plan);
inline std::uint64_t multiplication_count(const TensorNetwork& net, const ContractionPlan& plan) {
  return multiplication_count(net.shape(), plan);
}

nlohmann::json to_json(const TensorNetwork& net);
TensorNetwork network_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ContractionPlan& plan);

}  // namespace mbl
