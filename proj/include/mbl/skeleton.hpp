#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mbl/detail/contractor.hpp"
#include "mbl/polynomial.hpp"
#include "mbl/tensor_network.hpp"

namespace mbl {

inline constexpr double kDefaultZeroTolerance = 1e-12;
inline constexpr std::size_t kMaxPolyVariables = 4096;
inline constexpr std::size_t kMaxPolyTerms = 1'000'000;

/// Network shape plus the nonzero locations of every tensor.
struct Skeleton {
  NetworkShape shape;
  std::vector<std::optional<std::vector<std::uint64_t>>> masks;  // ascending entry indices

  bool closed() const { return shape.closed(); }
  std::size_t num_entries() const;
};

/// Checks that masks match the shape's tensor ranks.
void validate_skeleton(const Skeleton& s);

/// Variable id <-> (tensor id, entry index). Ids follow (tensor, index) order.
class VariableTable {
 public:
  VariableTable() = default;
  explicit VariableTable(const Skeleton& s);

  std::size_t size() const { return entries_.size(); }
  std::pair<std::size_t, std::uint64_t> entry(VarId v) const { return entries_.at(v); }
  VarId id(std::size_t tensor, std::uint64_t index) const;
  const std::vector<std::pair<std::size_t, std::uint64_t>>& entries() const { return entries_; }

 private:
  std::vector<std::pair<std::size_t, std::uint64_t>> entries_;
  std::map<std::pair<std::size_t, std::uint64_t>, VarId> ids_;
};

std::pair<Skeleton, VariableTable> extract_skeleton(const TensorNetwork& net,
                                                    double zero_tolerance = kDefaultZeroTolerance);

/// Exact symbolic contraction with one fresh variable per nonzero entry.
SparsePolynomial associated_polynomial(const Skeleton& s, const ContractionPlan& plan);
SparsePolynomial associated_polynomial(const Skeleton& s);

/// The network's entry values, indexed by variable id.
std::vector<Complex> entry_values(const TensorNetwork& net, const VariableTable& vars);

/// Products actually formed when only structural nonzeros are multiplied.
std::uint64_t structural_multiplication_count(const Skeleton& s, const ContractionPlan& plan);

nlohmann::json to_json(const Skeleton& s);

}  // namespace mbl

namespace mbl::detail {

/// Skeleton entries as labelled tensors carrying values made from variable ids.
template <class V, class Make>
std::vector<std::optional<LabeledTensor<V>>> skeleton_tensors(const Skeleton& s, const VariableTable& vars,
                                                               Make&& make) {
  const auto edges = s.shape.slot_edges();
  std::vector<std::optional<LabeledTensor<V>>> out(s.masks.size());
  for (std::size_t id = 0; id < s.masks.size(); ++id) {
    if (!s.masks[id]) continue;
    std::vector<std::pair<std::uint64_t, V>> entries;
    for (auto index : *s.masks[id]) entries.emplace_back(index, make(vars.id(id, index)));
    out[id] = relabel(edges[id], std::move(entries));
  }
  return out;
}

}  // namespace mbl::detail
