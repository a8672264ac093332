#pragma once

// Pairwise contraction over hyperedge labels, generic in the entry type.
// Numeric contraction, symbolic polynomials, monotone-circuit emission and
// product counting all run through the same join so their term structure
// agrees by construction.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mbl/tensor_network.hpp"

namespace mbl::detail {

inline bool bit_at(std::uint64_t key, std::size_t width, std::size_t pos) {
  return (key >> (width - 1 - pos)) & 1u;
}

/// Entries keyed by the values of `labels` (position 0 = most significant bit).
template <class V>
struct LabeledTensor {
  std::vector<std::size_t> labels;
  std::vector<std::pair<std::uint64_t, V>> entries;  // ascending keys
};

/// Re-expresses entries indexed by slot bits in terms of distinct hyperedges.
/// Entries whose slots on a common hyperedge disagree can never contribute and
/// are dropped.
template <class V>
LabeledTensor<V> relabel(const std::vector<std::size_t>& slot_edges,
                         std::vector<std::pair<std::uint64_t, V>> slot_entries) {
  LabeledTensor<V> out;
  std::vector<std::size_t> slot_pos(slot_edges.size());
  for (std::size_t s = 0; s < slot_edges.size(); ++s) {
    auto it = std::find(out.labels.begin(), out.labels.end(), slot_edges[s]);
    if (it == out.labels.end()) {
      slot_pos[s] = out.labels.size();
      out.labels.push_back(slot_edges[s]);
    } else {
      slot_pos[s] = static_cast<std::size_t>(it - out.labels.begin());
    }
  }
  if (out.labels.size() > 64) throw CapExceeded("more than 64 distinct labels on one tensor");
  const std::size_t r = slot_edges.size();
  const std::size_t L = out.labels.size();
  for (auto& [index, value] : slot_entries) {
    std::uint64_t key = 0;
    std::vector<int> seen(L, -1);
    bool consistent = true;
    for (std::size_t s = 0; s < r && consistent; ++s) {
      const int b = bit_at(index, r, s) ? 1 : 0;
      const std::size_t p = slot_pos[s];
      if (seen[p] < 0) {
        seen[p] = b;
        if (b) key |= std::uint64_t{1} << (L - 1 - p);
      } else if (seen[p] != b) {
        consistent = false;
      }
    }
    if (consistent) out.entries.emplace_back(key, std::move(value));
  }
  std::stable_sort(out.entries.begin(), out.entries.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

/// Tracks which hyperedges each live tensor carries and which must survive a merge.
class LabelTracker {
 public:
  explicit LabelTracker(const NetworkShape& shape) : open_(shape.hyperedges.size()) {
    for (std::size_t h = 0; h < shape.hyperedges.size(); ++h) open_[h] = shape.hyperedges[h].open;
    const auto edges = shape.slot_edges();
    labels_.resize(shape.ranks.size());
    count_.assign(shape.hyperedges.size(), 0);
    for (std::size_t id = 0; id < shape.ranks.size(); ++id) {
      if (!shape.ranks[id]) continue;
      std::vector<std::size_t> ls;
      for (auto h : edges[id])
        if (std::find(ls.begin(), ls.end(), h) == ls.end()) ls.push_back(h);
      for (auto h : ls) ++count_[h];
      labels_[id] = std::move(ls);
    }
  }

  struct Step {
    std::vector<std::size_t> union_labels;
    std::vector<std::size_t> result_labels;
  };

  bool alive(std::size_t id) const { return id < labels_.size() && labels_[id].has_value(); }
  const std::vector<std::size_t>& labels(std::size_t id) const { return *labels_.at(id); }
  std::size_t num_alive() const {
    return static_cast<std::size_t>(std::count_if(labels_.begin(), labels_.end(),
                                                  [](const auto& l) { return l.has_value(); }));
  }
  std::vector<std::size_t> alive_ids() const {
    std::vector<std::size_t> ids;
    for (std::size_t id = 0; id < labels_.size(); ++id)
      if (labels_[id]) ids.push_back(id);
    return ids;
  }

  Step plan_merge(std::size_t i, std::size_t j) const {
    if (i == j || !alive(i) || !alive(j)) throw PlanError("merge needs two distinct live tensors");
    const auto& a = *labels_[i];
    const auto& b = *labels_[j];
    Step st;
    st.union_labels = a;
    for (auto h : b)
      if (std::find(a.begin(), a.end(), h) == a.end()) st.union_labels.push_back(h);
    for (auto h : st.union_labels) {
      const int in_a = std::find(a.begin(), a.end(), h) != a.end();
      const int in_b = std::find(b.begin(), b.end(), h) != b.end();
      if (open_[h] || count_[h] - in_a - in_b > 0) st.result_labels.push_back(h);
    }
    return st;
  }

  void commit(std::size_t i, std::size_t j, const Step& st) {
    for (auto h : *labels_[i]) --count_[h];
    for (auto h : *labels_[j]) --count_[h];
    for (auto h : st.result_labels) ++count_[h];
    labels_[std::min(i, j)] = st.result_labels;
    labels_[std::max(i, j)].reset();
  }

  bool open(std::size_t h) const { return open_[h]; }

 private:
  std::vector<bool> open_;
  std::vector<std::optional<std::vector<std::size_t>>> labels_;
  std::vector<int> count_;
};

/// Ops must provide `V mul(const V&, const V&)` and `V sum(std::vector<V>&)`
/// (called with at least one term, in deterministic order).
template <class V, class Ops>
class Contractor {
 public:
  Contractor(const NetworkShape& shape, std::vector<std::optional<LabeledTensor<V>>> tensors, Ops& ops)
      : tracker_(shape), tensors_(std::move(tensors)), ops_(ops) {}

  std::uint64_t products() const { return products_; }
  const LabelTracker& tracker() const { return tracker_; }
  const LabeledTensor<V>& tensor(std::size_t id) const { return *tensors_.at(id); }

  void merge(std::size_t i, std::size_t j) {
    const auto step = tracker_.plan_merge(i, j);
    auto& A = *tensors_[i];
    auto& B = *tensors_[j];
    const std::size_t LA = A.labels.size(), LB = B.labels.size(), LR = step.result_labels.size();
    if (LR > 64) throw CapExceeded("intermediate tensor exceeds 64 labels");

    std::vector<std::pair<std::size_t, std::size_t>> shared;  // (pos in A, pos in B)
    for (std::size_t p = 0; p < LA; ++p)
      for (std::size_t q = 0; q < LB; ++q)
        if (A.labels[p] == B.labels[q]) shared.emplace_back(p, q);

    // Source of every result label: (from A?, position).
    std::vector<std::pair<bool, std::size_t>> source;
    for (auto h : step.result_labels) {
      auto ia = std::find(A.labels.begin(), A.labels.end(), h);
      if (ia != A.labels.end()) {
        source.emplace_back(true, static_cast<std::size_t>(ia - A.labels.begin()));
      } else {
        auto ib = std::find(B.labels.begin(), B.labels.end(), h);
        source.emplace_back(false, static_cast<std::size_t>(ib - B.labels.begin()));
      }
    }

    auto project_a = [&](std::uint64_t k) {
      std::uint64_t s = 0;
      for (auto [p, q] : shared) s = (s << 1) | (bit_at(k, LA, p) ? 1u : 0u);
      return s;
    };
    auto project_b = [&](std::uint64_t k) {
      std::uint64_t s = 0;
      for (auto [p, q] : shared) s = (s << 1) | (bit_at(k, LB, q) ? 1u : 0u);
      return s;
    };

    std::unordered_map<std::uint64_t, std::vector<std::size_t>> b_index;
    for (std::size_t e = 0; e < B.entries.size(); ++e) b_index[project_b(B.entries[e].first)].push_back(e);

    std::map<std::uint64_t, std::vector<V>> groups;
    for (const auto& [ka, va] : A.entries) {
      auto it = b_index.find(project_a(ka));
      if (it == b_index.end()) continue;
      for (auto e : it->second) {
        const auto& [kb, vb] = B.entries[e];
        std::uint64_t kr = 0;
        for (std::size_t r = 0; r < LR; ++r) {
          const bool bit = source[r].first ? bit_at(ka, LA, source[r].second) : bit_at(kb, LB, source[r].second);
          kr = (kr << 1) | (bit ? 1u : 0u);
        }
        ++products_;
        groups[kr].push_back(ops_.mul(va, vb));
      }
    }

    LabeledTensor<V> result;
    result.labels = step.result_labels;
    result.entries.reserve(groups.size());
    for (auto& [k, terms] : groups) result.entries.emplace_back(k, ops_.sum(terms));

    tracker_.commit(i, j, step);
    tensors_[std::min(i, j)] = std::move(result);
    tensors_[std::max(i, j)].reset();
  }

  /// Sums out every remaining non-open label of the single surviving tensor.
  LabeledTensor<V> finish() {
    const auto ids = tracker_.alive_ids();
    if (ids.size() != 1) throw PlanError("plan does not reduce the network to one tensor");
    auto& T = *tensors_[ids.front()];
    std::vector<std::size_t> keep;
    for (std::size_t p = 0; p < T.labels.size(); ++p)
      if (tracker_.open(T.labels[p])) keep.push_back(p);
    if (keep.size() == T.labels.size()) return T;
    const std::size_t L = T.labels.size();
    std::map<std::uint64_t, std::vector<V>> groups;
    for (auto& [k, v] : T.entries) {
      std::uint64_t kr = 0;
      for (auto p : keep) kr = (kr << 1) | (bit_at(k, L, p) ? 1u : 0u);
      groups[kr].push_back(std::move(v));
    }
    LabeledTensor<V> out;
    for (auto p : keep) out.labels.push_back(T.labels[p]);
    for (auto& [k, terms] : groups) out.entries.emplace_back(k, ops_.sum(terms));
    return out;
  }

 private:
  LabelTracker tracker_;
  std::vector<std::optional<LabeledTensor<V>>> tensors_;
  Ops& ops_;
  std::uint64_t products_ = 0;
};

}  // namespace mbl::detail
