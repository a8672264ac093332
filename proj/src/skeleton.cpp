#include "mbl/skeleton.hpp"

#include <cmath>

namespace mbl {

std::size_t Skeleton::num_entries() const {
  std::size_t n = 0;
  for (const auto& m : masks)
    if (m) n += m->size();
  return n;
}

void validate_skeleton(const Skeleton& s) {
  if (s.masks.size() != s.shape.ranks.size()) throw ShapeError("one mask per tensor id is required");
  for (std::size_t id = 0; id < s.masks.size(); ++id) {
    if (s.masks[id].has_value() != s.shape.ranks[id].has_value()) throw ShapeError("mask/tensor presence mismatch");
    if (!s.masks[id]) continue;
    const std::uint64_t limit = std::uint64_t{1} << *s.shape.ranks[id];
    const auto& m = *s.masks[id];
    for (std::size_t k = 0; k < m.size(); ++k) {
      if (m[k] >= limit) throw ShapeError("mask index out of range for tensor " + std::to_string(id));
      if (k > 0 && m[k] <= m[k - 1]) throw ShapeError("mask indices must be strictly ascending");
    }
  }
}

VariableTable::VariableTable(const Skeleton& s) {
  for (std::size_t id = 0; id < s.masks.size(); ++id) {
    if (!s.masks[id]) continue;
    for (auto index : *s.masks[id]) {
      ids_.emplace(std::pair{id, index}, static_cast<VarId>(entries_.size()));
      entries_.emplace_back(id, index);
    }
  }
}

VarId VariableTable::id(std::size_t tensor, std::uint64_t index) const {
  auto it = ids_.find({tensor, index});
  if (it == ids_.end()) throw std::out_of_range("entry is not a structural nonzero");
  return it->second;
}

std::pair<Skeleton, VariableTable> extract_skeleton(const TensorNetwork& net, double zero_tolerance) {
  Skeleton s;
  s.shape = net.shape();
  s.masks.resize(net.tensors().size());
  for (auto id : net.live_ids()) {
    const auto& t = net.tensor(id);
    std::vector<std::uint64_t> mask;
    for (std::uint64_t i = 0; i < t.entries().size(); ++i)
      if (std::abs(t[i]) > zero_tolerance) mask.push_back(i);
    s.masks[id] = std::move(mask);
  }
  VariableTable vars(s);
  return {std::move(s), std::move(vars)};
}

namespace {

struct PolyOps {
  SparsePolynomial mul(const SparsePolynomial& a, const SparsePolynomial& b) const {
    if (a.num_terms() * b.num_terms() > kMaxPolyTerms) throw CapExceeded("polynomial term cap exceeded");
    return a * b;
  }
  SparsePolynomial sum(std::vector<SparsePolynomial>& terms) const {
    SparsePolynomial s;
    for (const auto& t : terms) {
      s += t;
      if (s.num_terms() > kMaxPolyTerms) throw CapExceeded("polynomial term cap exceeded");
    }
    return s;
  }
};

struct UnitOps {
  char mul(char, char) const { return 1; }
  char sum(std::vector<char>&) const { return 1; }
};

}  // namespace

SparsePolynomial associated_polynomial(const Skeleton& s, const ContractionPlan& plan) {
  if (!s.closed()) throw ShapeError("associated polynomial needs a closed skeleton");
  validate_skeleton(s);
  VariableTable vars(s);
  if (vars.size() > kMaxPolyVariables) throw CapExceeded("too many variables for symbolic contraction");
  validate_plan(s.shape, plan);
  PolyOps ops;
  detail::Contractor<SparsePolynomial, PolyOps> con(
      s.shape, detail::skeleton_tensors<SparsePolynomial>(s, vars, SparsePolynomial::variable), ops);
  for (auto [i, j] : plan.steps) con.merge(i, j);
  auto result = con.finish();
  return result.entries.empty() ? SparsePolynomial{} : result.entries.front().second;
}

SparsePolynomial associated_polynomial(const Skeleton& s) {
  return associated_polynomial(s, find_plan(s.shape, PlanMode::Greedy));
}

std::vector<Complex> entry_values(const TensorNetwork& net, const VariableTable& vars) {
  std::vector<Complex> values;
  values.reserve(vars.size());
  for (const auto& [id, index] : vars.entries()) values.push_back(net.tensor(id)[index]);
  return values;
}

std::uint64_t structural_multiplication_count(const Skeleton& s, const ContractionPlan& plan) {
  validate_plan(s.shape, plan);
  VariableTable vars(s);
  UnitOps ops;
  detail::Contractor<char, UnitOps> con(s.shape, detail::skeleton_tensors<char>(s, vars, [](VarId) { return char{1}; }),
                                        ops);
  for (auto [i, j] : plan.steps) con.merge(i, j);
  return con.products();
}

nlohmann::json to_json(const Skeleton& s) {
  nlohmann::json ranks = nlohmann::json::array();
  nlohmann::json masks = nlohmann::json::array();
  for (std::size_t id = 0; id < s.masks.size(); ++id) {
    if (!s.masks[id]) {
      ranks.push_back(nullptr);
      masks.push_back(nullptr);
      continue;
    }
    ranks.push_back(*s.shape.ranks[id]);
    masks.push_back(*s.masks[id]);
  }
  nlohmann::json edges = nlohmann::json::array();
  nlohmann::json open = nlohmann::json::array();
  for (std::size_t h = 0; h < s.shape.hyperedges.size(); ++h) {
    nlohmann::json e = nlohmann::json::array();
    for (const auto& slot : s.shape.hyperedges[h].slots) e.push_back({slot.tensor, slot.slot});
    edges.push_back(std::move(e));
    if (s.shape.hyperedges[h].open) open.push_back(h);
  }
  return {{"ranks", std::move(ranks)},
          {"masks", std::move(masks)},
          {"hyperedges", std::move(edges)},
          {"open", std::move(open)},
          {"closed", s.closed()}};
}

}  // namespace mbl
