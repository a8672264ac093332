#include "mbl/tensor_network.hpp"

#include <algorithm>
#include <bit>
#include <map>

#include "mbl/detail/contractor.hpp"

namespace mbl {

Tensor::Tensor(std::size_t rank) : Tensor(rank, std::vector<Complex>()) {}

Tensor::Tensor(std::size_t rank, std::vector<Complex> entries) : rank_(rank), entries_(std::move(entries)) {
  if (rank_ > kMaxDenseRank) throw CapExceeded("tensor rank exceeds the dense cap of 26");
  const std::size_t n = std::size_t{1} << rank_;
  if (entries_.empty()) entries_.assign(n, Complex(0));
  if (entries_.size() != n) throw ShapeError("tensor of rank r needs 2^r entries");
}

std::vector<std::vector<std::size_t>> NetworkShape::slot_edges() const {
  std::vector<std::vector<std::size_t>> out(ranks.size());
  for (std::size_t id = 0; id < ranks.size(); ++id)
    if (ranks[id]) out[id].assign(*ranks[id], SIZE_MAX);
  for (std::size_t h = 0; h < hyperedges.size(); ++h)
    for (const auto& s : hyperedges[h].slots) out[s.tensor][s.slot] = h;
  return out;
}

std::vector<std::size_t> NetworkShape::live_ids() const {
  std::vector<std::size_t> ids;
  for (std::size_t id = 0; id < ranks.size(); ++id)
    if (ranks[id]) ids.push_back(id);
  return ids;
}

bool NetworkShape::closed() const {
  return std::none_of(hyperedges.begin(), hyperedges.end(), [](const Hyperedge& h) { return h.open; });
}

NetworkShape make_shape(std::vector<std::optional<std::size_t>> ranks, std::vector<Hyperedge> hyperedges) {
  std::vector<std::vector<bool>> used(ranks.size());
  for (std::size_t id = 0; id < ranks.size(); ++id)
    if (ranks[id]) used[id].assign(*ranks[id], false);
  NetworkShape shape;
  shape.ranks = std::move(ranks);
  for (auto& h : hyperedges) {
    for (const auto& s : h.slots) {
      if (s.tensor >= shape.ranks.size() || !shape.ranks[s.tensor])
        throw ShapeError("hyperedge refers to a missing tensor");
      if (s.slot >= *shape.ranks[s.tensor]) throw ShapeError("hyperedge refers to an invalid slot");
      if (used[s.tensor][s.slot]) throw ShapeError("slot belongs to more than one hyperedge");
      used[s.tensor][s.slot] = true;
    }
    if (!h.slots.empty()) shape.hyperedges.push_back(std::move(h));
  }
  for (std::size_t id = 0; id < shape.ranks.size(); ++id)
    for (std::size_t s = 0; s < used[id].size(); ++s)
      if (!used[id][s]) shape.hyperedges.push_back({{{id, s}}, true});
  return shape;
}

namespace {

std::vector<std::optional<std::size_t>> ranks_of(const std::vector<std::optional<Tensor>>& ts) {
  std::vector<std::optional<std::size_t>> r;
  for (const auto& t : ts) r.push_back(t ? std::optional<std::size_t>(t->rank()) : std::nullopt);
  return r;
}

std::vector<std::optional<Tensor>> wrap(std::vector<Tensor> ts) {
  std::vector<std::optional<Tensor>> out;
  for (auto& t : ts) out.emplace_back(std::move(t));
  return out;
}

struct ComplexOps {
  Complex mul(const Complex& a, const Complex& b) const { return a * b; }
  Complex sum(std::vector<Complex>& terms) const {
    Complex s = 0;
    for (const auto& t : terms) s += t;
    return s;
  }
};

using ComplexContractor = detail::Contractor<Complex, ComplexOps>;

std::vector<std::optional<detail::LabeledTensor<Complex>>> labeled_tensors(const TensorNetwork& net) {
  const auto edges = net.shape().slot_edges();
  std::vector<std::optional<detail::LabeledTensor<Complex>>> out(net.tensors().size());
  for (auto id : net.live_ids()) {
    const auto& t = net.tensor(id);
    std::vector<std::pair<std::uint64_t, Complex>> nz;
    for (std::uint64_t i = 0; i < t.entries().size(); ++i)
      if (t[i] != Complex(0)) nz.emplace_back(i, t[i]);
    out[id] = detail::relabel(edges[id], std::move(nz));
  }
  return out;
}

Tensor densify(const detail::LabeledTensor<Complex>& lt) {
  if (lt.labels.size() > kMaxDenseRank) throw CapExceeded("result tensor exceeds the dense cap of 26");
  Tensor t(lt.labels.size());
  for (const auto& [k, v] : lt.entries) t[k] = v;
  return t;
}

}  // namespace

TensorNetwork::TensorNetwork(std::vector<Tensor> tensors, std::vector<Hyperedge> hyperedges)
    : TensorNetwork(wrap(std::move(tensors)), std::move(hyperedges)) {}

TensorNetwork::TensorNetwork(std::vector<std::optional<Tensor>> tensors, std::vector<Hyperedge> hyperedges)
    : tensors_(std::move(tensors)), shape_(make_shape(ranks_of(tensors_), std::move(hyperedges))) {}

const Tensor& TensorNetwork::tensor(std::size_t id) const {
  if (!has_tensor(id)) throw PlanError("no tensor with id " + std::to_string(id));
  return *tensors_[id];
}

PlanMode plan_mode_from_string(std::string_view name) {
  if (name == "exhaustive") return PlanMode::Exhaustive;
  if (name == "greedy") return PlanMode::Greedy;
  if (name == "left-to-right") return PlanMode::LeftToRight;
  throw std::invalid_argument("unknown plan mode: " + std::string(name));
}

std::string_view to_string(PlanMode mode) {
  switch (mode) {
    case PlanMode::Exhaustive: return "exhaustive";
    case PlanMode::Greedy: return "greedy";
    case PlanMode::LeftToRight: return "left-to-right";
  }
  return "?";
}

TensorNetwork circuit_to_network(const QuantumCircuit& c, const Bits& in_state, const Bits& out_state) {
  const std::size_t q = c.num_qubits();
  if (in_state.size() != q || out_state.size() != q)
    throw ShapeError("boundary states must have one bit per qubit");
  std::vector<Tensor> tensors;
  std::vector<Hyperedge> edges;
  std::vector<SlotRef> open_end(q);
  for (std::size_t w = 0; w < q; ++w) {
    open_end[w] = {tensors.size(), 0};
    tensors.emplace_back(1, std::vector<Complex>{in_state[w] ? 0.0 : 1.0, in_state[w] ? 1.0 : 0.0});
  }
  for (const auto& g : c.gates()) {
    const std::size_t id = tensors.size();
    const std::size_t k = g.wires.size();
    tensors.emplace_back(2 * k, unitary(g));
    for (std::size_t l = 0; l < k; ++l) {
      edges.push_back({{open_end[g.wires[l]], {id, k + l}}, false});
      open_end[g.wires[l]] = {id, l};
    }
  }
  for (std::size_t w = 0; w < q; ++w) {
    const std::size_t id = tensors.size();
    tensors.emplace_back(1, std::vector<Complex>{out_state[w] ? 0.0 : 1.0, out_state[w] ? 1.0 : 0.0});
    edges.push_back({{open_end[w], {id, 0}}, false});
  }
  return TensorNetwork(std::move(tensors), std::move(edges));
}

TensorNetwork contract_pair(const TensorNetwork& net, std::size_t i, std::size_t j) {
  if (i == j || !net.has_tensor(i) || !net.has_tensor(j)) throw PlanError("contract_pair needs two distinct existing tensors");
  ComplexOps ops;
  ComplexContractor con(net.shape(), labeled_tensors(net), ops);
  const auto step = con.tracker().plan_merge(i, j);
  con.merge(i, j);
  const std::size_t keep = std::min(i, j);

  std::vector<std::optional<Tensor>> tensors = net.tensors();
  tensors[std::max(i, j)].reset();
  tensors[keep] = densify(con.tensor(keep));

  std::vector<Hyperedge> edges;
  for (std::size_t h = 0; h < net.shape().hyperedges.size(); ++h) {
    const auto& old = net.shape().hyperedges[h];
    Hyperedge e{{}, old.open};
    for (const auto& s : old.slots)
      if (s.tensor != i && s.tensor != j) e.slots.push_back(s);
    auto pos = std::find(step.result_labels.begin(), step.result_labels.end(), h);
    if (pos != step.result_labels.end())
      e.slots.push_back({keep, static_cast<std::size_t>(pos - step.result_labels.begin())});
    if (!e.slots.empty()) edges.push_back(std::move(e));
  }
  return TensorNetwork(std::move(tensors), std::move(edges));
}

void validate_plan(const NetworkShape& shape, const ContractionPlan& plan) {
  detail::LabelTracker tracker(shape);
  for (auto [i, j] : plan.steps) tracker.commit(i, j, tracker.plan_merge(i, j));
  if (tracker.num_alive() != 1) throw PlanError("plan does not reduce the network to one tensor");
}

Complex contract_all(const TensorNetwork& net, const ContractionPlan& plan) {
  if (!net.closed()) throw ShapeError("contract_all needs a closed network");
  validate_plan(net.shape(), plan);
  ComplexOps ops;
  ComplexContractor con(net.shape(), labeled_tensors(net), ops);
  for (auto [i, j] : plan.steps) con.merge(i, j);
  auto result = con.finish();
  return result.entries.empty() ? Complex(0) : result.entries.front().second;
}

Complex contract_all(const TensorNetwork& net) { return contract_all(net, find_plan(net, PlanMode::Greedy)); }

Tensor contract_to_tensor(const TensorNetwork& net, const ContractionPlan& plan) {
  validate_plan(net.shape(), plan);
  ComplexOps ops;
  ComplexContractor con(net.shape(), labeled_tensors(net), ops);
  for (auto [i, j] : plan.steps) con.merge(i, j);
  auto result = con.finish();
  // Reorder labels ascending by hyperedge index.
  std::vector<std::size_t> order(result.labels.size());
  for (std::size_t p = 0; p < order.size(); ++p) order[p] = p;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return result.labels[a] < result.labels[b]; });
  detail::LabeledTensor<Complex> sorted;
  const std::size_t L = result.labels.size();
  for (auto p : order) sorted.labels.push_back(result.labels[p]);
  for (const auto& [k, v] : result.entries) {
    std::uint64_t nk = 0;
    for (auto p : order) nk = (nk << 1) | (detail::bit_at(k, L, p) ? 1u : 0u);
    sorted.entries.emplace_back(nk, v);
  }
  return densify(sorted);
}

namespace {

ContractionPlan greedy_plan(const NetworkShape& shape) {
  detail::LabelTracker tracker(shape);
  ContractionPlan plan;
  while (tracker.num_alive() > 1) {
    const auto ids = tracker.alive_ids();
    std::size_t best_i = 0, best_j = 0, best_rank = SIZE_MAX;
    for (std::size_t a = 0; a < ids.size(); ++a)
      for (std::size_t b = a + 1; b < ids.size(); ++b) {
        const auto st = tracker.plan_merge(ids[a], ids[b]);
        if (st.result_labels.size() < best_rank) {
          best_rank = st.result_labels.size();
          best_i = ids[a];
          best_j = ids[b];
        }
      }
    tracker.commit(best_i, best_j, tracker.plan_merge(best_i, best_j));
    plan.steps.emplace_back(best_i, best_j);
  }
  return plan;
}

ContractionPlan exhaustive_plan(const NetworkShape& shape) {
  const auto ids = shape.live_ids();
  const std::size_t k = ids.size();
  if (k > 8) throw CapExceeded("exhaustive plan search is limited to 8 tensors");
  if (k <= 1) return {};
  detail::LabelTracker initial(shape);
  const std::size_t E = shape.hyperedges.size();
  std::vector<std::uint32_t> touch(E, 0);
  for (std::size_t a = 0; a < k; ++a)
    for (auto h : initial.labels(ids[a])) touch[h] |= 1u << a;

  const std::uint32_t full = (1u << k) - 1;
  std::vector<std::vector<std::size_t>> labels(full + 1);
  for (std::uint32_t S = 1; S <= full; ++S) {
    if (std::popcount(S) == 1) {
      labels[S] = initial.labels(ids[std::countr_zero(S)]);
      continue;
    }
    for (std::size_t h = 0; h < E; ++h)
      if ((touch[h] & S) && (shape.hyperedges[h].open || (touch[h] & ~S & full))) labels[S].push_back(h);
  }
  auto union_size = [&](std::uint32_t a, std::uint32_t b) {
    std::size_t n = labels[a].size();
    for (auto h : labels[b])
      if (std::find(labels[a].begin(), labels[a].end(), h) == labels[a].end()) ++n;
    return n;
  };
  using Cost = unsigned __int128;
  const Cost inf = ~Cost{0};
  std::vector<Cost> best(full + 1, inf);
  std::vector<std::uint32_t> split(full + 1, 0);
  for (std::uint32_t S = 1; S <= full; ++S) {
    if (std::popcount(S) == 1) {
      best[S] = 0;
      continue;
    }
    const std::uint32_t low = S & (~S + 1);
    for (std::uint32_t A = (S - 1) & S; A > 0; A = (A - 1) & S) {
      if (!(A & low)) continue;
      const std::uint32_t B = S ^ A;
      const std::size_t u = union_size(A, B);
      if (u > 100) continue;
      const Cost c = best[A] + best[B] + (Cost{1} << u);
      if (c < best[S]) {
        best[S] = c;
        split[S] = A;
      }
    }
  }
  ContractionPlan plan;
  auto min_id = [&](std::uint32_t S) { return ids[std::countr_zero(S)]; };
  auto emit = [&](auto&& self, std::uint32_t S) -> void {
    if (std::popcount(S) == 1) return;
    const std::uint32_t A = split[S], B = S ^ A;
    self(self, A);
    self(self, B);
    plan.steps.emplace_back(min_id(A), min_id(B));
  };
  emit(emit, full);
  return plan;
}

}  // namespace

ContractionPlan find_plan(const NetworkShape& shape, PlanMode mode) {
  switch (mode) {
    case PlanMode::Greedy: return greedy_plan(shape);
    case PlanMode::Exhaustive: return exhaustive_plan(shape);
    case PlanMode::LeftToRight: {
      const auto ids = shape.live_ids();
      ContractionPlan plan;
      for (std::size_t a = 1; a < ids.size(); ++a) plan.steps.emplace_back(ids[0], ids[a]);
      return plan;
    }
  }
  return {};
}

TensorNetwork preprocess_diagonal(const TensorNetwork& net, double zero_tolerance) {
  std::vector<std::optional<Tensor>> tensors = net.tensors();
  std::vector<Hyperedge> edges = net.shape().hyperedges;

  auto edge_of = [&](SlotRef s) -> std::size_t {
    for (std::size_t h = 0; h < edges.size(); ++h)
      if (std::find(edges[h].slots.begin(), edges[h].slots.end(), s) != edges[h].slots.end()) return h;
    throw ShapeError("slot without hyperedge");
  };

  for (std::size_t id = 0; id < tensors.size(); ++id) {
    if (!tensors[id]) continue;
    for (bool fused = true; fused;) {
      fused = false;
      const Tensor& t = *tensors[id];
      const std::size_t r = t.rank();
      for (std::size_t p = 0; p < r && !fused; ++p)
        for (std::size_t q = p + 1; q < r && !fused; ++q) {
          bool diagonal = true;
          for (std::uint64_t i = 0; i < t.entries().size() && diagonal; ++i)
            if (detail::bit_at(i, r, p) != detail::bit_at(i, r, q) && std::abs(t[i]) > zero_tolerance)
              diagonal = false;
          if (!diagonal) continue;

          Tensor reduced(r - 1);
          for (std::uint64_t ni = 0; ni < reduced.entries().size(); ++ni) {
            std::uint64_t old = 0;
            std::size_t src = 0;
            for (std::size_t s = 0; s < r; ++s) {
              bool bit;
              if (s == q) {
                bit = detail::bit_at(ni, r - 1, p);
              } else {
                bit = detail::bit_at(ni, r - 1, src);
                ++src;
              }
              old = (old << 1) | (bit ? 1u : 0u);
            }
            reduced[ni] = t[old];
          }

          const std::size_t hp = edge_of({id, p});
          const std::size_t hq = edge_of({id, q});
          auto& eq = edges[hq].slots;
          eq.erase(std::find(eq.begin(), eq.end(), SlotRef{id, q}));
          if (hp != hq) {
            auto& ep = edges[hp];
            ep.slots.insert(ep.slots.end(), edges[hq].slots.begin(), edges[hq].slots.end());
            ep.open = ep.open || edges[hq].open;
            edges[hq].slots.clear();
            edges[hq].open = false;
          }
          for (auto& e : edges)
            for (auto& s : e.slots)
              if (s.tensor == id && s.slot > q) --s.slot;
          edges.erase(std::remove_if(edges.begin(), edges.end(), [](const Hyperedge& e) { return e.slots.empty(); }),
                      edges.end());
          tensors[id] = std::move(reduced);
          fused = true;
        }
    }
  }
  return TensorNetwork(std::move(tensors), std::move(edges));
}

std::uint64_t multiplication_count(const NetworkShape& shape, const ContractionPlan& plan) {
  detail::LabelTracker tracker(shape);
  std::uint64_t total = 0;
  for (auto [i, j] : plan.steps) {
    const auto st = tracker.plan_merge(i, j);
    if (st.union_labels.size() > 62) throw CapExceeded("multiplication count overflows 64 bits");
    total += std::uint64_t{1} << st.union_labels.size();
    tracker.commit(i, j, st);
  }
  if (tracker.num_alive() != 1) throw PlanError("plan does not reduce the network to one tensor");
  return total;
}

nlohmann::json to_json(const TensorNetwork& net) {
  nlohmann::json tensors = nlohmann::json::array();
  for (const auto& t : net.tensors()) {
    if (!t) {
      tensors.push_back(nullptr);
      continue;
    }
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& z : t->entries()) entries.push_back({z.real(), z.imag()});
    tensors.push_back({{"rank", t->rank()}, {"entries", std::move(entries)}});
  }
  nlohmann::json edges = nlohmann::json::array();
  nlohmann::json open = nlohmann::json::array();
  const auto& hs = net.shape().hyperedges;
  for (std::size_t h = 0; h < hs.size(); ++h) {
    nlohmann::json e = nlohmann::json::array();
    for (const auto& s : hs[h].slots) e.push_back({s.tensor, s.slot});
    edges.push_back(std::move(e));
    if (hs[h].open) open.push_back(h);
  }
  return {{"tensors", std::move(tensors)}, {"hyperedges", std::move(edges)}, {"open", std::move(open)}};
}

TensorNetwork network_from_json(const nlohmann::json& j) {
  std::vector<std::optional<Tensor>> tensors;
  for (const auto& t : j.at("tensors")) {
    if (t.is_null()) {
      tensors.emplace_back();
      continue;
    }
    std::vector<Complex> entries;
    for (const auto& z : t.at("entries")) {
      if (z.is_array())
        entries.emplace_back(z.at(0).get<double>(), z.at(1).get<double>());
      else
        entries.emplace_back(z.get<double>(), 0.0);
    }
    tensors.emplace_back(Tensor(t.at("rank").get<std::size_t>(), std::move(entries)));
  }
  std::vector<Hyperedge> edges;
  for (const auto& e : j.at("hyperedges")) {
    Hyperedge h;
    for (const auto& s : e) h.slots.push_back({s.at(0).get<std::size_t>(), s.at(1).get<std::size_t>()});
    edges.push_back(std::move(h));
  }
  if (j.contains("open"))
    for (const auto& h : j.at("open")) edges.at(h.get<std::size_t>()).open = true;
  return TensorNetwork(std::move(tensors), std::move(edges));
}

nlohmann::json to_json(const ContractionPlan& plan) {
  nlohmann::json steps = nlohmann::json::array();
  for (auto [i, j] : plan.steps) steps.push_back({i, j});
  return steps;
}

}  // namespace mbl
