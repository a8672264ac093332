#include "mbl/monotone.hpp"

#include <map>
#include <tuple>

namespace mbl {

std::string_view to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::Var: return "var";
    case NodeKind::Const: return "const";
    case NodeKind::Plus: return "plus";
    case NodeKind::Times: return "times";
  }
  return "?";
}

NodeId MonotoneCircuit::push(MonotoneNode n) {
  if (nodes_.size() >= std::numeric_limits<NodeId>::max()) throw CapExceeded("monotone circuit too large");
  nodes_.push_back(std::move(n));
  return static_cast<NodeId>(nodes_.size() - 1);
}

NodeId MonotoneCircuit::add_var(VarId v) { return push({NodeKind::Var, v, 0, 0, 0}); }

NodeId MonotoneCircuit::add_const(const Rational& c) {
  if (c < 0) throw std::domain_error("monotone circuits only admit nonnegative constants");
  return push({NodeKind::Const, 0, c, 0, 0});
}

NodeId MonotoneCircuit::add_plus(NodeId a, NodeId b) {
  if (a >= nodes_.size() || b >= nodes_.size()) throw std::out_of_range("plus gate refers to a later node");
  ++plus_;
  return push({NodeKind::Plus, 0, 0, a, b});
}

NodeId MonotoneCircuit::add_times(NodeId a, NodeId b) {
  if (a >= nodes_.size() || b >= nodes_.size()) throw std::out_of_range("times gate refers to a later node");
  ++times_;
  return push({NodeKind::Times, 0, 0, a, b});
}

void MonotoneCircuit::set_output(NodeId id) {
  if (id >= nodes_.size()) throw std::out_of_range("output node does not exist");
  output_ = id;
}

NodeId MonotoneCircuit::output() const {
  if (!output_) throw std::logic_error("monotone circuit has no output");
  return *output_;
}

void validate_monotone(const MonotoneCircuit& mc) {
  if (!mc.has_output()) throw std::logic_error("monotone circuit has no output");
  for (NodeId id = 0; id < mc.nodes().size(); ++id) {
    const auto& n = mc.node(id);
    if (n.kind == NodeKind::Const && n.value < 0) throw std::domain_error("negative constant");
    if ((n.kind == NodeKind::Plus || n.kind == NodeKind::Times) && (n.left >= id || n.right >= id))
      throw std::logic_error("gate arguments must precede the gate");
  }
}

namespace {

template <class T, class Leaf, class Const>
T evaluate(const MonotoneCircuit& mc, Leaf&& leaf, Const&& constant) {
  const NodeId out = mc.output();
  std::vector<T> val(out + 1);
  for (NodeId id = 0; id <= out; ++id) {
    const auto& n = mc.node(id);
    switch (n.kind) {
      case NodeKind::Var: val[id] = leaf(n.var); break;
      case NodeKind::Const: val[id] = constant(n.value); break;
      case NodeKind::Plus: val[id] = val[n.left] + val[n.right]; break;
      case NodeKind::Times: val[id] = val[n.left] * val[n.right]; break;
    }
  }
  return val[out];
}

}  // namespace

Complex eval_numeric(const MonotoneCircuit& mc, std::span<const Complex> assignment) {
  return evaluate<Complex>(
      mc,
      [&](VarId v) {
        if (v >= assignment.size()) throw std::out_of_range("assignment misses v" + std::to_string(v));
        return assignment[v];
      },
      [](const Rational& c) { return Complex(static_cast<double>(c)); });
}

Rational eval_exact(const MonotoneCircuit& mc, std::span<const Rational> assignment) {
  return evaluate<Rational>(
      mc,
      [&](VarId v) {
        if (v >= assignment.size()) throw std::out_of_range("assignment misses v" + std::to_string(v));
        return assignment[v];
      },
      [](const Rational& c) { return c; });
}

SparsePolynomial expand_symbolic(const MonotoneCircuit& mc, std::size_t term_cap) {
  const NodeId out = mc.output();
  // Only expand nodes reachable from the output.
  std::vector<bool> needed(out + 1, false);
  needed[out] = true;
  for (NodeId id = out + 1; id-- > 0;) {
    if (!needed[id]) continue;
    const auto& n = mc.node(id);
    if (n.kind == NodeKind::Plus || n.kind == NodeKind::Times) needed[n.left] = needed[n.right] = true;
  }
  std::vector<SparsePolynomial> val(out + 1);
  for (NodeId id = 0; id <= out; ++id) {
    if (!needed[id]) continue;
    const auto& n = mc.node(id);
    switch (n.kind) {
      case NodeKind::Var: val[id] = SparsePolynomial::variable(n.var); break;
      case NodeKind::Const:
        if (denominator(n.value) != 1) throw std::domain_error("symbolic expansion needs integer constants");
        val[id] = SparsePolynomial::constant(numerator(n.value));
        break;
      case NodeKind::Plus: val[id] = val[n.left] + val[n.right]; break;
      case NodeKind::Times:
        if (val[n.left].num_terms() * val[n.right].num_terms() > term_cap)
          throw CapExceeded("symbolic expansion exceeds the term cap");
        val[id] = val[n.left] * val[n.right];
        break;
    }
    if (val[id].num_terms() > term_cap) throw CapExceeded("symbolic expansion exceeds the term cap");
  }
  return val[out];
}

nlohmann::json to_json(const MethodReport& r) {
  return {{"plan", to_json(r.plan)},
          {"size", r.size},
          {"plus_gates", r.plus_gates},
          {"times_gates", r.times_gates},
          {"variables", r.num_variables},
          {"size_counts", "internal gates only, leaves excluded"}};
}

namespace {

struct EmitOps {
  MonotoneCircuit& mc;
  NodeId mul(NodeId a, NodeId b) { return mc.add_times(a, b); }
  NodeId sum(std::vector<NodeId>& terms) {
    NodeId acc = terms.front();
    for (std::size_t k = 1; k < terms.size(); ++k) acc = mc.add_plus(acc, terms[k]);
    return acc;
  }
};

}  // namespace

std::pair<MonotoneCircuit, MethodReport> compile_contraction(const Skeleton& s, const ContractionPlan& plan) {
  if (!s.closed()) throw ShapeError("monotone compilation needs a closed skeleton");
  validate_skeleton(s);
  validate_plan(s.shape, plan);
  VariableTable vars(s);
  MonotoneCircuit mc;
  for (VarId v = 0; v < vars.size(); ++v) mc.add_var(v);
  EmitOps ops{mc};
  detail::Contractor<NodeId, EmitOps> con(s.shape, detail::skeleton_tensors<NodeId>(s, vars, [](VarId v) { return v; }),
                                          ops);
  for (auto [i, j] : plan.steps) con.merge(i, j);
  auto result = con.finish();
  mc.set_output(result.entries.empty() ? mc.add_const(0) : result.entries.front().second);
  MethodReport report{plan, mc.size(), mc.num_plus(), mc.num_times(), vars.size()};
  return {std::move(mc), std::move(report)};
}

bool verify_method(const Skeleton& s, const MonotoneCircuit& mc) {
  return expand_symbolic(mc) == associated_polynomial(s);
}

MonotoneCircuit substitute_leaves(const MonotoneCircuit& mc, const SubstitutionMap& map) {
  // Each node becomes either a known constant or a node of the new circuit.
  struct Image {
    bool is_const;
    Rational c;
    NodeId node;
  };
  MonotoneCircuit out;
  std::map<VarId, NodeId> leaf;
  std::vector<Image> img;
  const NodeId last = mc.output();
  img.reserve(last + 1);
  auto materialize = [&](const Image& im) { return im.is_const ? out.add_const(im.c) : im.node; };
  for (NodeId id = 0; id <= last; ++id) {
    const auto& n = mc.node(id);
    switch (n.kind) {
      case NodeKind::Var: {
        auto it = map.find(n.var);
        if (it == map.end()) throw std::invalid_argument("substitution does not cover v" + std::to_string(n.var));
        const auto& sub = it->second;
        if (sub.kind == Substitution::Kind::Zero) {
          img.push_back({true, 0, 0});
        } else if (sub.kind == Substitution::Kind::One) {
          img.push_back({true, 1, 0});
        } else {
          auto [pos, inserted] = leaf.try_emplace(sub.var, 0);
          if (inserted) pos->second = out.add_var(sub.var);
          img.push_back({false, 0, pos->second});
        }
        break;
      }
      case NodeKind::Const: img.push_back({true, n.value, 0}); break;
      case NodeKind::Plus: {
        const Image a = img[n.left], b = img[n.right];
        if (a.is_const && b.is_const) img.push_back({true, a.c + b.c, 0});
        else if (a.is_const && a.c == 0) img.push_back(b);
        else if (b.is_const && b.c == 0) img.push_back(a);
        else img.push_back({false, 0, out.add_plus(materialize(a), materialize(b))});
        break;
      }
      case NodeKind::Times: {
        const Image a = img[n.left], b = img[n.right];
        if (a.is_const && b.is_const) img.push_back({true, a.c * b.c, 0});
        else if ((a.is_const && a.c == 0) || (b.is_const && b.c == 0)) img.push_back({true, 0, 0});
        else if (a.is_const && a.c == 1) img.push_back(b);
        else if (b.is_const && b.c == 1) img.push_back(a);
        else img.push_back({false, 0, out.add_times(materialize(a), materialize(b))});
        break;
      }
    }
  }
  out.set_output(materialize(img[last]));
  return out;
}

MonotoneCircuit dedup(const MonotoneCircuit& mc) {
  const NodeId last = mc.output();
  std::vector<bool> needed(last + 1, false);
  needed[last] = true;
  for (NodeId id = last + 1; id-- > 0;) {
    if (!needed[id]) continue;
    const auto& n = mc.node(id);
    if (n.kind == NodeKind::Plus || n.kind == NodeKind::Times) needed[n.left] = needed[n.right] = true;
  }
  MonotoneCircuit out;
  std::map<std::tuple<int, VarId, NodeId, NodeId>, NodeId> gates;
  std::map<Rational, NodeId> consts;
  std::vector<NodeId> img(last + 1, 0);
  for (NodeId id = 0; id <= last; ++id) {
    if (!needed[id]) continue;
    const auto& n = mc.node(id);
    if (n.kind == NodeKind::Const) {
      auto [it, inserted] = consts.try_emplace(n.value, 0);
      if (inserted) it->second = out.add_const(n.value);
      img[id] = it->second;
      continue;
    }
    NodeId a = 0, b = 0;
    if (n.kind != NodeKind::Var) {
      a = std::min(img[n.left], img[n.right]);
      b = std::max(img[n.left], img[n.right]);
    }
    const auto key = std::tuple{static_cast<int>(n.kind), n.var, a, b};
    auto it = gates.find(key);
    if (it != gates.end()) {
      img[id] = it->second;
      continue;
    }
    NodeId made = 0;
    if (n.kind == NodeKind::Var) made = out.add_var(n.var);
    else if (n.kind == NodeKind::Plus) made = out.add_plus(a, b);
    else made = out.add_times(a, b);
    gates.emplace(key, made);
    img[id] = made;
  }
  out.set_output(img[last]);
  return out;
}

nlohmann::json to_json(const MonotoneCircuit& mc) {
  nlohmann::json nodes = nlohmann::json::array();
  for (NodeId id = 0; id < mc.nodes().size(); ++id) {
    const auto& n = mc.node(id);
    nlohmann::json j = {{"id", id}, {"kind", to_string(n.kind)}};
    switch (n.kind) {
      case NodeKind::Var: j["args"] = nlohmann::json::array({n.var}); break;
      case NodeKind::Const: j["args"] = nlohmann::json::array({n.value.str()}); break;
      default: j["args"] = nlohmann::json::array({n.left, n.right}); break;
    }
    nodes.push_back(std::move(j));
  }
  return {{"nodes", std::move(nodes)}, {"output", mc.output()}};
}

MonotoneCircuit monotone_from_json(const nlohmann::json& j) {
  MonotoneCircuit mc;
  for (const auto& n : j.at("nodes")) {
    const auto kind = n.at("kind").get<std::string>();
    const auto& args = n.at("args");
    NodeId made = 0;
    if (kind == "var") {
      made = mc.add_var(args.at(0).get<VarId>());
    } else if (kind == "const") {
      const auto& a = args.at(0);
      made = mc.add_const(a.is_string() ? Rational(a.get<std::string>()) : Rational(a.get<std::int64_t>()));
    } else if (kind == "plus") {
      made = mc.add_plus(args.at(0).get<NodeId>(), args.at(1).get<NodeId>());
    } else if (kind == "times") {
      made = mc.add_times(args.at(0).get<NodeId>(), args.at(1).get<NodeId>());
    } else {
      throw std::invalid_argument("unknown monotone node kind: " + kind);
    }
    if (made != n.at("id").get<NodeId>()) throw std::invalid_argument("node ids must be consecutive from 0");
  }
  mc.set_output(j.at("output").get<NodeId>());
  validate_monotone(mc);
  return mc;
}

}  // namespace mbl
