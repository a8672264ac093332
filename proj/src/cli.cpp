#include "mbl/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "mbl/monotone.hpp"
#include "mbl/permanent.hpp"
#include "mbl/sat.hpp"
#include "mbl/simulator.hpp"
#include "mbl/skeleton.hpp"

namespace mbl {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct VerificationFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json read_json(const std::string& path) {
  try {
    return nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw UsageError(path + ": " + e.what());
  }
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

SquareMatrix<BigInt> read_matrix_csv(const std::string& path) {
  std::istringstream in(read_file(path));
  SquareMatrix<BigInt> m;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<BigInt> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      const auto b = cell.find_first_not_of(" \t\r");
      const auto e = cell.find_last_not_of(" \t\r");
      if (b == std::string::npos) throw UsageError("empty cell in " + path);
      try {
        row.emplace_back(cell.substr(b, e - b + 1));
      } catch (const std::exception&) {
        throw UsageError("matrix entries must be integers: " + cell);
      }
    }
    m.push_back(std::move(row));
  }
  for (const auto& row : m)
    if (row.size() != m.size()) throw UsageError("matrix must be square");
  return m;
}

struct Options {
  std::string plan = "greedy";
  std::uint64_t seed = 0;
  bool exact = false;
  double tolerance = 1e-9;
  std::string json_out;

  RunConfig config() const {
    RunConfig cfg;
    cfg.plan = plan_mode_from_string(plan);
    cfg.seed = seed;
    cfg.exact = exact;
    cfg.tolerance = tolerance;
    return cfg;
  }
};

nlohmann::json cmd_contract(const std::string& path, bool preprocess, const Options& opt) {
  auto net = network_from_json(read_json(path));
  if (!net.closed()) throw UsageError("contract needs a closed network");
  if (preprocess) net = preprocess_diagonal(net);
  const auto plan = find_plan(net, plan_mode_from_string(opt.plan));
  const Complex v = contract_all(net, plan);
  return {{"value", {v.real(), v.imag()}},
          {"plan", to_json(plan)},
          {"multiplications", multiplication_count(net, plan)},
          {"preprocessed", preprocess}};
}

TensorNetwork circuit_network(const std::string& path, const std::string& in, const std::string& out, Bits* in_bits,
                              Bits* out_bits, QuantumCircuit* circuit) {
  const auto c = quantum_from_json(read_json(path));
  const Bits a = in.empty() ? Bits(c.num_qubits(), 0) : parse_bits(in);
  const Bits b = out.empty() ? Bits(c.num_qubits(), 0) : parse_bits(out);
  if (in_bits) *in_bits = a;
  if (out_bits) *out_bits = b;
  if (circuit) *circuit = c;
  return circuit_to_network(c, a, b);
}

nlohmann::json polynomial_json(const SparsePolynomial& p) {
  nlohmann::json lines = nlohmann::json::array();
  std::istringstream in(p.dump());
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return {{"terms", p.num_terms()}, {"degree", p.degree()}, {"dump", std::move(lines)}};
}

nlohmann::json cmd_skeleton(const std::string& path, const std::string& in, const std::string& out,
                            const Options& opt) {
  const auto net = circuit_network(path, in, out, nullptr, nullptr, nullptr);
  const auto [skel, vars] = extract_skeleton(net);
  const auto plan = find_plan(skel.shape, plan_mode_from_string(opt.plan));
  nlohmann::json table = nlohmann::json::array();
  for (const auto& [id, index] : vars.entries()) table.push_back({id, index});
  return {{"skeleton", to_json(skel)},
          {"variables", std::move(table)},
          {"polynomial", polynomial_json(associated_polynomial(skel, plan))}};
}

nlohmann::json cmd_emit_monotone(const std::string& path, const std::string& in, const std::string& out,
                                 const Options& opt) {
  const auto net = circuit_network(path, in, out, nullptr, nullptr, nullptr);
  const auto [skel, vars] = extract_skeleton(net);
  const auto plan = find_plan(skel.shape, plan_mode_from_string(opt.plan));
  const auto [mc, report] = compile_contraction(skel, plan);
  return {{"circuit", to_json(mc)}, {"report", to_json(report)}};
}

nlohmann::json cmd_permanent(std::size_t n, const std::string& matrix_path, const std::string& emit_path) {
  nlohmann::json j;
  std::optional<SquareMatrix<BigInt>> m;
  if (!matrix_path.empty()) {
    m = read_matrix_csv(matrix_path);
    if (n == 0) n = m->size();
    if (m->size() != n) throw UsageError("matrix order does not match --n");
  }
  if (n == 0) throw UsageError("permanent needs --n or --matrix");
  if (n > kMaxPermEmit) throw UsageError("permanent circuit emission is limited to n <= 16");
  const auto [mc, report] = compile_perm_monotone(n);
  j["report"] = to_json(report);
  j["n"] = n;
  if (m) {
    const BigInt v = eval_perm_circuit(mc, *m);
    j["value"] = v.str();
    if (n <= 10) {
      const BigInt oracle = permanent_bruteforce(*m);
      j["bruteforce"] = oracle.str();
      if (oracle != v) {
        j["agree"] = false;
        throw VerificationFailure(j.dump());
      }
      j["agree"] = true;
    }
  }
  if (!emit_path.empty()) write_file(emit_path, to_json(mc).dump() + "\n");
  return j;
}

nlohmann::json cmd_compile_sat(const std::string& path, const std::string& emit_tidy, const std::string& emit_cphi,
                               bool cert_only, bool* failed) {
  const auto f = parse_dimacs(read_file(path));
  const auto [tidy, cert] = compile_tidy(f);
  if (!emit_tidy.empty()) write_file(emit_tidy, to_json(tidy).dump() + "\n");
  if (!emit_cphi.empty()) write_file(emit_cphi, to_json(build_cphi(f)).dump() + "\n");
  *failed = cert_only && !cert.pass();
  return to_json(cert);
}

nlohmann::json cmd_amplitude(const std::string& path, const Options& opt) {
  const auto c = quantum_from_json(read_json(path));
  const Bits zeros(c.num_qubits(), 0);
  const std::size_t n = c.roles() ? c.roles()->inputs.size() : c.num_qubits();
  nlohmann::json j = {{"n", n}};
  double amp = 0;
  if (opt.exact) {
    const auto e = exact_amplitude(c, zeros, zeros, opt.config());
    amp = e.value();
    j["exact"] = e.str();
    if (auto r = e.rational()) {
      const Rational scaled = *r * Rational(BigInt(1) << n);
      if (denominator(scaled) == 1) j["count_inferred"] = numerator(scaled).str();
    }
  } else {
    const Complex a = statevector_amplitude(c, zeros, zeros, opt.config());
    amp = a.real();
    j["imag"] = a.imag();
    j["count_inferred"] = std::llround(std::ldexp(amp, static_cast<int>(n)));
  }
  j["amplitude"] = amp;
  j["satisfiable"] = decide_sat(amp, n);
  return j;
}

nlohmann::json cmd_crosscheck(const std::string& path, const std::string& in, const std::string& out,
                              const Options& opt) {
  Bits a, b;
  QuantumCircuit c(0);
  circuit_network(path, in, out, &a, &b, &c);
  nlohmann::json results = nlohmann::json::array();
  try {
    for (const auto& r : crosscheck_amplitude(c, a, b, opt.config())) results.push_back(to_json(r));
  } catch (const IntegrityError& e) {
    for (const auto& r : e.results()) results.push_back(to_json(r));
    throw VerificationFailure(nlohmann::json{{"error", e.what()}, {"results", results}}.dump());
  }
  return {{"results", std::move(results)}, {"agree", true}, {"tolerance", opt.tolerance}};
}

nlohmann::json cmd_bound_table(std::size_t n_max, bool* failed) {
  if (n_max == 0 || n_max > kMaxPermCount) throw UsageError("--n-max must be in [1, 20]");
  nlohmann::json rows = nlohmann::json::array();
  double c_fit = 0;
  *failed = false;
  for (std::size_t n = 1; n <= n_max; ++n) {
    const auto r = perm_size_report(n);
    c_fit = std::max(c_fit, r.scaled);
    const bool above = BigInt(r.size) >= r.lower_bound;
    *failed = *failed || !above;
    rows.push_back({{"n", n},
                    {"lower_bound", r.lower_bound.str()},
                    {"size", r.size},
                    {"ratio", r.ratio},
                    {"above_bound", above}});
  }
  return {{"rows", std::move(rows)},
          {"fitted_c", c_fit},
          {"c_in_window", c_fit >= 0.1 && c_fit <= 10},
          {"size_counts", "internal gates only, leaves excluded"}};
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Tensor-network, monotone-circuit and SAT-to-amplitude laboratory", "mbl"};
  app.require_subcommand(1);
  app.fallthrough();
  Options opt;
  app.add_option("--plan", opt.plan, "contraction plan: greedy, exhaustive or left-to-right")
      ->check(CLI::IsMember({"greedy", "exhaustive", "left-to-right"}));
  app.add_option("--seed", opt.seed, "random seed");
  app.add_flag("--exact", opt.exact, "exact dyadic arithmetic where supported");
  app.add_option("--tolerance", opt.tolerance, "agreement tolerance");
  app.add_option("--json-out", opt.json_out, "write the JSON result to this file instead of stdout");

  std::string file, in_bits, out_bits, matrix, emit, emit_tidy, emit_cphi;
  bool preprocess = false, cert = false;
  std::size_t n = 0, n_max = 10;

  auto* contract = app.add_subcommand("contract", "contract a closed tensor network file");
  contract->add_option("network", file, "network JSON")->required();
  contract->add_flag("--preprocess", preprocess, "fuse diagonal slot pairs first");

  auto* skeleton = app.add_subcommand("skeleton", "skeleton and associated polynomial of a circuit");
  auto* emit_mono = app.add_subcommand("emit-monotone", "compile a circuit skeleton to a monotone circuit");
  auto* crosscheck = app.add_subcommand("crosscheck", "compare statevector, contraction and monotone amplitudes");
  for (auto* sub : {skeleton, emit_mono, crosscheck}) {
    sub->add_option("circuit", file, "circuit JSON")->required();
    sub->add_option("--in", in_bits, "input basis state, default all zeros");
    sub->add_option("--out", out_bits, "output basis state, default all zeros");
  }

  auto* permanent = app.add_subcommand("permanent", "monotone permanent circuit and its size bound");
  permanent->add_option("--n", n, "matrix order");
  permanent->add_option("--matrix", matrix, "CSV integer matrix");
  permanent->add_option("--emit-circuit", emit, "write the monotone circuit JSON here");

  auto* compile_sat = app.add_subcommand("compile-sat", "compile a DIMACS formula to a tidy reversible circuit");
  compile_sat->add_option("cnf", file, "DIMACS CNF file")->required();
  compile_sat->add_option("--emit-tidy", emit_tidy, "write the tidy circuit JSON here");
  compile_sat->add_option("--emit-cphi", emit_cphi, "write the counting quantum circuit JSON here");
  compile_sat->add_flag("--cert", cert, "exit 1 unless every size/width bound holds");

  auto* amplitude = app.add_subcommand("amplitude", "all-zeros amplitude of a counting circuit");
  amplitude->add_option("circuit", file, "circuit JSON")->required();

  auto* bound_table = app.add_subcommand("bound-table", "permanent circuit size against the lower bound");
  bound_table->add_option("--n-max", n_max, "largest order");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    nlohmann::json result;
    bool failed = false;
    if (*contract) result = cmd_contract(file, preprocess, opt);
    else if (*skeleton) result = cmd_skeleton(file, in_bits, out_bits, opt);
    else if (*emit_mono) result = cmd_emit_monotone(file, in_bits, out_bits, opt);
    else if (*crosscheck) result = cmd_crosscheck(file, in_bits, out_bits, opt);
    else if (*permanent) result = cmd_permanent(n, matrix, emit);
    else if (*compile_sat) result = cmd_compile_sat(file, emit_tidy, emit_cphi, cert, &failed);
    else if (*amplitude) result = cmd_amplitude(file, opt);
    else if (*bound_table) result = cmd_bound_table(n_max, &failed);

    const std::string text = result.dump(2) + "\n";
    if (opt.json_out.empty()) out << text;
    else write_file(opt.json_out, text);
    if (failed) {
      err << "verification failed\n";
      return 1;
    }
    return 0;
  } catch (const VerificationFailure& e) {
    out << e.what() << "\n";
    err << "verification failed\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

int cli_main(int argc, char** argv) {
  std::vector<std::string> args;
  for (int k = 1; k < argc; ++k) args.emplace_back(argv[k]);
  return cli_main(args, std::cout, std::cerr);
}

}  // namespace mbl
