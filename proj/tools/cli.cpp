#include "cli.hpp"

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>

#include <CLI11.hpp>

#include "pqk/crl_text.hpp"
#include "pqk/eval.hpp"
#include "pqk/json.hpp"
#include "pqk/metatheory.hpp"
#include "pqk/parser.hpp"
#include "pqk/simulator.hpp"
#include "pqk/typing.hpp"

namespace pqk::cli {

namespace {

// Failures attributable to the user's input or arguments.
class UserFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Failures after the input was accepted.
class InternalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UserFailure("cannot read " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UserFailure("cannot write " + path);
  out << text;
}

GateSet load_gates() {
  const char* path = std::getenv("PQK_GATESET");
  if (path == nullptr || *path == '\0') return GateSet::default_set();
  Json j;
  try {
    j = Json::parse(read_file(path));
  } catch (const Json::parse_error& e) {
    throw UserFailure(std::string("PQK_GATESET: ") + e.what());
  }
  return gate_set_from_json(j);
}

bool has_extension(const std::string& path, std::string_view ext) {
  return std::filesystem::path(path).extension() == ext;
}

std::string print_types(const Lifted<Type>& alpha) { return print_lifted_type(alpha); }

std::string print_values(const Lifted<Value>& phi) {
  return lifted_to_string(phi, [](const Value& v) { return print_value(v); });
}

Json lifted_strings(const Lifted<Type>& alpha) {
  return lifted_to_json(alpha, [](const Type& t) { return to_json(t); });
}

Json lifted_strings(const Lifted<Value>& phi) {
  return lifted_to_json(phi, [](const Value& v) { return to_json(v); });
}

struct Checked {
  Program program;
  ComputationTyping typing;
};

Checked check_file(const std::string& path, const GateSet& gates) {
  if (has_extension(path, ".crl")) throw UserFailure(path + ": expected a .pqk program");
  Checked result;
  result.program = parse_program(read_file(path), gates);
  result.typing = type_closed(result.program.body, result.program.input, gates);
  return result;
}

struct Evaluated {
  Checked checked;
  RightConfig config;
  std::uint64_t steps = 0;
};

Evaluated evaluate_file(const std::string& path, std::uint64_t fuel, const GateSet& gates) {
  Evaluated result;
  result.checked = check_file(path, gates);
  EvalEnv env;
  env.fuel = fuel;
  env.gates = &gates;
  EvalOutcome outcome;
  try {
    outcome = run_closed(result.checked.program.body, env, result.checked.program.input);
  } catch (const Error& e) {
    throw InternalFailure(std::string("evaluation failed: ") + e.what());
  }
  if (std::holds_alternative<FuelExhausted>(outcome)) {
    throw UserFailure("fuel exhausted after " + std::to_string(env.steps) + " steps");
  }
  if (const auto* stuck = std::get_if<Stuck>(&outcome)) {
    throw InternalFailure("stuck (" + std::string(to_string(stuck->reason)) + "): " + stuck->detail + " at " +
                          print_term(stuck->at.term));
  }
  result.config = std::get<RightConfig>(std::move(outcome));
  result.steps = env.steps;
  return result;
}

// The circuit a subcommand operates on: a .crl listing, the circuit built by
// running a program, or with `boxed` the circuit inside its boxed result.
Circuit circuit_of(const std::string& path, bool boxed, std::uint64_t fuel, const GateSet& gates) {
  if (has_extension(path, ".crl")) return parse_crl(read_file(path)).circuit;
  Evaluated run = evaluate_file(path, fuel, gates);
  if (!boxed) return run.config.circuit;
  const Lifted<Value>& phi = run.config.value;
  if (!phi.is_leaf() || phi.leaf().kind() != Value::Kind::Boxed) {
    throw UserFailure(path + ": --boxed needs a program whose result is a boxed circuit");
  }
  return phi.leaf().boxed_value().circuit;
}

std::string render_circuit(const Circuit& c, const std::string& path) {
  if (has_extension(path, ".dot")) return to_dot(c, std::filesystem::path(path).stem().string());
  return print_crl(c);
}

std::string path_list(const LiftingTree& tree) {
  std::string out;
  for (const auto& p : paths(tree)) {
    if (!out.empty()) out += ' ';
    out += p.to_string();
  }
  return out;
}

int cmd_check(const std::string& file, bool json, std::ostream& out, const GateSet& gates) {
  Checked c = check_file(file, gates);
  if (json) {
    Json j;
    j["tree"] = to_json(c.typing.tree());
    j["type"] = lifted_strings(c.typing.type);
    out << j.dump(2) << '\n';
  } else {
    out << "tree: " << c.typing.tree().to_string() << '\n';
    out << "type: " << print_types(c.typing.type) << '\n';
  }
  return Success;
}

int cmd_run(const std::string& file, std::uint64_t fuel, bool json, const std::string& emit, std::ostream& out,
            const GateSet& gates) {
  Evaluated run = evaluate_file(file, fuel, gates);
  const Circuit& circuit = run.config.circuit;
  CircuitSignature signature = check_signature(circuit, gates);
  if (!emit.empty()) write_file(emit, render_circuit(circuit, emit));
  if (json) {
    Json j;
    j["type"] = lifted_strings(run.checked.typing.type);
    j["tree"] = to_json(run.config.value.tree());
    j["value"] = lifted_strings(run.config.value);
    Json list = Json::array();
    for (const auto& p : paths(run.config.value.tree())) list.push_back(to_json(p));
    j["paths"] = list;
    j["circuit"] = to_json(circuit);
    j["signature"] = to_json(signature);
    j["steps"] = run.steps;
    out << j.dump(2) << '\n';
  } else {
    out << "type: " << print_types(run.checked.typing.type) << '\n';
    out << "value: " << print_values(run.config.value) << '\n';
    out << "paths: " << path_list(run.config.value.tree()) << '\n';
    out << "steps: " << run.steps << '\n';
    out << "circuit:\n" << print_crl(circuit);
  }
  return Success;
}

struct SimArgs {
  std::string file;
  std::uint64_t shots = 1000;
  std::uint64_t seed = 0;
  std::string init;
  std::size_t max_qubits = 20;
  std::uint64_t fuel = 1'000'000;
  bool boxed = false;
  bool trace = false;
  bool json = false;
};

int cmd_sim(const SimArgs& args, std::ostream& out, const GateSet& gates) {
  Circuit circuit = circuit_of(args.file, args.boxed, args.fuel, gates);
  CircuitSignature signature = check_signature(circuit, gates);
  InitSpec init = parse_init_spec(args.init);
  for (const auto& [label, _] : init) {
    if (!signature.input.contains(label)) throw UserFailure("--init names " + label.name() + ", not an input wire");
  }
  SimOptions options{args.max_qubits};
  QuantumState state = QuantumState::product(signature.input, init, options.max_qubits);
  auto distribution = branch_distribution(circuit, state, args.shots, args.seed, gates, options);
  std::optional<RunTrace> trace;
  if (args.trace) trace = simulate(circuit, state, shot_seed(args.seed, 0), gates, options);

  if (args.json) {
    Json j;
    j["shots"] = args.shots;
    j["seed"] = args.seed;
    Json dist = Json::array();
    for (const auto& [path, count] : distribution) {
      double frequency = args.shots == 0 ? 0.0 : static_cast<double>(count) / static_cast<double>(args.shots);
      dist.push_back(Json{{"path", to_json(path)}, {"count", count}, {"frequency", frequency}});
    }
    j["distribution"] = dist;
    if (trace) j["trace"] = to_json(*trace);
    out << j.dump(2) << '\n';
    return Success;
  }
  out << "shots: " << args.shots << "  seed: " << args.seed << '\n';
  for (const auto& [path, count] : distribution) {
    double frequency = args.shots == 0 ? 0.0 : static_cast<double>(count) / static_cast<double>(args.shots);
    out << path.to_string() << ": " << count << " (" << std::fixed << std::setprecision(4) << frequency << ")\n";
  }
  if (trace) out << "trace: " << to_json(*trace).dump() << '\n';
  return Success;
}

int cmd_circuit(const std::string& file, bool boxed, const std::string& dot, bool json, std::ostream& out,
                const GateSet& gates) {
  Circuit circuit = circuit_of(file, boxed, 1'000'000, gates);
  CircuitSignature signature = check_signature(circuit, gates);
  if (!dot.empty()) write_file(dot, to_dot(circuit, std::filesystem::path(dot).stem().string()));
  if (json) {
    out << Json{{"circuit", to_json(circuit)}, {"signature", to_json(signature)}}.dump(2) << '\n';
    return Success;
  }
  out << print_crl(circuit);
  out << "tree: " << signature.tree.to_string() << '\n';
  out << "outputs: " << lifted_to_string(signature.outputs, [](const LabelContext& q) { return q.to_string(); })
      << '\n';
  return Success;
}

struct FuzzArgs {
  FuzzConfig config;
  std::string report;
  bool mutate_let_flatten = false;
  bool no_shrink = false;
};

int cmd_fuzz(FuzzArgs args, std::ostream& out, const GateSet& gates) {
  args.config.gates = &gates;
  args.config.mutations.skip_let_flatten = args.mutate_let_flatten;
  args.config.shrink = !args.no_shrink;
  FuzzReport report = run_fuzz(args.config);
  if (!args.report.empty()) write_file(args.report, to_json(report).dump(2) + "\n");
  out << "programs: " << report.count << "  evaluated: " << report.done << "  fuel exhausted: " << report.fuel_exhausted
      << "  stuck: " << report.stuck << '\n';
  out << "lifting applies: " << report.lifting_applies << "  max tree depth: " << report.max_tree_depth
      << "  generation retries: " << report.generation_retries << "  steps: " << report.total_steps << '\n';
  out << "findings: " << report.findings.size() << '\n';
  for (const auto& finding : report.findings) {
    out << "- " << to_string(finding.property) << ": " << finding.diagnostic << '\n';
    out << "  " << finding.program << '\n';
  }
  return report.findings.empty() ? Success : InternalError;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Typecheck, run, simulate and fuzz programs with dynamic lifting", "pqk"};
  app.require_subcommand(1);

  std::string file;
  bool json = false;

  auto* check = app.add_subcommand("check", "Typecheck a program and print its tree and lifted type");
  check->add_option("file", file, "Program (.pqk)")->required();
  check->add_flag("--json", json, "Print JSON");

  std::uint64_t fuel = 1'000'000;
  std::string emit;
  auto* run_cmd = app.add_subcommand("run", "Typecheck and evaluate a program");
  run_cmd->add_option("file", file, "Program (.pqk)")->required();
  run_cmd->add_option("--fuel", fuel, "Evaluation step budget");
  run_cmd->add_flag("--json", json, "Print JSON");
  run_cmd->add_option("--emit-circuit", emit, "Write the built circuit (.crl or .dot)");

  SimArgs sim_args;
  auto* sim = app.add_subcommand("sim", "Sample the circuit built by a program, or a .crl listing");
  sim->add_option("file", sim_args.file, "Program (.pqk) or circuit (.crl)")->required();
  sim->add_option("--shots", sim_args.shots, "Number of runs")->required();
  sim->add_option("--seed", sim_args.seed, "Base seed")->required();
  sim->add_option("--init", sim_args.init, "Initial wire states, e.g. q=+,a=0");
  sim->add_option("--max-qubits", sim_args.max_qubits, "Live qubit limit");
  sim->add_option("--fuel", sim_args.fuel, "Evaluation step budget");
  sim->add_flag("--boxed", sim_args.boxed, "Simulate the boxed circuit the program returns");
  sim->add_flag("--trace", sim_args.trace, "Include the trace of the first shot");
  sim->add_flag("--json", sim_args.json, "Print JSON");

  bool boxed = false;
  std::string dot;
  auto* circuit = app.add_subcommand("circuit", "Print the circuit built by a program, or a .crl listing");
  circuit->add_option("file", file, "Program (.pqk) or circuit (.crl)")->required();
  circuit->add_option("--dot", dot, "Write a Graphviz rendering");
  circuit->add_flag("--boxed", boxed, "Use the boxed circuit the program returns");
  circuit->add_flag("--json", json, "Print JSON");

  FuzzArgs fuzz_args;
  auto* fuzz = app.add_subcommand("fuzz", "Check subject reduction and progress on generated programs");
  fuzz->add_option("--count", fuzz_args.config.count, "Number of programs");
  fuzz->add_option("--seed", fuzz_args.config.seed, "Generator seed");
  fuzz->add_option("--depth", fuzz_args.config.depth, "Maximum term depth");
  fuzz->add_option("--tree-depth", fuzz_args.config.tree_depth, "Maximum lifting tree depth");
  fuzz->add_option("--fuel", fuzz_args.config.fuel, "Evaluation step budget per program");
  fuzz->add_option("--report", fuzz_args.report, "Write a JSON report");
  fuzz->add_flag("--mutate-skip-let-flatten", fuzz_args.mutate_let_flatten,
                 "Evaluate let without flattening its branches");
  fuzz->add_flag("--no-shrink", fuzz_args.no_shrink, "Report findings unminimized");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? Success : UserError;
  }

  try {
    GateSet gates = load_gates();
    if (*check) return cmd_check(file, json, out, gates);
    if (*run_cmd) return cmd_run(file, fuel, json, emit, out, gates);
    if (*sim) return cmd_sim(sim_args, out, gates);
    if (*circuit) return cmd_circuit(file, boxed, dot, json, out, gates);
    if (*fuzz) return cmd_fuzz(fuzz_args, out, gates);
  } catch (const UserFailure& e) {
    err << "error: " << e.what() << '\n';
    return UserError;
  } catch (const InternalFailure& e) {
    err << "error: " << e.what() << '\n';
    return InternalError;
  } catch (const Error& e) {
    std::string where = file.empty() ? sim_args.file : file;
    err << (where.empty() ? "" : where + ": ") << e.what() << '\n';
    return UserError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return InternalError;
  }
  return UserError;
}

}  // namespace pqk::cli
