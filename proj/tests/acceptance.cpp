// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>
#include <string>

#include "pqk/crl_text.hpp"
#include "pqk/eval.hpp"
#include "pqk/metatheory.hpp"
#include "pqk/parser.hpp"
#include "pqk/simulator.hpp"
#include "pqk/typing.hpp"
#include "support.hpp"

namespace {

using namespace pqk;
using Clock = std::chrono::steady_clock;

// Pinned thresholds.
constexpr double kGoldenSeconds = 1.0;
constexpr double kOracleSeconds = 10.0;
constexpr double kFuzzSeconds = 60.0;
constexpr double kSimulatorSeconds = 30.0;
constexpr std::size_t kOracleInstances = 1000;
constexpr std::size_t kOracleDepth = 4;
constexpr std::size_t kFuzzPrograms = 500;
constexpr std::size_t kFuzzDepth = 6;
constexpr std::uint64_t kFuzzSeed = 2024;
constexpr std::uint64_t kFuel = 1'000'000;
constexpr std::size_t kRenamingCircuits = 200;
constexpr double kFidelityFloor = 1.0 - 1e-9;
constexpr std::size_t kTeleportStates = 20;
constexpr std::size_t kTeleportSeeds = 10;
constexpr std::uint64_t kShots = 10'000;
constexpr double kSigmas = 5.0;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fixed(double x, int digits = 3) {
  std::ostringstream out;
  out.precision(digits);
  out << std::fixed << x;
  return out.str();
}

BoxedCircuit listing(const std::string& text) {
  auto parsed = parse_crl(text);
  return box_listing(parsed.circuit, parsed.input_order);
}

RightConfig evaluate(const Program& program) {
  EvalEnv env;
  env.fuel = kFuel;
  auto outcome = run_closed(program.body, env, program.input);
  if (!std::holds_alternative<RightConfig>(outcome)) throw std::runtime_error("evaluation did not finish");
  return std::get<RightConfig>(outcome);
}

const BoxedCircuit& boxed_result(const RightConfig& right) {
  if (!right.value.is_leaf() || right.value.leaf().kind() != Value::Kind::Boxed) {
    throw std::runtime_error("result is not a boxed circuit");
  }
  return right.value.leaf().boxed_value();
}

Outcome golden_typing() {
  auto start = Clock::now();
  auto program = parse_program(test::sample("one-way.pqk"));
  auto typing = type_closed(program.body, program.input);
  auto expected = parse_lifted_type("Qubit -o Qubit -o[<u ? _ | _>] <u ? Qubit | Bit>");
  double elapsed = seconds_since(start);
  bool match = alpha_equiv(typing.type, expected) && typing.tree().is_leaf();
  return {match && elapsed < kGoldenSeconds,
          print_lifted_type(typing.type) + " in " + fixed(elapsed, 4) + " s"};
}

Outcome golden_circuits() {
  std::string detail;
  bool pass = true;
  for (const auto& [program_file, listing_file] : {std::pair{"alice.pqk", "alice.crl"},
                                                   std::pair{"teleport.pqk", "teleport.crl"}}) {
    auto start = Clock::now();
    auto right = evaluate(parse_program(test::sample(program_file)));
    const BoxedCircuit& boxed = boxed_result(right);
    bool equiv = boxed_equiv(boxed, listing(test::sample(listing_file)));
    double elapsed = seconds_since(start);
    pass = pass && equiv && elapsed < kGoldenSeconds;
    detail += std::string(program_file) + (equiv ? " ~ " : " !~ ") + listing_file + " (" + fixed(elapsed, 4) + " s); ";
  }
  std::size_t conditional = 0;
  for (const auto& instr : listing(test::sample("teleport.crl")).circuit.instructions) {
    if (std::holds_alternative<GateApp>(instr) && !condition(instr).empty()) ++conditional;
  }
  detail += "teleport listing has " + std::to_string(conditional) + " conditional gates";
  return {pass, detail};
}

// Informational: the branching port of teleportation, corrections chosen by case.
void report_branching_port() {
  auto right = evaluate(parse_program(test::sample("teleport-branches.pqk")));
  const BoxedCircuit& boxed = boxed_result(right);
  std::size_t conditional = 0;
  for (const auto& instr : boxed.circuit.instructions) {
    if (std::holds_alternative<GateApp>(instr) && !condition(instr).empty()) ++conditional;
  }
  bool equiv = boxed_equiv(boxed, listing(test::sample("teleport.crl")));
  auto sig = check_signature(boxed.circuit);
  std::cout << "info  teleport-branches.pqk: " << conditional << " conditional gates, tree " << sig.tree.to_string()
            << (equiv ? ", equivalent to" : ", not equivalent to") << " teleport.crl\n";
}

Outcome signature_golden() {
  auto sig = check_signature(parse_crl(test::sample("teleport.crl")).circuit);
  LiftingTree tree = parse_tree("<u ? <s ? _ | _> | <s ? _ | _>>");
  auto qubit = [](const char* l) { return LabelContext{{Label(l), WireType::Qubit}}; };
  Lifted<LabelContext> expected(tree, {qubit("b0"), qubit("b1"), qubit("b2"), qubit("b3")});
  bool pass = sig.tree == tree && sig.outputs == expected;
  return {pass, "tree " + sig.tree.to_string() + ", outputs " +
                    lifted_to_string(sig.outputs, [](const LabelContext& q) { return q.to_string(); })};
}

Outcome oracle_suite() {
  auto start = Clock::now();
  std::string detail;
  bool pass = true;
  for (const auto& [name, oracle] : {std::pair{"compose", &oracle_compose}, std::pair{"flatten", &oracle_flatten},
                                     std::pair{"graft", &oracle_graft}}) {
    auto report = oracle(1, kOracleInstances, kOracleDepth);
    pass = pass && report.instances == kOracleInstances && report.discrepancies == 0;
    detail += std::string(name) + " " + std::to_string(report.discrepancies) + "/" + std::to_string(report.instances) +
              " discrepancies; ";
    if (!report.examples.empty()) detail += "e.g. " + report.examples.front() + "; ";
  }
  double elapsed = seconds_since(start);
  return {pass && elapsed < kOracleSeconds, detail + fixed(elapsed) + " s"};
}

FuzzReport fuzz(bool mutate) {
  FuzzConfig cfg;
  cfg.count = kFuzzPrograms;
  cfg.seed = kFuzzSeed;
  cfg.depth = kFuzzDepth;
  cfg.fuel = kFuel;
  cfg.mutations.skip_let_flatten = mutate;
  cfg.shrink = !mutate;
  return run_fuzz(cfg);
}

std::size_t count_findings(const FuzzReport& report, Property property) {
  std::size_t n = 0;
  for (const auto& f : report.findings) {
    if (f.property == property) ++n;
  }
  return n;
}

Outcome subject_reduction(const FuzzReport& report, double elapsed) {
  std::size_t findings = count_findings(report, Property::SubjectReduction);
  std::string detail = std::to_string(report.done) + "/" + std::to_string(report.count) + " evaluated, " +
                       std::to_string(findings) + " findings, " + std::to_string(report.lifting_applies) +
                       " with lifting apply, max tree depth " + std::to_string(report.max_tree_depth) + ", " +
                       fixed(elapsed) + " s";
  for (const auto& f : report.findings) {
    if (f.property == Property::SubjectReduction) {
      detail += "; " + f.diagnostic + " in " + f.program;
      break;
    }
  }
  return {report.count == kFuzzPrograms && findings == 0 && elapsed < kFuzzSeconds, detail};
}

Outcome progress(const FuzzReport& report, const FuzzReport& mutated) {
  std::size_t mutated_findings = mutated.findings.size();
  std::string detail = std::to_string(report.stuck) + " stuck, " + std::to_string(report.fuel_exhausted) +
                       " out of fuel; mutation without let flattening: " + std::to_string(mutated_findings) +
                       " findings (" + std::to_string(mutated.stuck) + " stuck)";
  return {report.stuck == 0 && count_findings(report, Property::Progress) == 0 && mutated_findings >= 1, detail};
}

Outcome renaming() {
  auto report = renaming_coherence(3, kRenamingCircuits);
  std::string detail = std::to_string(report.discrepancies) + " discrepancies over " +
                       std::to_string(kRenamingCircuits) + " circuits (" + std::to_string(report.instances) +
                       " comparisons)";
  if (!report.examples.empty()) detail += "; e.g. " + report.examples.front();
  return {report.discrepancies == 0 && report.instances == 2 * kRenamingCircuits, detail};
}

// Bell pair on a0/b0 followed by the teleportation listing; the state to
// send starts on q0.
Circuit teleport_with_preamble() {
  Circuit preamble = parse_crl("input(q0:Qubit); Init0() -> e0; Init0() -> f0; H(e0) -> e1; CNOT(e1, f0) -> (a0, b0);")
                         .circuit;
  Circuit body = parse_crl(test::sample("teleport.crl")).circuit;
  preamble.instructions.insert(preamble.instructions.end(), body.instructions.begin(), body.instructions.end());
  return preamble;
}

bool within(double count, double shots, double p, double& z) {
  double sigma = std::sqrt(shots * p * (1 - p));
  z = std::abs(count - shots * p) / sigma;
  return z <= kSigmas;
}

Outcome simulator() {
  auto start = Clock::now();
  Circuit teleport = teleport_with_preamble();
  check_signature(teleport);
  std::mt19937_64 rng(77);
  std::normal_distribution<double> gauss;
  double worst = 1.0;
  for (std::size_t s = 0; s < kTeleportStates; ++s) {
    Amplitude zero(gauss(rng), gauss(rng));
    Amplitude one(gauss(rng), gauss(rng));
    double norm = std::sqrt(std::norm(zero) + std::norm(one));
    WireInit psi{zero / norm, one / norm};
    QuantumState init = QuantumState::product(teleport.input, {{Label("q0"), psi}});
    for (std::size_t seed = 0; seed < kTeleportSeeds; ++seed) {
      auto trace = simulate(teleport, init, shot_seed(s, seed));
      double f = trace.state.qubit_count() == 1 ? fidelity({psi.zero, psi.one}, trace.state.amplitudes()) : 0.0;
      worst = std::min(worst, f);
    }
  }
  bool fidelity_ok = worst >= kFidelityFloor;

  auto dist = branch_distribution(teleport, QuantumState::product(teleport.input), kShots, 5);
  double worst_z = 0;
  bool uniform = dist.size() == 4;
  for (const auto& [path, count] : dist) {
    double z = 0;
    uniform = within(static_cast<double>(count), kShots, 0.25, z) && uniform;
    worst_z = std::max(worst_z, z);
  }

  auto one_way = evaluate(parse_program(test::sample("one-way-run.pqk")));
  auto coin = branch_distribution(one_way.circuit, QuantumState::product(one_way.circuit.input), kShots, 6);
  double coin_z = 0;
  bool fair = coin.size() == 2;
  for (const auto& [path, count] : coin) {
    double z = 0;
    fair = within(static_cast<double>(count), kShots, 0.5, z) && fair;
    coin_z = std::max(coin_z, z);
  }
  double elapsed = seconds_since(start);
  std::string detail = "min fidelity 1-" + fixed(1.0 - worst, 15) + " over " +
                       std::to_string(kTeleportStates * kTeleportSeeds) + " runs; teleport paths max " +
                       fixed(worst_z, 2) + " sigma; one-way paths max " + fixed(coin_z, 2) + " sigma; " +
                       fixed(elapsed) + " s";
  return {fidelity_ok && uniform && fair && elapsed < kSimulatorSeconds, detail};
}

struct Captured {
  int status = -1;
  std::string out;
};

Captured capture(const std::string& command) {
  Captured result;
  std::unique_ptr<FILE, int (*)(FILE*)> pipe(popen(command.c_str(), "r"), pclose);
  if (!pipe) return result;
  std::array<char, 4096> buffer{};
  std::size_t n = 0;
  while ((n = fread(buffer.data(), 1, buffer.size(), pipe.get())) > 0) result.out.append(buffer.data(), n);
  result.status = pclose(pipe.release());
  return result;
}

Outcome determinism() {
  const std::string binary = PQK_BINARY;
  auto dir = std::filesystem::temp_directory_path();
  std::string report_a = (dir / "pqk_acceptance_report_a.json").string();
  std::string report_b = (dir / "pqk_acceptance_report_b.json").string();
  std::string run = binary + " run " + test::sample_path("one-way-run.pqk") + " --json";
  std::string fuzz_cmd = binary + " fuzz --count 500 --seed 7 --depth 6 --report ";
  auto run_a = capture(run);
  auto run_b = capture(run);
  auto fuzz_a = capture(fuzz_cmd + report_a);
  auto fuzz_b = capture(fuzz_cmd + report_b);
  bool reports_equal = test::read_text(report_a) == test::read_text(report_b);
  std::filesystem::remove(report_a);
  std::filesystem::remove(report_b);
  bool pass = run_a.status == 0 && !run_a.out.empty() && run_a.out == run_b.out && fuzz_a.status == 0 &&
              fuzz_a.out == fuzz_b.out && reports_equal;
  return {pass, "run " + std::to_string(run_a.out.size()) + " bytes " + (run_a.out == run_b.out ? "identical" : "differ") +
                    ", fuzz stdout " + (fuzz_a.out == fuzz_b.out ? "identical" : "differs") + ", fuzz report " +
                    (reports_equal ? "identical" : "differs")};
}

int report(int number, const std::string& name, const std::function<Outcome()>& criterion) {
  Outcome outcome;
  try {
    outcome = criterion();
  } catch (const std::exception& e) {
    outcome = {false, std::string("exception: ") + e.what()};
  }
  std::cout << (outcome.pass ? "PASS" : "FAIL") << "  " << number << " " << name << ": " << outcome.detail << std::endl;
  return outcome.pass ? 0 : 1;
}

}  // namespace

int main() {
  int failed = 0;
  failed += report(1, "golden typing", golden_typing);
  failed += report(2, "golden circuits", golden_circuits);
  try {
    report_branching_port();
  } catch (const std::exception& e) {
    std::cout << "info  teleport-branches.pqk: " << e.what() << '\n';
  }
  failed += report(3, "signature golden", signature_golden);
  failed += report(4, "lifting-tree oracles", oracle_suite);

  auto start = Clock::now();
  FuzzReport clean = fuzz(false);
  double fuzz_elapsed = seconds_since(start);
  failed += report(5, "subject reduction fuzz", [&] { return subject_reduction(clean, fuzz_elapsed); });
  failed += report(6, "progress fuzz", [&] { return progress(clean, fuzz(true)); });
  failed += report(7, "renaming coherence", renaming);
  failed += report(8, "simulator", simulator);
  failed += report(9, "determinism", determinism);
  std::cout << (failed == 0 ? "all criteria pass" : std::to_string(failed) + " criteria failed") << std::endl;
  return failed;
}
