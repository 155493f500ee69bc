#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pqk/crl.hpp"
#include "pqk/eval.hpp"
#include "pqk/json.hpp"
#include "pqk/syntax.hpp"

namespace pqk {

// Relative weights of the generator's productions.
struct GenWeights {
  unsigned finish = 2;
  unsigned apply = 5;
  unsigned let = 2;
  unsigned dest = 2;
  unsigned app = 2;
  unsigned force = 2;
  unsigned lift = 2;
  unsigned box = 2;
  // Extra weight for circuits that bind lifted variables.
  unsigned lifting_circuit = 3;
};

struct GenConfig {
  std::uint64_t seed = 0;
  // Maximum AST depth: nested lets, lambda bodies and branches each count one.
  std::size_t max_depth = 6;
  std::size_t max_tree_depth = 2;
  const GateSet* gates = &GateSet::default_set();
  GenWeights weights;
  // Node budget per attempt before GenerationBudgetExceeded.
  std::size_t max_nodes = 4000;
};

// Named boxed circuits injected as constants: identity, H, Meas, a
// measure-and-lift and variants.
const std::vector<std::pair<std::string, BoxedCircuit>>& seed_circuits();

// A closed well-typed term; the result is checked with type_closed before it
// is returned. GenerationBudgetExceeded when the node budget runs out.
Term gen_well_typed(const GenConfig& cfg);

struct CorpusItem {
  Term term;
  std::uint64_t seed = 0;
  // Attempts that hit the node budget before this item.
  std::size_t retries = 0;
};

// `count` programs, item i generated from sub-seed shot_seed(cfg.seed, i) and
// retried with further sub-seeds on GenerationBudgetExceeded.
std::vector<CorpusItem> gen_corpus(const GenConfig& cfg, std::size_t count);

// True when the term contains an apply supplying at least one lifted variable.
bool has_lifting_apply(const Term& m);

enum class Property { SubjectReduction, Progress };

std::string_view to_string(Property p);

struct Finding {
  Property property = Property::SubjectReduction;
  // Minimized program in surface syntax; parse_term replays it.
  std::string program;
  std::string diagnostic;
  Term term;
};

struct CheckOptions {
  std::uint64_t fuel = 1'000'000;
  EvalMutations mutations;
  const GateSet* gates = &GateSet::default_set();
  bool shrink = true;
};

struct CheckResult {
  std::optional<Finding> finding;
  bool fuel_exhausted = false;
  std::uint64_t steps = 0;

  bool ok() const { return !finding; }
};

// Evaluates ⟨input(∅), ∅, m⟩ and re-typechecks the right configuration at the
// statically computed past tree and type. InvalidArgument if m is ill-typed.
CheckResult check_sr(const Term& m, const CheckOptions& options = {});
// Stuck is a finding; running out of fuel is reported separately.
CheckResult check_progress(const Term& m, const CheckOptions& options = {});

// Replaces subterms by minimal fillers of the same type that consume the same
// resources, keeping candidates that are smaller, well-typed and still
// satisfy `violates`.
Term shrink(const Term& m, const std::function<bool(const Term&)>& violates, const GateSet& gates = GateSet::default_set());

struct FuzzConfig {
  std::size_t count = 500;
  std::uint64_t seed = 0;
  std::size_t depth = 6;
  std::size_t tree_depth = 2;
  std::uint64_t fuel = 1'000'000;
  EvalMutations mutations;
  bool shrink = true;
  const GateSet* gates = &GateSet::default_set();
};

struct FuzzReport {
  std::size_t count = 0;
  std::size_t done = 0;
  std::size_t fuel_exhausted = 0;
  std::size_t stuck = 0;
  std::size_t lifting_applies = 0;
  std::size_t generation_retries = 0;
  std::size_t max_tree_depth = 0;
  std::uint64_t total_steps = 0;
  std::vector<Finding> findings;
};

// Subject reduction and progress over a generated corpus.
FuzzReport run_fuzz(const FuzzConfig& cfg);
Json to_json(const FuzzReport& report);
Json to_json(const Finding& finding);

// Random circuits with a valid signature: gates on wires live at a random
// assignment, conditional lifts of live bits.
struct CircuitGenConfig {
  std::size_t inputs = 3;
  std::size_t instructions = 12;
  std::size_t max_tree_depth = 3;
  const GateSet* gates = &GateSet::default_set();
};

Circuit gen_circuit(std::mt19937_64& rng, const CircuitGenConfig& cfg = {});

struct OracleReport {
  std::size_t instances = 0;
  std::size_t discrepancies = 0;
  std::vector<std::string> examples;
};

// Tree-form compose, flatten and graft against a path-map reference on random
// instances of depth at most `max_depth`.
OracleReport oracle_compose(std::uint64_t seed, std::size_t instances, std::size_t max_depth = 4);
OracleReport oracle_flatten(std::uint64_t seed, std::size_t instances, std::size_t max_depth = 4);
OracleReport oracle_graft(std::uint64_t seed, std::size_t instances, std::size_t max_depth = 4);

// check_signature against label and lifted-variable renamings of random
// circuits, compared component by component.
OracleReport renaming_coherence(std::uint64_t seed, std::size_t instances);

}  // namespace pqk
