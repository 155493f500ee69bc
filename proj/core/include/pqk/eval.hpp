#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

#include "pqk/crl.hpp"
#include "pqk/lifting.hpp"
#include "pqk/syntax.hpp"

namespace pqk {

struct LeftConfig {
  Circuit circuit;
  Assignment branch;
  Term term;
};

struct RightConfig {
  Circuit circuit;
  Lifted<Value> value;
};

enum class StuckReason {
  AppNonLambda,
  DestNonPair,
  ForceNonLift,
  BoxNonLift,
  BoxNonMValue,
  ApplyNonBoxed,
  ApplyNonMValue,
  AppendFailed,
  LetTreeMismatch,
  LetFlattenClash,
};

std::string_view to_string(StuckReason reason);

struct Stuck {
  StuckReason reason;
  std::string detail;
  LeftConfig at;
};

struct FuelExhausted {};

using EvalOutcome = std::variant<RightConfig, FuelExhausted, Stuck>;

// Evaluator-side changes used to check that the metatheory harness notices
// a broken semantics.
struct EvalMutations {
  // Keep the first value of each let branch instead of flattening.
  bool skip_let_flatten = false;
};

struct EvalEnv {
  std::uint64_t fuel = 1'000'000;
  LabelSupply labels;
  const GateSet* gates = &GateSet::default_set();
  EvalMutations mutations;

  // Statistics, monotone over one evaluation.
  std::uint64_t steps = 0;
  // Let branches that appended an instruction outside their own branch.
  std::uint64_t branch_independence_violations = 0;
};

// (Q, ℓ⃗) with Q ⊨ ℓ⃗ : T, labels drawn from the supply.
std::pair<LabelContext, MValue> freshlabels(LabelSupply& supply, const MType& type);

EvalOutcome eval(const LeftConfig& cfg, EvalEnv& env);
// ⟨input(Q), ∅, M⟩; Q is empty for closed programs.
EvalOutcome run_closed(const Term& m, EvalEnv& env, const LabelContext& input = {});

}  // namespace pqk
