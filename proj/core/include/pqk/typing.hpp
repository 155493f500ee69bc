#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pqk/crl.hpp"
#include "pqk/error.hpp"
#include "pqk/lifting.hpp"
#include "pqk/syntax.hpp"

namespace pqk {

// Γ;Q with consumption tracking. Parameter-typed variables are never marked
// consumed; linear variables and labels are consumed at most once.
class TypingContext {
 public:
  TypingContext() = default;
  explicit TypingContext(const LabelContext& labels);

  TypingContext& bind(std::string name, Type type);
  TypingContext& add_label(const Label& label, WireType type);

  // Unconsumed linear variables, innermost binding first shadowing.
  std::vector<std::pair<std::string, Type>> linear_vars() const;
  std::vector<std::pair<std::string, Type>> parameter_vars() const;
  // Unconsumed labels.
  LabelContext labels() const;
  bool only_parameters() const;

  std::string to_string() const;

  friend bool operator==(const TypingContext&, const TypingContext&) = default;

 private:
  friend class TypeChecker;

  struct VarEntry {
    std::string name;
    Type type;
    bool linear = false;
    bool used = false;
    bool hidden = false;

    friend bool operator==(const VarEntry&, const VarEntry&) = default;
  };
  struct LabelEntry {
    WireType type = WireType::Bit;
    bool used = false;
    bool hidden = false;

    friend bool operator==(const LabelEntry&, const LabelEntry&) = default;
  };

  std::vector<VarEntry> vars_;
  std::map<Label, LabelEntry> labels_;
};

// Effect tree plus lifted result type; type.tree() is the tree.
struct ComputationTyping {
  Lifted<Type> type;

  const LiftingTree& tree() const { return type.tree(); }

  friend bool operator==(const ComputationTyping&, const ComputationTyping&) = default;
};

class TypeError : public Error {
 public:
  TypeError(ErrorKind kind, std::string rule, SourceSpan where, Assignment branch, const std::string& message);

  const std::string& rule() const { return rule_; }
  SourceSpan where() const { return where_; }
  const Assignment& branch() const { return branch_; }

 private:
  std::string rule_;
  SourceSpan where_;
  Assignment branch_;
};

// Resources available around one subterm, as seen by the checker.
struct TypingSnapshot {
  std::vector<std::pair<std::string, Type>> linear_vars;
  std::vector<std::pair<std::string, Type>> parameter_vars;
  LabelContext labels;
};

// Receives every subterm the checker visits, numbered in preorder (terms
// nested in values included), with resources before and after it.
class TypingObserver {
 public:
  virtual ~TypingObserver() = default;
  virtual void on_term(std::size_t index, const Term& m, const TypingSnapshot& before, const TypingSnapshot& after,
                       const ComputationTyping& result) = 0;
};

struct ValueTyping {
  Type type;
  TypingContext leftover;
};

struct TermTyping {
  ComputationTyping typing;
  TypingContext leftover;
};

ValueTyping type_value(const TypingContext& ctx, const Value& v, const GateSet& gates = GateSet::default_set());
TermTyping type_term(const TypingContext& ctx, const Term& m, const GateSet& gates = GateSet::default_set(),
                     TypingObserver* observer = nullptr);

// ∅;Q ⊢c M, requiring every label of Q to be consumed (LeftoverLinear).
ComputationTyping type_closed(const Term& m, const LabelContext& labels = {},
                              const GateSet& gates = GateSet::default_set(), TypingObserver* observer = nullptr);
// ∅;Q ⊢v V with all of Q consumed.
Type type_closed_value(const Value& v, const LabelContext& labels = {},
                       const GateSet& gates = GateSet::default_set());

struct LiftedTermTyping {
  Lifted<ComputationTyping> branches;
  TypingContext leftover;
};

// Types μ(p) for every path p of `binder_types`' tree with `binder` bound to
// binder_types(p). All branches must leave the same resources.
LiftedTermTyping type_lifted_term(const TypingContext& ctx, const std::string& binder,
                                  const Lifted<Type>& binder_types, const Lifted<Term>& mu,
                                  const GateSet& gates = GateSet::default_set());

// ∅;Λ ⊩v φ : α, each branch closed in its own label context.
Lifted<Type> type_lifted_value(const Lifted<LabelContext>& labels, const Lifted<Value>& phi,
                               const GateSet& gates = GateSet::default_set());

// Q ⊨ V : T for a value that must be an M-value (NotAnMValue otherwise).
MType mjudgment_bridge(const LabelContext& q, const Value& v);

struct ConfigCheck {
  bool ok = true;
  std::string conjunct;
  std::string detail;

  explicit operator bool() const { return ok; }
  static ConfigCheck failure(std::string conjunct, std::string detail) {
    return ConfigCheck{false, std::move(conjunct), std::move(detail)};
  }
};

// Q; t; r; α; Δ for ⟨C, a, M⟩.
struct LeftConfigTyping {
  LabelContext input;
  LiftingTree past;
  LiftingTree future;
  Lifted<Type> type;
  Lifted<LabelContext> outputs;
};

struct LeftConfigResult {
  ConfigCheck check;
  std::optional<LeftConfigTyping> typing;
};

// Checks a ∈ P_t, V_a(t) ∩ V(r) = ∅, C ▷ t; Q → Δ ⋒_a Q' and ∅;Q' ⊢c_r M : α,
// where Q' is what M consumes of the labels live at a.
LeftConfigResult typecheck_left_config(const Circuit& c, const Assignment& a, const Term& m,
                                       const GateSet& gates = GateSet::default_set());

// Q; t; r; a; α; Δ expected of ⟨D, φ⟩ (r is the tree of `type`).
struct RightConfigExpectation {
  LabelContext input;
  LiftingTree past;
  Assignment branch;
  Lifted<Type> type;
  Lifted<LabelContext> outputs;
};

RightConfigExpectation expectation_from(const LeftConfigTyping& left, const Assignment& branch);

ConfigCheck typecheck_right_config(const Circuit& d, const Lifted<Value>& phi, const RightConfigExpectation& expected,
                                   const GateSet& gates = GateSet::default_set());

}  // namespace pqk
