#include "pqk/typing.hpp"

#include <algorithm>

#include "pqk/parser.hpp"

namespace pqk {

// TypingContext

TypingContext::TypingContext(const LabelContext& labels) {
  for (const auto& [label, type] : labels.entries()) add_label(label, type);
}

TypingContext& TypingContext::bind(std::string name, Type type) {
  bool linear = !is_parameter(type);
  vars_.push_back(VarEntry{std::move(name), std::move(type), linear});
  return *this;
}

TypingContext& TypingContext::add_label(const Label& label, WireType type) {
  if (labels_.contains(label)) throw Error(ErrorKind::DuplicateLabel, "label " + label.name() + " already in context");
  labels_[label] = LabelEntry{type};
  return *this;
}

namespace {

template <class Entry>
bool visible(const Entry& e) {
  return !e.used && !e.hidden;
}

}  // namespace

std::vector<std::pair<std::string, Type>> TypingContext::linear_vars() const {
  std::vector<std::pair<std::string, Type>> out;
  std::set<std::string> seen;
  for (auto it = vars_.rbegin(); it != vars_.rend(); ++it) {
    if (!seen.insert(it->name).second) continue;
    if (it->linear && visible(*it)) out.emplace_back(it->name, it->type);
  }
  return out;
}

std::vector<std::pair<std::string, Type>> TypingContext::parameter_vars() const {
  std::vector<std::pair<std::string, Type>> out;
  std::set<std::string> seen;
  for (auto it = vars_.rbegin(); it != vars_.rend(); ++it) {
    if (!seen.insert(it->name).second) continue;
    if (!it->linear) out.emplace_back(it->name, it->type);
  }
  return out;
}

LabelContext TypingContext::labels() const {
  LabelContext out;
  for (const auto& [label, entry] : labels_) {
    if (visible(entry)) out.add(label, entry.type);
  }
  return out;
}

bool TypingContext::only_parameters() const {
  bool vars_done = std::none_of(vars_.begin(), vars_.end(), [](const VarEntry& e) { return e.linear && !e.used; });
  bool labels_done =
      std::none_of(labels_.begin(), labels_.end(), [](const auto& entry) { return !entry.second.used; });
  return vars_done && labels_done;
}

std::string TypingContext::to_string() const {
  std::string out;
  for (const auto& e : vars_) {
    if (e.linear && e.used) continue;
    out += (out.empty() ? "" : ", ") + e.name + " : " + print_type(e.type);
  }
  out += "; ";
  bool first = true;
  for (const auto& [label, entry] : labels_) {
    if (entry.used) continue;
    out += (first ? "" : ", ") + label.name() + ":" + std::string(pqk::to_string(entry.type));
    first = false;
  }
  return out;
}

// TypeError

namespace {

std::string type_error_message(const std::string& rule, SourceSpan where, const Assignment& branch,
                               const std::string& message) {
  std::string out = "rule " + rule;
  if (where.known()) out += " at " + where.to_string();
  if (!branch.empty()) out += " on branch " + branch.to_string();
  return out + ": " + message;
}

}  // namespace

TypeError::TypeError(ErrorKind kind, std::string rule, SourceSpan where, Assignment branch, const std::string& message)
    : Error(kind, type_error_message(rule, where, branch, message)),
      rule_(std::move(rule)),
      where_(where),
      branch_(std::move(branch)) {}

// Checker

class TypeChecker {
 public:
  TypeChecker(const GateSet& gates, TypingObserver* observer) : gates_(gates), observer_(observer) {}

  Type value(TypingContext& ctx, const Value& v) {
    SpanScope scope(*this, v.span());
    switch (v.kind()) {
      case Value::Kind::Unit: return Type::unit();
      case Value::Kind::Var: return use_var(ctx, v.name());
      case Value::Kind::Label: return use_label(ctx, v.label_value());
      case Value::Kind::Lam: {
        ctx.bind(v.name(), v.param_type());
        ComputationTyping body = term(ctx, v.body());
        release_binder(ctx, "abs");
        return Type::arrow(v.param_type(), body.type);
      }
      case Value::Kind::Lift: {
        std::vector<std::size_t> hidden_vars;
        std::vector<Label> hidden_labels;
        for (std::size_t i = 0; i < ctx.vars_.size(); ++i) {
          auto& e = ctx.vars_[i];
          if (e.linear && visible(e)) {
            e.hidden = true;
            hidden_vars.push_back(i);
          }
        }
        for (auto& [label, entry] : ctx.labels_) {
          if (visible(entry)) {
            entry.hidden = true;
            hidden_labels.push_back(label);
          }
        }
        ComputationTyping body = term(ctx, v.body());
        for (auto i : hidden_vars) ctx.vars_[i].hidden = false;
        for (const auto& l : hidden_labels) ctx.labels_[l].hidden = false;
        if (!body.tree().is_leaf()) {
          fail(ErrorKind::TypeMismatch, "lift", "a lifted computation must be effect-free, got tree " +
                                                    body.tree().to_string());
        }
        return Type::bang(body.type);
      }
      case Value::Kind::Boxed: return circ(v.boxed_value());
      case Value::Kind::Pair: {
        Type left = value(ctx, v.left());
        Type right = value(ctx, v.right());
        return Type::tensor(left, right);
      }
    }
    return {};
  }

  ComputationTyping term(TypingContext& ctx, const Term& m) {
    SpanScope scope(*this, m.span());
    std::size_t index = next_index_++;
    std::optional<TypingSnapshot> before;
    if (observer_) before = snapshot(ctx);
    ComputationTyping result = term_rule(ctx, m);
    if (observer_) observer_->on_term(index, m, *before, snapshot(ctx), result);
    return result;
  }

  LiftedTermTyping lifted_term(TypingContext& ctx, const std::string& binder, const Lifted<Type>& binder_types,
                               const Lifted<Term>& mu) {
    if (!(mu.tree() == binder_types.tree())) {
      fail(ErrorKind::BranchArityMismatch, "let",
           "continuation tree " + mu.tree().to_string() + " does not match effect tree " +
               binder_types.tree().to_string());
    }
    auto all_paths = paths(mu.tree());
    std::vector<ComputationTyping> results;
    std::optional<TypingContext> leftover;
    Assignment first_path;
    for (std::size_t i = 0; i < all_paths.size(); ++i) {
      TypingContext branch_ctx = ctx;
      BranchScope branch_scope(*this, all_paths[i]);
      bool has_binder = !binder.empty();
      if (has_binder) branch_ctx.bind(binder, binder_types.leaves()[i]);
      results.push_back(term(branch_ctx, mu.leaves()[i]));
      if (has_binder) release_binder(branch_ctx, "let");
      if (!leftover) {
        leftover = branch_ctx;
        first_path = all_paths[i];
      } else if (!(*leftover == branch_ctx)) {
        fail(ErrorKind::LinearityViolation, "let",
             "branches consume different resources: " + first_path.to_string() + " leaves {" +
                 leftover->to_string() + "}, " + all_paths[i].to_string() + " leaves {" + branch_ctx.to_string() +
                 "}");
      }
    }
    ctx = *leftover;
    return {Lifted<ComputationTyping>(mu.tree(), std::move(results)), ctx};
  }

  static TypingSnapshot snapshot(const TypingContext& ctx) {
    return {ctx.linear_vars(), ctx.parameter_vars(), ctx.labels()};
  }

 private:
  struct SpanScope {
    SpanScope(TypeChecker& checker, SourceSpan span) : checker(checker), saved(checker.span_) {
      if (span.known()) checker.span_ = span;
    }
    ~SpanScope() { checker.span_ = saved; }
    TypeChecker& checker;
    SourceSpan saved;
  };

  struct BranchScope {
    BranchScope(TypeChecker& checker, const Assignment& path) : checker(checker), saved(checker.branch_) {
      try {
        checker.branch_ = checker.branch_.union_with(path);
      } catch (const Error&) {
        checker.branch_ = path;
      }
    }
    ~BranchScope() { checker.branch_ = saved; }
    TypeChecker& checker;
    Assignment saved;
  };

  [[noreturn]] void fail(ErrorKind kind, const std::string& rule, const std::string& message) const {
    throw TypeError(kind, rule, span_, branch_, message);
  }

  Type use_var(TypingContext& ctx, const std::string& name) {
    for (auto it = ctx.vars_.rbegin(); it != ctx.vars_.rend(); ++it) {
      if (it->name != name) continue;
      if (it->hidden) fail(ErrorKind::NonParameterUnderLift, "lift", "linear variable " + name + " used under lift");
      if (it->linear) {
        if (it->used) fail(ErrorKind::LinearityViolation, "var", "linear variable " + name + " used twice");
        it->used = true;
      }
      return it->type;
    }
    fail(ErrorKind::UnboundVar, "var", "unbound variable " + name);
  }

  Type use_label(TypingContext& ctx, const Label& label) {
    auto it = ctx.labels_.find(label);
    if (it == ctx.labels_.end()) fail(ErrorKind::UnboundLabel, "label", "label " + label.name() + " not in context");
    if (it->second.hidden) fail(ErrorKind::NonParameterUnderLift, "lift", "label " + label.name() + " used under lift");
    if (it->second.used) fail(ErrorKind::LinearityViolation, "label", "label " + label.name() + " used twice");
    it->second.used = true;
    return Type::wire(it->second.type);
  }

  // Pops the innermost binder, which must have been consumed if linear.
  void release_binder(TypingContext& ctx, const std::string& rule) {
    const auto& e = ctx.vars_.back();
    if (e.linear && !e.used) {
      fail(ErrorKind::LeftoverLinear, rule, "linear variable " + e.name + " : " + print_type(e.type) + " is not used");
    }
    ctx.vars_.pop_back();
  }

  Type circ(const BoxedCircuit& b) {
    CircuitSignature sig;
    try {
      sig = check_signature(b.circuit, gates_);
    } catch (const Error& e) {
      fail(e.kind(), "circ", "boxed circuit has no signature: " + e.detail());
    }
    if (!(sig.tree == b.tree())) {
      fail(ErrorKind::TypeMismatch, "circ",
           "output tree " + b.tree().to_string() + " differs from circuit tree " + sig.tree.to_string());
    }
    MType in;
    std::vector<MType> outs;
    try {
      in = type_mvalue(sig.input, b.in);
      for (std::size_t i = 0; i < sig.outputs.size(); ++i) {
        outs.push_back(type_mvalue(sig.outputs.leaves()[i], b.out.leaves()[i]));
      }
    } catch (const Error& e) {
      fail(e.kind(), "circ", e.detail());
    }
    return Type::circ(in, Lifted<MType>(sig.tree, std::move(outs)));
  }

  ComputationTyping leaf(Type t) { return ComputationTyping{Lifted<Type>(std::move(t))}; }

  ComputationTyping term_rule(TypingContext& ctx, const Term& m) {
    switch (m.kind()) {
      case Term::Kind::Return: return leaf(value(ctx, m.first()));
      case Term::Kind::App: {
        Type fun = value(ctx, m.first());
        if (fun.kind() != Type::Kind::Arrow) fail(ErrorKind::TypeMismatch, "app", "applying a " + print_type(fun));
        Type arg = value(ctx, m.second());
        if (!alpha_equiv(arg, fun.domain())) {
          fail(ErrorKind::TypeMismatch, "app",
               "argument has type " + print_type(arg) + ", expected " + print_type(fun.domain()));
        }
        return ComputationTyping{fun.codomain()};
      }
      case Term::Kind::LetPair: {
        Type pair = value(ctx, m.first());
        if (pair.kind() != Type::Kind::Tensor) {
          fail(ErrorKind::TypeMismatch, "dest", "destructuring a " + print_type(pair));
        }
        ctx.bind(m.name(), pair.left());
        ctx.bind(m.second_name(), pair.right());
        ComputationTyping body = term(ctx, m.body());
        release_binder(ctx, "dest");
        release_binder(ctx, "dest");
        return body;
      }
      case Term::Kind::Force: {
        Type thunk = value(ctx, m.first());
        if (thunk.kind() != Type::Kind::Bang) fail(ErrorKind::TypeMismatch, "force", "forcing a " + print_type(thunk));
        if (!thunk.bang_body().is_leaf()) {
          fail(ErrorKind::TypeMismatch, "force", "forced type " + print_type(thunk) + " is not a leaf");
        }
        return ComputationTyping{thunk.bang_body()};
      }
      case Term::Kind::Box: return leaf(box(ctx, m));
      case Term::Kind::Apply: return apply(ctx, m);
      case Term::Kind::Let: {
        ComputationTyping bound = term(ctx, m.bound());
        LiftedTermTyping branches = lifted_term(ctx, m.name(), bound.type, m.continuation());
        auto nested = branches.branches.map([](const ComputationTyping& c) { return c.type; });
        try {
          return ComputationTyping{flatten(nested)};
        } catch (const Error& e) {
          fail(ErrorKind::FlattenClash, "let", e.detail());
        }
      }
    }
    fail(ErrorKind::InvalidArgument, "term", "unknown term");
  }

  Type box(TypingContext& ctx, const Term& m) {
    Type thunk = value(ctx, m.first());
    const Type expected_in = Type::from_mtype(m.box_type());
    auto mismatch = [&] {
      fail(ErrorKind::TypeMismatch, "box",
           "expected !(" + print_type(expected_in) + " -o[t] theta) with theta an M-type, got " + print_type(thunk));
    };
    if (thunk.kind() != Type::Kind::Bang || !thunk.bang_body().is_leaf()) mismatch();
    const Type& fun = thunk.bang_body().leaf();
    if (fun.kind() != Type::Kind::Arrow || !alpha_equiv(fun.domain(), expected_in)) mismatch();
    std::vector<MType> outs;
    for (const auto& t : fun.codomain().leaves()) {
      auto mt = to_mtype(t);
      if (!mt) mismatch();
      outs.push_back(*mt);
    }
    return Type::circ(m.box_type(), Lifted<MType>(fun.tree(), std::move(outs)));
  }

  ComputationTyping apply(TypingContext& ctx, const Term& m) {
    Type circuit = value(ctx, m.first());
    if (circuit.kind() != Type::Kind::Circ) {
      fail(ErrorKind::TypeMismatch, "apply", "applying a " + print_type(circuit) + " as a circuit");
    }
    Type arg = value(ctx, m.second());
    Type expected = Type::from_mtype(circuit.circ_in());
    if (!alpha_equiv(arg, expected)) {
      fail(ErrorKind::TypeMismatch, "apply",
           "circuit input is " + print_type(expected) + ", argument has type " + print_type(arg));
    }
    auto binders = binder_order(circuit.tree());
    const auto& vars = m.vars();
    if (vars.size() != binders.size()) {
      fail(ErrorKind::LiftedVarNotFresh, "apply",
           "circuit binds " + std::to_string(binders.size()) + " lifted variables, " + std::to_string(vars.size()) +
               " supplied");
    }
    std::set<LiftedVar> distinct(vars.begin(), vars.end());
    if (distinct.size() != vars.size()) fail(ErrorKind::LiftedVarNotFresh, "apply", "supplied lifted variables repeat");
    std::vector<std::pair<LiftedVar, LiftedVar>> mapping;
    for (std::size_t i = 0; i < vars.size(); ++i) mapping.emplace_back(binders[i], vars[i]);
    auto pi = LiftedVarRenaming::from_pairs(mapping);
    return ComputationTyping{rename_lifted(circuit.circ_out(), pi).map([](const MType& t) {
      return Type::from_mtype(t);
    })};
  }

  const GateSet& gates_;
  TypingObserver* observer_;
  std::size_t next_index_ = 0;
  SourceSpan span_;
  Assignment branch_;
};

ValueTyping type_value(const TypingContext& ctx, const Value& v, const GateSet& gates) {
  TypingContext work = ctx;
  Type t = TypeChecker(gates, nullptr).value(work, v);
  return {t, work};
}

TermTyping type_term(const TypingContext& ctx, const Term& m, const GateSet& gates, TypingObserver* observer) {
  TypingContext work = ctx;
  ComputationTyping typing = TypeChecker(gates, observer).term(work, m);
  return {typing, work};
}

namespace {

void require_consumed(const TypingContext& leftover, SourceSpan where) {
  if (leftover.only_parameters()) return;
  throw TypeError(ErrorKind::LeftoverLinear, "closed", where, {},
                  "linear resources left unused: " + leftover.to_string());
}

}  // namespace

ComputationTyping type_closed(const Term& m, const LabelContext& labels, const GateSet& gates,
                              TypingObserver* observer) {
  TermTyping result = type_term(TypingContext(labels), m, gates, observer);
  require_consumed(result.leftover, m.span());
  return result.typing;
}

Type type_closed_value(const Value& v, const LabelContext& labels, const GateSet& gates) {
  ValueTyping result = type_value(TypingContext(labels), v, gates);
  require_consumed(result.leftover, v.span());
  return result.type;
}

LiftedTermTyping type_lifted_term(const TypingContext& ctx, const std::string& binder,
                                  const Lifted<Type>& binder_types, const Lifted<Term>& mu, const GateSet& gates) {
  TypingContext work = ctx;
  return TypeChecker(gates, nullptr).lifted_term(work, binder, binder_types, mu);
}

Lifted<Type> type_lifted_value(const Lifted<LabelContext>& labels, const Lifted<Value>& phi, const GateSet& gates) {
  if (!(labels.tree() == phi.tree())) {
    throw TypeError(ErrorKind::BranchArityMismatch, "lifted value", {}, {},
                    "label contexts over " + labels.tree().to_string() + ", values over " + phi.tree().to_string());
  }
  auto all_paths = paths(phi.tree());
  std::vector<Type> types;
  for (std::size_t i = 0; i < all_paths.size(); ++i) {
    try {
      types.push_back(type_closed_value(phi.leaves()[i], labels.leaves()[i], gates));
    } catch (const TypeError& e) {
      throw TypeError(e.kind(), e.rule(), e.where(), all_paths[i], e.detail());
    }
  }
  return Lifted<Type>(phi.tree(), std::move(types));
}

MType mjudgment_bridge(const LabelContext& q, const Value& v) {
  auto mv = to_mvalue(v);
  if (!mv) throw Error(ErrorKind::NotAnMValue, print_value(v) + " is not an M-value");
  return type_mvalue(q, *mv);
}

// Configurations

LeftConfigResult typecheck_left_config(const Circuit& c, const Assignment& a, const Term& m, const GateSet& gates) {
  LeftConfigResult out;
  CircuitSignature sig;
  try {
    sig = check_signature(c, gates);
  } catch (const Error& e) {
    out.check = ConfigCheck::failure("signature", e.what());
    return out;
  }
  if (!is_path(sig.tree, a)) {
    out.check = ConfigCheck::failure("branch", a.to_string() + " is not a path of " + sig.tree.to_string());
    return out;
  }
  const LabelContext& live = sig.outputs.at(a);
  TermTyping typed;
  try {
    typed = type_term(TypingContext(live), m, gates);
  } catch (const Error& e) {
    out.check = ConfigCheck::failure("term", e.what());
    return out;
  }
  auto past_vars = var_set(sig.tree, a);
  for (const auto& v : typed.typing.tree().vars()) {
    if (past_vars.contains(v)) {
      out.check = ConfigCheck::failure("lifted-variables",
                                       "future tree reuses " + v.name() + " from branch " + a.to_string());
      return out;
    }
  }
  LabelContext untouched = typed.leftover.labels();
  std::map<Assignment, LabelContext> at_branch{{a, untouched}};
  out.typing = LeftConfigTyping{sig.input, sig.tree, typed.typing.tree(), typed.typing.type,
                                compose(sig.outputs, at_branch)};
  return out;
}

RightConfigExpectation expectation_from(const LeftConfigTyping& left, const Assignment& branch) {
  return RightConfigExpectation{left.input, left.past, branch, left.type, left.outputs};
}

ConfigCheck typecheck_right_config(const Circuit& d, const Lifted<Value>& phi, const RightConfigExpectation& expected,
                                   const GateSet& gates) {
  CircuitSignature sig;
  try {
    sig = check_signature(d, gates);
  } catch (const Error& e) {
    return ConfigCheck::failure("signature", e.what());
  }
  if (!(sig.input == expected.input)) {
    return ConfigCheck::failure("input", "input " + sig.input.to_string() + ", expected " + expected.input.to_string());
  }
  const LiftingTree& future = expected.type.tree();
  if (!(phi.tree() == future)) {
    return ConfigCheck::failure("tree", "value tree " + phi.tree().to_string() + ", expected " + future.to_string());
  }
  if (!is_path(expected.past, expected.branch)) {
    return ConfigCheck::failure("branch",
                                expected.branch.to_string() + " is not a path of " + expected.past.to_string());
  }
  LiftingTree overall;
  try {
    overall = graft(expected.past, expected.branch, future);
  } catch (const Error& e) {
    return ConfigCheck::failure("tree", e.what());
  }
  if (!(sig.tree == overall)) {
    return ConfigCheck::failure("tree", "circuit tree " + sig.tree.to_string() + ", expected " + overall.to_string());
  }
  for (const auto& [b, ctx] : expected.outputs.entries()) {
    if (b == expected.branch) continue;
    if (!(sig.outputs.at(b) == ctx)) {
      return ConfigCheck::failure("outputs", "outputs on " + b.to_string() + " are " + sig.outputs.at(b).to_string() +
                                                 ", expected " + ctx.to_string());
    }
  }
  const LabelContext& untouched = expected.outputs.at(expected.branch);
  std::vector<LabelContext> value_labels;
  for (const auto& p : paths(future)) {
    Assignment full = expected.branch.union_with(p);
    const LabelContext& live = sig.outputs.at(full);
    if (!live.includes(untouched)) {
      return ConfigCheck::failure("outputs", "outputs on " + full.to_string() + " are " + live.to_string() +
                                                 ", which lack " + untouched.to_string());
    }
    value_labels.push_back(live.minus(untouched));
  }
  Lifted<Type> actual;
  try {
    actual = type_lifted_value(Lifted<LabelContext>(future, std::move(value_labels)), phi, gates);
  } catch (const Error& e) {
    return ConfigCheck::failure("value", e.what());
  }
  if (!alpha_equiv(actual, expected.type)) {
    return ConfigCheck::failure("value", "value has type " + print_lifted_type(actual) + ", expected " +
                                             print_lifted_type(expected.type));
  }
  return {};
}

}  // namespace pqk
