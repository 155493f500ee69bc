#include "pqk/eval.hpp"

#include <map>

namespace pqk {

std::string_view to_string(StuckReason reason) {
  switch (reason) {
    case StuckReason::AppNonLambda: return "AppNonLambda";
    case StuckReason::DestNonPair: return "DestNonPair";
    case StuckReason::ForceNonLift: return "ForceNonLift";
    case StuckReason::BoxNonLift: return "BoxNonLift";
    case StuckReason::BoxNonMValue: return "BoxNonMValue";
    case StuckReason::ApplyNonBoxed: return "ApplyNonBoxed";
    case StuckReason::ApplyNonMValue: return "ApplyNonMValue";
    case StuckReason::AppendFailed: return "AppendFailed";
    case StuckReason::LetTreeMismatch: return "LetTreeMismatch";
    case StuckReason::LetFlattenClash: return "LetFlattenClash";
  }
  return "?";
}

std::pair<LabelContext, MValue> freshlabels(LabelSupply& supply, const MType& type) {
  switch (type.kind()) {
    case MType::Kind::Unit: return {LabelContext{}, MValue::unit()};
    case MType::Kind::Wire: {
      Label l = supply.fresh();
      LabelContext q;
      q.add(l, type.wire_type());
      return {q, MValue::label(l)};
    }
    case MType::Kind::Tensor: {
      auto [left_ctx, left] = freshlabels(supply, type.left());
      auto [right_ctx, right] = freshlabels(supply, type.right());
      return {left_ctx.disjoint_union(right_ctx), MValue::pair(left, right)};
    }
  }
  return {};
}

namespace {

struct StuckSignal {
  Stuck stuck;
};

struct FuelSignal {};

// Name of the sandbox binder in box; `%` cannot start a surface variable.
const std::string kSandboxBinder = "%x";

class Evaluator {
 public:
  explicit Evaluator(EvalEnv& env) : env_(env) {}

  RightConfig eval(Circuit c, const Assignment& a, const Term& m) {
    if (env_.fuel == 0) throw FuelSignal{};
    --env_.fuel;
    ++env_.steps;
    switch (m.kind()) {
      case Term::Kind::Return: return {std::move(c), Lifted<Value>(m.first())};
      case Term::Kind::App: {
        const Value& fun = m.first();
        if (fun.kind() != Value::Kind::Lam) stuck(StuckReason::AppNonLambda, "applying a non-abstraction", c, a, m);
        return eval(std::move(c), a, substitute(fun.body(), m.second(), fun.name()));
      }
      case Term::Kind::LetPair: {
        const Value& pair = m.first();
        if (pair.kind() != Value::Kind::Pair) stuck(StuckReason::DestNonPair, "destructuring a non-pair", c, a, m);
        // Simultaneous substitution: rename the second binder out of the way
        // of the first value's free variables.
        Term body = m.body();
        const std::string& first = m.name();
        std::string second = m.second_name();
        if (first != second && free_vars(pair.left()).contains(second)) {
          auto taken = free_vars(body);
          std::string fresh = second;
          do {
            fresh += "'";
          } while (taken.contains(fresh) || fresh == first);
          body = substitute(body, Value::var(fresh), second);
          second = fresh;
        }
        if (first == second) {
          body = substitute(body, pair.right(), second);
        } else {
          body = substitute(substitute(body, pair.left(), first), pair.right(), second);
        }
        return eval(std::move(c), a, body);
      }
      case Term::Kind::Force: {
        const Value& thunk = m.first();
        if (thunk.kind() != Value::Kind::Lift) stuck(StuckReason::ForceNonLift, "forcing a non-lift", c, a, m);
        return eval(std::move(c), a, thunk.body());
      }
      case Term::Kind::Apply: return apply(std::move(c), a, m);
      case Term::Kind::Box: return box(std::move(c), a, m);
      case Term::Kind::Let: return let(std::move(c), a, m);
    }
    stuck(StuckReason::AppNonLambda, "unknown term", c, a, m);
  }

 private:
  [[noreturn]] static void stuck(StuckReason reason, const std::string& detail, const Circuit& c, const Assignment& a,
                                 const Term& m) {
    throw StuckSignal{Stuck{reason, detail, LeftConfig{c, a, m}}};
  }

  RightConfig apply(Circuit c, const Assignment& a, const Term& m) {
    const Value& circuit = m.first();
    if (circuit.kind() != Value::Kind::Boxed) stuck(StuckReason::ApplyNonBoxed, "applying a non-circuit", c, a, m);
    auto target = to_mvalue(m.second());
    if (!target) stuck(StuckReason::ApplyNonMValue, "circuit argument is not an M-value", c, a, m);
    try {
      AppendResult appended = append(c, a, *target, circuit.boxed_value(), m.vars(), env_.labels, *env_.gates);
      return {std::move(appended.circuit), appended.out.map([](const MValue& v) { return from_mvalue(v); })};
    } catch (const Error& e) {
      stuck(StuckReason::AppendFailed, e.what(), c, a, m);
    }
  }

  RightConfig box(Circuit c, const Assignment& a, const Term& m) {
    const Value& thunk = m.first();
    if (thunk.kind() != Value::Kind::Lift) stuck(StuckReason::BoxNonLift, "boxing a non-lift", c, a, m);
    auto [q, in] = freshlabels(env_.labels, m.box_type());
    Term sandbox = Term::let(kSandboxBinder, thunk.body(),
                             Lifted<Term>(Term::app(Value::var(kSandboxBinder), from_mvalue(in))));
    RightConfig inner = eval(Circuit{q, {}}, Assignment{}, sandbox);
    std::vector<MValue> outs;
    for (const auto& v : inner.value.leaves()) {
      auto mv = to_mvalue(v);
      if (!mv) stuck(StuckReason::BoxNonMValue, "boxed computation returned a non-M-value", c, a, m);
      outs.push_back(*mv);
    }
    BoxedCircuit boxed{in, std::move(inner.circuit), Lifted<MValue>(inner.value.tree(), std::move(outs))};
    return {std::move(c), Lifted<Value>(Value::boxed(std::move(boxed)))};
  }

  RightConfig let(Circuit c, const Assignment& a, const Term& m) {
    RightConfig first = eval(std::move(c), a, m.bound());
    const Lifted<Term>& mu = m.continuation();
    const LiftingTree& tree = first.value.tree();
    if (!(mu.tree() == tree)) {
      stuck(StuckReason::LetTreeMismatch,
            "value tree " + tree.to_string() + " does not match continuation tree " + mu.tree().to_string(),
            first.circuit, a, m);
    }
    Circuit current = std::move(first.circuit);
    std::map<Assignment, Lifted<Value>> results;
    for (const auto& p : path_set(tree)) {
      Assignment branch;
      try {
        branch = a.union_with(p);
      } catch (const Error& e) {
        stuck(StuckReason::LetTreeMismatch, e.what(), current, a, m);
      }
      std::size_t before = current.instructions.size();
      Term next = substitute(mu.at(p), first.value.at(p), m.name());
      RightConfig done = eval(std::move(current), branch, next);
      for (std::size_t i = before; i < done.circuit.instructions.size(); ++i) {
        if (!condition(done.circuit.instructions[i]).extends(branch)) ++env_.branch_independence_violations;
      }
      current = std::move(done.circuit);
      results.emplace(p, std::move(done.value));
    }
    std::vector<Lifted<Value>> ordered;
    for (const auto& p : paths(tree)) ordered.push_back(results.at(p));
    if (env_.mutations.skip_let_flatten) {
      std::vector<Value> firsts;
      for (const auto& r : ordered) firsts.push_back(r.leaves().front());
      return {std::move(current), Lifted<Value>(tree, std::move(firsts))};
    }
    try {
      return {std::move(current), flatten(Lifted<Lifted<Value>>(tree, std::move(ordered)))};
    } catch (const Error& e) {
      stuck(StuckReason::LetFlattenClash, e.what(), current, a, m);
    }
  }

  EvalEnv& env_;
};

}  // namespace

EvalOutcome eval(const LeftConfig& cfg, EvalEnv& env) {
  env.labels.avoid(cfg.circuit);
  for (const auto& l : free_labels(cfg.term)) env.labels.avoid(l);
  try {
    return Evaluator(env).eval(cfg.circuit, cfg.branch, cfg.term);
  } catch (const StuckSignal& signal) {
    return signal.stuck;
  } catch (const FuelSignal&) {
    return FuelExhausted{};
  }
}

EvalOutcome run_closed(const Term& m, EvalEnv& env, const LabelContext& input) {
  return eval(LeftConfig{Circuit{input, {}}, Assignment{}, m}, env);
}

}  // namespace pqk
