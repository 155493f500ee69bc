#include <algorithm>
#include <set>

#include "pqk/metatheory.hpp"
#include "pqk/simulator.hpp"
#include "pqk/typing.hpp"

namespace pqk {

namespace {

BoxedCircuit measure_and_lift() {
  Label q("q");
  Label b("b");
  LiftedVar u("u");
  Circuit c{{{q, WireType::Qubit}}, {GateApp{{}, "Meas", MValue::label(q), MValue::label(b)}, LiftInstr{{}, b, u}}};
  return {MValue::label(q), c, Lifted<MValue>::node(u, Lifted<MValue>(MValue::unit()), Lifted<MValue>(MValue::unit()))};
}

BoxedCircuit measure_lift_prepare() {
  Label q("q");
  Label b("b");
  Label zero("r0");
  Label one("r1");
  LiftedVar u("u");
  Circuit c{{{q, WireType::Qubit}},
            {GateApp{{}, "Meas", MValue::label(q), MValue::label(b)}, LiftInstr{{}, b, u},
             GateApp{{{u, false}}, "Init0", MValue::unit(), MValue::label(zero)},
             GateApp{{{u, true}}, "Init1", MValue::unit(), MValue::label(one)}}};
  return {MValue::label(q), c,
          Lifted<MValue>::node(u, Lifted<MValue>(MValue::label(zero)), Lifted<MValue>(MValue::label(one)))};
}

BoxedCircuit lift_bit() {
  Label b("b");
  LiftedVar u("u");
  Circuit c{{{b, WireType::Bit}}, {LiftInstr{{}, b, u}}};
  return {MValue::label(b), c, Lifted<MValue>::node(u, Lifted<MValue>(MValue::unit()), Lifted<MValue>(MValue::unit()))};
}

BoxedCircuit identity() {
  Label q("q");
  return {MValue::label(q), Circuit{{{q, WireType::Qubit}}, {}}, Lifted<MValue>(MValue::label(q))};
}

// True when using a value of this type may append instructions that bind
// lifted variables, so duplicates of it must not run on one path.
bool has_effect(const Type& t) {
  switch (t.kind()) {
    case Type::Kind::Arrow: {
      if (!t.codomain().is_leaf()) return true;
      return std::ranges::any_of(t.codomain().leaves(), has_effect);
    }
    case Type::Kind::Bang: return std::ranges::any_of(t.bang_body().leaves(), has_effect);
    case Type::Kind::Tensor: return has_effect(t.left()) || has_effect(t.right());
    default: return false;
  }
}

struct Binding {
  std::string name;
  Type type;
};

using Bindings = std::vector<Binding>;

enum class Mode { General, Circuit };

struct Gen {
  Term term;
  Lifted<Type> type;
};

struct GenV {
  Value value;
  Type type;
};

struct CircuitChoice {
  Value value;
  Type type;
};

class Generator {
 public:
  Generator(const GenConfig& cfg, std::uint64_t seed) : cfg_(cfg), rng_(seed) {
    for (const auto& [name, gate] : cfg.gates->gates()) add_circuit(gate_constant(gate));
    for (const auto& [name, boxed] : seed_circuits()) add_circuit(boxed);
  }

  Term program() {
    return term({}, {}, static_cast<int>(cfg_.max_depth), static_cast<int>(cfg_.max_tree_depth), Mode::General).term;
  }

 private:
  void add_circuit(const BoxedCircuit& boxed) {
    Value v = Value::boxed(boxed);
    try {
      pool_.push_back({v, type_closed_value(v, {}, *cfg_.gates)});
    } catch (const Error&) {
      // Seed circuits that use gates missing from a custom gate set.
    }
  }

  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  bool coin(double p) { return std::bernoulli_distribution(p)(rng_); }

  std::size_t weighted(const std::vector<unsigned>& weights) {
    unsigned total = 0;
    for (auto w : weights) total += w;
    if (total == 0) return weights.size();
    unsigned r = std::uniform_int_distribution<unsigned>(0, total - 1)(rng_);
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (r < weights[i]) return i;
      r -= weights[i];
    }
    return weights.size() - 1;
  }

  void tick() {
    if (++nodes_ > cfg_.max_nodes) {
      throw Error(ErrorKind::GenerationBudgetExceeded, "more than " + std::to_string(cfg_.max_nodes) + " nodes");
    }
  }

  std::string fresh_var() { return "x" + std::to_string(next_var_++); }
  LiftedVar fresh_lifted() { return LiftedVar("u" + std::to_string(next_lifted_++)); }

  static void bind(Bindings& linear, Bindings& params, const std::string& name, const Type& type) {
    (is_parameter(type) ? params : linear).push_back({name, type});
  }

  // Effectful parameters used once are dropped for the rest of the path.
  template <class Syntax>
  static void spend(Bindings& params, const Syntax& used) {
    auto names = free_vars(used);
    std::erase_if(params, [&](const Binding& b) { return names.contains(b.name) && has_effect(b.type); });
  }

  Type random_domain() {
    static const std::vector<Type> domains = {Type::unit(), Type::qubit(), Type::bit(),
                                              Type::tensor(Type::qubit(), Type::qubit()),
                                              Type::tensor(Type::qubit(), Type::bit())};
    return domains[pick(domains.size())];
  }

  MType random_mtype() {
    static const std::vector<MType> types = {MType::qubit(), MType::qubit(), MType::bit(), MType::unit(),
                                             MType::tensor(MType::qubit(), MType::qubit())};
    return types[pick(types.size())];
  }

  // A value of M-type `t` built from variables of `pool`, removing them.
  std::optional<Value> take(const MType& t, Bindings& pool) {
    if (t.kind() == MType::Kind::Unit) return Value::unit();
    Type wanted = Type::from_mtype(t);
    std::vector<std::size_t> matches;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (alpha_equiv(pool[i].type, wanted)) matches.push_back(i);
    }
    if (!matches.empty()) {
      std::size_t i = matches[pick(matches.size())];
      Value v = Value::var(pool[i].name);
      pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(i));
      return v;
    }
    if (t.kind() != MType::Kind::Tensor) return std::nullopt;
    auto left = take(t.left(), pool);
    if (!left) return std::nullopt;
    auto right = take(t.right(), pool);
    if (!right) return std::nullopt;
    return Value::pair(*left, *right);
  }

  Gen term(Bindings linear, Bindings params, int depth, int tree_budget, Mode mode) {
    tick();
    if (depth <= 1) return finish(linear, params, depth, tree_budget, mode);
    enum Production { Finish, Apply, Let, Dest, App, AppVar, Force, Lift, Box };
    bool general = mode == Mode::General;
    const auto& w = cfg_.weights;
    bool any_tensor = std::ranges::any_of(linear, [](const Binding& b) { return b.type.kind() == Type::Kind::Tensor; }) ||
                      std::ranges::any_of(params, [](const Binding& b) { return b.type.kind() == Type::Kind::Tensor; });
    bool any_bang = std::ranges::any_of(params, [](const Binding& b) { return b.type.kind() == Type::Kind::Bang; });
    bool any_arrow = std::ranges::any_of(linear, [](const Binding& b) { return b.type.kind() == Type::Kind::Arrow; });
    std::vector<unsigned> weights = {
        w.finish,
        w.apply,
        w.let,
        any_tensor ? w.dest : 0,
        general ? w.app : 0,
        general && any_arrow ? w.app * 2 : 0,
        general && any_bang ? w.force : 0,
        general ? w.lift : 0,
        w.box,
    };
    switch (weighted(weights)) {
      case Apply:
        if (auto g = let_apply(linear, params, depth, tree_budget, mode)) return *g;
        break;
      case Let: return let_general(linear, params, depth, tree_budget, mode);
      case Dest: return dest(linear, params, depth, tree_budget, mode);
      case App: return app_lambda(linear, params, depth, tree_budget);
      case AppVar:
        if (auto g = app_var(linear, params, depth, tree_budget)) return *g;
        break;
      case Force:
        if (auto g = force(linear, params, depth, tree_budget)) return *g;
        break;
      case Lift: return lift(linear, params, depth, tree_budget);
      case Box: return box(linear, params, depth, tree_budget, mode);
      default: break;
    }
    return finish(linear, params, depth, tree_budget, mode);
  }

  Gen finish(Bindings linear, Bindings params, int depth, int tree_budget, Mode mode) {
    if (mode == Mode::Circuit) {
      GenV v = tuple(linear);
      return {Term::ret(v.value), Lifted<Type>(v.type)};
    }
    GenV v = value(linear, params, depth, tree_budget);
    return {Term::ret(v.value), Lifted<Type>(v.type)};
  }

  // let x = bound in μ, generating μ at every path of the bound type.
  Gen bind_continuation(const Term& bound, const Lifted<Type>& bound_type, const Bindings& linear,
                        const Bindings& params, int depth, int tree_budget, Mode mode) {
    std::string x = fresh_var();
    int budget = tree_budget - static_cast<int>(bound_type.tree().depth());
    std::vector<Term> branches;
    std::vector<Lifted<Type>> types;
    for (const auto& t : bound_type.leaves()) {
      Bindings branch_linear = linear;
      Bindings branch_params = params;
      bind(branch_linear, branch_params, x, t);
      Gen g = term(branch_linear, branch_params, depth - 1, budget, mode);
      branches.push_back(g.term);
      types.push_back(g.type);
    }
    Lifted<Term> mu(bound_type.tree(), std::move(branches));
    return {Term::let(x, bound, mu), flatten(Lifted<Lifted<Type>>(bound_type.tree(), std::move(types)))};
  }

  std::optional<Gen> let_apply(Bindings linear, Bindings params, int depth, int tree_budget, Mode mode) {
    std::vector<CircuitChoice> choices = pool_;
    for (const auto& p : params) {
      if (p.type.kind() == Type::Kind::Circ) choices.push_back({Value::var(p.name), p.type});
    }
    std::vector<unsigned> weights;
    for (const auto& c : choices) {
      Bindings trial = linear;
      bool fits = static_cast<int>(c.type.tree().depth()) <= tree_budget && take(c.type.circ_in(), trial).has_value();
      unsigned weight = c.type.tree().is_leaf() ? 1 : cfg_.weights.lifting_circuit;
      weights.push_back(fits ? weight : 0);
    }
    std::size_t chosen = weighted(weights);
    if (chosen >= choices.size()) return std::nullopt;
    const auto& c = choices[chosen];
    Value arg = *take(c.type.circ_in(), linear);
    std::vector<LiftedVar> vars;
    std::vector<std::pair<LiftedVar, LiftedVar>> mapping;
    for (const auto& binder : binder_order(c.type.tree())) {
      vars.push_back(fresh_lifted());
      mapping.emplace_back(binder, vars.back());
    }
    auto pi = LiftedVarRenaming::from_pairs(mapping);
    Lifted<Type> out = rename_lifted(c.type.circ_out(), pi).map([](const MType& t) { return Type::from_mtype(t); });
    return bind_continuation(Term::apply(vars, c.value, arg), out, linear, params, depth, tree_budget, mode);
  }

  Gen let_general(Bindings linear, Bindings params, int depth, int tree_budget, Mode mode) {
    Bindings first;
    Bindings rest;
    for (auto& b : linear) (coin(0.5) ? first : rest).push_back(b);
    Gen bound = term(first, params, depth - 1, tree_budget, mode);
    spend(params, bound.term);
    return bind_continuation(bound.term, bound.type, rest, params, depth, tree_budget, mode);
  }

  Gen dest(Bindings linear, Bindings params, int depth, int tree_budget, Mode mode) {
    std::vector<std::pair<bool, std::size_t>> tensors;
    for (std::size_t i = 0; i < linear.size(); ++i) {
      if (linear[i].type.kind() == Type::Kind::Tensor) tensors.emplace_back(true, i);
    }
    for (std::size_t i = 0; i < params.size(); ++i) {
      if (params[i].type.kind() == Type::Kind::Tensor) tensors.emplace_back(false, i);
    }
    auto [is_linear, index] = tensors[pick(tensors.size())];
    Bindings& from = is_linear ? linear : params;
    Binding pair = from[index];
    if (is_linear || has_effect(pair.type)) from.erase(from.begin() + static_cast<std::ptrdiff_t>(index));
    std::string a = fresh_var();
    std::string b = fresh_var();
    bind(linear, params, a, pair.type.left());
    bind(linear, params, b, pair.type.right());
    Gen body = term(linear, params, depth - 1, tree_budget, mode);
    return {Term::let_pair(a, b, Value::var(pair.name), body.term), body.type};
  }

  Gen app_lambda(Bindings linear, Bindings params, int depth, int tree_budget) {
    Bindings for_arg;
    Bindings captured;
    for (auto& b : linear) (coin(0.5) ? for_arg : captured).push_back(b);
    GenV arg = value(for_arg, params, depth - 1, tree_budget);
    spend(params, arg.value);
    std::string y = fresh_var();
    bind(captured, params, y, arg.type);
    Gen body = term(captured, params, depth - 1, tree_budget, Mode::General);
    return {Term::app(Value::lam(y, arg.type, body.term), arg.value), body.type};
  }

  std::optional<Gen> app_var(Bindings linear, Bindings params, int depth, int tree_budget) {
    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < linear.size(); ++i) {
      const Type& t = linear[i].type;
      if (t.kind() != Type::Kind::Arrow || static_cast<int>(t.tree().depth()) > tree_budget) continue;
      auto domain = to_mtype(t.domain());
      if (!domain) continue;
      Bindings trial = linear;
      trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(i));
      if (take(*domain, trial)) candidates.push_back(i);
    }
    if (candidates.empty()) return std::nullopt;
    std::size_t i = candidates[pick(candidates.size())];
    Binding f = linear[i];
    linear.erase(linear.begin() + static_cast<std::ptrdiff_t>(i));
    Value arg = *take(*to_mtype(f.type.domain()), linear);
    return bind_continuation(Term::app(Value::var(f.name), arg), f.type.codomain(), linear, params, depth,
                             tree_budget, Mode::General);
  }

  std::optional<Gen> force(Bindings linear, Bindings params, int depth, int tree_budget) {
    std::vector<std::size_t> bangs;
    for (std::size_t i = 0; i < params.size(); ++i) {
      if (params[i].type.kind() == Type::Kind::Bang && params[i].type.bang_body().is_leaf()) bangs.push_back(i);
    }
    if (bangs.empty()) return std::nullopt;
    Binding g = params[bangs[pick(bangs.size())]];
    Term bound = Term::force(Value::var(g.name));
    spend(params, bound);
    return bind_continuation(bound, g.type.bang_body(), linear, params, depth, tree_budget, Mode::General);
  }

  Gen lift(Bindings linear, Bindings params, int depth, int tree_budget) {
    GenV inner = value({}, params, depth - 1, tree_budget);
    spend(params, inner.value);
    Value thunk = Value::lift(Term::ret(inner.value));
    return bind_continuation(Term::ret(thunk), Lifted<Type>(Type::bang(Lifted<Type>(inner.type))), linear, params,
                             depth, tree_budget, Mode::General);
  }

  Gen box(Bindings linear, Bindings params, int depth, int tree_budget, Mode mode) {
    MType in = random_mtype();
    std::string y = fresh_var();
    Bindings body_linear;
    Bindings body_params = params;
    bind(body_linear, body_params, y, Type::from_mtype(in));
    Gen body = term(body_linear, body_params, depth - 1, static_cast<int>(cfg_.max_tree_depth), Mode::Circuit);
    std::vector<MType> outs;
    for (const auto& t : body.type.leaves()) outs.push_back(*to_mtype(t));
    Term bound = Term::box(in, Value::lift(Term::ret(Value::lam(y, Type::from_mtype(in), body.term))));
    spend(params, bound);
    Type circ = Type::circ(in, Lifted<MType>(body.type.tree(), std::move(outs)));
    return bind_continuation(bound, Lifted<Type>(circ), linear, params, depth, tree_budget, mode);
  }

  // Tuple of all the linear variables, `*` when there are none.
  GenV tuple(Bindings linear) {
    tick();
    if (linear.empty()) return {Value::unit(), Type::unit()};
    std::shuffle(linear.begin(), linear.end(), rng_);
    auto build = [&](auto&& self, std::size_t begin, std::size_t end) -> GenV {
      if (end - begin == 1) return {Value::var(linear[begin].name), linear[begin].type};
      std::size_t split = begin + 1 + pick(end - begin - 1);
      GenV left = self(self, begin, split);
      GenV right = self(self, split, end);
      return {Value::pair(left.value, right.value), Type::tensor(left.type, right.type)};
    };
    return build(build, 0, linear.size());
  }

  GenV value(Bindings linear, Bindings params, int depth, int tree_budget) {
    tick();
    enum Choice { Unit, Param, Identity, Lambda, Lift, Boxed, Tuple };
    bool deep = depth > 1;
    std::vector<unsigned> weights;
    if (linear.empty()) {
      weights = {2, params.empty() ? 0U : 1U, 1, deep ? 2U : 0U, deep ? 1U : 0U, deep ? 1U : 0U, 0};
    } else {
      weights = {0, 0, 0, deep ? 2U : 0U, 0, 0, 3};
    }
    switch (weighted(weights)) {
      case Unit: return {Value::unit(), Type::unit()};
      case Param: {
        const Binding& p = params[pick(params.size())];
        return {Value::var(p.name), p.type};
      }
      case Identity: {
        Type domain = random_domain();
        std::string y = fresh_var();
        return {Value::lam(y, domain, Term::ret(Value::var(y))), Type::arrow(domain, Lifted<Type>(domain))};
      }
      case Lambda: {
        Type domain = random_domain();
        std::string y = fresh_var();
        bind(linear, params, y, domain);
        Gen body = term(linear, params, depth - 1, tree_budget, Mode::General);
        return {Value::lam(y, domain, body.term), Type::arrow(domain, body.type)};
      }
      case Lift: {
        GenV inner = value({}, params, depth - 1, tree_budget);
        return {Value::lift(Term::ret(inner.value)), Type::bang(Lifted<Type>(inner.type))};
      }
      case Boxed: {
        const auto& c = pool_[pick(pool_.size())];
        return {c.value, c.type};
      }
      default: {
        GenV all = tuple(linear);
        if (coin(0.2)) {
          GenV extra = value({}, params, depth - 1, tree_budget);
          return {Value::pair(all.value, extra.value), Type::tensor(all.type, extra.type)};
        }
        return all;
      }
    }
  }

  const GenConfig& cfg_;
  std::mt19937_64 rng_;
  std::vector<CircuitChoice> pool_;
  std::size_t nodes_ = 0;
  std::size_t next_var_ = 0;
  std::size_t next_lifted_ = 0;
};

}  // namespace

const std::vector<std::pair<std::string, BoxedCircuit>>& seed_circuits() {
  static const std::vector<std::pair<std::string, BoxedCircuit>> circuits = {
      {"Id", identity()},
      {"MeasLift", measure_and_lift()},
      {"MeasLiftPrep", measure_lift_prepare()},
      {"LiftBit", lift_bit()},
  };
  return circuits;
}

Term gen_well_typed(const GenConfig& cfg) {
  Term m = Generator(cfg, cfg.seed).program();
  try {
    type_closed(m, {}, *cfg.gates);
  } catch (const Error& e) {
    throw Error(ErrorKind::InvalidArgument,
                std::string("generator produced an ill-typed term (seed ") + std::to_string(cfg.seed) + "): " + e.what());
  }
  return m;
}

std::vector<CorpusItem> gen_corpus(const GenConfig& cfg, std::size_t count) {
  std::vector<CorpusItem> corpus;
  corpus.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    GenConfig item = cfg;
    item.seed = shot_seed(cfg.seed, i);
    std::size_t retries = 0;
    while (true) {
      try {
        corpus.push_back({gen_well_typed(item), item.seed, retries});
        break;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::GenerationBudgetExceeded) throw;
        ++retries;
        item.seed = shot_seed(item.seed, retries);
      }
    }
  }
  return corpus;
}

namespace {

// Builds an M-value of type `t` from `pick_label`.
template <class F>
MValue build_mvalue(const MType& t, F&& pick_label) {
  switch (t.kind()) {
    case MType::Kind::Unit: return MValue::unit();
    case MType::Kind::Wire: return MValue::label(pick_label(t.wire_type()));
    case MType::Kind::Tensor: {
      MValue left = build_mvalue(t.left(), pick_label);
      return MValue::pair(left, build_mvalue(t.right(), pick_label));
    }
  }
  return {};
}

// Labels live on every path that extends `a`.
LabelContext live_at(const CircuitSignature& sig, const Assignment& a) {
  auto extending = extending_paths(sig.tree, a);
  LabelContext live = sig.outputs.at(extending.front());
  for (std::size_t i = 1; i < extending.size(); ++i) {
    const LabelContext& other = sig.outputs.at(extending[i]);
    LabelContext kept;
    for (const auto& [label, type] : live.entries()) {
      if (other.get(label) == type) kept.add(label, type);
    }
    live = kept;
  }
  return live;
}

}  // namespace

Circuit gen_circuit(std::mt19937_64& rng, const CircuitGenConfig& cfg) {
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  Circuit c;
  for (std::size_t i = 0; i < cfg.inputs; ++i) c.input.add(Label("q" + std::to_string(i)), WireType::Qubit);
  std::size_t next_label = 0;
  std::size_t next_var = 0;
  std::vector<const Gate*> gates;
  for (const auto& [_, g] : cfg.gates->gates()) gates.push_back(&g);
  std::size_t attempts = 0;
  while (c.instructions.size() < cfg.instructions && attempts++ < cfg.instructions * 20) {
    CircuitSignature sig = check_signature(c, *cfg.gates);
    // A random prefix of a random path.
    auto all = paths(sig.tree);
    const Assignment& path = all[pick(all.size())];
    std::size_t keep = pick(path.size() + 1);
    Assignment a;
    const LiftingTree* node = &sig.tree;
    for (std::size_t i = 0; i < keep && !node->is_leaf(); ++i) {
      bool bit = *path.get(node->var());
      a = a.with(node->var(), bit);
      node = &node->child(bit);
    }
    LabelContext live = live_at(sig, a);
    std::vector<Label> qubits;
    std::vector<Label> bits;
    for (const auto& [label, type] : live.entries()) (type == WireType::Qubit ? qubits : bits).push_back(label);
    std::shuffle(qubits.begin(), qubits.end(), rng);
    std::shuffle(bits.begin(), bits.end(), rng);
    Instruction instr;
    bool lift = !bits.empty() && std::bernoulli_distribution(0.4)(rng);
    if (lift) {
      instr = LiftInstr{a, bits.front(), LiftedVar("v" + std::to_string(next_var++))};
    } else {
      const Gate& g = *gates[pick(gates.size())];
      std::size_t qi = 0;
      std::size_t bi = 0;
      bool enough = true;
      MValue in = build_mvalue(g.in, [&](WireType w) {
        auto& pool = w == WireType::Qubit ? qubits : bits;
        auto& index = w == WireType::Qubit ? qi : bi;
        if (index >= pool.size()) {
          enough = false;
          return Label("missing");
        }
        return pool[index++];
      });
      if (!enough) continue;
      MValue out = build_mvalue(g.out, [&](WireType) { return Label("w" + std::to_string(next_label++)); });
      instr = GateApp{a, g.name, in, out};
    }
    Circuit next = c;
    next.instructions.push_back(instr);
    try {
      CircuitSignature grown = check_signature(next, *cfg.gates);
      if (grown.tree.depth() > cfg.max_tree_depth) continue;
    } catch (const Error&) {
      continue;
    }
    c = std::move(next);
  }
  return c;
}

}  // namespace pqk
