#include "pqk/metatheory.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "pqk/parser.hpp"
#include "pqk/simulator.hpp"
#include "pqk/typing.hpp"

namespace pqk {

std::string_view to_string(Property p) {
  switch (p) {
    case Property::SubjectReduction: return "SubjectReduction";
    case Property::Progress: return "Progress";
  }
  return "?";
}

namespace {

// Visits every term in the order the type checker numbers them.
template <class F>
void walk_value(const Value& v, F& f);

template <class F>
void walk_term(const Term& m, F& f) {
  f(m);
  switch (m.kind()) {
    case Term::Kind::Return:
    case Term::Kind::Force:
    case Term::Kind::Box: walk_value(m.first(), f); break;
    case Term::Kind::App:
    case Term::Kind::Apply:
      walk_value(m.first(), f);
      walk_value(m.second(), f);
      break;
    case Term::Kind::LetPair:
      walk_value(m.first(), f);
      walk_term(m.body(), f);
      break;
    case Term::Kind::Let:
      walk_term(m.bound(), f);
      for (const auto& branch : m.continuation().leaves()) walk_term(branch, f);
      break;
  }
}

template <class F>
void walk_value(const Value& v, F& f) {
  switch (v.kind()) {
    case Value::Kind::Lam:
    case Value::Kind::Lift: walk_term(v.body(), f); break;
    case Value::Kind::Pair:
      walk_value(v.left(), f);
      walk_value(v.right(), f);
      break;
    default: break;
  }
}

// Rebuilds `m` with the term numbered `target` replaced by `filler`.
class Replacer {
 public:
  Replacer(std::size_t target, Term filler) : target_(target), filler_(std::move(filler)) {}

  Term term(const Term& m) {
    if (index_++ == target_) return filler_;
    switch (m.kind()) {
      case Term::Kind::Return: return Term::ret(value(m.first()), m.span());
      case Term::Kind::Force: return Term::force(value(m.first()), m.span());
      case Term::Kind::Box: return Term::box(m.box_type(), value(m.first()), m.vars(), m.span());
      case Term::Kind::App: {
        Value fun = value(m.first());
        return Term::app(fun, value(m.second()), m.span());
      }
      case Term::Kind::Apply: {
        Value circuit = value(m.first());
        return Term::apply(m.vars(), circuit, value(m.second()), m.span());
      }
      case Term::Kind::LetPair: {
        Value pair = value(m.first());
        return Term::let_pair(m.name(), m.second_name(), pair, term(m.body()), m.span());
      }
      case Term::Kind::Let: {
        Term bound = term(m.bound());
        std::vector<Term> branches;
        for (const auto& branch : m.continuation().leaves()) branches.push_back(term(branch));
        return Term::let(m.name(), bound, Lifted<Term>(m.continuation().tree(), std::move(branches)), m.span());
      }
    }
    return m;
  }

  Value value(const Value& v) {
    switch (v.kind()) {
      case Value::Kind::Lam: return Value::lam(v.name(), v.param_type(), term(v.body()), v.span());
      case Value::Kind::Lift: return Value::lift(term(v.body()), v.span());
      case Value::Kind::Pair: {
        Value left = value(v.left());
        return Value::pair(left, value(v.right()), v.span());
      }
      default: return v;
    }
  }

 private:
  std::size_t target_;
  Term filler_;
  std::size_t index_ = 0;
};

struct Visit {
  std::size_t index;
  Term term;
  TypingSnapshot before;
  TypingSnapshot after;
  ComputationTyping result;
};

class Recorder : public TypingObserver {
 public:
  void on_term(std::size_t index, const Term& m, const TypingSnapshot& before, const TypingSnapshot& after,
               const ComputationTyping& result) override {
    visits.push_back({index, m, before, after, result});
  }

  std::vector<Visit> visits;
};

// Minimal terms of a given type that consume given resources.
class FillerBuilder {
 public:
  explicit FillerBuilder(const GateSet& gates) : gates_(gates) {
    for (const char* name : {"Init0", "Meas", "Discard"}) {
      if (const Gate* g = gates.find(name)) constants_.emplace(name, Value::boxed(gate_constant(*g)));
    }
    for (const auto& [name, boxed] : seed_circuits()) {
      if (name == "MeasLift") constants_.emplace(name, Value::boxed(boxed));
    }
  }

  std::optional<Term> build(const Visit& visit) {
    reserved_.clear();
    counter_ = 0;
    std::vector<std::pair<Value, Type>> consumed;
    std::multiset<std::pair<std::string, std::string>> left;
    for (const auto& [name, type] : visit.after.linear_vars) left.emplace(name, print_type(type));
    for (const auto& [name, type] : visit.before.linear_vars) {
      reserved_.insert(name);
      auto it = left.find({name, print_type(type)});
      if (it != left.end()) {
        left.erase(it);
      } else {
        consumed.emplace_back(Value::var(name), type);
      }
    }
    for (const auto& [label, type] : visit.before.labels.entries()) {
      if (!visit.after.labels.contains(label)) consumed.emplace_back(Value::label(label), Type::wire(type));
    }
    return dispose_all(consumed, 0, [&] { return lifted(visit.result.type); });
  }

 private:
  using Cont = std::function<std::optional<Term>()>;

  std::string fresh() {
    std::string name;
    do {
      name = "s" + std::to_string(counter_++);
    } while (reserved_.contains(name));
    return name;
  }

  std::optional<Value> constant(const std::string& name) const {
    auto it = constants_.find(name);
    if (it == constants_.end()) return std::nullopt;
    return it->second;
  }

  std::optional<Term> gate(const std::string& name, const Value& arg, std::vector<LiftedVar> vars = {}) const {
    auto c = constant(name);
    if (!c) return std::nullopt;
    return Term::apply(std::move(vars), *c, arg);
  }

  // let x = bound in k(x), for a bound computation with a leaf tree.
  std::optional<Term> then(std::optional<Term> bound, const std::function<std::optional<Term>(const Value&)>& k) {
    if (!bound) return std::nullopt;
    std::string x = fresh();
    auto rest = k(Value::var(x));
    if (!rest) return std::nullopt;
    return Term::let(x, *bound, Lifted<Term>(*rest));
  }

  std::optional<Term> dispose_all(const std::vector<std::pair<Value, Type>>& items, std::size_t i, const Cont& k) {
    if (i == items.size()) return k();
    return dispose(items[i].first, items[i].second, [&] { return dispose_all(items, i + 1, k); });
  }

  std::optional<Term> dispose(const Value& v, const Type& t, const Cont& k) {
    if (is_parameter(t)) return k();
    switch (t.kind()) {
      case Type::Kind::Wire:
        if (t.wire_type() == WireType::Bit) return then(gate("Discard", v), [&](const Value&) { return k(); });
        return then(gate("Meas", v), [&](const Value& bit) {
          return then(gate("Discard", bit), [&](const Value&) { return k(); });
        });
      case Type::Kind::Tensor: {
        std::string a = fresh();
        std::string b = fresh();
        auto body = dispose(Value::var(a), t.left(), [&] { return dispose(Value::var(b), t.right(), k); });
        if (!body) return std::nullopt;
        return Term::let_pair(a, b, v, *body);
      }
      case Type::Kind::Arrow: {
        // Only effect-free functions: disposing must not change the tree.
        if (!t.codomain().is_leaf()) return std::nullopt;
        return then(leaf(t.domain()), [&](const Value& arg) {
          return then(Term::app(v, arg), [&](const Value& result) { return dispose(result, t.codomain().leaf(), k); });
        });
      }
      default: return std::nullopt;
    }
  }

  std::optional<Term> lifted(const Lifted<Type>& alpha) {
    if (alpha.is_leaf()) return leaf(alpha.leaf());
    const LiftedVar& var = alpha.tree().var();
    return then(gate("Init0", Value::unit()), [&](const Value& q) -> std::optional<Term> {
      auto measured = gate("MeasLift", q, {var});
      if (!measured) return std::nullopt;
      auto zero = lifted(alpha.zero());
      auto one = lifted(alpha.one());
      if (!zero || !one) return std::nullopt;
      LiftingTree split = LiftingTree::node(var, LiftingTree::leaf(), LiftingTree::leaf());
      return Term::let(fresh(), *measured, Lifted<Term>(split, {*zero, *one}));
    });
  }

  std::optional<Term> leaf(const Type& t) {
    switch (t.kind()) {
      case Type::Kind::Unit: return Term::ret(Value::unit());
      case Type::Kind::Wire:
        if (t.wire_type() == WireType::Qubit) return gate("Init0", Value::unit());
        return then(gate("Init0", Value::unit()), [&](const Value& q) { return gate("Meas", q); });
      case Type::Kind::Tensor:
        return then(leaf(t.left()), [&](const Value& a) {
          return then(leaf(t.right()), [&](const Value& b) { return Term::ret(Value::pair(a, b)); });
        });
      case Type::Kind::Bang: {
        if (!t.bang_body().is_leaf()) return std::nullopt;
        auto body = leaf(t.bang_body().leaf());
        if (!body) return std::nullopt;
        return Term::ret(Value::lift(*body));
      }
      case Type::Kind::Arrow: {
        auto fun = lambda(t.domain(), t.codomain());
        if (!fun) return std::nullopt;
        return Term::ret(*fun);
      }
      case Type::Kind::Circ: {
        Type in = Type::from_mtype(t.circ_in());
        auto fun = lambda(in, t.circ_out().map([](const MType& m) { return Type::from_mtype(m); }));
        if (!fun) return std::nullopt;
        return Term::box(t.circ_in(), Value::lift(Term::ret(*fun)));
      }
    }
    return std::nullopt;
  }

  std::optional<Value> lambda(const Type& domain, const Lifted<Type>& codomain) {
    std::string y = fresh();
    auto body = dispose(Value::var(y), domain, [&] { return lifted(codomain); });
    if (!body) return std::nullopt;
    return Value::lam(y, domain, *body);
  }

  const GateSet& gates_;
  std::map<std::string, Value> constants_;
  std::set<std::string> reserved_;
  std::size_t counter_ = 0;
};

bool var_is_free(const std::string& x, const Term& m) { return free_vars(m).contains(x); }

// Smaller terms obtained by dropping unused binders and trivial lets.
std::vector<Term> simplifications(const Term& m) {
  std::vector<Term> out;
  switch (m.kind()) {
    case Term::Kind::Let: {
      if (!m.continuation().is_leaf()) break;
      const Term& body = m.continuation().leaf();
      if (!var_is_free(m.name(), body)) out.push_back(body);
      if (body.kind() == Term::Kind::Return && body.first().kind() == Value::Kind::Var &&
          body.first().name() == m.name()) {
        out.push_back(m.bound());
      }
      break;
    }
    case Term::Kind::LetPair:
      if (!var_is_free(m.name(), m.body()) && !var_is_free(m.second_name(), m.body())) out.push_back(m.body());
      break;
    case Term::Kind::App:
      if (m.first().kind() == Value::Kind::Lam && !var_is_free(m.first().name(), m.first().body())) {
        out.push_back(m.first().body());
      }
      break;
    default: break;
  }
  return out;
}

struct Run {
  std::optional<std::string> violation;
  bool fuel_exhausted = false;
  bool stuck = false;
  std::uint64_t steps = 0;
};

EvalEnv make_env(const CheckOptions& options) {
  EvalEnv env;
  env.fuel = options.fuel;
  env.mutations = options.mutations;
  env.gates = options.gates;
  return env;
}

Run run_sr(const Term& m, const CheckOptions& options) {
  Run run;
  auto left = typecheck_left_config(Circuit{}, Assignment{}, m, *options.gates);
  if (!left.check) return run;
  EvalEnv env = make_env(options);
  EvalOutcome outcome = run_closed(m, env);
  run.steps = env.steps;
  if (const auto* done = std::get_if<RightConfig>(&outcome)) {
    ConfigCheck check =
        typecheck_right_config(done->circuit, done->value, expectation_from(*left.typing, {}), *options.gates);
    if (!check) run.violation = check.conjunct + ": " + check.detail;
  } else if (std::holds_alternative<FuelExhausted>(outcome)) {
    run.fuel_exhausted = true;
  } else {
    run.stuck = true;
  }
  return run;
}

Run run_progress(const Term& m, const CheckOptions& options) {
  Run run;
  EvalEnv env = make_env(options);
  EvalOutcome outcome = run_closed(m, env);
  run.steps = env.steps;
  if (const auto* stuck = std::get_if<Stuck>(&outcome)) {
    run.stuck = true;
    run.violation = "stuck (" + std::string(to_string(stuck->reason)) + "): " + stuck->detail +
                    " at term " + print_term(stuck->at.term);
  } else if (std::holds_alternative<FuelExhausted>(outcome)) {
    run.fuel_exhausted = true;
  }
  return run;
}

void require_well_typed(const Term& m, const GateSet& gates) {
  try {
    type_closed(m, {}, gates);
  } catch (const Error& e) {
    throw Error(ErrorKind::InvalidArgument, std::string("property checks need a well-typed closed term: ") + e.what());
  }
}

CheckResult check(const Term& m, const CheckOptions& options, Property property,
                  Run (*runner)(const Term&, const CheckOptions&)) {
  require_well_typed(m, *options.gates);
  Run first = runner(m, options);
  CheckResult result;
  result.fuel_exhausted = first.fuel_exhausted;
  result.steps = first.steps;
  if (!first.violation) return result;
  Term small = m;
  if (options.shrink) {
    small = shrink(m, [&](const Term& t) { return runner(t, options).violation.has_value(); }, *options.gates);
  }
  Run last = runner(small, options);
  result.finding = Finding{property, print_term(small), last.violation.value_or(*first.violation), small};
  return result;
}

}  // namespace

bool has_lifting_apply(const Term& m) {
  bool found = false;
  auto visit = [&](const Term& t) {
    if (t.kind() == Term::Kind::Apply && !t.vars().empty()) found = true;
  };
  walk_term(m, visit);
  return found;
}

CheckResult check_sr(const Term& m, const CheckOptions& options) {
  return check(m, options, Property::SubjectReduction, run_sr);
}

CheckResult check_progress(const Term& m, const CheckOptions& options) {
  return check(m, options, Property::Progress, run_progress);
}

Term shrink(const Term& m, const std::function<bool(const Term&)>& violates, const GateSet& gates) {
  FillerBuilder fillers(gates);
  Term current = m;
  bool improved = true;
  while (improved) {
    improved = false;
    Recorder recorder;
    try {
      type_closed(current, {}, gates, &recorder);
    } catch (const Error&) {
      break;
    }
    std::size_t size = term_size(current);
    for (const auto& visit : recorder.visits) {
      std::vector<Term> replacements = simplifications(visit.term);
      if (auto filler = fillers.build(visit)) replacements.push_back(*filler);
      for (const auto& replacement : replacements) {
        if (term_size(replacement) >= term_size(visit.term)) continue;
        Term candidate = Replacer(visit.index, replacement).term(current);
        if (term_size(candidate) >= size) continue;
        try {
          type_closed(candidate, {}, gates);
        } catch (const Error&) {
          continue;
        }
        if (!violates(candidate)) continue;
        current = std::move(candidate);
        improved = true;
        break;
      }
      if (improved) break;
    }
  }
  return current;
}

FuzzReport run_fuzz(const FuzzConfig& cfg) {
  GenConfig gen;
  gen.seed = cfg.seed;
  gen.max_depth = cfg.depth;
  gen.max_tree_depth = cfg.tree_depth;
  gen.gates = cfg.gates;
  CheckOptions options;
  options.fuel = cfg.fuel;
  options.mutations = cfg.mutations;
  options.gates = cfg.gates;
  options.shrink = cfg.shrink;

  FuzzReport report;
  for (const auto& item : gen_corpus(gen, cfg.count)) {
    ++report.count;
    report.generation_retries += item.retries;
    if (has_lifting_apply(item.term)) ++report.lifting_applies;
    ComputationTyping typing = type_closed(item.term, {}, *cfg.gates);
    report.max_tree_depth = std::max(report.max_tree_depth, typing.tree().depth());
    CheckResult sr = check_sr(item.term, options);
    CheckResult progress = check_progress(item.term, options);
    report.total_steps += progress.steps;
    if (progress.fuel_exhausted) {
      ++report.fuel_exhausted;
    } else if (progress.finding) {
      ++report.stuck;
    } else {
      ++report.done;
    }
    if (sr.finding) report.findings.push_back(*sr.finding);
    if (progress.finding) report.findings.push_back(*progress.finding);
  }
  return report;
}

Json to_json(const Finding& finding) {
  Json out;
  out["property"] = std::string(to_string(finding.property));
  out["program"] = finding.program;
  out["diagnostic"] = finding.diagnostic;
  return out;
}

Json to_json(const FuzzReport& report) {
  Json out;
  out["count"] = report.count;
  out["done"] = report.done;
  out["fuel_exhausted"] = report.fuel_exhausted;
  out["stuck"] = report.stuck;
  out["lifting_applies"] = report.lifting_applies;
  out["generation_retries"] = report.generation_retries;
  out["max_tree_depth"] = report.max_tree_depth;
  out["total_steps"] = report.total_steps;
  out["findings"] = Json::array();
  for (const auto& f : report.findings) out["findings"].push_back(to_json(f));
  return out;
}

// Path-map reference for lifted objects: a path is a plain map from variable
// names to bits, and a lifted object maps its paths to values.

namespace {

using RefPath = std::map<std::string, bool>;
using RefObject = std::map<RefPath, int>;

struct RandomTree {
  LiftingTree tree;
  std::vector<RefPath> paths;  // leaf order
};

const std::vector<std::string> kPool = {"u", "v", "w", "s", "t", "r"};

RandomTree random_tree(std::mt19937_64& rng, std::size_t depth, const RefPath& above) {
  std::vector<std::string> free_names;
  for (const auto& name : kPool) {
    if (!above.contains(name)) free_names.push_back(name);
  }
  if (depth == 0 || free_names.empty() || std::bernoulli_distribution(0.3)(rng)) {
    return {LiftingTree::leaf(), {above}};
  }
  std::string var = free_names[std::uniform_int_distribution<std::size_t>(0, free_names.size() - 1)(rng)];
  RefPath zero_path = above;
  zero_path[var] = false;
  RefPath one_path = above;
  one_path[var] = true;
  RandomTree zero = random_tree(rng, depth - 1, zero_path);
  RandomTree one = random_tree(rng, depth - 1, one_path);
  RandomTree out{LiftingTree::node(LiftedVar(var), zero.tree, one.tree), zero.paths};
  out.paths.insert(out.paths.end(), one.paths.begin(), one.paths.end());
  return out;
}

// Relative paths of a tree generated below nothing.
RandomTree random_tree(std::mt19937_64& rng, std::size_t depth) { return random_tree(rng, depth, {}); }

Assignment to_assignment(const RefPath& p) {
  std::vector<Assignment::Binding> bindings;
  for (const auto& [name, bit] : p) bindings.emplace_back(LiftedVar(name), bit);
  return Assignment(std::move(bindings));
}

RefPath to_ref(const Assignment& a) {
  RefPath p;
  for (const auto& [var, bit] : a.bindings()) p[var.name()] = bit;
  return p;
}

RefObject to_ref(const Lifted<int>& xi) {
  RefObject out;
  for (const auto& [a, v] : xi.entries()) out[to_ref(a)] = v;
  return out;
}

std::vector<int> random_values(std::mt19937_64& rng, std::size_t n) {
  std::vector<int> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(std::uniform_int_distribution<int>(0, 999)(rng));
  return out;
}

RefObject ref_object(const RandomTree& t, const std::vector<int>& values) {
  RefObject out;
  for (std::size_t i = 0; i < t.paths.size(); ++i) out[t.paths[i]] = values[i];
  return out;
}

bool extends(const RefPath& p, const RefPath& a) {
  for (const auto& [name, bit] : a) {
    auto it = p.find(name);
    if (it == p.end() || it->second != bit) return false;
  }
  return true;
}

void record(OracleReport& report, bool agree, const std::string& what) {
  ++report.instances;
  if (agree) return;
  ++report.discrepancies;
  if (report.examples.size() < 5) report.examples.push_back(what);
}

}  // namespace

OracleReport oracle_compose(std::uint64_t seed, std::size_t instances, std::size_t max_depth) {
  std::mt19937_64 rng(seed);
  OracleReport report;
  for (std::size_t n = 0; n < instances; ++n) {
    RandomTree t = random_tree(rng, max_depth);
    auto values = random_values(rng, t.paths.size());
    Lifted<int> xi(t.tree, values);
    RefObject expected = ref_object(t, values);
    std::map<Assignment, int> family;
    std::set<Assignment> index;
    for (const auto& p : t.paths) {
      if (!std::bernoulli_distribution(0.5)(rng)) continue;
      int v = std::uniform_int_distribution<int>(1000, 1999)(rng);
      family[to_assignment(p)] = v;
      index.insert(to_assignment(p));
      expected[p] = v;
    }
    Lifted<int> actual = compose(xi, family, index);
    record(report, actual.tree() == t.tree && to_ref(actual) == expected, "compose on " + t.tree.to_string());
  }
  return report;
}

OracleReport oracle_flatten(std::uint64_t seed, std::size_t instances, std::size_t max_depth) {
  std::mt19937_64 rng(seed);
  OracleReport report;
  for (std::size_t n = 0; n < instances; ++n) {
    std::size_t outer_depth = std::uniform_int_distribution<std::size_t>(0, max_depth)(rng);
    RandomTree outer = random_tree(rng, outer_depth);
    std::vector<Lifted<int>> inner;
    RefObject expected;
    bool clash = false;
    for (const auto& p : outer.paths) {
      std::size_t room = max_depth - std::min(max_depth, p.size());
      // Inner trees ignore the outer path, so they may clash with it.
      RandomTree t = random_tree(rng, room);
      auto values = random_values(rng, t.paths.size());
      inner.emplace_back(t.tree, values);
      for (std::size_t i = 0; i < t.paths.size(); ++i) {
        RefPath joined = p;
        for (const auto& [name, bit] : t.paths[i]) {
          if (p.contains(name)) clash = true;
          joined[name] = bit;
        }
        expected[joined] = values[i];
      }
    }
    Lifted<Lifted<int>> nested(outer.tree, inner);
    bool agree = false;
    try {
      Lifted<int> actual = flatten(nested);
      agree = !clash && to_ref(actual) == expected && actual.size() == expected.size();
    } catch (const Error& e) {
      agree = clash && e.kind() == ErrorKind::VariableClash;
    }
    record(report, agree, "flatten on " + outer.tree.to_string());
  }
  return report;
}

OracleReport oracle_graft(std::uint64_t seed, std::size_t instances, std::size_t max_depth) {
  std::mt19937_64 rng(seed);
  OracleReport report;
  for (std::size_t n = 0; n < instances; ++n) {
    RandomTree t = random_tree(rng, max_depth);
    auto values = random_values(rng, t.paths.size());
    Lifted<int> xi(t.tree, values);
    // A random prefix of a random path, taken in tree order.
    const RefPath& path = t.paths[std::uniform_int_distribution<std::size_t>(0, t.paths.size() - 1)(rng)];
    std::size_t keep = std::uniform_int_distribution<std::size_t>(0, path.size())(rng);
    RefPath a;
    const LiftingTree* node = &t.tree;
    for (std::size_t i = 0; i < keep && !node->is_leaf(); ++i) {
      bool bit = path.at(node->var().name());
      a[node->var().name()] = bit;
      node = &node->child(bit);
    }
    std::size_t room = max_depth - std::min(max_depth, a.size());
    RandomTree r = random_tree(rng, std::uniform_int_distribution<std::size_t>(0, room)(rng));
    RefObject expected;
    std::set<RefPath> expected_paths;
    bool clash = false;
    for (std::size_t i = 0; i < t.paths.size(); ++i) {
      const RefPath& p = t.paths[i];
      if (!extends(p, a)) {
        expected[p] = values[i];
        continue;
      }
      for (const auto& q : r.paths) {
        RefPath joined = p;
        for (const auto& [name, bit] : q) {
          if (p.contains(name)) clash = true;
          joined[name] = bit;
        }
        expected[joined] = values[i];
      }
    }
    for (const auto& [p, _] : expected) expected_paths.insert(p);
    bool agree = false;
    try {
      Lifted<int> actual = graft(xi, to_assignment(a), r.tree);
      LiftingTree shape = graft(t.tree, to_assignment(a), r.tree);
      std::set<RefPath> shape_paths;
      for (const auto& p : paths(shape)) shape_paths.insert(to_ref(p));
      agree = !clash && to_ref(actual) == expected && actual.size() == expected.size() && shape_paths == expected_paths;
    } catch (const Error& e) {
      agree = clash && e.kind() == ErrorKind::VariableClash;
    }
    record(report, agree, "graft of " + r.tree.to_string() + " into " + t.tree.to_string());
  }
  return report;
}

OracleReport renaming_coherence(std::uint64_t seed, std::size_t instances) {
  std::mt19937_64 rng(seed);
  OracleReport report;
  for (std::size_t n = 0; n < instances; ++n) {
    Circuit c = gen_circuit(rng);
    CircuitSignature sig = check_signature(c);

    std::vector<Label> labels = labels_in_order(c);
    std::vector<Label> targets = labels;
    for (std::size_t i = 0; i < labels.size(); ++i) targets.emplace_back("m" + std::to_string(i));
    std::shuffle(targets.begin(), targets.end(), rng);
    std::vector<std::pair<Label, Label>> label_pairs;
    for (std::size_t i = 0; i < labels.size(); ++i) label_pairs.emplace_back(labels[i], targets[i]);
    auto rho = LabelRenaming::from_pairs(label_pairs);

    std::vector<LiftedVar> vars(sig.tree.vars().begin(), sig.tree.vars().end());
    std::vector<LiftedVar> var_targets = vars;
    for (std::size_t i = 0; i < vars.size(); ++i) var_targets.emplace_back("p" + std::to_string(i));
    std::shuffle(var_targets.begin(), var_targets.end(), rng);
    std::vector<std::pair<LiftedVar, LiftedVar>> var_pairs;
    for (std::size_t i = 0; i < vars.size(); ++i) var_pairs.emplace_back(vars[i], var_targets[i]);
    auto pi = LiftedVarRenaming::from_pairs(var_pairs);

    auto compare = [&](const CircuitSignature& actual, const CircuitSignature& expected, const std::string& what) {
      std::string differs;
      if (!(actual.tree == expected.tree)) differs += " tree";
      if (!(actual.input == expected.input)) differs += " input";
      if (!(actual.outputs == expected.outputs)) differs += " outputs";
      record(report, differs.empty(), what + " renaming changes" + differs);
    };
    try {
      compare(check_signature(rename_labels(c, rho)), rename_labels(sig, rho), "label");
    } catch (const Error& e) {
      record(report, false, std::string("label renaming breaks the signature: ") + e.what());
    }
    try {
      compare(check_signature(rename_lifted(c, pi)), rename_lifted(sig, pi), "lifted-variable");
    } catch (const Error& e) {
      record(report, false, std::string("lifted-variable renaming breaks the signature: ") + e.what());
    }
  }
  return report;
}

}  // namespace pqk
