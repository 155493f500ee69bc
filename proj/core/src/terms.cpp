#include <algorithm>
#include <functional>

#include "pqk/syntax.hpp"

namespace pqk {

struct Value::Node {
  Kind kind = Kind::Unit;
  SourceSpan span;
  std::string name;
  Label label;
  Type type;
  Term body;
  BoxedCircuit boxed;
  Value left;
  Value right;
};

struct Term::Node {
  Kind kind = Kind::Return;
  SourceSpan span;
  std::string name;
  std::string second_name;
  Value first;
  Value second;
  Term bound;
  Lifted<Term> cont;
  MType box_type;
  std::vector<LiftedVar> vars;
};

namespace {

[[noreturn]] void wrong_value(const char* what) {
  throw Error(ErrorKind::InvalidArgument, std::string("value is not ") + what);
}

[[noreturn]] void wrong_term(const char* what) {
  throw Error(ErrorKind::InvalidArgument, std::string("term is not ") + what);
}

}  // namespace

// Value

Value Value::unit(SourceSpan span) {
  if (!span.known()) return {};
  auto n = std::make_shared<Node>();
  n->span = span;
  Value out;
  out.node_ = std::move(n);
  return out;
}

Value Value::var(std::string name, SourceSpan span) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Var;
  n->span = span;
  n->name = std::move(name);
  Value out;
  out.node_ = std::move(n);
  return out;
}

Value Value::label(Label l, SourceSpan span) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Label;
  n->span = span;
  n->label = std::move(l);
  Value out;
  out.node_ = std::move(n);
  return out;
}

Value Value::lam(std::string param, Type type, Term body, SourceSpan span) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Lam;
  n->span = span;
  n->name = std::move(param);
  n->type = std::move(type);
  n->body = std::move(body);
  Value out;
  out.node_ = std::move(n);
  return out;
}

Value Value::lift(Term body, SourceSpan span) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Lift;
  n->span = span;
  n->body = std::move(body);
  Value out;
  out.node_ = std::move(n);
  return out;
}

Value Value::boxed(BoxedCircuit b, SourceSpan span) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Boxed;
  n->span = span;
  n->boxed = std::move(b);
  Value out;
  out.node_ = std::move(n);
  return out;
}

Value Value::pair(Value left, Value right, SourceSpan span) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Pair;
  n->span = span;
  n->left = std::move(left);
  n->right = std::move(right);
  Value out;
  out.node_ = std::move(n);
  return out;
}

Value::Kind Value::kind() const { return node_ ? node_->kind : Kind::Unit; }
SourceSpan Value::span() const { return node_ ? node_->span : SourceSpan{}; }

const std::string& Value::name() const {
  if (kind() != Kind::Var && kind() != Kind::Lam) wrong_value("a variable or abstraction");
  return node_->name;
}

const Label& Value::label_value() const {
  if (kind() != Kind::Label) wrong_value("a label");
  return node_->label;
}

const Type& Value::param_type() const {
  if (kind() != Kind::Lam) wrong_value("an abstraction");
  return node_->type;
}

const Term& Value::body() const {
  if (kind() != Kind::Lam && kind() != Kind::Lift) wrong_value("an abstraction or lift");
  return node_->body;
}

const BoxedCircuit& Value::boxed_value() const {
  if (kind() != Kind::Boxed) wrong_value("a boxed circuit");
  return node_->boxed;
}

const Value& Value::left() const {
  if (kind() != Kind::Pair) wrong_value("a pair");
  return node_->left;
}

const Value& Value::right() const {
  if (kind() != Kind::Pair) wrong_value("a pair");
  return node_->right;
}

bool operator==(const Value& a, const Value& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Value::Kind::Unit: return true;
    case Value::Kind::Var: return a.name() == b.name();
    case Value::Kind::Label: return a.label_value() == b.label_value();
    case Value::Kind::Lam: return a.name() == b.name() && a.param_type() == b.param_type() && a.body() == b.body();
    case Value::Kind::Lift: return a.body() == b.body();
    case Value::Kind::Boxed: return a.boxed_value() == b.boxed_value();
    case Value::Kind::Pair: return a.left() == b.left() && a.right() == b.right();
  }
  return false;
}

// Term

Term Term::app(Value fun, Value arg, SourceSpan span) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::App;
  n->span = span;
  n->first = std::move(fun);
  n->second = std::move(arg);
  Term out;
  out.node_ = std::move(n);
  return out;
}

Term Term::let(std::string name, Term bound, Lifted<Term> cont, SourceSpan span) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Let;
  n->span = span;
  n->name = std::move(name);
  n->bound = std::move(bound);
  n->cont = std::move(cont);
  Term out;
  out.node_ = std::move(n);
  return out;
}

Term Term::let_pair(std::string first, std::string second, Value pair, Term body, SourceSpan span) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::LetPair;
  n->span = span;
  n->name = std::move(first);
  n->second_name = std::move(second);
  n->first = std::move(pair);
  n->bound = std::move(body);
  Term out;
  out.node_ = std::move(n);
  return out;
}

Term Term::force(Value v, SourceSpan span) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Force;
  n->span = span;
  n->first = std::move(v);
  Term out;
  out.node_ = std::move(n);
  return out;
}

Term Term::box(MType in, Value v, std::vector<LiftedVar> annotation, SourceSpan span) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Box;
  n->span = span;
  n->box_type = std::move(in);
  n->first = std::move(v);
  n->vars = std::move(annotation);
  Term out;
  out.node_ = std::move(n);
  return out;
}

Term Term::apply(std::vector<LiftedVar> vars, Value circuit, Value arg, SourceSpan span) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Apply;
  n->span = span;
  n->vars = std::move(vars);
  n->first = std::move(circuit);
  n->second = std::move(arg);
  Term out;
  out.node_ = std::move(n);
  return out;
}

Term Term::ret(Value v, SourceSpan span) {
  if (!span.known() && v.kind() == Value::Kind::Unit) return {};
  auto n = std::make_shared<Node>();
  n->kind = Kind::Return;
  n->span = span;
  n->first = std::move(v);
  Term out;
  out.node_ = std::move(n);
  return out;
}

Term::Kind Term::kind() const { return node_ ? node_->kind : Kind::Return; }
SourceSpan Term::span() const { return node_ ? node_->span : SourceSpan{}; }

const Value& Term::first() const {
  static const Value unit;
  if (!node_) return unit;
  if (kind() == Kind::Let) wrong_term("a term with a value operand");
  return node_->first;
}

const Value& Term::second() const {
  if (kind() != Kind::App && kind() != Kind::Apply) wrong_term("an application");
  return node_->second;
}

const std::string& Term::name() const {
  if (kind() != Kind::Let && kind() != Kind::LetPair) wrong_term("a binder");
  return node_->name;
}

const std::string& Term::second_name() const {
  if (kind() != Kind::LetPair) wrong_term("a pair destructor");
  return node_->second_name;
}

const Term& Term::bound() const {
  if (kind() != Kind::Let) wrong_term("a let");
  return node_->bound;
}

const Lifted<Term>& Term::continuation() const {
  if (kind() != Kind::Let) wrong_term("a let");
  return node_->cont;
}

const Term& Term::body() const {
  if (kind() != Kind::LetPair) wrong_term("a pair destructor");
  return node_->bound;
}

const MType& Term::box_type() const {
  if (kind() != Kind::Box) wrong_term("a box");
  return node_->box_type;
}

const std::vector<LiftedVar>& Term::vars() const {
  if (kind() != Kind::Apply && kind() != Kind::Box) wrong_term("an apply or box");
  return node_->vars;
}

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Term::Kind::App: return a.first() == b.first() && a.second() == b.second();
    case Term::Kind::Let:
      return a.name() == b.name() && a.bound() == b.bound() && a.continuation() == b.continuation();
    case Term::Kind::LetPair:
      return a.name() == b.name() && a.second_name() == b.second_name() && a.first() == b.first() &&
             a.body() == b.body();
    case Term::Kind::Force:
    case Term::Kind::Return: return a.first() == b.first();
    case Term::Kind::Box: return a.box_type() == b.box_type() && a.vars() == b.vars() && a.first() == b.first();
    case Term::Kind::Apply: return a.vars() == b.vars() && a.first() == b.first() && a.second() == b.second();
  }
  return false;
}

// Free names

namespace {

// Walks a term collecting free variables (in first-occurrence order), labels
// and lifted variables.
struct Collector {
  std::vector<std::string> bound;
  std::vector<Value> operands;
  std::set<std::string> vars;
  std::set<Label> labels;
  std::set<LiftedVar> lifted;

  bool is_bound(const std::string& x) const { return std::find(bound.begin(), bound.end(), x) != bound.end(); }

  void add_type(const Type& t) {
    auto fl = free_lifted_vars(t);
    lifted.insert(fl.begin(), fl.end());
  }

  void value(const Value& v) {
    switch (v.kind()) {
      case Value::Kind::Unit:
      case Value::Kind::Boxed: return;
      case Value::Kind::Var:
        if (!is_bound(v.name()) && vars.insert(v.name()).second) operands.push_back(Value::var(v.name()));
        return;
      case Value::Kind::Label:
        if (labels.insert(v.label_value()).second) operands.push_back(Value::label(v.label_value()));
        return;
      case Value::Kind::Lam:
        add_type(v.param_type());
        bound.push_back(v.name());
        term(v.body());
        bound.pop_back();
        return;
      case Value::Kind::Lift: term(v.body()); return;
      case Value::Kind::Pair:
        value(v.left());
        value(v.right());
        return;
    }
  }

  void term(const Term& m) {
    switch (m.kind()) {
      case Term::Kind::App:
      case Term::Kind::Apply:
        if (m.kind() == Term::Kind::Apply) lifted.insert(m.vars().begin(), m.vars().end());
        value(m.first());
        value(m.second());
        return;
      case Term::Kind::Let:
        term(m.bound());
        lifted.insert(m.continuation().tree().vars().begin(), m.continuation().tree().vars().end());
        bound.push_back(m.name());
        for (const auto& branch : m.continuation().leaves()) term(branch);
        bound.pop_back();
        return;
      case Term::Kind::LetPair:
        value(m.first());
        bound.push_back(m.name());
        bound.push_back(m.second_name());
        term(m.body());
        bound.pop_back();
        bound.pop_back();
        return;
      case Term::Kind::Box:
        lifted.insert(m.vars().begin(), m.vars().end());
        value(m.first());
        return;
      case Term::Kind::Force:
      case Term::Kind::Return: value(m.first()); return;
    }
  }
};

template <class T>
Collector collect(const T& x) {
  Collector c;
  if constexpr (std::is_same_v<T, Term>) {
    c.term(x);
  } else {
    c.value(x);
  }
  return c;
}

}  // namespace

std::set<std::string> free_vars(const Term& m) { return collect(m).vars; }
std::set<std::string> free_vars(const Value& v) { return collect(v).vars; }
std::set<Label> free_labels(const Term& m) { return collect(m).labels; }
std::set<Label> free_labels(const Value& v) { return collect(v).labels; }
std::set<LiftedVar> free_lifted_vars(const Term& m) { return collect(m).lifted; }
std::set<LiftedVar> free_lifted_vars(const Value& v) { return collect(v).lifted; }
std::vector<Value> free_operands(const Term& m) { return collect(m).operands; }

// Substitution

namespace {

class Substitution {
 public:
  Substitution(const Value& v, const std::string& x) : v_(v), x_(x), v_free_(free_vars(v)) {}

  Value value(const Value& w) const {
    switch (w.kind()) {
      case Value::Kind::Unit:
      case Value::Kind::Label:
      case Value::Kind::Boxed: return w;
      case Value::Kind::Var: return w.name() == x_ ? v_ : w;
      case Value::Kind::Lam: {
        if (w.name() == x_) return w;
        auto [param, body] = freshen(w.name(), w.body());
        return Value::lam(param, w.param_type(), term(body), w.span());
      }
      case Value::Kind::Lift: return Value::lift(term(w.body()), w.span());
      case Value::Kind::Pair: return Value::pair(value(w.left()), value(w.right()), w.span());
    }
    return w;
  }

  Term term(const Term& m) const {
    switch (m.kind()) {
      case Term::Kind::App: return Term::app(value(m.first()), value(m.second()), m.span());
      case Term::Kind::Apply: return Term::apply(m.vars(), value(m.first()), value(m.second()), m.span());
      case Term::Kind::Force: return Term::force(value(m.first()), m.span());
      case Term::Kind::Return: return Term::ret(value(m.first()), m.span());
      case Term::Kind::Box: return Term::box(m.box_type(), value(m.first()), m.vars(), m.span());
      case Term::Kind::Let: {
        Term bound = term(m.bound());
        if (m.name() == x_) return Term::let(m.name(), bound, m.continuation(), m.span());
        std::string name = m.name();
        Lifted<Term> cont = m.continuation();
        if (v_free_.contains(name) && mentions_x(cont)) {
          std::string fresh = fresh_name(name, cont);
          cont = substitute(cont, Value::var(fresh), name);
          name = fresh;
        }
        return Term::let(name, bound, cont.map([this](const Term& branch) { return term(branch); }), m.span());
      }
      case Term::Kind::LetPair: {
        Value pair = value(m.first());
        if (m.name() == x_ || m.second_name() == x_) {
          return Term::let_pair(m.name(), m.second_name(), pair, m.body(), m.span());
        }
        auto [first, body1] = freshen(m.name(), m.body(), m.second_name());
        auto [second, body2] = freshen(m.second_name(), body1, first);
        return Term::let_pair(first, second, pair, term(body2), m.span());
      }
    }
    return m;
  }

 private:
  bool mentions_x(const Lifted<Term>& cont) const {
    return std::any_of(cont.leaves().begin(), cont.leaves().end(),
                       [&](const Term& t) { return free_vars(t).contains(x_); });
  }

  std::string fresh_name(const std::string& base, const Lifted<Term>& scope, const std::string& avoid = {}) const {
    std::set<std::string> taken = v_free_;
    taken.insert(x_);
    if (!avoid.empty()) taken.insert(avoid);
    for (const auto& t : scope.leaves()) {
      auto fv = free_vars(t);
      taken.insert(fv.begin(), fv.end());
    }
    std::string candidate = base;
    do {
      candidate += "'";
    } while (taken.contains(candidate));
    return candidate;
  }

  // Renames binder `name` in `body` when it would capture a free variable of v.
  std::pair<std::string, Term> freshen(const std::string& name, const Term& body, const std::string& avoid = {}) const {
    if (!v_free_.contains(name) || !free_vars(body).contains(x_)) return {name, body};
    std::string fresh = fresh_name(name, Lifted<Term>(body), avoid);
    return {fresh, substitute(body, Value::var(fresh), name)};
  }

  const Value& v_;
  const std::string& x_;
  std::set<std::string> v_free_;
};

}  // namespace

Term substitute(const Term& m, const Value& v, const std::string& x) { return Substitution(v, x).term(m); }
Value substitute(const Value& w, const Value& v, const std::string& x) { return Substitution(v, x).value(w); }

Lifted<Term> substitute(const Lifted<Term>& mu, const Value& v, const std::string& x) {
  Substitution s(v, x);
  return mu.map([&](const Term& m) { return s.term(m); });
}

// Alpha equivalence

namespace {

class AlphaComparer {
 public:
  bool value(const Value& a, const Value& b) {
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
      case Value::Kind::Unit: return true;
      case Value::Kind::Var: return same_var(a.name(), b.name());
      case Value::Kind::Label: return a.label_value() == b.label_value();
      case Value::Kind::Lam: {
        if (!alpha_equiv(a.param_type(), b.param_type())) return false;
        push(a.name(), b.name());
        bool ok = term(a.body(), b.body());
        pop();
        return ok;
      }
      case Value::Kind::Lift: return term(a.body(), b.body());
      case Value::Kind::Boxed: return boxed_equiv(a.boxed_value(), b.boxed_value());
      case Value::Kind::Pair: return value(a.left(), b.left()) && value(a.right(), b.right());
    }
    return false;
  }

  bool term(const Term& a, const Term& b) {
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
      case Term::Kind::App: return value(a.first(), b.first()) && value(a.second(), b.second());
      case Term::Kind::Apply:
        return a.vars() == b.vars() && value(a.first(), b.first()) && value(a.second(), b.second());
      case Term::Kind::Force:
      case Term::Kind::Return: return value(a.first(), b.first());
      case Term::Kind::Box: return a.box_type() == b.box_type() && a.vars() == b.vars() && value(a.first(), b.first());
      case Term::Kind::Let: {
        if (!term(a.bound(), b.bound())) return false;
        const auto& ca = a.continuation();
        const auto& cb = b.continuation();
        if (!(ca.tree() == cb.tree())) return false;
        push(a.name(), b.name());
        bool ok = true;
        for (std::size_t i = 0; ok && i < ca.size(); ++i) ok = term(ca.leaves()[i], cb.leaves()[i]);
        pop();
        return ok;
      }
      case Term::Kind::LetPair: {
        if (!value(a.first(), b.first())) return false;
        push(a.name(), b.name());
        push(a.second_name(), b.second_name());
        bool ok = term(a.body(), b.body());
        pop();
        pop();
        return ok;
      }
    }
    return false;
  }

 private:
  void push(const std::string& a, const std::string& b) { scope_.emplace_back(a, b); }
  void pop() { scope_.pop_back(); }

  bool same_var(const std::string& a, const std::string& b) const {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) {
      bool left = it->first == a;
      bool right = it->second == b;
      if (left || right) return left && right;
    }
    return a == b;
  }

  std::vector<std::pair<std::string, std::string>> scope_;
};

}  // namespace

bool alpha_equiv(const Term& a, const Term& b) { return AlphaComparer().term(a, b); }
bool alpha_equiv(const Value& a, const Value& b) { return AlphaComparer().value(a, b); }

// Renaming

Value rename_lifted(const Value& v, const LiftedVarRenaming& pi) {
  switch (v.kind()) {
    case Value::Kind::Unit:
    case Value::Kind::Var:
    case Value::Kind::Label: return v;
    case Value::Kind::Lam:
      return Value::lam(v.name(), rename_lifted(v.param_type(), pi), rename_lifted(v.body(), pi), v.span());
    case Value::Kind::Lift: return Value::lift(rename_lifted(v.body(), pi), v.span());
    case Value::Kind::Boxed: return Value::boxed(rename_lifted(v.boxed_value(), pi), v.span());
    case Value::Kind::Pair: return Value::pair(rename_lifted(v.left(), pi), rename_lifted(v.right(), pi), v.span());
  }
  return v;
}

Term rename_lifted(const Term& m, const LiftedVarRenaming& pi) {
  auto vars = [&](const std::vector<LiftedVar>& in) {
    std::vector<LiftedVar> out;
    for (const auto& v : in) out.push_back(pi(v));
    return out;
  };
  switch (m.kind()) {
    case Term::Kind::App: return Term::app(rename_lifted(m.first(), pi), rename_lifted(m.second(), pi), m.span());
    case Term::Kind::Apply:
      return Term::apply(vars(m.vars()), rename_lifted(m.first(), pi), rename_lifted(m.second(), pi), m.span());
    case Term::Kind::Force: return Term::force(rename_lifted(m.first(), pi), m.span());
    case Term::Kind::Return: return Term::ret(rename_lifted(m.first(), pi), m.span());
    case Term::Kind::Box: return Term::box(m.box_type(), rename_lifted(m.first(), pi), vars(m.vars()), m.span());
    case Term::Kind::Let:
      return Term::let(m.name(), rename_lifted(m.bound(), pi), rename_lifted(m.continuation(), pi), m.span());
    case Term::Kind::LetPair:
      return Term::let_pair(m.name(), m.second_name(), rename_lifted(m.first(), pi), rename_lifted(m.body(), pi),
                            m.span());
  }
  return m;
}

Value rename_labels(const Value& v, const LabelRenaming& rho) {
  switch (v.kind()) {
    case Value::Kind::Unit:
    case Value::Kind::Var:
    case Value::Kind::Boxed: return v;
    case Value::Kind::Label: return Value::label(rho(v.label_value()), v.span());
    case Value::Kind::Lam: return Value::lam(v.name(), v.param_type(), rename_labels(v.body(), rho), v.span());
    case Value::Kind::Lift: return Value::lift(rename_labels(v.body(), rho), v.span());
    case Value::Kind::Pair: return Value::pair(rename_labels(v.left(), rho), rename_labels(v.right(), rho), v.span());
  }
  return v;
}

Term rename_labels(const Term& m, const LabelRenaming& rho) {
  switch (m.kind()) {
    case Term::Kind::App: return Term::app(rename_labels(m.first(), rho), rename_labels(m.second(), rho), m.span());
    case Term::Kind::Apply:
      return Term::apply(m.vars(), rename_labels(m.first(), rho), rename_labels(m.second(), rho), m.span());
    case Term::Kind::Force: return Term::force(rename_labels(m.first(), rho), m.span());
    case Term::Kind::Return: return Term::ret(rename_labels(m.first(), rho), m.span());
    case Term::Kind::Box: return Term::box(m.box_type(), rename_labels(m.first(), rho), m.vars(), m.span());
    case Term::Kind::Let:
      return Term::let(m.name(), rename_labels(m.bound(), rho),
                       m.continuation().map([&](const Term& t) { return rename_labels(t, rho); }), m.span());
    case Term::Kind::LetPair:
      return Term::let_pair(m.name(), m.second_name(), rename_labels(m.first(), rho), rename_labels(m.body(), rho),
                            m.span());
  }
  return m;
}

// Sizes

std::size_t value_size(const Value& v) {
  switch (v.kind()) {
    case Value::Kind::Unit:
    case Value::Kind::Var:
    case Value::Kind::Label:
    case Value::Kind::Boxed: return 1;
    case Value::Kind::Lam:
    case Value::Kind::Lift: return 1 + term_size(v.body());
    case Value::Kind::Pair: return 1 + value_size(v.left()) + value_size(v.right());
  }
  return 1;
}

std::size_t term_size(const Term& m) {
  switch (m.kind()) {
    case Term::Kind::App:
    case Term::Kind::Apply: return 1 + value_size(m.first()) + value_size(m.second());
    case Term::Kind::Force:
    case Term::Kind::Return:
    case Term::Kind::Box: return 1 + value_size(m.first());
    case Term::Kind::Let: {
      std::size_t n = 1 + term_size(m.bound());
      for (const auto& branch : m.continuation().leaves()) n += term_size(branch);
      return n;
    }
    case Term::Kind::LetPair: return 1 + value_size(m.first()) + term_size(m.body());
  }
  return 1;
}

std::optional<MValue> to_mvalue(const Value& v) {
  switch (v.kind()) {
    case Value::Kind::Unit: return MValue::unit();
    case Value::Kind::Label: return MValue::label(v.label_value());
    case Value::Kind::Pair: {
      auto left = to_mvalue(v.left());
      auto right = to_mvalue(v.right());
      if (!left || !right) return std::nullopt;
      return MValue::pair(*left, *right);
    }
    default: return std::nullopt;
  }
}

Value from_mvalue(const MValue& v) {
  switch (v.kind()) {
    case MValue::Kind::Unit: return Value::unit();
    case MValue::Kind::Label: return Value::label(v.label_value());
    case MValue::Kind::Pair: return Value::pair(from_mvalue(v.left()), from_mvalue(v.right()));
  }
  return {};
}

}  // namespace pqk
