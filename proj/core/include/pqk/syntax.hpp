#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pqk/crl.hpp"
#include "pqk/error.hpp"
#include "pqk/lifting.hpp"

namespace pqk {

class Type {
 public:
  enum class Kind { Unit, Wire, Arrow, Bang, Circ, Tensor };

  Type() = default;  // 𝟙
  static Type unit() { return {}; }
  static Type wire(WireType w);
  static Type bit() { return wire(WireType::Bit); }
  static Type qubit() { return wire(WireType::Qubit); }
  static Type arrow(Type domain, Lifted<Type> codomain);
  static Type bang(Lifted<Type> body);
  static Type circ(MType in, Lifted<MType> out);
  static Type tensor(Type left, Type right);
  static Type from_mtype(const MType& t);

  Kind kind() const;
  WireType wire_type() const;
  const Type& domain() const;
  const Lifted<Type>& codomain() const;
  const Lifted<Type>& bang_body() const;
  const MType& circ_in() const;
  const Lifted<MType>& circ_out() const;
  const Type& left() const;
  const Type& right() const;
  // Effect tree of an arrow or the bound tree of a circuit type.
  const LiftingTree& tree() const;

  friend bool operator==(const Type& a, const Type& b);

 private:
  struct Node;
  std::shared_ptr<const Node> node_;
};

// 𝟙, !α, Circ and tensors of those.
bool is_parameter(const Type& t);
std::optional<MType> to_mtype(const Type& t);
// Circuit-type binders renamed canonically; equal canonical forms decide ≡.
Type canonical(const Type& t);
bool alpha_equiv(const Type& a, const Type& b);
bool alpha_equiv(const Lifted<Type>& a, const Lifted<Type>& b);
Type rename_lifted(const Type& t, const LiftedVarRenaming& pi);
std::set<LiftedVar> free_lifted_vars(const Type& t);

class Term;

class Value {
 public:
  enum class Kind { Unit, Var, Label, Lam, Lift, Boxed, Pair };

  Value() = default;  // *
  static Value unit(SourceSpan span = {});
  static Value var(std::string name, SourceSpan span = {});
  static Value label(Label l, SourceSpan span = {});
  static Value lam(std::string param, Type type, Term body, SourceSpan span = {});
  static Value lift(Term body, SourceSpan span = {});
  static Value boxed(BoxedCircuit b, SourceSpan span = {});
  static Value pair(Value left, Value right, SourceSpan span = {});

  Kind kind() const;
  SourceSpan span() const;
  const std::string& name() const;   // Var, Lam parameter
  const Label& label_value() const;  // Label
  const Type& param_type() const;    // Lam
  const Term& body() const;          // Lam, Lift
  const BoxedCircuit& boxed_value() const;
  const Value& left() const;
  const Value& right() const;

  // Structural equality ignoring spans.
  friend bool operator==(const Value& a, const Value& b);

 private:
  struct Node;
  std::shared_ptr<const Node> node_;
};

class Term {
 public:
  enum class Kind { App, Let, LetPair, Force, Box, Apply, Return };

  Term() = default;  // return *
  static Term app(Value fun, Value arg, SourceSpan span = {});
  static Term let(std::string name, Term bound, Lifted<Term> cont, SourceSpan span = {});
  static Term let_pair(std::string first, std::string second, Value pair, Term body, SourceSpan span = {});
  static Term force(Value v, SourceSpan span = {});
  static Term box(MType in, Value v, std::vector<LiftedVar> annotation = {}, SourceSpan span = {});
  static Term apply(std::vector<LiftedVar> vars, Value circuit, Value arg, SourceSpan span = {});
  static Term ret(Value v, SourceSpan span = {});

  Kind kind() const;
  SourceSpan span() const;
  // App: fun/arg. Apply: circuit/arg. LetPair: pair in first().
  // Force, Box and Return: the operand in first().
  const Value& first() const;
  const Value& second() const;
  const std::string& name() const;         // Let binder, LetPair first binder
  const std::string& second_name() const;  // LetPair second binder
  const Term& bound() const;               // Let scrutinee
  const Lifted<Term>& continuation() const;
  const Term& body() const;  // LetPair body
  const MType& box_type() const;
  // Apply: lifted variables supplied; Box: the unused superscript.
  const std::vector<LiftedVar>& vars() const;

  friend bool operator==(const Term& a, const Term& b);

 private:
  struct Node;
  std::shared_ptr<const Node> node_;
};

std::set<std::string> free_vars(const Term& m);
std::set<std::string> free_vars(const Value& v);
std::set<Label> free_labels(const Term& m);
std::set<Label> free_labels(const Value& v);
std::set<LiftedVar> free_lifted_vars(const Term& m);
std::set<LiftedVar> free_lifted_vars(const Value& v);
// Free variables and labels as values, in order of first occurrence.
std::vector<Value> free_operands(const Term& m);

// m[v/x], renaming binders that would capture free variables of v.
Term substitute(const Term& m, const Value& v, const std::string& x);
Value substitute(const Value& w, const Value& v, const std::string& x);
Lifted<Term> substitute(const Lifted<Term>& mu, const Value& v, const std::string& x);

bool alpha_equiv(const Term& a, const Term& b);
bool alpha_equiv(const Value& a, const Value& b);

Term rename_lifted(const Term& m, const LiftedVarRenaming& pi);
Value rename_lifted(const Value& v, const LiftedVarRenaming& pi);
Term rename_labels(const Term& m, const LabelRenaming& rho);
Value rename_labels(const Value& v, const LabelRenaming& rho);

// Number of AST nodes (terms, values, and lifted-continuation leaves).
std::size_t term_size(const Term& m);
std::size_t value_size(const Value& v);

// Values built only from *, labels and pairs.
std::optional<MValue> to_mvalue(const Value& v);
Value from_mvalue(const MValue& v);

}  // namespace pqk
