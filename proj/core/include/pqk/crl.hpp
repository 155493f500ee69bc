#pragma once

#include <cstdint>
#include <initializer_list>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "pqk/lifting.hpp"

namespace pqk {

class Label {
 public:
  Label() = default;
  explicit Label(std::string name) : name_(std::move(name)) {}

  const std::string& name() const { return name_; }

  friend bool operator==(const Label&, const Label&) = default;
  friend std::strong_ordering operator<=>(const Label& a, const Label& b) {
    return natural_compare(a.name_, b.name_);
  }

 private:
  std::string name_;
};

using LabelRenaming = Permutation<Label>;

enum class WireType { Bit, Qubit };

std::string_view to_string(WireType w);

class LabelContext {
 public:
  LabelContext() = default;
  LabelContext(std::initializer_list<std::pair<const Label, WireType>> entries) : entries_(entries) {}

  std::optional<WireType> get(const Label& label) const;
  bool contains(const Label& label) const { return entries_.contains(label); }
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  const std::map<Label, WireType>& entries() const { return entries_; }

  // DuplicateLabel when already present.
  void add(const Label& label, WireType type);
  void remove(const Label& label);
  LabelContext disjoint_union(const LabelContext& other) const;
  // Removes `part`, which must be a sub-context (UnboundLabel / WrongWireType).
  LabelContext minus(const LabelContext& part) const;
  bool includes(const LabelContext& part) const;

  std::string to_string() const;

  friend bool operator==(const LabelContext&, const LabelContext&) = default;

 private:
  std::map<Label, WireType> entries_;
};

class MType {
 public:
  enum class Kind { Unit, Wire, Tensor };

  MType() = default;  // 𝟙
  static MType unit() { return {}; }
  static MType wire(WireType w);
  static MType bit() { return wire(WireType::Bit); }
  static MType qubit() { return wire(WireType::Qubit); }
  static MType tensor(MType left, MType right);

  Kind kind() const;
  WireType wire_type() const;
  const MType& left() const;
  const MType& right() const;

  std::string to_string() const;

  friend bool operator==(const MType& a, const MType& b);

 private:
  struct Node;
  std::shared_ptr<const Node> node_;
};

class MValue {
 public:
  enum class Kind { Unit, Label, Pair };

  MValue() = default;  // *
  static MValue unit() { return {}; }
  static MValue label(Label l);
  static MValue label(std::string name) { return label(Label(std::move(name))); }
  static MValue pair(MValue left, MValue right);

  Kind kind() const;
  const Label& label_value() const;
  const MValue& left() const;
  const MValue& right() const;

  std::string to_string() const;

  friend bool operator==(const MValue& a, const MValue& b);

 private:
  struct Node;
  std::shared_ptr<const Node> node_;
};

// Labels in left-to-right order (duplicates kept).
std::vector<Label> labels_of(const MValue& v);
bool same_shape(const MValue& a, const MValue& b);

// Q ⊨ v : T, requiring the labels of v to be exactly dom(Q).
MType type_mvalue(const LabelContext& q, const MValue& v);

struct Gate {
  std::string name;
  MType in;
  MType out;

  friend bool operator==(const Gate&, const Gate&) = default;
};

class GateSet {
 public:
  GateSet() = default;

  // H, X, Z, CNOT, Meas, Meas2, plus the extensions Init0, Init1, Discard.
  static const GateSet& default_set();

  void add(Gate gate);
  const Gate* find(const std::string& name) const;
  const Gate& at(const std::string& name) const;  // UnknownGate
  const std::map<std::string, Gate>& gates() const { return gates_; }

 private:
  std::map<std::string, Gate> gates_;
};

struct GateApp {
  Assignment cond;
  std::string gate;
  MValue in;
  MValue out;

  friend bool operator==(const GateApp&, const GateApp&) = default;
};

struct LiftInstr {
  Assignment cond;
  Label wire;
  LiftedVar var;

  friend bool operator==(const LiftInstr&, const LiftInstr&) = default;
};

using Instruction = std::variant<GateApp, LiftInstr>;

const Assignment& condition(const Instruction& instr);

struct Circuit {
  LabelContext input;
  std::vector<Instruction> instructions;

  friend bool operator==(const Circuit&, const Circuit&) = default;
};

// Every label mentioned anywhere in the circuit.
std::set<Label> all_labels(const Circuit& c);
// The same labels in order of first occurrence (input first).
std::vector<Label> labels_in_order(const Circuit& c);

struct CircuitSignature {
  LiftingTree tree;
  LabelContext input;
  Lifted<LabelContext> outputs;

  friend bool operator==(const CircuitSignature&, const CircuitSignature&) = default;
};

// C ▷ t; Q → Δ, processing instructions left to right.
CircuitSignature check_signature(const Circuit& c, const GateSet& gates = GateSet::default_set());

struct BoxedCircuit {
  MValue in;
  Circuit circuit;
  Lifted<MValue> out;

  const LiftingTree& tree() const { return out.tree(); }

  friend bool operator==(const BoxedCircuit&, const BoxedCircuit&) = default;
};

// (ℓ⃗, input(Q); g(ℓ⃗) → k⃗, leaf k⃗) for a single gate.
BoxedCircuit gate_constant(const Gate& gate);

Label rename_labels(const Label& l, const LabelRenaming& rho);
MValue rename_labels(const MValue& v, const LabelRenaming& rho);
LabelContext rename_labels(const LabelContext& q, const LabelRenaming& rho);
Instruction rename_labels(const Instruction& instr, const LabelRenaming& rho);
Circuit rename_labels(const Circuit& c, const LabelRenaming& rho);
CircuitSignature rename_labels(const CircuitSignature& s, const LabelRenaming& rho);
BoxedCircuit rename_labels(const BoxedCircuit& b, const LabelRenaming& rho);

template <class X>
Lifted<X> rename_labels(const Lifted<X>& xi, const LabelRenaming& rho) {
  return xi.map([&](const X& x) { return rename_labels(x, rho); });
}

Instruction rename_lifted(const Instruction& instr, const LiftedVarRenaming& pi);
Circuit rename_lifted(const Circuit& c, const LiftedVarRenaming& pi);
CircuitSignature rename_lifted(const CircuitSignature& s, const LiftedVarRenaming& pi);
BoxedCircuit rename_lifted(const BoxedCircuit& b, const LiftedVarRenaming& pi);

// Labels renamed in order of first occurrence (in-tuple, input, instructions,
// outputs) and lifted variables in lift order, so equal forms decide ≅.
BoxedCircuit canonical_form(const BoxedCircuit& b);
bool boxed_equiv(const BoxedCircuit& a, const BoxedCircuit& b);

// C ::_a D
Circuit insert(const Circuit& c, const Assignment& a, const Circuit& d);

// Generated labels `%0, %1, ...`.
class LabelSupply {
 public:
  LabelSupply() = default;
  explicit LabelSupply(std::uint64_t next) : next_(next) {}

  Label fresh();
  // Moves the counter past a generated-looking label.
  void avoid(const Label& label);
  void avoid(const Circuit& c);
  std::uint64_t next() const { return next_; }

 private:
  std::uint64_t next_ = 0;
};

struct AppendResult {
  Circuit circuit;
  Lifted<MValue> out;
};

// Unboxes `boxed` onto `target` at branch `a`: relabel (inputs onto target,
// everything else fresh), rename binders to `fresh_vars`, insert.
AppendResult append(const Circuit& c, const Assignment& a, const MValue& target, const BoxedCircuit& boxed,
                    std::span<const LiftedVar> fresh_vars, LabelSupply& supply,
                    const GateSet& gates = GateSet::default_set());

}  // namespace pqk
