#include "pqk/crl.hpp"

#include <algorithm>
#include <charconv>

namespace pqk {

std::string_view to_string(WireType w) { return w == WireType::Bit ? "Bit" : "Qubit"; }

// LabelContext

std::optional<WireType> LabelContext::get(const Label& label) const {
  auto it = entries_.find(label);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void LabelContext::add(const Label& label, WireType type) {
  if (!entries_.emplace(label, type).second) {
    throw Error(ErrorKind::DuplicateLabel, "label " + label.name() + " already present");
  }
}

void LabelContext::remove(const Label& label) { entries_.erase(label); }

LabelContext LabelContext::disjoint_union(const LabelContext& other) const {
  LabelContext out = *this;
  for (const auto& [label, type] : other.entries_) out.add(label, type);
  return out;
}

LabelContext LabelContext::minus(const LabelContext& part) const {
  LabelContext out = *this;
  for (const auto& [label, type] : part.entries_) {
    auto have = get(label);
    if (!have) throw Error(ErrorKind::UnboundLabel, "label " + label.name() + " is not live");
    if (*have != type) {
      throw Error(ErrorKind::WrongWireType, "label " + label.name() + " has type " + std::string(pqk::to_string(*have)));
    }
    out.entries_.erase(label);
  }
  return out;
}

bool LabelContext::includes(const LabelContext& part) const {
  return std::all_of(part.entries_.begin(), part.entries_.end(),
                     [&](const auto& entry) { return get(entry.first) == entry.second; });
}

std::string LabelContext::to_string() const {
  std::string out = "{";
  bool first = true;
  for (const auto& [label, type] : entries_) {
    if (!first) out += ", ";
    first = false;
    out += label.name() + ":" + std::string(pqk::to_string(type));
  }
  return out + "}";
}

// MType

struct MType::Node {
  Kind kind;
  WireType wire = WireType::Bit;
  MType left;
  MType right;
};

MType MType::wire(WireType w) {
  MType out;
  out.node_ = std::make_shared<Node>(Node{Kind::Wire, w, {}, {}});
  return out;
}

MType MType::tensor(MType left, MType right) {
  MType out;
  out.node_ = std::make_shared<Node>(Node{Kind::Tensor, WireType::Bit, std::move(left), std::move(right)});
  return out;
}

MType::Kind MType::kind() const { return node_ ? node_->kind : Kind::Unit; }

WireType MType::wire_type() const {
  if (kind() != Kind::Wire) throw Error(ErrorKind::InvalidArgument, "not a wire type");
  return node_->wire;
}

const MType& MType::left() const {
  if (kind() != Kind::Tensor) throw Error(ErrorKind::InvalidArgument, "not a tensor type");
  return node_->left;
}

const MType& MType::right() const {
  if (kind() != Kind::Tensor) throw Error(ErrorKind::InvalidArgument, "not a tensor type");
  return node_->right;
}

std::string MType::to_string() const {
  switch (kind()) {
    case Kind::Unit: return "Unit";
    case Kind::Wire: return std::string(pqk::to_string(wire_type()));
    case Kind::Tensor: {
      std::string right_text = right().to_string();
      if (right().kind() == Kind::Tensor) right_text = "(" + right_text + ")";
      return left().to_string() + " * " + right_text;
    }
  }
  return "";
}

bool operator==(const MType& a, const MType& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case MType::Kind::Unit: return true;
    case MType::Kind::Wire: return a.wire_type() == b.wire_type();
    case MType::Kind::Tensor: return a.left() == b.left() && a.right() == b.right();
  }
  return false;
}

// MValue

struct MValue::Node {
  Kind kind;
  Label label;
  MValue left;
  MValue right;
};

MValue MValue::label(Label l) {
  MValue out;
  out.node_ = std::make_shared<Node>(Node{Kind::Label, std::move(l), {}, {}});
  return out;
}

MValue MValue::pair(MValue left, MValue right) {
  MValue out;
  out.node_ = std::make_shared<Node>(Node{Kind::Pair, {}, std::move(left), std::move(right)});
  return out;
}

MValue::Kind MValue::kind() const { return node_ ? node_->kind : Kind::Unit; }

const Label& MValue::label_value() const {
  if (kind() != Kind::Label) throw Error(ErrorKind::InvalidArgument, "not a label");
  return node_->label;
}

const MValue& MValue::left() const {
  if (kind() != Kind::Pair) throw Error(ErrorKind::InvalidArgument, "not a pair");
  return node_->left;
}

const MValue& MValue::right() const {
  if (kind() != Kind::Pair) throw Error(ErrorKind::InvalidArgument, "not a pair");
  return node_->right;
}

std::string MValue::to_string() const {
  switch (kind()) {
    case Kind::Unit: return "*";
    case Kind::Label: return label_value().name();
    case Kind::Pair: {
      // Right-nested pairs print as one tuple: (a, b, c) = ⟨a, ⟨b, c⟩⟩.
      std::string out = "(" + left().to_string();
      const MValue* rest = &right();
      while (rest->kind() == Kind::Pair) {
        out += ", " + rest->left().to_string();
        rest = &rest->right();
      }
      return out + ", " + rest->to_string() + ")";
    }
  }
  return "";
}

bool operator==(const MValue& a, const MValue& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case MValue::Kind::Unit: return true;
    case MValue::Kind::Label: return a.label_value() == b.label_value();
    case MValue::Kind::Pair: return a.left() == b.left() && a.right() == b.right();
  }
  return false;
}

namespace {

void collect_labels(const MValue& v, std::vector<Label>& out) {
  switch (v.kind()) {
    case MValue::Kind::Unit: return;
    case MValue::Kind::Label: out.push_back(v.label_value()); return;
    case MValue::Kind::Pair:
      collect_labels(v.left(), out);
      collect_labels(v.right(), out);
      return;
  }
}

MType type_against(const LabelContext& q, const MValue& v) {
  switch (v.kind()) {
    case MValue::Kind::Unit: return MType::unit();
    case MValue::Kind::Label: {
      auto w = q.get(v.label_value());
      if (!w) throw Error(ErrorKind::UnboundLabel, "label " + v.label_value().name() + " is not in context");
      return MType::wire(*w);
    }
    case MValue::Kind::Pair: return MType::tensor(type_against(q, v.left()), type_against(q, v.right()));
  }
  return {};
}

}  // namespace

std::vector<Label> labels_of(const MValue& v) {
  std::vector<Label> out;
  collect_labels(v, out);
  return out;
}

bool same_shape(const MValue& a, const MValue& b) {
  if (a.kind() != b.kind()) return false;
  if (a.kind() != MValue::Kind::Pair) return true;
  return same_shape(a.left(), b.left()) && same_shape(a.right(), b.right());
}

MType type_mvalue(const LabelContext& q, const MValue& v) {
  auto labels = labels_of(v);
  std::set<Label> seen;
  for (const auto& l : labels) {
    if (!seen.insert(l).second) throw Error(ErrorKind::DuplicateLabel, "label " + l.name() + " used twice");
  }
  MType type = type_against(q, v);
  for (const auto& [label, w] : q.entries()) {
    if (!seen.contains(label)) throw Error(ErrorKind::LeftoverLabel, "label " + label.name() + " is not consumed");
  }
  return type;
}

// Gates

const GateSet& GateSet::default_set() {
  static const GateSet set = [] {
    GateSet s;
    MType q = MType::qubit();
    MType b = MType::bit();
    s.add({"H", q, q});
    s.add({"X", q, q});
    s.add({"Z", q, q});
    s.add({"CNOT", MType::tensor(q, q), MType::tensor(q, q)});
    s.add({"Meas", q, b});
    s.add({"Meas2", MType::tensor(q, q), MType::tensor(b, b)});
    s.add({"Init0", MType::unit(), q});
    s.add({"Init1", MType::unit(), q});
    s.add({"Discard", b, MType::unit()});
    return s;
  }();
  return set;
}

void GateSet::add(Gate gate) {
  std::string name = gate.name;
  gates_.insert_or_assign(std::move(name), std::move(gate));
}

const Gate* GateSet::find(const std::string& name) const {
  auto it = gates_.find(name);
  return it == gates_.end() ? nullptr : &it->second;
}

const Gate& GateSet::at(const std::string& name) const {
  const Gate* g = find(name);
  if (!g) throw Error(ErrorKind::UnknownGate, "gate " + name + " is not in the gate set");
  return *g;
}

const Assignment& condition(const Instruction& instr) {
  return std::visit([](const auto& i) -> const Assignment& { return i.cond; }, instr);
}

std::vector<Label> labels_in_order(const Circuit& c) {
  std::vector<Label> out;
  std::set<Label> seen;
  auto visit = [&](const Label& l) {
    if (seen.insert(l).second) out.push_back(l);
  };
  for (const auto& entry : c.input.entries()) visit(entry.first);
  for (const auto& instr : c.instructions) {
    if (const auto* g = std::get_if<GateApp>(&instr)) {
      for (const auto& l : labels_of(g->in)) visit(l);
      for (const auto& l : labels_of(g->out)) visit(l);
    } else {
      visit(std::get<LiftInstr>(instr).wire);
    }
  }
  return out;
}

std::set<Label> all_labels(const Circuit& c) {
  auto ordered = labels_in_order(c);
  return {ordered.begin(), ordered.end()};
}

// Signatures

namespace {

class SignatureBuilder {
 public:
  SignatureBuilder(const Circuit& c, const GateSet& gates) : gates_(gates) {
    sig_.input = c.input;
    sig_.outputs = Lifted<LabelContext>(c.input);
    for (const auto& entry : c.input.entries()) used_.insert(entry.first);
  }

  void step(std::size_t index, const Instruction& instr) {
    index_ = index;
    if (const auto* g = std::get_if<GateApp>(&instr)) {
      gate(*g);
    } else {
      lift(std::get<LiftInstr>(instr));
    }
  }

  CircuitSignature finish() && { return std::move(sig_); }

 private:
  [[noreturn]] void fail(ErrorKind kind, const std::string& message) const {
    throw Error(kind, "instruction " + std::to_string(index_ + 1) + ": " + message);
  }

  void require_branch(const Assignment& cond) const {
    if (!in_assignment_set(sig_.tree, cond)) {
      fail(ErrorKind::InvalidBranch, "condition " + cond.to_string() + " is not an assignment of " +
                                         sig_.tree.to_string());
    }
  }

  // Matches v against T in `live`, collecting the consumed sub-context.
  void match_input(const MValue& v, const MType& t, const LabelContext& live, LabelContext& consumed,
                   const Assignment& path) const {
    if (t.kind() == MType::Kind::Unit && v.kind() == MValue::Kind::Unit) return;
    if (t.kind() == MType::Kind::Tensor && v.kind() == MValue::Kind::Pair) {
      match_input(v.left(), t.left(), live, consumed, path);
      match_input(v.right(), t.right(), live, consumed, path);
      return;
    }
    if (t.kind() == MType::Kind::Wire && v.kind() == MValue::Kind::Label) {
      const Label& l = v.label_value();
      auto have = live.get(l);
      if (!have) fail(ErrorKind::UnboundLabel, "label " + l.name() + " is not live on branch " + path.to_string());
      if (*have != t.wire_type()) {
        fail(ErrorKind::WrongWireType, "label " + l.name() + " is " + std::string(to_string(*have)) + ", expected " +
                                           std::string(to_string(t.wire_type())));
      }
      consumed.add(l, *have);
      return;
    }
    fail(ErrorKind::GateArityMismatch, "value " + v.to_string() + " does not match type " + t.to_string());
  }

  void match_output(const MValue& v, const MType& t, LabelContext& produced) const {
    if (t.kind() == MType::Kind::Unit && v.kind() == MValue::Kind::Unit) return;
    if (t.kind() == MType::Kind::Tensor && v.kind() == MValue::Kind::Pair) {
      match_output(v.left(), t.left(), produced);
      match_output(v.right(), t.right(), produced);
      return;
    }
    if (t.kind() == MType::Kind::Wire && v.kind() == MValue::Kind::Label) {
      produced.add(v.label_value(), t.wire_type());
      return;
    }
    fail(ErrorKind::GateArityMismatch, "value " + v.to_string() + " does not match type " + t.to_string());
  }

  void gate(const GateApp& g) {
    const Gate* gate = gates_.find(g.gate);
    if (!gate) fail(ErrorKind::UnknownGate, "gate " + g.gate + " is not in the gate set");
    require_branch(g.cond);
    std::set<Label> in_labels;
    for (const auto& l : labels_of(g.in)) {
      if (!in_labels.insert(l).second) fail(ErrorKind::DuplicateLabel, "label " + l.name() + " used twice");
    }
    std::set<Label> out_labels;
    for (const auto& l : labels_of(g.out)) {
      if (used_.contains(l) || in_labels.contains(l) || !out_labels.insert(l).second) {
        fail(ErrorKind::NonFreshOutput, "output label " + l.name() + " already occurs in the circuit");
      }
    }
    LabelContext produced;
    match_output(g.out, gate->out, produced);

    auto all = paths(sig_.tree);
    std::vector<LabelContext> leaves = sig_.outputs.leaves();
    for (std::size_t i = 0; i < all.size(); ++i) {
      if (!all[i].extends(g.cond)) continue;
      LabelContext consumed;
      match_input(g.in, gate->in, leaves[i], consumed, all[i]);
      leaves[i] = leaves[i].minus(consumed).disjoint_union(produced);
    }
    sig_.outputs = Lifted<LabelContext>(sig_.tree, std::move(leaves));
    for (const auto& entry : produced.entries()) used_.insert(entry.first);
  }

  void lift(const LiftInstr& l) {
    require_branch(l.cond);
    if (var_set(sig_.tree, l.cond).contains(l.var)) {
      fail(ErrorKind::StaleLiftedVar, "variable " + l.var.name() + " is already lifted on branch " +
                                          l.cond.to_string());
    }
    auto all = paths(sig_.tree);
    std::vector<LabelContext> leaves = sig_.outputs.leaves();
    for (std::size_t i = 0; i < all.size(); ++i) {
      if (!all[i].extends(l.cond)) continue;
      auto have = leaves[i].get(l.wire);
      if (!have) fail(ErrorKind::UnboundLabel, "label " + l.wire.name() + " is not live on branch " + all[i].to_string());
      if (*have != WireType::Bit) fail(ErrorKind::WrongWireType, "lifted label " + l.wire.name() + " is not a Bit");
      leaves[i].remove(l.wire);
    }
    LiftingTree split = LiftingTree::node(l.var, {}, {});
    sig_.outputs = graft(Lifted<LabelContext>(sig_.tree, std::move(leaves)), l.cond, split);
    sig_.tree = sig_.outputs.tree();
  }

  const GateSet& gates_;
  CircuitSignature sig_;
  std::set<Label> used_;
  std::size_t index_ = 0;
};

}  // namespace

CircuitSignature check_signature(const Circuit& c, const GateSet& gates) {
  SignatureBuilder builder(c, gates);
  for (std::size_t i = 0; i < c.instructions.size(); ++i) builder.step(i, c.instructions[i]);
  return std::move(builder).finish();
}

BoxedCircuit gate_constant(const Gate& gate) {
  std::size_t counter = 0;
  LabelContext input;
  auto build = [&](auto&& self, const MType& t, const char* prefix, LabelContext* ctx) -> MValue {
    switch (t.kind()) {
      case MType::Kind::Unit: return MValue::unit();
      case MType::Kind::Wire: {
        Label l(prefix + std::to_string(counter++));
        if (ctx) ctx->add(l, t.wire_type());
        return MValue::label(l);
      }
      case MType::Kind::Tensor: {
        MValue left = self(self, t.left(), prefix, ctx);
        return MValue::pair(left, self(self, t.right(), prefix, ctx));
      }
    }
    return {};
  };
  MValue in = build(build, gate.in, "i", &input);
  counter = 0;
  MValue out = build(build, gate.out, "o", nullptr);
  Circuit c{input, {GateApp{{}, gate.name, in, out}}};
  return BoxedCircuit{in, std::move(c), Lifted<MValue>(out)};
}

// Renaming

Label rename_labels(const Label& l, const LabelRenaming& rho) { return rho(l); }

MValue rename_labels(const MValue& v, const LabelRenaming& rho) {
  switch (v.kind()) {
    case MValue::Kind::Unit: return v;
    case MValue::Kind::Label: return MValue::label(rho(v.label_value()));
    case MValue::Kind::Pair: return MValue::pair(rename_labels(v.left(), rho), rename_labels(v.right(), rho));
  }
  return v;
}

LabelContext rename_labels(const LabelContext& q, const LabelRenaming& rho) {
  LabelContext out;
  for (const auto& [label, type] : q.entries()) out.add(rho(label), type);
  return out;
}

Instruction rename_labels(const Instruction& instr, const LabelRenaming& rho) {
  if (const auto* g = std::get_if<GateApp>(&instr)) {
    return GateApp{g->cond, g->gate, rename_labels(g->in, rho), rename_labels(g->out, rho)};
  }
  const auto& l = std::get<LiftInstr>(instr);
  return LiftInstr{l.cond, rho(l.wire), l.var};
}

Circuit rename_labels(const Circuit& c, const LabelRenaming& rho) {
  Circuit out{rename_labels(c.input, rho), {}};
  out.instructions.reserve(c.instructions.size());
  for (const auto& instr : c.instructions) out.instructions.push_back(rename_labels(instr, rho));
  return out;
}

CircuitSignature rename_labels(const CircuitSignature& s, const LabelRenaming& rho) {
  return {s.tree, rename_labels(s.input, rho), rename_labels(s.outputs, rho)};
}

BoxedCircuit rename_labels(const BoxedCircuit& b, const LabelRenaming& rho) {
  return {rename_labels(b.in, rho), rename_labels(b.circuit, rho), rename_labels(b.out, rho)};
}

Instruction rename_lifted(const Instruction& instr, const LiftedVarRenaming& pi) {
  if (const auto* g = std::get_if<GateApp>(&instr)) {
    return GateApp{rename_lifted(g->cond, pi), g->gate, g->in, g->out};
  }
  const auto& l = std::get<LiftInstr>(instr);
  return LiftInstr{rename_lifted(l.cond, pi), l.wire, pi(l.var)};
}

Circuit rename_lifted(const Circuit& c, const LiftedVarRenaming& pi) {
  Circuit out{c.input, {}};
  out.instructions.reserve(c.instructions.size());
  for (const auto& instr : c.instructions) out.instructions.push_back(rename_lifted(instr, pi));
  return out;
}

CircuitSignature rename_lifted(const CircuitSignature& s, const LiftedVarRenaming& pi) {
  return {rename_lifted(s.tree, pi), s.input, rename_lifted(s.outputs, pi)};
}

BoxedCircuit rename_lifted(const BoxedCircuit& b, const LiftedVarRenaming& pi) {
  return {b.in, rename_lifted(b.circuit, pi), rename_lifted(b.out, pi)};
}

// Equivalence

BoxedCircuit canonical_form(const BoxedCircuit& b) {
  std::vector<std::pair<Label, Label>> label_map;
  std::set<Label> seen_labels;
  auto visit_label = [&](const Label& l) {
    if (seen_labels.insert(l).second) label_map.emplace_back(l, Label("$" + std::to_string(label_map.size())));
  };
  std::vector<std::pair<LiftedVar, LiftedVar>> var_map;
  std::set<LiftedVar> seen_vars;
  auto visit_var = [&](const LiftedVar& v) {
    if (seen_vars.insert(v).second) var_map.emplace_back(v, LiftedVar("$" + std::to_string(var_map.size())));
  };

  for (const auto& l : labels_of(b.in)) visit_label(l);
  for (const auto& entry : b.circuit.input.entries()) visit_label(entry.first);
  for (const auto& instr : b.circuit.instructions) {
    if (const auto* g = std::get_if<GateApp>(&instr)) {
      for (const auto& l : labels_of(g->in)) visit_label(l);
      for (const auto& l : labels_of(g->out)) visit_label(l);
    } else {
      const auto& lift = std::get<LiftInstr>(instr);
      visit_label(lift.wire);
      visit_var(lift.var);
    }
  }
  for (const auto& v : b.out.leaves()) {
    for (const auto& l : labels_of(v)) visit_label(l);
  }
  for (const auto& v : binder_order(b.tree())) visit_var(v);

  BoxedCircuit relabeled = rename_labels(b, LabelRenaming::from_pairs(label_map));
  return rename_lifted(relabeled, LiftedVarRenaming::from_pairs(var_map));
}

bool boxed_equiv(const BoxedCircuit& a, const BoxedCircuit& b) { return canonical_form(a) == canonical_form(b); }

// Insertion and append

Circuit insert(const Circuit& c, const Assignment& a, const Circuit& d) {
  Circuit out = c;
  for (const auto& instr : d.instructions) {
    Instruction copy = instr;
    std::visit([&](auto& i) { i.cond = a.union_with(i.cond); }, copy);
    out.instructions.push_back(std::move(copy));
  }
  return out;
}

Label LabelSupply::fresh() { return Label("%" + std::to_string(next_++)); }

void LabelSupply::avoid(const Label& label) {
  const std::string& name = label.name();
  if (name.size() < 2 || name[0] != '%') return;
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), value);
  if (ec == std::errc{} && ptr == name.data() + name.size() && value >= next_) next_ = value + 1;
}

void LabelSupply::avoid(const Circuit& c) {
  for (const auto& l : all_labels(c)) avoid(l);
}

AppendResult append(const Circuit& c, const Assignment& a, const MValue& target, const BoxedCircuit& boxed,
                    std::span<const LiftedVar> fresh_vars, LabelSupply& supply, const GateSet& gates) {
  auto fail = [](const std::string& message) -> void { throw Error(ErrorKind::PreconditionViolated, message); };

  CircuitSignature sig;
  try {
    sig = check_signature(c, gates);
  } catch (const Error& e) {
    throw Error(ErrorKind::PreconditionViolated, std::string("ambient circuit has no signature: ") + e.what());
  }
  if (!is_path(sig.tree, a)) fail(a.to_string() + " is not a path of " + sig.tree.to_string());
  const LabelContext& live = sig.outputs.at(a);

  if (!same_shape(target, boxed.in)) fail("target " + target.to_string() + " does not match " + boxed.in.to_string());
  auto targets = labels_of(target);
  auto inputs = labels_of(boxed.in);
  std::set<Label> distinct(targets.begin(), targets.end());
  if (distinct.size() != targets.size()) fail("target " + target.to_string() + " repeats a label");
  for (std::size_t i = 0; i < targets.size(); ++i) {
    auto have = live.get(targets[i]);
    if (!have) fail("label " + targets[i].name() + " is not live on branch " + a.to_string());
    if (boxed.circuit.input.get(inputs[i]) != have) fail("label " + targets[i].name() + " has the wrong wire type");
  }

  auto binders = binder_order(boxed.tree());
  if (fresh_vars.size() != binders.size()) {
    fail("expected " + std::to_string(binders.size()) + " lifted variables, got " + std::to_string(fresh_vars.size()));
  }
  auto taken = var_set(sig.tree, a);
  std::set<LiftedVar> chosen;
  for (const auto& v : fresh_vars) {
    if (!chosen.insert(v).second) fail("lifted variable " + v.name() + " supplied twice");
    if (taken.contains(v)) fail("lifted variable " + v.name() + " is already lifted on branch " + a.to_string());
  }

  // Step 1: inputs onto the target, every other label fresh for c.
  supply.avoid(c);
  std::vector<std::pair<Label, Label>> label_map;
  std::set<Label> mapped;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    label_map.emplace_back(inputs[i], targets[i]);
    mapped.insert(inputs[i]);
  }
  auto fresh_for = [&](const Label& l) {
    if (mapped.insert(l).second) label_map.emplace_back(l, supply.fresh());
  };
  for (const auto& l : labels_in_order(boxed.circuit)) fresh_for(l);
  for (const auto& v : boxed.out.leaves()) {
    for (const auto& l : labels_of(v)) fresh_for(l);
  }
  BoxedCircuit relabeled = rename_labels(boxed, LabelRenaming::from_pairs(label_map));

  // Step 2: binders onto the supplied variables.
  std::vector<std::pair<LiftedVar, LiftedVar>> var_map;
  for (std::size_t i = 0; i < binders.size(); ++i) var_map.emplace_back(binders[i], fresh_vars[i]);
  BoxedCircuit renamed = rename_lifted(relabeled, LiftedVarRenaming::from_pairs(var_map));

  // Step 3.
  return {insert(c, a, renamed.circuit), renamed.out};
}

}  // namespace pqk
