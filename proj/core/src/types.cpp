#include "pqk/syntax.hpp"

namespace pqk {

struct Type::Node {
  Kind kind = Kind::Unit;
  WireType wire = WireType::Bit;
  Type left;  // arrow domain, tensor left
  Type right;
  Lifted<Type> lifted;  // arrow codomain, bang body
  MType circ_in;
  Lifted<MType> circ_out;
};

namespace {

[[noreturn]] void wrong_kind(const char* what) {
  throw Error(ErrorKind::InvalidArgument, std::string("type is not ") + what);
}

}  // namespace

Type Type::wire(WireType w) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Wire;
  n->wire = w;
  Type out;
  out.node_ = std::move(n);
  return out;
}

Type Type::arrow(Type domain, Lifted<Type> codomain) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Arrow;
  n->left = std::move(domain);
  n->lifted = std::move(codomain);
  Type out;
  out.node_ = std::move(n);
  return out;
}

Type Type::bang(Lifted<Type> body) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Bang;
  n->lifted = std::move(body);
  Type out;
  out.node_ = std::move(n);
  return out;
}

Type Type::circ(MType in, Lifted<MType> out_type) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Circ;
  n->circ_in = std::move(in);
  n->circ_out = std::move(out_type);
  Type out;
  out.node_ = std::move(n);
  return out;
}

Type Type::tensor(Type left, Type right) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Tensor;
  n->left = std::move(left);
  n->right = std::move(right);
  Type out;
  out.node_ = std::move(n);
  return out;
}

Type Type::from_mtype(const MType& t) {
  switch (t.kind()) {
    case MType::Kind::Unit: return unit();
    case MType::Kind::Wire: return wire(t.wire_type());
    case MType::Kind::Tensor: return tensor(from_mtype(t.left()), from_mtype(t.right()));
  }
  return {};
}

Type::Kind Type::kind() const { return node_ ? node_->kind : Kind::Unit; }

WireType Type::wire_type() const {
  if (kind() != Kind::Wire) wrong_kind("a wire type");
  return node_->wire;
}

const Type& Type::domain() const {
  if (kind() != Kind::Arrow) wrong_kind("an arrow");
  return node_->left;
}

const Lifted<Type>& Type::codomain() const {
  if (kind() != Kind::Arrow) wrong_kind("an arrow");
  return node_->lifted;
}

const Lifted<Type>& Type::bang_body() const {
  if (kind() != Kind::Bang) wrong_kind("a bang type");
  return node_->lifted;
}

const MType& Type::circ_in() const {
  if (kind() != Kind::Circ) wrong_kind("a circuit type");
  return node_->circ_in;
}

const Lifted<MType>& Type::circ_out() const {
  if (kind() != Kind::Circ) wrong_kind("a circuit type");
  return node_->circ_out;
}

const Type& Type::left() const {
  if (kind() != Kind::Tensor) wrong_kind("a tensor");
  return node_->left;
}

const Type& Type::right() const {
  if (kind() != Kind::Tensor) wrong_kind("a tensor");
  return node_->right;
}

const LiftingTree& Type::tree() const {
  if (kind() == Kind::Arrow) return node_->lifted.tree();
  if (kind() == Kind::Circ) return node_->circ_out.tree();
  wrong_kind("an arrow or circuit type");
}

bool operator==(const Type& a, const Type& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Type::Kind::Unit: return true;
    case Type::Kind::Wire: return a.wire_type() == b.wire_type();
    case Type::Kind::Arrow: return a.domain() == b.domain() && a.codomain() == b.codomain();
    case Type::Kind::Bang: return a.bang_body() == b.bang_body();
    case Type::Kind::Circ: return a.circ_in() == b.circ_in() && a.circ_out() == b.circ_out();
    case Type::Kind::Tensor: return a.left() == b.left() && a.right() == b.right();
  }
  return false;
}

bool is_parameter(const Type& t) {
  switch (t.kind()) {
    case Type::Kind::Unit:
    case Type::Kind::Bang:
    case Type::Kind::Circ: return true;
    case Type::Kind::Tensor: return is_parameter(t.left()) && is_parameter(t.right());
    case Type::Kind::Wire:
    case Type::Kind::Arrow: return false;
  }
  return false;
}

std::optional<MType> to_mtype(const Type& t) {
  switch (t.kind()) {
    case Type::Kind::Unit: return MType::unit();
    case Type::Kind::Wire: return MType::wire(t.wire_type());
    case Type::Kind::Tensor: {
      auto left = to_mtype(t.left());
      auto right = to_mtype(t.right());
      if (!left || !right) return std::nullopt;
      return MType::tensor(*left, *right);
    }
    default: return std::nullopt;
  }
}

namespace {

Lifted<Type> canonical_lifted(const Lifted<Type>& xi) {
  return xi.map([](const Type& t) { return canonical(t); });
}

}  // namespace

Type canonical(const Type& t) {
  switch (t.kind()) {
    case Type::Kind::Unit:
    case Type::Kind::Wire: return t;
    case Type::Kind::Arrow: return Type::arrow(canonical(t.domain()), canonical_lifted(t.codomain()));
    case Type::Kind::Bang: return Type::bang(canonical_lifted(t.bang_body()));
    case Type::Kind::Tensor: return Type::tensor(canonical(t.left()), canonical(t.right()));
    case Type::Kind::Circ: {
      std::vector<std::pair<LiftedVar, LiftedVar>> mapping;
      for (const auto& v : binder_order(t.tree())) {
        mapping.emplace_back(v, LiftedVar("$" + std::to_string(mapping.size())));
      }
      return Type::circ(t.circ_in(), rename_lifted(t.circ_out(), LiftedVarRenaming::from_pairs(mapping)));
    }
  }
  return t;
}

bool alpha_equiv(const Type& a, const Type& b) { return canonical(a) == canonical(b); }

bool alpha_equiv(const Lifted<Type>& a, const Lifted<Type>& b) {
  if (!(a.tree() == b.tree())) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!alpha_equiv(a.leaves()[i], b.leaves()[i])) return false;
  }
  return true;
}

Type rename_lifted(const Type& t, const LiftedVarRenaming& pi) {
  switch (t.kind()) {
    case Type::Kind::Unit:
    case Type::Kind::Wire: return t;
    case Type::Kind::Arrow: return Type::arrow(rename_lifted(t.domain(), pi), rename_lifted(t.codomain(), pi));
    case Type::Kind::Bang: return Type::bang(rename_lifted(t.bang_body(), pi));
    case Type::Kind::Circ: return Type::circ(t.circ_in(), rename_lifted(t.circ_out(), pi));
    case Type::Kind::Tensor: return Type::tensor(rename_lifted(t.left(), pi), rename_lifted(t.right(), pi));
  }
  return t;
}

std::set<LiftedVar> free_lifted_vars(const Type& t) {
  std::set<LiftedVar> out;
  auto add_lifted = [&](const Lifted<Type>& xi) {
    out.insert(xi.tree().vars().begin(), xi.tree().vars().end());
    for (const auto& leaf : xi.leaves()) {
      auto inner = free_lifted_vars(leaf);
      out.insert(inner.begin(), inner.end());
    }
  };
  switch (t.kind()) {
    case Type::Kind::Unit:
    case Type::Kind::Wire:
    case Type::Kind::Circ: break;
    case Type::Kind::Arrow:
      out = free_lifted_vars(t.domain());
      add_lifted(t.codomain());
      break;
    case Type::Kind::Bang: add_lifted(t.bang_body()); break;
    case Type::Kind::Tensor: {
      out = free_lifted_vars(t.left());
      auto right = free_lifted_vars(t.right());
      out.insert(right.begin(), right.end());
      break;
    }
  }
  return out;
}

}  // namespace pqk
