#pragma once

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "pqk/error.hpp"

namespace pqk {

// Total order on identifiers: alphabetic prefix first, then the trailing
// decimal suffix numerically ("u2" < "u10"), then the raw text.
std::strong_ordering natural_compare(std::string_view a, std::string_view b);

class LiftedVar {
 public:
  LiftedVar() = default;
  explicit LiftedVar(std::string name) : name_(std::move(name)) {}

  const std::string& name() const { return name_; }

  friend bool operator==(const LiftedVar&, const LiftedVar&) = default;
  friend std::strong_ordering operator<=>(const LiftedVar& a, const LiftedVar& b) {
    return natural_compare(a.name_, b.name_);
  }

 private:
  std::string name_;
};

// Finite-support bijection on names. Built from a partial injective map and
// completed so that displaced names are swapped back in sorted order.
template <class Name>
class Permutation {
 public:
  Permutation() = default;

  static Permutation from_pairs(const std::vector<std::pair<Name, Name>>& mapping) {
    Permutation result;
    std::set<Name> domain;
    std::set<Name> range;
    for (const auto& [from, to] : mapping) {
      if (!domain.insert(from).second || !range.insert(to).second) {
        throw Error(ErrorKind::InvalidArgument, "renaming is not injective");
      }
      if (!(from == to)) result.forward_[from] = to;
    }
    std::vector<Name> unplaced;
    for (const auto& name : range) {
      if (!domain.contains(name)) unplaced.push_back(name);
    }
    std::vector<Name> vacated;
    for (const auto& name : domain) {
      if (!range.contains(name)) vacated.push_back(name);
    }
    for (std::size_t i = 0; i < unplaced.size(); ++i) {
      result.forward_[unplaced[i]] = vacated[i];
    }
    return result;
  }

  static Permutation swap(const Name& a, const Name& b) { return from_pairs({{a, b}}); }

  Name operator()(const Name& name) const {
    auto it = forward_.find(name);
    return it == forward_.end() ? name : it->second;
  }

  Permutation inverse() const {
    Permutation result;
    for (const auto& [from, to] : forward_) result.forward_[to] = from;
    return result;
  }

  bool is_identity() const { return forward_.empty(); }
  const std::map<Name, Name>& support() const { return forward_; }

 private:
  std::map<Name, Name> forward_;
};

using LiftedVarRenaming = Permutation<LiftedVar>;

// Finite partial map from lifted variables to bits, kept sorted by variable.
class Assignment {
 public:
  using Binding = std::pair<LiftedVar, bool>;

  Assignment() = default;
  Assignment(std::initializer_list<Binding> bindings);
  explicit Assignment(std::vector<Binding> bindings);

  std::optional<bool> get(const LiftedVar& var) const;
  bool binds(const LiftedVar& var) const { return get(var).has_value(); }
  bool empty() const { return bindings_.empty(); }
  std::size_t size() const { return bindings_.size(); }
  const std::vector<Binding>& bindings() const { return bindings_; }
  std::set<LiftedVar> domain() const;

  Assignment with(const LiftedVar& var, bool bit) const;
  Assignment without(const LiftedVar& var) const;
  // Union on disjoint domains; AssignmentClash otherwise.
  Assignment union_with(const Assignment& other) const;
  // True when every binding of `other` also appears here.
  bool extends(const Assignment& other) const;
  bool consistent_with(const Assignment& other) const;

  std::string to_string() const;

  friend bool operator==(const Assignment&, const Assignment&) = default;
  friend std::strong_ordering operator<=>(const Assignment& a, const Assignment& b);

 private:
  std::vector<Binding> bindings_;
};

class LiftingTree {
 public:
  LiftingTree() = default;

  static LiftingTree leaf() { return {}; }
  // VariableClash when `var` already occurs below.
  static LiftingTree node(const LiftedVar& var, LiftingTree zero, LiftingTree one);

  bool is_leaf() const { return node_ == nullptr; }
  const LiftedVar& var() const;
  const LiftingTree& zero() const;
  const LiftingTree& one() const;
  const LiftingTree& child(bool bit) const { return bit ? one() : zero(); }

  std::size_t leaf_count() const;
  std::size_t depth() const;
  // All variables of the tree, V(t).
  const std::set<LiftedVar>& vars() const;

  std::string to_string() const;

  friend bool operator==(const LiftingTree& a, const LiftingTree& b);

 private:
  struct Node;
  std::shared_ptr<const Node> node_;
};

struct LiftingTree::Node {
  LiftedVar var;
  LiftingTree zero;
  LiftingTree one;
  std::set<LiftedVar> vars;
  std::size_t leaves = 0;
  std::size_t depth = 0;
};

// V_a(t): variables reachable when following `a`, taking both children where
// `a` is silent.
std::set<LiftedVar> var_set(const LiftingTree& tree, const Assignment& a = {});
bool in_assignment_set(const LiftingTree& tree, const Assignment& a);
std::set<Assignment> assignment_set(const LiftingTree& tree);
// Paths in leaf order (pre-order, zero branch first).
std::vector<Assignment> paths(const LiftingTree& tree);
std::set<Assignment> path_set(const LiftingTree& tree);
bool is_path(const LiftingTree& tree, const Assignment& a);
// Position of the leaf selected by path `a`, or nullopt when `a` is not a path.
std::optional<std::size_t> path_index(const LiftingTree& tree, const Assignment& a);
// Paths extending `a`, in leaf order; InvalidBranch when a is not in A_t.
std::vector<Assignment> extending_paths(const LiftingTree& tree, const Assignment& a);
// Variables in pre-order of first occurrence.
std::vector<LiftedVar> binder_order(const LiftingTree& tree);

LiftedVar rename_lifted(const LiftedVar& var, const LiftedVarRenaming& pi);
Assignment rename_lifted(const Assignment& a, const LiftedVarRenaming& pi);
LiftingTree rename_lifted(const LiftingTree& tree, const LiftedVarRenaming& pi);

// An X at every path of a lifting tree; leaves stored in leaf order.
template <class X>
class Lifted {
 public:
  Lifted() : leaves_(1) {}
  explicit Lifted(X value) { leaves_.push_back(std::move(value)); }
  Lifted(LiftingTree tree, std::vector<X> leaves) : tree_(std::move(tree)), leaves_(std::move(leaves)) {
    if (leaves_.size() != tree_.leaf_count()) {
      throw Error(ErrorKind::InvalidArgument, "lifted object needs " + std::to_string(tree_.leaf_count()) +
                                                  " leaves, got " + std::to_string(leaves_.size()));
    }
  }

  static Lifted node(const LiftedVar& var, const Lifted& zero, const Lifted& one) {
    std::vector<X> leaves = zero.leaves_;
    leaves.insert(leaves.end(), one.leaves_.begin(), one.leaves_.end());
    return Lifted(LiftingTree::node(var, zero.tree_, one.tree_), std::move(leaves));
  }

  const LiftingTree& tree() const { return tree_; }
  const std::vector<X>& leaves() const { return leaves_; }
  std::size_t size() const { return leaves_.size(); }
  bool is_leaf() const { return tree_.is_leaf(); }

  const X& leaf() const {
    if (!is_leaf()) throw Error(ErrorKind::InvalidBranch, "expected a leaf, got tree " + tree_.to_string());
    return leaves_.front();
  }

  const X& at(const Assignment& path) const {
    auto index = path_index(tree_, path);
    if (!index) throw Error(ErrorKind::InvalidBranch, path.to_string() + " is not a path of " + tree_.to_string());
    return leaves_[*index];
  }

  std::vector<std::pair<Assignment, X>> entries() const {
    std::vector<std::pair<Assignment, X>> out;
    auto all = paths(tree_);
    for (std::size_t i = 0; i < all.size(); ++i) out.emplace_back(std::move(all[i]), leaves_[i]);
    return out;
  }

  Lifted zero() const { return sub(false); }
  Lifted one() const { return sub(true); }
  Lifted sub(bool bit) const {
    const auto& left = tree_.zero();
    auto begin = leaves_.begin() + (bit ? static_cast<std::ptrdiff_t>(left.leaf_count()) : 0);
    const auto& child = tree_.child(bit);
    return Lifted(child, std::vector<X>(begin, begin + static_cast<std::ptrdiff_t>(child.leaf_count())));
  }

  template <class F>
  auto map(F&& f) const -> Lifted<std::decay_t<decltype(f(std::declval<const X&>()))>> {
    using Y = std::decay_t<decltype(f(std::declval<const X&>()))>;
    std::vector<Y> out;
    out.reserve(leaves_.size());
    for (const auto& x : leaves_) out.push_back(f(x));
    return Lifted<Y>(tree_, std::move(out));
  }

  friend bool operator==(const Lifted&, const Lifted&) = default;

 private:
  LiftingTree tree_;
  std::vector<X> leaves_;
};

template <class X>
using Nested = std::variant<X, Lifted<X>>;

// Overwrites the leaves at the paths in `index` with the family's values.
template <class X>
Lifted<X> compose(const Lifted<X>& xi, const std::map<Assignment, X>& family, const std::set<Assignment>& index) {
  std::vector<X> leaves = xi.leaves();
  for (const auto& a : index) {
    auto position = path_index(xi.tree(), a);
    if (!position) throw Error(ErrorKind::InvalidBranch, a.to_string() + " is not a path of " + xi.tree().to_string());
    auto value = family.find(a);
    if (value == family.end()) throw Error(ErrorKind::InvalidArgument, "family undefined at " + a.to_string());
    leaves[*position] = value->second;
  }
  return Lifted<X>(xi.tree(), std::move(leaves));
}

template <class X>
Lifted<X> compose(const Lifted<X>& xi, const std::map<Assignment, X>& family) {
  std::set<Assignment> index;
  for (const auto& entry : family) index.insert(entry.first);
  return compose(xi, family, index);
}

namespace detail {

[[noreturn]] void throw_flatten_clash(const LiftedVar& var, const Assignment& path);

template <class X>
void flatten_into(const LiftingTree& tree, typename std::vector<Nested<X>>::const_iterator& leaf,
                  std::set<LiftedVar>& seen, const Assignment& path, LiftingTree& out_tree, std::vector<X>& out) {
  if (tree.is_leaf()) {
    const Nested<X>& value = *leaf++;
    if (const X* plain = std::get_if<X>(&value)) {
      out_tree = LiftingTree::leaf();
      out.push_back(*plain);
      return;
    }
    const auto& inner = std::get<Lifted<X>>(value);
    for (const auto& var : inner.tree().vars()) {
      if (seen.contains(var)) throw_flatten_clash(var, path);
    }
    out_tree = inner.tree();
    out.insert(out.end(), inner.leaves().begin(), inner.leaves().end());
    return;
  }
  const LiftedVar& var = tree.var();
  seen.insert(var);
  LiftingTree zero;
  LiftingTree one;
  flatten_into<X>(tree.zero(), leaf, seen, path.with(var, false), zero, out);
  flatten_into<X>(tree.one(), leaf, seen, path.with(var, true), one, out);
  seen.erase(var);
  out_tree = LiftingTree::node(var, std::move(zero), std::move(one));
}

}  // namespace detail

// Unfolds lifted-object leaves into subtrees (accumulator formulation: a leaf
// tree may not reuse a variable already on its path).
template <class X>
Lifted<X> flatten(const Lifted<Nested<X>>& xi) {
  std::vector<X> out;
  LiftingTree tree;
  std::set<LiftedVar> seen;
  auto leaf = xi.leaves().cbegin();
  detail::flatten_into<X>(xi.tree(), leaf, seen, Assignment{}, tree, out);
  return Lifted<X>(std::move(tree), std::move(out));
}

template <class X>
Lifted<X> flatten(const Lifted<Lifted<X>>& xi) {
  return flatten(xi.map([](const Lifted<X>& inner) { return Nested<X>(inner); }));
}

// ξ ⋉_a r: every leaf extending `a` is replaced by a copy of r carrying it.
template <class X>
Lifted<X> graft(const Lifted<X>& xi, const Assignment& a, const LiftingTree& r) {
  if (!in_assignment_set(xi.tree(), a)) {
    throw Error(ErrorKind::InvalidBranch, a.to_string() + " is not an assignment of " + xi.tree().to_string());
  }
  auto all = paths(xi.tree());
  std::vector<Nested<X>> leaves;
  leaves.reserve(all.size());
  for (std::size_t i = 0; i < all.size(); ++i) {
    const X& value = xi.leaves()[i];
    if (all[i].extends(a)) {
      leaves.emplace_back(Lifted<X>(r, std::vector<X>(r.leaf_count(), value)));
    } else {
      leaves.emplace_back(value);
    }
  }
  return flatten(Lifted<Nested<X>>(xi.tree(), std::move(leaves)));
}

LiftingTree graft(const LiftingTree& tree, const Assignment& a, const LiftingTree& r);

template <class X>
Lifted<X> rename_lifted(const Lifted<X>& xi, const LiftedVarRenaming& pi) {
  std::vector<X> leaves;
  leaves.reserve(xi.size());
  for (const auto& x : xi.leaves()) {
    if constexpr (requires { rename_lifted(x, pi); }) {
      leaves.push_back(rename_lifted(x, pi));
    } else {
      leaves.push_back(x);
    }
  }
  return Lifted<X>(rename_lifted(xi.tree(), pi), std::move(leaves));
}

// Renders `<u ? zero | one>` with `show` for the leaves.
template <class X, class F>
std::string lifted_to_string(const Lifted<X>& xi, F&& show) {
  std::string out;
  auto leaf = xi.leaves().begin();
  auto walk = [&](auto&& self, const LiftingTree& tree) -> void {
    if (tree.is_leaf()) {
      out += show(*leaf++);
      return;
    }
    out += "<" + tree.var().name() + " ? ";
    self(self, tree.zero());
    out += " | ";
    self(self, tree.one());
    out += ">";
  };
  walk(walk, xi.tree());
  return out;
}

}  // namespace pqk
