#include "pqk/lifting.hpp"

#include <algorithm>
#include <cctype>

namespace pqk {

namespace {

struct SplitName {
  std::string_view prefix;
  std::string_view digits;  // without leading zeros
  bool has_suffix = false;
};

SplitName split_name(std::string_view name) {
  std::size_t end = name.size();
  while (end > 0 && std::isdigit(static_cast<unsigned char>(name[end - 1]))) --end;
  SplitName split{name.substr(0, end), name.substr(end), end < name.size()};
  while (split.digits.size() > 1 && split.digits.front() == '0') split.digits.remove_prefix(1);
  return split;
}

std::strong_ordering compare_views(std::string_view a, std::string_view b) {
  int c = a.compare(b);
  return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
}

}  // namespace

std::strong_ordering natural_compare(std::string_view a, std::string_view b) {
  SplitName x = split_name(a);
  SplitName y = split_name(b);
  if (auto c = compare_views(x.prefix, y.prefix); c != 0) return c;
  if (x.has_suffix != y.has_suffix) return x.has_suffix ? std::strong_ordering::greater : std::strong_ordering::less;
  if (x.digits.size() != y.digits.size()) return x.digits.size() <=> y.digits.size();
  if (auto c = compare_views(x.digits, y.digits); c != 0) return c;
  return compare_views(a, b);
}

// Assignment

Assignment::Assignment(std::initializer_list<Binding> bindings)
    : Assignment(std::vector<Binding>(bindings)) {}

Assignment::Assignment(std::vector<Binding> bindings) : bindings_(std::move(bindings)) {
  std::sort(bindings_.begin(), bindings_.end(),
            [](const Binding& a, const Binding& b) { return a.first < b.first; });
  for (std::size_t i = 1; i < bindings_.size(); ++i) {
    if (bindings_[i - 1].first == bindings_[i].first) {
      throw Error(ErrorKind::AssignmentClash, "variable " + bindings_[i].first.name() + " bound twice");
    }
  }
}

std::optional<bool> Assignment::get(const LiftedVar& var) const {
  auto it = std::lower_bound(bindings_.begin(), bindings_.end(), var,
                             [](const Binding& b, const LiftedVar& v) { return b.first < v; });
  if (it == bindings_.end() || !(it->first == var)) return std::nullopt;
  return it->second;
}

std::set<LiftedVar> Assignment::domain() const {
  std::set<LiftedVar> out;
  for (const auto& b : bindings_) out.insert(b.first);
  return out;
}

Assignment Assignment::with(const LiftedVar& var, bool bit) const {
  if (binds(var)) throw Error(ErrorKind::AssignmentClash, "variable " + var.name() + " already bound");
  Assignment out = *this;
  auto it = std::lower_bound(out.bindings_.begin(), out.bindings_.end(), var,
                             [](const Binding& b, const LiftedVar& v) { return b.first < v; });
  out.bindings_.insert(it, {var, bit});
  return out;
}

Assignment Assignment::without(const LiftedVar& var) const {
  Assignment out;
  for (const auto& b : bindings_) {
    if (!(b.first == var)) out.bindings_.push_back(b);
  }
  return out;
}

Assignment Assignment::union_with(const Assignment& other) const {
  std::vector<Binding> all = bindings_;
  all.insert(all.end(), other.bindings_.begin(), other.bindings_.end());
  return Assignment(std::move(all));
}

bool Assignment::extends(const Assignment& other) const {
  return std::all_of(other.bindings_.begin(), other.bindings_.end(),
                     [&](const Binding& b) { return get(b.first) == b.second; });
}

bool Assignment::consistent_with(const Assignment& other) const {
  return std::all_of(other.bindings_.begin(), other.bindings_.end(), [&](const Binding& b) {
    auto mine = get(b.first);
    return !mine || *mine == b.second;
  });
}

std::string Assignment::to_string() const {
  std::string out = "(";
  for (std::size_t i = 0; i < bindings_.size(); ++i) {
    if (i > 0) out += ", ";
    out += bindings_[i].first.name() + (bindings_[i].second ? "=1" : "=0");
  }
  return out + ")";
}

std::strong_ordering operator<=>(const Assignment& a, const Assignment& b) {
  return std::lexicographical_compare_three_way(a.bindings_.begin(), a.bindings_.end(), b.bindings_.begin(),
                                                b.bindings_.end(),
                                                [](const Assignment::Binding& x, const Assignment::Binding& y) {
                                                  if (auto c = x.first <=> y.first; c != 0) return c;
                                                  return x.second <=> y.second;
                                                });
}

// LiftingTree

LiftingTree LiftingTree::node(const LiftedVar& var, LiftingTree zero, LiftingTree one) {
  if (zero.vars().contains(var) || one.vars().contains(var)) {
    throw Error(ErrorKind::VariableClash, "variable " + var.name() + " occurs below its own node");
  }
  auto n = std::make_shared<Node>();
  n->var = var;
  n->vars = zero.vars();
  n->vars.insert(one.vars().begin(), one.vars().end());
  n->vars.insert(var);
  n->leaves = zero.leaf_count() + one.leaf_count();
  n->depth = 1 + std::max(zero.depth(), one.depth());
  n->zero = std::move(zero);
  n->one = std::move(one);
  LiftingTree out;
  out.node_ = std::move(n);
  return out;
}

const LiftedVar& LiftingTree::var() const {
  if (!node_) throw Error(ErrorKind::InvalidArgument, "leaf has no variable");
  return node_->var;
}

const LiftingTree& LiftingTree::zero() const {
  if (!node_) throw Error(ErrorKind::InvalidArgument, "leaf has no children");
  return node_->zero;
}

const LiftingTree& LiftingTree::one() const {
  if (!node_) throw Error(ErrorKind::InvalidArgument, "leaf has no children");
  return node_->one;
}

std::size_t LiftingTree::leaf_count() const { return node_ ? node_->leaves : 1; }
std::size_t LiftingTree::depth() const { return node_ ? node_->depth : 0; }

const std::set<LiftedVar>& LiftingTree::vars() const {
  static const std::set<LiftedVar> none;
  return node_ ? node_->vars : none;
}

std::string LiftingTree::to_string() const {
  if (is_leaf()) return "_";
  return "<" + var().name() + " ? " + zero().to_string() + " | " + one().to_string() + ">";
}

bool operator==(const LiftingTree& a, const LiftingTree& b) {
  if (a.node_ == b.node_) return true;
  if (a.is_leaf() || b.is_leaf()) return false;
  return a.var() == b.var() && a.leaf_count() == b.leaf_count() && a.zero() == b.zero() && a.one() == b.one();
}

std::set<LiftedVar> var_set(const LiftingTree& tree, const Assignment& a) {
  if (tree.is_leaf()) return {};
  if (auto bit = a.get(tree.var())) {
    auto out = var_set(tree.child(*bit), a);
    out.insert(tree.var());
    return out;
  }
  auto out = var_set(tree.zero(), a);
  auto more = var_set(tree.one(), a);
  out.insert(more.begin(), more.end());
  out.insert(tree.var());
  return out;
}

bool in_assignment_set(const LiftingTree& tree, const Assignment& a) {
  if (a.empty()) return true;
  if (tree.is_leaf()) return false;
  if (auto bit = a.get(tree.var())) return in_assignment_set(tree.child(*bit), a.without(tree.var()));
  return in_assignment_set(tree.zero(), a) || in_assignment_set(tree.one(), a);
}

std::set<Assignment> assignment_set(const LiftingTree& tree) {
  if (tree.is_leaf()) return {Assignment{}};
  std::set<Assignment> out;
  for (bool bit : {false, true}) {
    for (const auto& a : assignment_set(tree.child(bit))) {
      out.insert(a);
      out.insert(a.with(tree.var(), bit));
    }
  }
  return out;
}

namespace {

void collect_paths(const LiftingTree& tree, const Assignment& prefix, std::vector<Assignment>& out) {
  if (tree.is_leaf()) {
    out.push_back(prefix);
    return;
  }
  collect_paths(tree.zero(), prefix.with(tree.var(), false), out);
  collect_paths(tree.one(), prefix.with(tree.var(), true), out);
}

}  // namespace

std::vector<Assignment> paths(const LiftingTree& tree) {
  std::vector<Assignment> out;
  out.reserve(tree.leaf_count());
  collect_paths(tree, Assignment{}, out);
  return out;
}

std::set<Assignment> path_set(const LiftingTree& tree) {
  auto all = paths(tree);
  return {all.begin(), all.end()};
}

std::optional<std::size_t> path_index(const LiftingTree& tree, const Assignment& a) {
  std::size_t offset = 0;
  std::size_t used = 0;
  const LiftingTree* here = &tree;
  while (!here->is_leaf()) {
    auto bit = a.get(here->var());
    if (!bit) return std::nullopt;
    ++used;
    if (*bit) offset += here->zero().leaf_count();
    here = &here->child(*bit);
  }
  if (used != a.size()) return std::nullopt;
  return offset;
}

bool is_path(const LiftingTree& tree, const Assignment& a) { return path_index(tree, a).has_value(); }

std::vector<Assignment> extending_paths(const LiftingTree& tree, const Assignment& a) {
  if (!in_assignment_set(tree, a)) {
    throw Error(ErrorKind::InvalidBranch, a.to_string() + " is not an assignment of " + tree.to_string());
  }
  std::vector<Assignment> out;
  for (auto& p : paths(tree)) {
    if (p.extends(a)) out.push_back(std::move(p));
  }
  return out;
}

std::vector<LiftedVar> binder_order(const LiftingTree& tree) {
  std::vector<LiftedVar> out;
  std::set<LiftedVar> seen;
  auto walk = [&](auto&& self, const LiftingTree& t) -> void {
    if (t.is_leaf()) return;
    if (seen.insert(t.var()).second) out.push_back(t.var());
    self(self, t.zero());
    self(self, t.one());
  };
  walk(walk, tree);
  return out;
}

LiftedVar rename_lifted(const LiftedVar& var, const LiftedVarRenaming& pi) { return pi(var); }

Assignment rename_lifted(const Assignment& a, const LiftedVarRenaming& pi) {
  std::vector<Assignment::Binding> out;
  for (const auto& [var, bit] : a.bindings()) out.emplace_back(pi(var), bit);
  return Assignment(std::move(out));
}

LiftingTree rename_lifted(const LiftingTree& tree, const LiftedVarRenaming& pi) {
  if (tree.is_leaf() || pi.is_identity()) return tree;
  return LiftingTree::node(pi(tree.var()), rename_lifted(tree.zero(), pi), rename_lifted(tree.one(), pi));
}

LiftingTree graft(const LiftingTree& tree, const Assignment& a, const LiftingTree& r) {
  Lifted<std::monostate> shape(tree, std::vector<std::monostate>(tree.leaf_count()));
  return graft(shape, a, r).tree();
}

namespace detail {

void throw_flatten_clash(const LiftedVar& var, const Assignment& path) {
  throw Error(ErrorKind::VariableClash, "variable " + var.name() + " reused under path " + path.to_string());
}

}  // namespace detail

}  // namespace pqk
