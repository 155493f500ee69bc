#include <algorithm>
#include <random>
#include <set>
#include <string>

#include <gtest/gtest.h>

#include "pqk/crl.hpp"
#include "pqk/lifting.hpp"
#include "pqk/parser.hpp"

namespace pqk {
namespace {

LiftedVar var(const char* name) { return LiftedVar(name); }

Assignment assign(std::initializer_list<std::pair<const char*, int>> bindings) {
  std::vector<Assignment::Binding> out;
  for (const auto& [name, bit] : bindings) out.emplace_back(LiftedVar(name), bit == 1);
  return Assignment(std::move(out));
}

std::set<LiftedVar> vars(std::initializer_list<const char*> names) {
  std::set<LiftedVar> out;
  for (const char* n : names) out.insert(LiftedVar(n));
  return out;
}

ErrorKind kind_of(const auto& thunk) {
  try {
    thunk();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an error";
  return ErrorKind::InvalidArgument;
}

// Random well-formed tree over a small pool, at most `depth` deep.
LiftingTree random_tree(std::mt19937_64& rng, std::size_t depth, std::set<std::string> used = {}) {
  static const std::vector<std::string> pool{"u", "v", "w", "s", "t", "r", "u1", "u2"};
  std::bernoulli_distribution stop(0.3);
  if (depth == 0 || stop(rng)) return LiftingTree::leaf();
  std::vector<std::string> free;
  for (const auto& n : pool) {
    if (!used.contains(n)) free.push_back(n);
  }
  if (free.empty()) return LiftingTree::leaf();
  std::string name = free[std::uniform_int_distribution<std::size_t>(0, free.size() - 1)(rng)];
  used.insert(name);
  // Siblings may reuse each other's variables.
  auto zero = random_tree(rng, depth - 1, used);
  auto one = random_tree(rng, depth - 1, used);
  return LiftingTree::node(LiftedVar(name), zero, one);
}

const LiftingTree kExample = parse_tree("<u ? <s ? _ | _> | _>");

TEST(LiftedVar, NaturalOrderComparesNumericSuffixes) {
  EXPECT_LT(var("u2"), var("u10"));
  EXPECT_LT(var("s"), var("u"));
  EXPECT_LT(var("u"), var("u0"));
}

TEST(Assignment, BindsEachVariableOnce) {
  EXPECT_EQ(kind_of([] { return assign({{"u", 0}, {"u", 1}}); }), ErrorKind::AssignmentClash);
  EXPECT_EQ(kind_of([] { return assign({{"u", 0}}).union_with(assign({{"u", 0}})); }), ErrorKind::AssignmentClash);
  EXPECT_EQ(assign({{"u", 0}}).union_with(assign({{"s", 1}})), assign({{"s", 1}, {"u", 0}}));
}

TEST(LiftingTree, RejectsRepeatedVariableOnAPath) {
  EXPECT_EQ(kind_of([] {
              auto leaf = LiftingTree::leaf();
              return LiftingTree::node(LiftedVar("u"), LiftingTree::node(LiftedVar("u"), leaf, leaf), leaf);
            }), ErrorKind::VariableClash);
  EXPECT_NO_THROW(parse_tree("<u ? <s ? _ | _> | <s ? _ | _>>"));
}

TEST(VarSet, Examples) {
  EXPECT_TRUE(var_set(LiftingTree::leaf(), assign({{"u", 1}})).empty());
  EXPECT_EQ(var_set(kExample, {}), vars({"u", "s"}));
  EXPECT_EQ(var_set(kExample, assign({{"u", 1}})), vars({"u"}));
  EXPECT_EQ(var_set(kExample, assign({{"u", 0}})), vars({"u", "s"}));
}

TEST(AssignmentSet, Examples) {
  EXPECT_EQ(assignment_set(LiftingTree::leaf()), std::set<Assignment>{Assignment{}});
  EXPECT_EQ(assignment_set(parse_tree("<u ? _ | _>")),
            (std::set<Assignment>{Assignment{}, assign({{"u", 0}}), assign({{"u", 1}})}));
  std::set<Assignment> expected{Assignment{},           assign({{"u", 0}}), assign({{"u", 1}}),
                                assign({{"s", 0}}),     assign({{"s", 1}}), assign({{"u", 0}, {"s", 0}}),
                                assign({{"u", 0}, {"s", 1}})};
  EXPECT_EQ(assignment_set(kExample), expected);
}

TEST(PathSet, Examples) {
  EXPECT_EQ(path_set(LiftingTree::leaf()), std::set<Assignment>{Assignment{}});
  EXPECT_EQ(path_set(parse_tree("<u ? _ | _>")), (std::set<Assignment>{assign({{"u", 0}}), assign({{"u", 1}})}));
  EXPECT_EQ(path_set(kExample),
            (std::set<Assignment>{assign({{"u", 0}, {"s", 0}}), assign({{"u", 0}, {"s", 1}}), assign({{"u", 1}})}));
}

TEST(ExtendingPaths, Examples) {
  auto from_u0 = extending_paths(kExample, assign({{"u", 0}}));
  EXPECT_EQ(std::set<Assignment>(from_u0.begin(), from_u0.end()),
            (std::set<Assignment>{assign({{"u", 0}, {"s", 0}}), assign({{"u", 0}, {"s", 1}})}));
  auto all = extending_paths(kExample, {});
  EXPECT_EQ(std::set<Assignment>(all.begin(), all.end()), path_set(kExample));
  EXPECT_EQ(extending_paths(parse_tree("<u ? _ | _>"), assign({{"u", 1}})), std::vector<Assignment>{assign({{"u", 1}})});
  EXPECT_EQ(kind_of([] { return extending_paths(kExample, assign({{"u", 1}, {"s", 0}})); }), ErrorKind::InvalidBranch);
}

TEST(Compose, OverwritesOnlyIndexedPaths) {
  LabelContext q0{{Label("q0"), WireType::Qubit}};
  LabelContext c0{{Label("c0"), WireType::Bit}};
  LabelContext c1{{Label("c1"), WireType::Bit}};
  LabelContext c2{{Label("c2"), WireType::Bit}};
  Lifted<LabelContext> delta(kExample, {q0, c1, c2});
  auto composed = compose(delta, {{assign({{"u", 0}, {"s", 0}}), c0}});
  EXPECT_EQ(composed, Lifted<LabelContext>(kExample, {c0, c1, c2}));
  EXPECT_EQ(compose(delta, {}, {}), delta);
  EXPECT_EQ(kind_of([&] { return compose(delta, {{assign({{"u", 0}}), c0}}); }), ErrorKind::InvalidBranch);
}

TEST(Flatten, UnfoldsLiftedLeaves) {
  using Leaf = Nested<std::string>;
  auto inner_s = Lifted<std::string>(parse_tree("<s ? _ | _>"), {"c2", "c3"});
  Lifted<Leaf> nested(parse_tree("<u ? <s ? _ | _> | _>"), {Leaf("c0"), Leaf("c1"), Leaf(inner_s)});
  auto flat = flatten(nested);
  EXPECT_EQ(flat.tree(), parse_tree("<u ? <s ? _ | _> | <s ? _ | _>>"));
  EXPECT_EQ(flat.leaves(), (std::vector<std::string>{"c0", "c1", "c2", "c3"}));
}

TEST(Flatten, PlainLeavesAreUnchanged) {
  using Leaf = Nested<int>;
  Lifted<Leaf> nested(kExample, {Leaf(1), Leaf(2), Leaf(3)});
  EXPECT_EQ(flatten(nested), Lifted<int>(kExample, {1, 2, 3}));
}

TEST(Flatten, RejectsVariableReusedOnItsPath) {
  using Leaf = Nested<int>;
  Lifted<Leaf> nested(parse_tree("<u ? _ | _>"), {Leaf(Lifted<int>(parse_tree("<u ? _ | _>"), {1, 2})), Leaf(3)});
  EXPECT_EQ(kind_of([&] { return flatten(nested); }), ErrorKind::VariableClash);
}

TEST(Graft, Examples) {
  auto r = parse_tree("<s ? _ | _>");
  EXPECT_EQ(graft(LiftingTree::leaf(), {}, r), r);
  EXPECT_EQ(graft(kExample, assign({{"u", 1}}), LiftingTree::leaf()), kExample);
  EXPECT_EQ(graft(parse_tree("<u ? _ | _>"), assign({{"u", 1}}), r), parse_tree("<u ? _ | <s ? _ | _>>"));
  EXPECT_EQ(graft(parse_tree("<u ? _ | _>"), {}, r), parse_tree("<u ? <s ? _ | _> | <s ? _ | _>>"));
}

TEST(Graft, CopiesTheOverwrittenValue) {
  Lifted<int> xi(parse_tree("<u ? _ | _>"), {4, 7});
  auto grafted = graft(xi, assign({{"u", 1}}), parse_tree("<s ? _ | _>"));
  EXPECT_EQ(grafted.leaves(), (std::vector<int>{4, 7, 7}));
}

TEST(RenameLifted, Examples) {
  auto pi = LiftedVarRenaming::from_pairs({{var("u"), var("s")}});
  EXPECT_EQ(rename_lifted(parse_tree("<u ? _ | _>"), pi), parse_tree("<s ? _ | _>"));
  EXPECT_EQ(rename_lifted(kExample, LiftedVarRenaming{}), kExample);
  EXPECT_EQ(rename_lifted(assign({{"u", 1}}), pi), assign({{"s", 1}}));
}

class LiftingProperties : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(LiftingProperties, PathSetIsTheMaximalAssignments) {
  std::mt19937_64 rng(GetParam());
  auto t = random_tree(rng, 4);
  auto all = assignment_set(t);
  auto maximal = path_set(t);
  for (const auto& p : maximal) EXPECT_TRUE(all.contains(p));
  for (const auto& a : all) {
    bool is_max = std::none_of(all.begin(), all.end(), [&](const Assignment& b) { return b != a && b.extends(a); });
    EXPECT_EQ(is_max, maximal.contains(a)) << a.to_string() << " in " << t.to_string();
  }
  EXPECT_EQ(maximal.size(), t.leaf_count());
  for (const auto& p : maximal) EXPECT_EQ(p.domain(), var_set(t, p));
}

TEST_P(LiftingProperties, ComposeReadBack) {
  std::mt19937_64 rng(GetParam());
  auto t = random_tree(rng, 4);
  auto all = paths(t);
  std::vector<int> leaves(all.size());
  for (std::size_t i = 0; i < leaves.size(); ++i) leaves[i] = static_cast<int>(i);
  Lifted<int> xi(t, leaves);
  std::map<Assignment, int> family;
  std::set<Assignment> index;
  std::bernoulli_distribution pick(0.5);
  for (const auto& p : all) {
    family[p] = 100 + static_cast<int>(family.size());
    if (pick(rng)) index.insert(p);
  }
  auto out = compose(xi, family, index);
  for (const auto& p : all) EXPECT_EQ(out.at(p), index.contains(p) ? family.at(p) : xi.at(p));
}

TEST_P(LiftingProperties, RenamingRoundTripsAndCommutesWithVarSet) {
  std::mt19937_64 rng(GetParam());
  auto t = random_tree(rng, 4);
  auto pi = LiftedVarRenaming::from_pairs({{var("u"), var("x9")}, {var("s"), var("u")}, {var("v"), var("s")}});
  EXPECT_EQ(rename_lifted(rename_lifted(t, pi), pi.inverse()), t);
  for (const auto& a : assignment_set(t)) {
    std::set<LiftedVar> image;
    for (const auto& v : var_set(t, a)) image.insert(pi(v));
    EXPECT_EQ(var_set(rename_lifted(t, pi), rename_lifted(a, pi)), image);
  }
}

INSTANTIATE_TEST_SUITE_P(RandomTrees, LiftingProperties, ::testing::Range<std::uint64_t>(0, 50));

}  // namespace
}  // namespace pqk
