#include <gtest/gtest.h>

#include "cdt/error.hpp"
#include "cdt/kernel.hpp"
#include "cdt/mgt.hpp"
#include "test_support.hpp"

using namespace cdt;

namespace {

struct Fig4 : ::testing::Test {
  SymbolTable st;
  fixtures::StepList steps = fixtures::fig4_steps();
  AxiomBase axioms = AxiomBase::from_polish({steps.steps[0].formula}, st);
  std::vector<DTerm> expanded = fixtures::expand_steps(steps);
};

TEST_F(Fig4, EveryStepHasTheListedMgt) {
  for (std::size_t i = 0; i < steps.steps.size(); ++i) {
    const auto f = mgt(expanded[i], axioms);
    ASSERT_TRUE(f) << "step " << i + 1;
    EXPECT_EQ(print_polish(*f, st), steps.steps[i].formula) << "step " << i + 1;
  }
}

TEST_F(Fig4, GoalDimensions) {
  std::vector<DTerm> goals;
  for (std::size_t i = 6; i < 9; ++i) goals.push_back(replace_wildcards(expanded[i], 1));
  EXPECT_EQ(to_string(dims(goals)), "<29,92,22>");
  EXPECT_EQ(to_string(dims(goals[0])), "<22,64,22>");
}

TEST_F(Fig4, KernelAgrees) {
  for (std::size_t i = 0; i < steps.steps.size(); ++i) {
    const Formula goal = skolemize(parse_polish(steps.steps[i].formula, st), st);
    const auto r = kernel::replay(expanded[i], axioms, goal, st);
    EXPECT_TRUE(r.ok) << r.message;
    EXPECT_TRUE(verify(expanded[i], axioms, goal).passed);
  }
}

TEST(Mgt, SimpleFixture) {
  SymbolTable st;
  const AxiomBase k = AxiomBase::from_polish({"CpCqp"}, st);
  const DTerm d = parse_dnotation("D11");
  const auto f = mgt(d, k);
  ASSERT_TRUE(f);
  EXPECT_EQ(print_polish(*f, st), "CpCqCrq");
  EXPECT_TRUE(verify(d, k, parse_polish("CpCCqrCpCqr", st)).passed);
  EXPECT_FALSE(verify(d, k, parse_polish("CpCqp", st)).passed);
  EXPECT_TRUE(verify(d, k, parse_polish("CpCqCrq", st)).passed);
}

TEST(Mgt, FailureAndUnknownAxiom) {
  SymbolTable st;
  const AxiomBase b = AxiomBase::from_polish({"p"}, st);
  const AxiomBase c = AxiomBase::from_polish({"Np"}, st);
  const auto out = mgt_detailed(parse_dnotation("D11"), c);
  EXPECT_FALSE(out.conclusion);
  EXPECT_EQ(out.failure, UnifyFailure::Clash);
  EXPECT_THROW(mgt(parse_dnotation("D12"), b), UnknownAxiom);
}

TEST(Mgt, WildcardIsUnconstrained) {
  SymbolTable st;
  const AxiomBase k = AxiomBase::from_polish({"CpCqp"}, st);
  EXPECT_EQ(print_polish(*mgt(parse_dnotation("D1n"), k), st), "Cpq");
}

TEST(Ipt, InPlaceTheoremsAreInstancesOfMgts) {
  SymbolTable st;
  const auto steps = fixtures::fig4_steps();
  const AxiomBase axioms = AxiomBase::from_polish({steps.steps[0].formula}, st);
  const DTerm d = fixtures::expand_steps(steps)[4];  // step 5
  const auto nodes = solve_proof(d, axioms);
  ASSERT_FALSE(nodes.empty());
  for (const auto& node : nodes) {
    const DTerm& sub = subterm_at(d, node.path);
    const auto general = mgt(sub, axioms);
    ASSERT_TRUE(general);
    EXPECT_TRUE(subsumes(*general, node.formula)) << print_path(node.path);
    const auto single = ipt(d, node.path, axioms);
    ASSERT_TRUE(single);
    EXPECT_TRUE(single->alpha_equivalent(node.formula));
  }
  // The root's in-place theorem is the MGT itself.
  EXPECT_TRUE(ipt(d, {}, axioms)->alpha_equivalent(*mgt(d, axioms)));
}

// D(D(1,1), s) over K: the antecedent of CpCqCrq is free, so the minor
// subproof s is irrelevant whatever it is.
TEST(NSimplify, DropsIrrelevantMinor) {
  SymbolTable st;
  const AxiomBase k = AxiomBase::from_polish({"CpCqp"}, st);
  const DTerm s = parse_dnotation("D1D1D1D1D11");
  ASSERT_EQ(s.tree_size(), 5u);
  const DTerm d = DTerm::node(parse_dnotation("D11"), s);
  EXPECT_TRUE(minor_is_irrelevant(d, parse_path("2"), k));
  EXPECT_FALSE(minor_is_irrelevant(d, parse_path("12"), k));
  const DTerm simple = n_simplify(d, k);
  EXPECT_EQ(print_dnotation(simple), "DD111");
  EXPECT_GE(d.tree_size() - simple.tree_size(), 4u);
  const Formula goal = skolemize(*mgt(d, k), st);
  EXPECT_TRUE(verify(simple, k, goal).passed);
  EXPECT_TRUE(mgt(simple, k)->alpha_equivalent(*mgt(d, k)));
  EXPECT_EQ(n_simplify(simple, k), simple);
}

TEST(NSimplify, KeepsRelevantMinors) {
  SymbolTable st;
  const auto steps = fixtures::fig4_steps();
  const AxiomBase axioms = AxiomBase::from_polish({steps.steps[0].formula}, st);
  const auto expanded = fixtures::expand_steps(steps);
  for (const DTerm& d : expanded) {
    const DTerm closed = replace_wildcards(d, 1);
    const DTerm simple = n_simplify(closed, axioms);
    EXPECT_LE(simple.tree_size(), closed.tree_size());
    EXPECT_TRUE(mgt(simple, axioms)->alpha_equivalent(*mgt(closed, axioms)));
    EXPECT_EQ(n_simplify(simple, axioms), simple);
  }
  const AxiomBase bad = AxiomBase::from_polish({"Np"}, st);
  EXPECT_THROW(n_simplify(parse_dnotation("D11"), bad), Error);
}

}  // namespace
