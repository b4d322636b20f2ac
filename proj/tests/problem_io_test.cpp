#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "cdt/problem_io.hpp"
#include "test_support.hpp"

using namespace cdt;

namespace {

std::string fig4_text() { return fixtures::read_file(CDT_DATA_DIR "/proofs/fig4.mer"); }
std::string fixture(const char* name) { return fixtures::read_file(std::string(CDT_FIXTURE_DIR "/") + name); }

TEST(Meredith, Fig4Loads) {
  SymbolTable st;
  const MeredithProof p = read_meredith(fig4_text(), st);
  ASSERT_EQ(p.steps.size(), 9u);
  EXPECT_EQ(p.axioms.size(), 1u);
  std::vector<int> goals;
  for (const auto* s : p.goals()) goals.push_back(s->number);
  EXPECT_EQ(goals, (std::vector<int>{7, 8, 9}));
  std::vector<DTerm> ds;
  for (const auto* s : p.goals()) ds.push_back(replace_wildcards(s->resolved, 1));
  EXPECT_EQ(to_string(dims(ds)), "<29,92,22>");
  EXPECT_EQ(to_string(dims(ds[0])), "<22,64,22>");
  EXPECT_EQ(print_dnotation(ds[0]), fixtures::read_file(CDT_DATA_DIR "/proofs/step7.dt").substr(0, 129));
}

TEST(Meredith, RoundTrip) {
  SymbolTable st;
  const MeredithProof p = read_meredith(fig4_text(), st);
  const std::string printed = print_meredith(p, st);
  const MeredithProof q = read_meredith(printed, st);
  EXPECT_EQ(print_meredith(q, st), printed);
  for (std::size_t i = 0; i < p.steps.size(); ++i) EXPECT_EQ(p.steps[i].resolved, q.steps[i].resolved);
}

TEST(Meredith, AxiomOnly) {
  SymbolTable st;
  const MeredithProof p = read_meredith("1. CpCqp\n", st);
  ASSERT_EQ(p.steps.size(), 1u);
  EXPECT_TRUE(p.steps[0].is_axiom());
  EXPECT_TRUE(p.goals().empty());
}

TEST(Meredith, Corruption) {
  SymbolTable st;
  std::string text = fig4_text();
  const auto at = text.find("CCCCpqCrqCqsCtCqs");
  text.replace(at, 17, "CCCCpqCrqCqsCtCqq");
  try {
    read_meredith(text, st);
    FAIL() << "no error";
  } catch (const MeredithError& e) {
    EXPECT_EQ(e.kind(), MeredithError::Kind::MgtMismatch);
    EXPECT_EQ(e.step(), 2);
  }
}

TEST(Meredith, ForwardReferenceAndSyntax) {
  SymbolTable st;
  try {
    read_meredith("1. CpCqp\n2. CpCqCrq = D13\n", st);
    FAIL() << "no error";
  } catch (const MeredithError& e) {
    EXPECT_EQ(e.kind(), MeredithError::Kind::ForwardReference);
  }
  EXPECT_THROW(read_meredith("1 CpCqp\n", st), ParseError);
  EXPECT_THROW(read_meredith("1. CpCqp\n1. Cpp\n", st), MeredithError);
  try {
    read_meredith("1. CpCqp\n2. CpCq\n", st);
    FAIL() << "no error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(Meredith, LayoutCountsCompactedSize) {
  SymbolTable st;
  const MeredithProof p = read_meredith(fig4_text(), st);
  std::vector<DTerm> goals;
  for (const auto* s : p.goals()) goals.push_back(s->resolved);
  const MeredithProof laid = meredith_layout(p.axioms, goals);
  std::uint64_t written = 0;
  for (const auto& s : laid.steps)
    if (s.expression) {
      const std::string e = print_dnotation(*s.expression);
      written += static_cast<std::uint64_t>(std::count(e.begin(), e.end(), 'D'));
    }
  // n leaves stay distinct from axiom 1 here, so compare with the raw DAG.
  EXPECT_EQ(written, compact(goals).inner_count());
  const MeredithProof back = read_meredith(print_meredith(laid, st), st);
  std::vector<DTerm> again;
  for (const auto* s : back.goals()) again.push_back(s->resolved);
  EXPECT_EQ(again, goals);
}

TEST(Detect, MinimalAccepted) {
  SymbolTable st;
  const Detection d = detect_cd_problem(fixture("cd_minimal.p"), st);
  ASSERT_TRUE(d.problem) << d.message;
  EXPECT_EQ(d.problem->axioms.size(), 1u);
  EXPECT_TRUE(d.problem->goal.is_ground());
  EXPECT_EQ(print_polish(d.problem->axioms.at(1), st), "CpCqp");
  EXPECT_EQ(d.problem->implication, "i");
}

TEST(Detect, CanonicalizationIdempotent) {
  SymbolTable st;
  const CdProblem p = read_cd_problem(fixture("cd_minimal.p"), st);
  const std::string once = write_cd_problem(p, st);
  const CdProblem q = read_cd_problem(once, st);
  EXPECT_EQ(write_cd_problem(q, st), once);
  EXPECT_EQ(q.predicate, "P");
  EXPECT_EQ(q.implication, "imp");
  EXPECT_EQ(q.goal, p.goal);
}

TEST(Detect, Rejections) {
  SymbolTable st;
  const auto reason = [&](const char* f) {
    const Detection d = detect_cd_problem(fixture(f), st);
    EXPECT_FALSE(d.problem) << f;
    EXPECT_FALSE(d.message.empty());
    return d.reason;
  };
  EXPECT_EQ(reason("notcd_disjunction.p"), NotCdReason::DetachmentForm);
  EXPECT_EQ(reason("notcd_nonatomic_goal.p"), NotCdReason::NonAtomicGoal);
  EXPECT_EQ(reason("notcd_two_nonunit.p"), NotCdReason::MultipleNonUnit);
  try {
    read_cd_problem(fixture("notcd_two_nonunit.p"), st);
    FAIL();
  } catch (const NotCd& e) {
    EXPECT_EQ(e.reason(), NotCdReason::MultipleNonUnit);
  }
}

TEST(Detect, OtherRejections) {
  SymbolTable st;
  const auto reason = [&](std::string_view text) {
    const Detection d = detect_cd_problem(text, st);
    EXPECT_FALSE(d.problem) << text;
    return d.reason;
  };
  const std::string det = "cnf(d, axiom, ~p(i(X,Y)) | ~p(X) | p(Y)).\n";
  EXPECT_EQ(reason(det + "cnf(a, axiom, p(i(X,X))).\ncnf(g, negated_conjecture, ~p(i(A,A)))."),
            NotCdReason::NonGroundGoal);
  EXPECT_EQ(reason(det + "cnf(a, axiom, p(i(X,X)))."), NotCdReason::Goal);
  EXPECT_EQ(reason(det + "cnf(a, axiom, q(i(X,X))).\ncnf(g, negated_conjecture, ~p(i(a,a)))."),
            NotCdReason::Predicate);
  EXPECT_EQ(reason("cnf(d, axiom, ~p(i(X,Y)) | ~p(Y) | p(X)).\ncnf(a, axiom, p(i(X,X))).\n"
                   "cnf(g, negated_conjecture, ~p(i(a,a)))."),
            NotCdReason::DetachmentForm);
  EXPECT_THROW(detect_cd_problem("cnf(d, axiom, p(X)", st), ParseError);
  EXPECT_THROW(detect_cd_problem("fof(d, axiom, p(X)).", st), ParseError);
}

TEST(Detect, StableUnderReorderingAndRenaming) {
  SymbolTable st;
  const std::string a = "cnf(det, axiom, ~t(i(A,B)) | ~t(A) | t(B)).\n";
  const std::string b = "cnf(ax, axiom, t(i(U,i(V,U)))).\n";
  const std::string c = "cnf(g, negated_conjecture, ~t(i(a,i(b,a)))).\n";
  const std::string canonical = write_cd_problem(read_cd_problem(a + b + c, st), st);
  for (const std::string& text : {b + a + c, c + b + a, b + c + a,
                                  std::string("cnf(det, axiom, t(Q) | ~t(P) | ~t(i(P,Q))).\n") + b + c})
    EXPECT_EQ(write_cd_problem(read_cd_problem(text, st), st), canonical) << text;
}

TEST(Detect, BundledProblems) {
  SymbolTable st;
  for (const char* f : {"luk_single_syl.p", "luk_single_simp.p", "luk3_id.p", "luk3_clavius_variant.p", "minimal.p"}) {
    const Detection d = detect_cd_problem(fixtures::read_file(std::string(CDT_DATA_DIR "/problems/") + f), st);
    EXPECT_TRUE(d.problem) << f << ": " << d.message;
  }
  const CdProblem p = read_cd_problem(fixtures::read_file(CDT_DATA_DIR "/problems/luk3_id.p"), st);
  EXPECT_EQ(print_polish(p.axioms.at(2), st), "CCNppp");
}

TEST(Registry, Lookup) {
  SymbolTable st;
  const Registry r = Registry::load(fixtures::read_file(CDT_DATA_DIR "/registry.tsv"), st);
  EXPECT_EQ(r.lookup(parse_polish("CxCyx", st)), (std::vector<std::string>{"Simp", "K"}));
  EXPECT_TRUE(r.lookup(parse_polish("CCpqCqCqCNpp", st)).empty());
  const Registry again = Registry::load(r.print(st), st);
  EXPECT_EQ(again.print(st), r.print(st));
  EXPECT_THROW(Registry::load("Simp CpCqp\n", st), ParseError);
  EXPECT_THROW(Registry::load("Simp\tCpCq\n", st), ParseError);
}

}  // namespace
