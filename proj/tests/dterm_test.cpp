#include <gtest/gtest.h>

#include "cdt/dterm.hpp"
#include "cdt/error.hpp"
#include "test_support.hpp"

using namespace cdt;

namespace {

TEST(DNotation, RoundTrip) {
  for (const char* s : {"1", "n", "D11", "DD31n", "DDDD1D1D1D1DDDD131n11n1", "D[12]3"}) {
    EXPECT_EQ(print_dnotation(parse_dnotation(s)), s);
  }
  EXPECT_EQ(print_dnotation(parse_dnotation(" D 1 1 ")), "D11");
}

TEST(DNotation, Errors) {
  EXPECT_THROW(parse_dnotation("D1"), ParseError);
  EXPECT_THROW(parse_dnotation("D11x"), ParseError);
  EXPECT_THROW(parse_dnotation("Dx1"), ParseError);
  EXPECT_THROW(parse_dnotation(""), ParseError);
}

TEST(DTerm, SizesAndHeights) {
  const DTerm d = parse_dnotation("DD31n");
  EXPECT_EQ(d.tree_size(), 2u);
  EXPECT_EQ(d.height(), 2u);
  EXPECT_EQ(parse_dnotation("1").height(), 0u);
  EXPECT_EQ(dims(parse_dnotation("DD11D11")), (Dimensions{2, 3, 2}));
}

TEST(DTerm, EqualityAndOrder) {
  EXPECT_EQ(parse_dnotation("DD11n"), parse_dnotation("DD11n"));
  EXPECT_NE(parse_dnotation("DD11n"), parse_dnotation("DD111"));
  EXPECT_TRUE(parse_dnotation("D11") < parse_dnotation("DD111"));
  EXPECT_FALSE(parse_dnotation("D11") < parse_dnotation("D11"));
}

TEST(DTerm, Paths) {
  const DTerm d = parse_dnotation("DD12n");
  EXPECT_EQ(print_dnotation(subterm_at(d, parse_path("1"))), "D12");
  EXPECT_EQ(print_dnotation(subterm_at(d, parse_path("12"))), "2");
  EXPECT_EQ(print_dnotation(replace_at(d, parse_path("2"), DTerm::leaf(3))), "DD123");
  EXPECT_THROW(subterm_at(d, parse_path("21")), Error);
  EXPECT_EQ(print_path(parse_path("121")), "121");
}

TEST(DTerm, WildcardsAndAxioms) {
  const DTerm d = parse_dnotation("DD13n");
  EXPECT_TRUE(has_wildcards(d));
  EXPECT_FALSE(has_wildcards(replace_wildcards(d, 1)));
  EXPECT_EQ(axioms_used(d), (std::vector<AxiomId>{1, 3}));
  EXPECT_EQ(subterms(d).size(), 5u);
}

TEST(Dag, ExpandsBackToInputs) {
  const auto steps = fixtures::expand_steps(fixtures::fig4_steps());
  const DTermDag dag = compact(steps);
  const auto back = dag.expand_roots();
  ASSERT_EQ(back.size(), steps.size());
  for (std::size_t i = 0; i < steps.size(); ++i) EXPECT_EQ(back[i], steps[i]);
}

TEST(Dag, CompactedSizeCountsDistinctInnerNodes) {
  // D(D11, D11): two distinct inner nodes, tree size 3.
  EXPECT_EQ(dims(parse_dnotation("DD11D11")).compacted, 2u);
  const DTerm a = parse_dnotation("D11");
  const DTerm both[] = {a, parse_dnotation("DD111")};
  EXPECT_EQ(dims(both), (Dimensions{2, 3, 2}));
}

}  // namespace
