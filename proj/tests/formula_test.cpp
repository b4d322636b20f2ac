#include <gtest/gtest.h>

#include "cdt/error.hpp"
#include "cdt/formula.hpp"

using namespace cdt;

namespace {

TEST(Polish, RoundTripsWithFirstOccurrenceNaming) {
  SymbolTable st;
  for (const char* s : {"CpCqp", "CCpqCCqrCpr", "CCNppp", "CpCNpq", "CCCpqrCCrpCsp"}) {
    const Formula f = parse_polish(s, st);
    EXPECT_EQ(print_polish(f, st), s);
  }
  EXPECT_EQ(print_polish(parse_polish("CrCsr", st), st), "CpCqp");
}

TEST(Polish, InfixPrinting) {
  SymbolTable st;
  EXPECT_EQ(print_infix(parse_polish("CpCqp", st), st), "p=>(q=>p)");
  EXPECT_EQ(print_infix(parse_polish("CCpqNr", st), st), "(p=>q)=>not(r)");
}

TEST(Polish, ParseErrorsCarryPosition) {
  SymbolTable st;
  try {
    parse_polish("CpC", st);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 3u);
  }
  EXPECT_THROW(parse_polish("Cpqr", st), ParseError);
  EXPECT_THROW(parse_polish("Xpq", st), ParseError);
  EXPECT_THROW(parse_polish("", st), ParseError);
}

TEST(Polish, DeclaredSymbols) {
  SymbolTable st;
  st.load_declarations("K and 2\nA or 2\n");
  const Formula f = parse_polish("CKpqAqp", st);
  EXPECT_EQ(print_polish(f, st), "CKpqAqp");
  const Formula g = parse_polish("C{and}pqp", st);
  EXPECT_EQ(print_polish(g, st), "CKpqp");
  EXPECT_THROW(st.declare("and", 3), ConfigError);
}

TEST(Formula, MeasureCountsSymbolsAndHeight) {
  SymbolTable st;
  EXPECT_EQ(measure(parse_polish("p", st)).size, 0u);
  EXPECT_EQ(measure(parse_polish("p", st)).height, 0u);
  const auto m = measure(parse_polish("CpCqp", st));
  EXPECT_EQ(m.size, 2u);
  EXPECT_EQ(m.height, 2u);
  EXPECT_EQ(measure(parse_polish("CCNppp", st)).height, 3u);
}

TEST(Formula, NormalizationAndAlphaEquivalence) {
  SymbolTable st;
  const Formula a = parse_polish("CrCsr", st);
  const Formula b = parse_polish("CpCqp", st);
  EXPECT_TRUE(a.alpha_equivalent(b));
  EXPECT_FALSE(a.alpha_equivalent(parse_polish("CpCpp", st)));
  EXPECT_EQ(a.normalized(), b.normalized());
}

TEST(Formula, SubstitutionApplication) {
  SymbolTable st;
  const Formula f = parse_polish("Cpq", st);
  Substitution s;
  // Parsing normalizes names, so "Cqq" is C(v0, v0).
  s.bind(0, parse_polish("Cqq", st));
  EXPECT_EQ(print_polish(f.apply(s), st), "CCppq");
  EXPECT_FALSE(s.idempotent());
  Substitution t;
  t.bind(1, Formula::imp(Formula::var(0), Formula::var(0)));
  EXPECT_TRUE(t.idempotent());
}

TEST(Formula, SkolemizeGroundsVariables) {
  SymbolTable st;
  const Formula g = skolemize(parse_polish("CpCqp", st), st);
  EXPECT_TRUE(g.is_ground());
  EXPECT_EQ(measure(g).size, 5u);  // two implications, three constants
}

TEST(SymbolTable, VariableNames) {
  EXPECT_EQ(SymbolTable::variable_name(0), "p");
  EXPECT_EQ(SymbolTable::variable_name(25), "o");
  EXPECT_EQ(SymbolTable::variable_name(26), "v0");
}

}  // namespace
