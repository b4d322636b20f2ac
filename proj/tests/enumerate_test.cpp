#include <gtest/gtest.h>

#include <set>
#include <unordered_set>

#include "cdt/enumerate.hpp"
#include "cdt/error.hpp"

using namespace cdt;

namespace {

// K and S: a two-axiom base with plenty of detachable lemmas.
AxiomBase ks_base(SymbolTable& st) { return AxiomBase::from_polish({"CpCqp", "CCpCqrCCpqCpr"}, st); }

// Oracle: all structures of the level, filtered by the DAG-based MGT.
std::vector<Solution> oracle_level(GeneratorKind kind, std::size_t n, const AxiomBase& axioms) {
  std::vector<Solution> out;
  enumerate_structures(kind, n, axioms.ids(), [&](const DTerm& d) {
    if (auto f = mgt(d, axioms)) out.push_back({d, *f});
  });
  return out;
}

std::set<std::string> proof_set(const std::vector<Solution>& sols) {
  std::set<std::string> s;
  for (const auto& x : sols) s.insert(print_dnotation(x.proof));
  return s;
}

TEST(CountRaw, ClosedForm) {
  EXPECT_EQ(count_raw(0, 3), 3u);
  EXPECT_EQ(count_raw(3, 1), 5u);
  EXPECT_EQ(count_raw(4, 2), 448u);
  EXPECT_EQ(count_raw(6, 2), 132u * 128u);
}

TEST(Structures, CountsMatchCatalanAndAreDistinct) {
  for (std::uint64_t k : {1u, 2u}) {
    std::vector<AxiomId> ids;
    for (AxiomId i = 1; i <= static_cast<AxiomId>(k); ++i) ids.push_back(i);
    for (std::size_t n = 0; n <= 6; ++n) {
      std::unordered_set<DTerm> seen;
      std::uint64_t count = 0;
      enumerate_structures(GeneratorKind::TreeSize, n, ids, [&](const DTerm& d) {
        ++count;
        EXPECT_EQ(d.tree_size(), n);
        seen.insert(d);
      });
      EXPECT_EQ(count, count_raw(n, k)) << "n=" << n << " k=" << k;
      EXPECT_EQ(seen.size(), count);
    }
  }
}

TEST(Structures, TreeSizeTwoOverOneAxiom) {
  std::vector<std::string> got;
  enumerate_structures(GeneratorKind::TreeSize, 2, {1}, [&](const DTerm& d) { got.push_back(print_dnotation(d)); });
  EXPECT_EQ(got, (std::vector<std::string>{"DD111", "D1D11"}));
}

TEST(Generator, TreeSizeMatchesOracle) {
  SymbolTable st;
  const AxiomBase axioms = ks_base(st);
  for (std::size_t n = 0; n <= 5; ++n) {
    Generator g(GeneratorKind::TreeSize, axioms);
    const auto sols = g.level(n);
    const auto want = oracle_level(GeneratorKind::TreeSize, n, axioms);
    ASSERT_EQ(sols.size(), want.size()) << "n=" << n;
    for (std::size_t i = 0; i < sols.size(); ++i) {
      // Same order as the structure enumeration, same MGT.
      EXPECT_EQ(sols[i].proof, want[i].proof);
      EXPECT_TRUE(sols[i].lemma.alpha_equivalent(want[i].lemma));
    }
  }
}

TEST(Generator, HeightMatchesOracle) {
  SymbolTable st;
  const AxiomBase axioms = ks_base(st);
  for (std::size_t n = 0; n <= 3; ++n) {
    Generator g(GeneratorKind::Height, axioms);
    const auto sols = g.level(n);
    EXPECT_EQ(proof_set(sols), proof_set(oracle_level(GeneratorKind::Height, n, axioms))) << "n=" << n;
    for (const auto& s : sols) EXPECT_EQ(s.proof.height(), n);
  }
}

TEST(Generator, LevelZeroIsTheAxioms) {
  SymbolTable st;
  const AxiomBase k = AxiomBase::from_polish({"CpCqp"}, st);
  Generator g(GeneratorKind::TreeSize, k);
  const auto sols = g.level(0);
  ASSERT_EQ(sols.size(), 1u);
  EXPECT_EQ(print_dnotation(sols[0].proof), "1");
  EXPECT_EQ(print_polish(sols[0].lemma, st), "CpCqp");
}

TEST(Generator, GoalDrivenFindsD11) {
  SymbolTable st;
  const AxiomBase k = AxiomBase::from_polish({"CpCqp"}, st);
  const Formula goal = skolemize(parse_polish("CpCqCrq", st), st);
  Generator g(GeneratorKind::TreeSize, k);
  std::vector<std::string> found;
  g.goal_driven(1, goal, [&](const Solution& s) {
    found.push_back(print_dnotation(s.proof));
    EXPECT_EQ(print_polish(s.lemma, st), "CpCqCrq");
    return true;
  });
  EXPECT_EQ(found, (std::vector<std::string>{"D11"}));
}

// Goal-driven output equals the axiom-driven output filtered by subsumption.
TEST(Generator, ModeCoherence) {
  SymbolTable st;
  const AxiomBase axioms = ks_base(st);
  for (auto kind : {GeneratorKind::TreeSize, GeneratorKind::Height, GeneratorKind::Psp}) {
    const std::size_t top = kind == GeneratorKind::Height ? 2 : 3;
    Generator all(kind, axioms);
    std::vector<std::vector<Solution>> levels;
    for (std::size_t n = 0; n <= top; ++n) levels.push_back(all.level(n));
    // Goals: ground instances of a few lemmas found along the way.
    std::vector<Formula> goals;
    for (const auto& lv : levels)
      for (std::size_t i = 0; i < lv.size() && i < 3; ++i) goals.push_back(skolemize(lv[i].lemma, st));
    for (const Formula& goal : goals) {
      Generator gd(kind, axioms);
      for (std::size_t n = 0; n <= top; ++n) {
        std::set<std::string> want;
        for (const auto& s : levels[n])
          if (subsumes(s.lemma, goal)) want.insert(print_dnotation(s.proof));
        std::set<std::string> got;
        gd.goal_driven(n, goal, [&](const Solution& s) {
          got.insert(print_dnotation(s.proof));
          return true;
        });
        EXPECT_EQ(got, want) << to_string(kind) << " level " << n;
      }
    }
  }
}

TEST(Generator, CacheIsConsultedNotRecomputed) {
  SymbolTable st;
  const AxiomBase axioms = ks_base(st);
  for (auto kind : {GeneratorKind::TreeSize, GeneratorKind::Height}) {
    const std::size_t top = kind == GeneratorKind::Height ? 3 : 5;
    LevelTable cache;
    Generator plain(kind, axioms);
    for (std::size_t n = 0; n < top; ++n) cache.push_back(plain.level(n));
    Generator cached(kind, axioms, &cache);
    const auto a = cached.level(top);
    const auto b = plain.level(top);
    EXPECT_EQ(proof_set(a), proof_set(b));
    EXPECT_EQ(cached.stats().recomputations, 0u);
    for (std::size_t l = 0; l < top; ++l)
      EXPECT_EQ(l < cached.stats().generated_levels.size() ? cached.stats().generated_levels[l] : 0u, 0u);
    EXPECT_EQ(cached.stats().generated_levels.at(top), 1u);
    // The kernels agree with the generator, element by element.
    const auto serial = expand_level_serial(kind, top, cache);
    const auto parallel = expand_level(kind, top, cache);
    ASSERT_EQ(serial.size(), a.size());
    ASSERT_EQ(parallel.size(), a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      EXPECT_EQ(serial[i].proof, a[i].proof);
      EXPECT_EQ(parallel[i].proof, a[i].proof);
      EXPECT_EQ(serial[i].lemma, a[i].lemma);
      EXPECT_EQ(parallel[i].lemma, a[i].lemma);
    }
  }
}

TEST(Generator, PrunedCacheHidesSolutions) {
  SymbolTable st;
  const AxiomBase k = AxiomBase::from_polish({"CpCqp"}, st);
  LevelTable cache{{}};  // level 0 covered but emptied
  Generator g(GeneratorKind::TreeSize, k, &cache);
  EXPECT_TRUE(g.level(1).empty());
}

TEST(Psp, LevelOneOverOneAxiom) {
  SymbolTable st;
  const AxiomBase k = AxiomBase::from_polish({"CpCqp"}, st);
  Generator g(GeneratorKind::Psp, k);
  const auto sols = g.level(1);
  ASSERT_EQ(sols.size(), 1u);
  EXPECT_EQ(print_dnotation(sols[0].proof), "D11");
}

// Independent PSP oracle over sets of structures.
TEST(Psp, MatchesDefinitionAndHasNoDuplicates) {
  SymbolTable st;
  const AxiomBase axioms = ks_base(st);
  Generator g(GeneratorKind::Psp, axioms);
  std::set<std::string> earlier;
  std::vector<DTerm> prev;
  for (AxiomId id : axioms.ids()) prev.push_back(DTerm::leaf(id));
  for (const auto& d : prev) earlier.insert(print_dnotation(d));
  EXPECT_EQ(proof_set(g.level(0)), earlier);
  for (std::size_t n = 1; n <= 4; ++n) {
    std::set<std::string> want;
    std::vector<DTerm> next;
    for (const DTerm& d1 : prev) {
      std::vector<DTerm> partners = subterms(d1);
      for (AxiomId id : axioms.ids()) partners.push_back(DTerm::leaf(id));
      for (const DTerm& d2 : partners)
        for (const DTerm& d : {DTerm::node(d1, d2), DTerm::node(d2, d1)}) {
          const std::string key = print_dnotation(d);
          if (earlier.contains(key) || want.contains(key) || !mgt(d, axioms)) continue;
          want.insert(key);
          next.push_back(d);
        }
    }
    const auto sols = g.level(n);
    EXPECT_EQ(proof_set(sols), want) << "level " << n;
    EXPECT_EQ(proof_set(sols).size(), sols.size()) << "duplicates at level " << n;
    earlier.insert(want.begin(), want.end());
    prev = next;
  }
}

TEST(Generator, InterruptStopsEnumeration) {
  SymbolTable st;
  const AxiomBase axioms = ks_base(st);
  Generator g(GeneratorKind::TreeSize, axioms);
  g.set_interrupt({std::chrono::steady_clock::now() - std::chrono::seconds(1), nullptr});
  std::size_t count = 0;
  const bool done = g.axiom_driven(7, [&](const Solution&) {
    ++count;
    return true;
  });
  EXPECT_FALSE(done);
  EXPECT_TRUE(g.interrupted());
}

TEST(ExpandLevel, RequiresCoveringCache) {
  LevelTable cache;
  EXPECT_THROW(expand_level(GeneratorKind::TreeSize, 2, cache), Error);
}

}  // namespace
