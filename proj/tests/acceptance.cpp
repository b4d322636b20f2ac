// Acceptance suite: one PASS/FAIL line per criterion, with the time taken
// against its pinned limit. Exit status is the number of failures.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "cdt/compress.hpp"
#include "cdt/engine.hpp"
#include "cdt/kernel.hpp"
#include "cdt/problem_io.hpp"
#include "cdt/unify.hpp"
#include "test_support.hpp"

using namespace cdt;

namespace {

struct Failed {
  std::string why;
};

void check(bool ok, const std::string& why) {
  if (!ok) throw Failed{why};
}

int failures = 0;
int only = 0;  // run a single criterion if nonzero

// Runs `body`, which returns a detail string or throws Failed. The time limit
// is part of the criterion.
void criterion(int id, const char* name, double limit_seconds, const std::function<std::string()>& body) {
  if (only && id != only) return;
  const auto t0 = std::chrono::steady_clock::now();
  std::string detail;
  bool ok = true;
  try {
    detail = body();
  } catch (const Failed& f) {
    ok = false;
    detail = f.why;
  } catch (const std::exception& e) {
    ok = false;
    detail = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (ok && secs > limit_seconds) {
    ok = false;
    detail += " [over time limit]";
  }
  if (!ok) ++failures;
  std::printf("%s %2d %-28s %9.3fs (limit %gs)  %s\n", ok ? "PASS" : "FAIL", id, name, secs, limit_seconds,
              detail.c_str());
  std::fflush(stdout);
}

std::string dir(const char* base, const char* rel) { return std::string(base) + "/" + rel; }

DTerm step7_closed() {
  SymbolTable st;
  const MeredithProof p = read_meredith(fixtures::read_file(dir(CDT_DATA_DIR, "proofs/fig4.mer")), st);
  return replace_wildcards(p.step(7).resolved, 1);
}

std::uint64_t catalan(std::uint64_t n) {
  std::uint64_t c = 1;
  for (std::uint64_t i = 0; i < n; ++i) c = c * 2 * (2 * i + 1) / (i + 2);
  return c;
}

std::uint64_t ipow(std::uint64_t b, std::uint64_t e) {
  std::uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

std::vector<AxiomId> ids_upto(int k) {
  std::vector<AxiomId> ids;
  for (int i = 1; i <= k; ++i) ids.push_back(i);
  return ids;
}

// Brute force over raw tree-size structures: smallest level with a D-term
// whose MGT subsumes `goal`.
std::optional<std::size_t> oracle_level(const AxiomBase& axioms, const Formula& goal, std::size_t max_level) {
  for (std::size_t n = 0; n <= max_level; ++n) {
    bool found = false;
    enumerate_structures(GeneratorKind::TreeSize, n, axioms.ids(), [&](const DTerm& d) {
      if (found) return;
      const auto m = mgt(d, axioms);
      if (m && subsumes(*m, goal)) found = true;
    });
    if (found) return n;
  }
  return std::nullopt;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) only = std::atoi(argv[1]);
  criterion(1, "mgt-fixture", 0.001, [] {
    SymbolTable st;
    const AxiomBase k = AxiomBase::from_polish({"CpCqp"}, st);
    const DTerm d11 = parse_dnotation("D11");
    const auto t0 = std::chrono::steady_clock::now();
    const auto m = mgt(d11, k);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    check(m.has_value(), "no MGT");
    check(m->alpha_equivalent(parse_polish("CpCqCrq", st)), "got " + print_polish(*m, st));
    check(secs < 0.001, "mgt took " + std::to_string(secs) + "s");
    return "mgt(D11) = " + print_polish(*m, st);
  });

  criterion(2, "fig4-replay", 1.0, [] {
    SymbolTable st;
    const MeredithProof p = read_meredith(fixtures::read_file(dir(CDT_DATA_DIR, "proofs/fig4.mer")), st);
    check(p.steps.size() == 9, "expected 9 steps");
    std::vector<DTerm> goals;
    for (const auto* s : p.goals()) {
      goals.push_back(replace_wildcards(s->resolved, 1));
      check(kernel::replay(s->resolved, p.axioms, skolemize(s->formula, st), st).ok, "replay failed");
    }
    check(goals.size() == 3, "expected goal steps 7, 8, 9");
    const std::string all = to_string(dims(goals)), seven = to_string(dims(goals[0]));
    check(all == "<29,92,22>", "dims of 7-9: " + all);
    check(seven == "<22,64,22>", "dims of 7: " + seven);
    return "all MGTs verified; {7,8,9} " + all + ", 7 " + seven;
  });

  criterion(3, "fig5-grammar", 1.0, [] {
    const Grammar g = parse_grammar(fixtures::read_file(dir(CDT_DATA_DIR, "grammars/fig5.grammar")));
    const DTerm d = step7_closed();
    check(grammar_expand(g) == d, "expansion differs from step 7");
    check(grammar_size(g) == 24, "size " + std::to_string(grammar_size(g)));
    const auto base = grammar_size(dag_grammar(d));
    check(base == 44, "DAG baseline " + std::to_string(base));
    return "expands to step 7, size 24, DAG baseline 44";
  });

  criterion(4, "combinator-rules", 1.0, [] {
    const auto nf = [](const char* s) { return print_dnotation(combinator_reduce(parse_comb(s)).normal_form); };
    check(nf("D(D(I',D(1,2)),D(3,4))") == "DD34D12", "I' rule");
    check(nf("D(D(D(B,D(1,1)),2),D(3,3))") == "DD11D2D33", "B rule");
    check(nf("D(D(D(D(B4,1),D(2,2)),3),D(1,2))") == "D1DD22D3D12", "B4 rule");
    const Grammar g = parse_grammar(fixtures::read_file(dir(CDT_DATA_DIR, "grammars/fig5.grammar")));
    const CombTerm t = to_combinators(g);
    const auto r = combinator_reduce(t);
    check(r.normal_form == step7_closed(), "normal form differs from step 7");
    return "rules hold; normal form = step 7 after " + std::to_string(r.steps) + " steps; dims " +
           to_string(comb_dims(t)) + " (informative)";
  });

  criterion(5, "enumeration-completeness", 30.0, [] {
    std::ostringstream note;
    for (int k = 1; k <= 2; ++k)
      for (std::size_t n = 0; n <= 6; ++n) {
        std::set<DTerm> seen;
        std::uint64_t count = 0;
        enumerate_structures(GeneratorKind::TreeSize, n, ids_upto(k), [&](const DTerm& d) {
          ++count;
          check(d.tree_size() == n, "wrong size");
          check(seen.insert(d).second, "duplicate tree-size structure");
        });
        const std::uint64_t want = catalan(n) * ipow(static_cast<std::uint64_t>(k), n + 1);
        check(count == want && count_raw(n, static_cast<std::uint64_t>(k)) == want,
              "tree-size n=" + std::to_string(n) + " k=" + std::to_string(k) + ": " + std::to_string(count));
      }
    // Raw height level 6 holds ~2e11 structures for one axiom, so raw height
    // levels stop at 5 (k=1) and 4 (k=2).
    for (int k = 1; k <= 2; ++k)
      for (std::size_t n = 0; n <= (k == 1 ? 5u : 4u); ++n) {
        std::set<DTerm> seen;
        enumerate_structures(GeneratorKind::Height, n, ids_upto(k), [&](const DTerm& d) {
          check(d.height() == n, "wrong height");
          check(seen.insert(d).second, "duplicate height structure");
        });
      }
    // PSP levels depend on MGTs, so PSP is checked on generator output below.
    SymbolTable st;
    const AxiomBase ax = AxiomBase::from_polish({"CCpqCCqrCpr", "CCNppp", "CpCNpq"}, st);
    for (auto kind : {GeneratorKind::TreeSize, GeneratorKind::Height, GeneratorKind::Psp}) {
      const std::size_t top = kind == GeneratorKind::Psp ? 4 : kind == GeneratorKind::Height ? 3 : 6;
      LevelTable table;
      for (std::size_t n = 0; n <= top; ++n) {
        Generator g(kind, ax, &table);
        auto level = g.level(n);
        std::set<DTerm> seen;
        for (const auto& s : level) check(seen.insert(s.proof).second, std::string("duplicate in ") + to_string(kind));
        table.push_back(std::move(level));
      }
    }
    note << "counts = Catalan(n)k^(n+1) for n<=6, k<=2; no duplicates (raw tree-size <=6, height <=5/4;"
         << " generator output tree-size <=6, height <=3, PSP <=4)";
    return note.str();
  });

  criterion(6, "mode-coherence", 60.0, [] {
    SymbolTable st;
    const AxiomBase ax = AxiomBase::from_polish({"CpCqp", "Cpp"}, st);
    const std::size_t top = 4;
    // Oracle: raw structures with their MGTs, per level.
    std::vector<std::vector<std::pair<DTerm, Formula>>> raw(top + 1);
    for (std::size_t n = 0; n <= top; ++n)
      enumerate_structures(GeneratorKind::TreeSize, n, ax.ids(), [&](const DTerm& d) {
        if (auto m = mgt(d, ax)) raw[n].emplace_back(d, *m);
      });
    std::set<Formula> goals;
    LevelTable table;
    for (std::size_t n = 0; n <= top; ++n) {
      Generator g(GeneratorKind::TreeSize, ax, &table);
      auto level = g.level(n);
      for (const auto& s : level) goals.insert(skolemize(s.lemma, st));
      table.push_back(std::move(level));
    }
    std::size_t checks = 0;
    for (const Formula& goal : goals)
      for (std::size_t n = 0; n <= top; ++n) {
        std::set<DTerm> want, got;
        for (const auto& [d, m] : raw[n])
          if (subsumes(m, goal)) want.insert(d);
        Generator g(GeneratorKind::TreeSize, ax);
        g.goal_driven(n, goal, [&](const Solution& s) {
          check(got.insert(s.proof).second, "duplicate goal-driven solution");
          return true;
        });
        check(got == want, "goal " + print_polish(goal, st) + " level " + std::to_string(n));
        ++checks;
      }
    return std::to_string(goals.size()) + " goals x " + std::to_string(top + 1) + " levels agree (" +
           std::to_string(checks) + " comparisons)";
  });

  criterion(7, "engine-soundness-search", 600.0, [] {
    SymbolTable st;
    const AxiomBase ax = AxiomBase::from_polish({"CCpqCCqrCpr", "CCNppp", "CpCNpq"}, st);
    const std::vector<std::string> theses = {"Cpp", "CCpqCCNppq", "CpCCqrCNpr", "CCpNqCqCpr", "CpCqCNpr"};
    std::vector<Formula> goals;
    std::vector<std::size_t> oracle;
    for (const auto& t : theses) {
      goals.push_back(skolemize(parse_polish(t, st), st));
      const auto lvl = oracle_level(ax, goals.back(), 6);
      check(lvl.has_value(), "oracle finds no proof of " + t + " up to level 6");
      oracle.push_back(*lvl);
    }
    std::ostringstream note;
    const Preset p = preset("sgcd-1");
    for (std::size_t i = 0; i < goals.size(); ++i) {
      SearchConfig cfg = p.config;
      cfg.goals = {goals[i]};
      cfg.timeout = std::chrono::seconds(60);
      const SearchOutcome out = search(ax, cfg, p.policy);
      const GoalOutcome& g = out.goals.front();
      check(g.proved, "sgcd-1 did not prove " + theses[i]);
      check(g.elapsed_seconds <= 60.0, theses[i] + " took too long");
      check(verify(*g.proof, ax, goals[i]).passed, "verify rejects proof of " + theses[i]);
      const auto r = kernel::replay(*g.proof, ax, goals[i], st);
      check(r.ok, "replay rejects proof of " + theses[i] + ": " + r.message);
      note << theses[i] << "=" << print_dnotation(*g.proof) << " ";
    }
    SearchConfig cfg;
    cfg.generator = GeneratorKind::TreeSize;
    cfg.stop_mode = StopMode::AxiomDrivenOnly;
    cfg.goals = goals;
    cfg.max_level = *std::max_element(oracle.begin(), oracle.end());
    cfg.timeout = std::chrono::seconds(300);
    CachePolicy policy;
    policy.capacity = 3000;
    const SearchOutcome out = search(ax, cfg, policy);
    for (std::size_t i = 0; i < goals.size(); ++i) {
      const GoalOutcome& g = out.goals[i];
      check(g.proved, "axiom-driven mode missed " + theses[i]);
      check(g.level == oracle[i], theses[i] + " found at level " + std::to_string(g.level) + ", oracle " +
                                      std::to_string(oracle[i]));
      check(kernel::replay(*g.proof, ax, goals[i], st).ok, "replay rejects axiom-driven proof of " + theses[i]);
      note << "L" << oracle[i];
    }
    return note.str() + " (oracle levels matched)";
  });

  criterion(8, "cache-policy-neutrality", 60.0, [] {
    SymbolTable st;
    const AxiomBase ax = AxiomBase::from_polish({"CCpqCCqrCpr", "CCNppp", "CpCNpq"}, st);
    SearchConfig cfg;
    cfg.stop_mode = StopMode::AxiomDrivenOnly;
    cfg.max_level = 4;
    const SearchOutcome out = search(ax, cfg, CachePolicy{});
    std::map<std::size_t, std::multiset<Formula>> got, want;
    for (const auto& e : out.cache) got[e.level].insert(e.lemma.normalized());
    for (std::size_t n = 0; n <= 4; ++n)
      enumerate_structures(GeneratorKind::TreeSize, n, ax.ids(), [&](const DTerm& d) {
        if (auto m = mgt(d, ax)) want[n].insert(m->normalized());
      });
    check(got == want, "lemma multisets differ");
    std::string sizes;
    for (const auto& [n, s] : want) sizes += (sizes.empty() ? "" : ",") + std::to_string(s.size());
    return "levels 0-4 equal raw enumeration (" + sizes + ")";
  });

  criterion(9, "n-simplification", 1.0, [] {
    SymbolTable st;
    const AxiomBase k = AxiomBase::from_polish({"CpCqp"}, st);
    const DTerm minor = parse_dnotation("D1D1D1D1D11");
    check(minor.tree_size() == 5, "fixture minor must have size 5");
    const DTerm d = DTerm::node(parse_dnotation("D11"), minor);
    const Formula goal = skolemize(*mgt(d, k), st);
    const DTerm s = n_simplify(d, k);
    check(d.tree_size() - s.tree_size() >= 4, "dropped only " + std::to_string(d.tree_size() - s.tree_size()));
    check(verify(s, k, goal).passed, "simplified proof fails verification");
    check(n_simplify(s, k) == s, "not idempotent");
    return print_dnotation(d) + " -> " + print_dnotation(s);
  });

  criterion(10, "cd-detection", 1.0, [] {
    SymbolTable st;
    const auto reason = [&](const char* f) {
      const Detection d = detect_cd_problem(fixtures::read_file(dir(CDT_FIXTURE_DIR, f)), st);
      check(!d.problem, std::string(f) + " accepted");
      return d.reason;
    };
    check(reason("notcd_disjunction.p") == NotCdReason::DetachmentForm, "disjunction fixture reason");
    check(reason("notcd_nonatomic_goal.p") == NotCdReason::NonAtomicGoal, "non-atomic goal fixture reason");
    check(reason("notcd_two_nonunit.p") == NotCdReason::MultipleNonUnit, "two non-unit fixture reason");
    const CdProblem p = read_cd_problem(fixtures::read_file(dir(CDT_FIXTURE_DIR, "cd_minimal.p")), st);
    const std::string once = write_cd_problem(p, st);
    const std::string twice = write_cd_problem(read_cd_problem(once, st), st);
    check(once == twice, "canonicalization not idempotent");
    return "three rejections with matching reasons; minimal problem accepted, canonical form stable";
  });

  criterion(11, "compression-round-trip", 30.0, [] {
    std::mt19937_64 rng(2024);
    std::function<DTerm(std::uint64_t)> gen = [&](std::uint64_t size) -> DTerm {
      if (size == 0) return DTerm::leaf(std::uniform_int_distribution<int>(1, 3)(rng));
      const auto left = std::uniform_int_distribution<std::uint64_t>(0, size - 1)(rng);
      return DTerm::node(gen(left), gen(size - 1 - left));
    };
    std::uint64_t total = 0, bound = 0;
    for (int i = 0; i < 100; ++i) {
      const DTerm d = gen(std::uniform_int_distribution<std::uint64_t>(0, 50)(rng));
      const Grammar g = grammar_compress(d);
      check(grammar_expand(g) == d, "round trip failed on " + print_dnotation(d));
      check(grammar_size(g) <= 2 * dims(d).compacted, "grammar larger than 2c on " + print_dnotation(d));
      total += grammar_size(g);
      bound += 2 * dims(d).compacted;
    }
    return "100 terms; total grammar size " + std::to_string(total) + " vs 2c total " + std::to_string(bound);
  });

  std::printf("%d criteria failed\n", failures);
  return failures;
}
