// Command-line driver: prove, verify, enumerate, compress, inspect, detect.
//
// Exit codes: 0 success, 1 not proved / verification failed / not a CD
// problem, 2 input or usage error, 3 internal error.

#include <CLI11.hpp>

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "cdt/compress.hpp"
#include "cdt/engine.hpp"
#include "cdt/error.hpp"
#include "cdt/kernel.hpp"
#include "cdt/problem_io.hpp"

#ifndef CDT_DATA_DIR
#define CDT_DATA_DIR "data"
#endif

using namespace cdt;

namespace {

enum Exit { kOk = 0, kNo = 1, kInput = 2, kInternal = 3 };

// Reported as exit 2.
struct InputError : Error {
  using Error::Error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << text;
}

std::vector<std::string> split_commas(const std::vector<std::string>& items) {
  std::vector<std::string> out;
  for (const auto& item : items) {
    std::stringstream ss(item);
    std::string part;
    while (std::getline(ss, part, ','))
      if (!part.empty()) out.push_back(part);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Problems and proofs

struct ProblemOptions {
  std::string problem_file;
  std::vector<std::string> axioms;
  std::vector<std::string> goals;
  std::string symbols_file;

  void add_to(CLI::App* cmd, bool positional_problem = false) {
    if (positional_problem)
      cmd->add_option("problem", problem_file, "Clause file with axioms and goal");
    else
      cmd->add_option("--problem", problem_file, "Clause file with axioms and goal");
    cmd->add_option("--axioms", axioms, "Axioms in Polish notation (repeat or separate by commas)");
    cmd->add_option("--goal", goals, "Goal in Polish notation; variables become constants");
    cmd->add_option("--symbols", symbols_file, "Symbol declarations, lines '<Letter> <name> <arity>'");
  }

  bool given() const { return !problem_file.empty() || !axioms.empty(); }
};

struct Problem {
  AxiomBase axioms;
  std::vector<Formula> goals;
};

Problem load_problem(const ProblemOptions& o, SymbolTable& st) {
  if (!o.symbols_file.empty()) st.load_declarations(read_file(o.symbols_file));
  Problem p;
  if (!o.problem_file.empty()) {
    if (!o.axioms.empty()) throw InputError("give either a problem file or --axioms, not both");
    CdProblem cd = read_cd_problem(read_file(o.problem_file), st, std::filesystem::path(o.problem_file).stem().string());
    p.axioms = cd.axioms;
    p.goals.push_back(cd.goal);
  } else {
    p.axioms = AxiomBase::from_polish(split_commas(o.axioms), st);
  }
  for (const auto& g : split_commas(o.goals)) p.goals.push_back(skolemize(parse_polish(g, st), st));
  if (p.axioms.empty()) throw InputError("no axioms given");
  return p;
}

bool looks_like_meredith(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    std::size_t i = b + (line[b] == '*' ? 1 : 0);
    const std::size_t digits = i;
    while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) ++i;
    return i > digits && i < line.size() && line[i] == '.';
  }
  return false;
}

struct ProofItem {
  std::string label;
  DTerm proof;
  std::optional<Formula> stated;  // Meredith goal steps only
};

struct ProofFile {
  std::vector<ProofItem> items;
  std::optional<MeredithProof> meredith;
};

// Meredith files yield their goal steps (all derived steps if none is
// marked); other files hold one D-term per line.
ProofFile load_proofs(const std::string& path, SymbolTable& st) {
  const std::string text = read_file(path);
  ProofFile f;
  if (looks_like_meredith(text)) {
    f.meredith = read_meredith(text, st);
    auto goals = f.meredith->goals();
    if (goals.empty())
      for (const auto& s : f.meredith->steps)
        if (!s.is_axiom()) goals.push_back(&s);
    for (const auto* s : goals) f.items.push_back({"step " + std::to_string(s->number), s->resolved, s->formula});
  } else {
    std::istringstream in(text);
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
      ++n;
      const auto b = line.find_first_not_of(" \t\r");
      if (b == std::string::npos || line[b] == '#') continue;
      try {
        f.items.push_back({"line " + std::to_string(n), parse_dnotation(line), std::nullopt});
      } catch (const ParseError& e) {
        throw ParseError(e.what(), e.position(), n);
      }
    }
  }
  if (f.items.empty()) throw InputError(path + " contains no proof");
  return f;
}

// Maps axiom step numbers of a Meredith file onto the ids of `axioms`.
DTerm rebase(const DTerm& d, const AxiomBase& from, const AxiomBase& to) {
  std::map<AxiomId, AxiomId> ids;
  for (const auto& [id, f] : from.axioms()) {
    for (const auto& [tid, tf] : to.axioms())
      if (kernel::variants(f, tf)) {
        ids.emplace(id, tid);
        break;
      }
  }
  std::function<DTerm(const DTerm&)> go = [&](const DTerm& t) -> DTerm {
    if (t.is_wildcard()) return t;
    if (t.is_leaf()) {
      const auto it = ids.find(t.axiom());
      if (it == ids.end()) throw InputError("axiom " + std::to_string(t.axiom()) + " of the proof is not in the problem");
      return DTerm::leaf(it->second);
    }
    return DTerm::node(go(t.major()), go(t.minor()));
  };
  return go(d);
}

Dimensions closed_dims(const std::vector<DTerm>& ds, AxiomId designated) {
  std::vector<DTerm> closed;
  for (const auto& d : ds) closed.push_back(replace_wildcards(d, designated));
  return dims(closed);
}

// ---------------------------------------------------------------------------
// prove

struct ProveOptions {
  ProblemOptions problem;
  std::string preset = "sgcd-1";
  std::string generator, mode, ordering, format = "dterm", output, stats_file;
  std::optional<std::size_t> lookahead, capacity, max_level, alternates;
  std::optional<double> dim_limit, timeout;
  std::optional<bool> subsumption, residual;
  bool serial = false;
  std::vector<std::string> portfolio;
};

std::pair<SearchConfig, CachePolicy> build_config(const ProveOptions& o, const std::string& preset_name,
                                                  const std::vector<Formula>& goals) {
  const Preset p = preset(preset_name);
  SearchConfig cfg = p.config;
  CachePolicy pol = p.policy;
  if (!o.generator.empty()) cfg.generator = parse_generator_kind(o.generator);
  if (!o.mode.empty()) {
    if (o.mode == "goal")
      cfg.stop_mode = StopMode::GoalDrivenOnly;
    else if (o.mode == "axiom")
      cfg.stop_mode = StopMode::AxiomDrivenOnly;
    else if (o.mode == "blended")
      cfg.stop_mode = StopMode::FirstProof;
    else
      throw ConfigError("unknown mode '" + o.mode + "' (goal, axiom, blended)");
  }
  if (o.alternates) {
    if (cfg.stop_mode != StopMode::FirstProof) throw ConfigError("--alternates needs blended mode");
    cfg.stop_mode = StopMode::EnumerateAlternates;
    cfg.max_alternates = *o.alternates;
  }
  if (o.lookahead) cfg.lookahead = *o.lookahead;
  if (o.max_level) cfg.max_level = *o.max_level;
  if (o.timeout) {
    if (!(*o.timeout > 0)) throw ConfigError("--timeout must be positive");
    cfg.timeout = std::chrono::milliseconds(static_cast<std::int64_t>(std::ceil(*o.timeout * 1000)));
  }
  cfg.parallel = !o.serial;
  cfg.goals = goals;
  if (o.capacity) pol.capacity = *o.capacity == 0 ? std::nullopt : std::optional<std::size_t>(*o.capacity);
  if (o.dim_limit) pol.dim_limit_factor = *o.dim_limit == 0 ? std::nullopt : std::optional<double>(*o.dim_limit);
  if (o.subsumption) pol.subsumption_delete = *o.subsumption;
  if (o.residual) pol.keep_residual = *o.residual;
  if (!o.ordering.empty()) pol.ordering = parse_cache_ordering(o.ordering);
  cfg.validate();
  pol.validate();
  return {cfg, pol};
}

std::string describe(const std::string& preset_name, const SearchConfig& c, const CachePolicy& p) {
  std::ostringstream s;
  s << "# preset=" << preset_name << " generator=" << to_string(c.generator) << " mode=" << to_string(c.stop_mode)
    << " lookahead=" << c.lookahead << " max-level=" << (c.max_level ? std::to_string(*c.max_level) : "none")
    << " timeout-ms=" << (c.timeout ? std::to_string(c.timeout->count()) : "none")
    << " subsumption=" << (p.subsumption_delete ? "on" : "off")
    << " capacity=" << (p.capacity ? std::to_string(*p.capacity) : "none")
    << " dim-limit=" << (p.dim_limit_factor ? std::to_string(*p.dim_limit_factor) : "none")
    << " ordering=" << to_string(p.ordering) << " residual=" << (p.keep_residual ? "on" : "off")
    << " parallel=" << (c.parallel ? "on" : "off");
  return s.str();
}

std::string render_proofs(const std::string& format, const AxiomBase& axioms, const std::vector<DTerm>& proofs,
                          const SymbolTable& st) {
  std::string out;
  if (format == "dterm") {
    for (const auto& d : proofs) out += print_dnotation(d) + "\n";
  } else if (format == "meredith") {
    out = print_meredith(meredith_layout(axioms, proofs), st);
  } else if (format == "grammar" || format == "comb") {
    for (const auto& d : proofs) {
      Grammar g = grammar_compress(d);
      if (format == "grammar") {
        out += print_grammar(g);
        continue;
      }
      CombTerm t = CombTerm::axiom(1);
      try {
        t = to_combinators(g);
      } catch (const Unconvertible& e) {
        std::cerr << "# " << e.what() << "; converting the DAG grammar instead\n";
        t = to_combinators(dag_grammar(d));
      }
      if (!(combinator_reduce(t).normal_form == d)) throw Error("combinator term does not reduce to the proof");
      out += print_comb(t) + "\n";
    }
  } else {
    throw ConfigError("unknown format '" + format + "'");
  }
  return out;
}

int cmd_prove(const ProveOptions& o) {
  SymbolTable st;
  const Problem problem = load_problem(o.problem, st);
  if (problem.goals.empty()) throw InputError("no goal given");
  if (o.format != "dterm" && o.format != "meredith" && o.format != "grammar" && o.format != "comb" &&
      o.format != "stats")
    throw ConfigError("unknown format '" + o.format + "'");

  std::vector<std::string> names = o.portfolio.empty() ? std::vector<std::string>{o.preset} : split_commas(o.portfolio);
  std::vector<std::pair<SearchConfig, CachePolicy>> configs;
  for (const auto& n : names) {
    configs.push_back(build_config(o, n, problem.goals));
    std::cerr << describe(n, configs.back().first, configs.back().second) << "\n";
  }

  std::optional<SearchOutcome> result;
  std::string winner = names.front();
  if (configs.size() == 1) {
    result = search(problem.axioms, configs[0].first, configs[0].second);
  } else {
    // Independent instances; the first to prove every goal cancels the rest.
    std::atomic<bool> cancel{false};
    std::mutex m;
    std::vector<std::optional<SearchOutcome>> outcomes(configs.size());
    std::exception_ptr failure;
    std::vector<std::thread> threads;
    for (std::size_t i = 0; i < configs.size(); ++i) {
      threads.emplace_back([&, i] {
        try {
          SearchConfig cfg = configs[i].first;
          cfg.cancel = &cancel;
          SearchOutcome out = search(problem.axioms, cfg, configs[i].second);
          std::lock_guard lock(m);
          if (out.all_proved() && !cancel.exchange(true)) winner = names[i];
          outcomes[i] = std::move(out);
        } catch (...) {
          std::lock_guard lock(m);
          failure = std::current_exception();
          cancel = true;
        }
      });
    }
    for (auto& t : threads) t.join();
    if (failure) std::rethrow_exception(failure);
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == winner) result = std::move(outcomes[i]);
    std::cerr << "# portfolio winner " << winner << "\n";
  }

  const SearchOutcome& out = *result;
  std::vector<DTerm> proofs;
  for (const auto& g : out.goals) {
    if (g.proved) {
      // Independent re-check before anything is emitted.
      const auto r = kernel::replay(*g.proof, problem.axioms, g.goal, st);
      if (!r.ok) throw Error("replay rejected an engine proof: " + r.message);
      proofs.push_back(*g.proof);
      for (const auto& alt : g.alternates)
        if (!(alt == *g.proof)) proofs.push_back(alt);
      std::cerr << "# proved " << print_polish(g.goal, st) << " level " << g.level << " by " << g.found_by << " in "
                << g.elapsed_seconds << "s\n";
    } else {
      std::cerr << "# not proved " << print_polish(g.goal, st) << ": " << to_string(g.reason) << "\n";
    }
  }

  const std::string stats = out.stats.to_text();
  if (!o.stats_file.empty()) write_file(o.stats_file, stats);
  std::string artifact;
  if (o.format == "stats") {
    std::cout << stats;
  } else if (!proofs.empty()) {
    artifact = render_proofs(o.format, problem.axioms, proofs, st);
    std::cout << artifact;
  }
  if (o.stats_file.empty() && o.format != "stats") std::cerr << stats;
  if (!o.output.empty() && !artifact.empty()) write_file(o.output, artifact);
  return out.all_proved() ? kOk : kNo;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyOptions {
  std::string proof_file;
  ProblemOptions problem;
};

int cmd_verify(const VerifyOptions& o) {
  SymbolTable st;
  ProofFile pf;
  try {
    pf = load_proofs(o.proof_file, st);
  } catch (const MeredithError& e) {
    std::cout << "result\tfail\t" << e.what() << "\n";
    return kNo;
  }
  bool ok = true;
  std::vector<DTerm> checked;
  if (o.problem.given()) {
    const Problem p = load_problem(o.problem, st);
    if (p.goals.empty()) throw InputError("the problem has no goal");
    std::vector<bool> proved(p.goals.size(), false);
    for (const auto& item : pf.items) {
      const DTerm d = pf.meredith ? rebase(item.proof, pf.meredith->axioms, p.axioms) : item.proof;
      checked.push_back(d);
      std::string verdict = "no";
      for (std::size_t g = 0; g < p.goals.size(); ++g) {
        const VerifyReport r = verify(d, p.axioms, p.goals[g]);
        const auto k = kernel::replay(d, p.axioms, p.goals[g], st);
        if (r.passed != k.ok) throw Error("verify and replay disagree on " + item.label);
        if (r.passed) {
          proved[g] = true;
          verdict = "proves " + print_polish(p.goals[g], st);
        }
      }
      std::cout << "proof\t" << item.label << "\t" << to_string(closed_dims({d}, p.axioms.designated())) << "\t"
                << verdict << "\n";
    }
    for (std::size_t g = 0; g < p.goals.size(); ++g)
      if (!proved[g]) {
        ok = false;
        std::cout << "unproved\t" << print_polish(p.goals[g], st) << "\n";
      }
    std::cout << "dims\t" << to_string(closed_dims(checked, p.axioms.designated())) << "\n";
  } else {
    if (!pf.meredith) throw InputError("a D-term file needs a problem (--problem or --axioms and --goal)");
    // Self-check: each goal step proves its own stated formula.
    const AxiomBase& axioms = pf.meredith->axioms;
    for (const auto& item : pf.items) {
      const Formula goal = skolemize(*item.stated, st);
      const VerifyReport r = verify(item.proof, axioms, goal);
      const auto k = kernel::replay(item.proof, axioms, goal, st);
      if (r.passed != k.ok) throw Error("verify and replay disagree on " + item.label);
      ok = ok && r.passed;
      checked.push_back(item.proof);
      std::cout << "proof\t" << item.label << "\t" << to_string(closed_dims({item.proof}, axioms.designated())) << "\t"
                << (r.passed ? "pass" : "fail: " + r.message) << "\n";
    }
    std::cout << "dims\t" << to_string(closed_dims(checked, axioms.designated())) << "\n";
  }
  std::cout << "result\t" << (ok ? "pass" : "fail") << "\n";
  return ok ? kOk : kNo;
}

// ---------------------------------------------------------------------------
// enumerate

struct EnumerateOptions {
  ProblemOptions problem;
  std::string generator = "tree-size";
  std::optional<std::size_t> level, max_level;
};

int cmd_enumerate(const EnumerateOptions& o) {
  SymbolTable st;
  const Problem p = load_problem(o.problem, st);
  const GeneratorKind kind = parse_generator_kind(o.generator);
  if (p.goals.size() > 1) throw InputError("enumerate takes at most one goal");
  if (o.level && o.max_level) throw InputError("give --level or --max-level, not both");
  std::size_t first = 0, last = 0;
  if (o.level) first = last = *o.level;
  else if (o.max_level) last = *o.max_level;
  else throw InputError("--level or --max-level is required");

  auto emit = [&](std::size_t n, const Solution& s) {
    const auto m = mgt(s.proof, p.axioms);
    if (!m || !m->alpha_equivalent(s.lemma)) throw Error("enumerated lemma differs from the MGT");
    std::cout << n << "\t" << print_dnotation(s.proof) << "\t" << print_polish(s.lemma, st) << "\n";
    return true;
  };
  if (!p.goals.empty()) {
    for (std::size_t n = first; n <= last; ++n) {
      Generator gen(kind, p.axioms);
      gen.goal_driven(n, p.goals.front(), [&](const Solution& s) { return emit(n, s); });
    }
    return kOk;
  }
  LevelTable table;
  for (std::size_t n = 0; n <= last; ++n) {
    Generator gen(kind, p.axioms, &table);
    std::vector<Solution> level = gen.level(n);
    if (n >= first)
      for (const auto& s : level) emit(n, s);
    table.push_back(std::move(level));
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// compress / inspect

struct ProofSelect {
  std::string proof_file;
  std::optional<std::size_t> index;

  void add_to(CLI::App* cmd) {
    cmd->add_option("proof", proof_file, "Proof file (Meredith step list or D-terms, one per line)")->required();
    cmd->add_option("--index", index, "Use only the i-th proof of the file (0-based)");
  }

  std::vector<ProofItem> select(const ProofFile& pf) const {
    if (!index) return pf.items;
    if (*index >= pf.items.size()) throw InputError("--index out of range");
    return {pf.items[*index]};
  }
};

struct CompressOptions {
  ProofSelect proof;
  std::string target = "grammar";
};

int cmd_compress(const CompressOptions& o) {
  SymbolTable st;
  const ProofFile pf = load_proofs(o.proof.proof_file, st);
  for (const auto& item : o.proof.select(pf)) {
    const DTerm& d = item.proof;
    const Grammar dag = dag_grammar(d);
    if (o.target == "dag") {
      std::cout << print_grammar(dag);
    } else if (o.target == "grammar") {
      const Grammar g = grammar_compress(d);
      if (!(grammar_expand(g) == d)) throw Error("grammar does not expand to the proof");
      std::cerr << "# " << item.label << " grammar size " << grammar_size(g) << ", DAG baseline " << grammar_size(dag)
                << "\n";
      std::cout << print_grammar(g);
    } else if (o.target == "comb") {
      CombTerm t = CombTerm::axiom(1);
      try {
        t = to_combinators(grammar_compress(d));
      } catch (const Unconvertible& e) {
        std::cerr << "# " << e.what() << "; converting the DAG grammar instead\n";
        t = to_combinators(dag);
      }
      const auto r = combinator_reduce(t);
      if (!(r.normal_form == d)) throw Error("combinator term does not reduce to the proof");
      std::cerr << "# " << item.label << " combinator dims " << to_string(comb_dims(t)) << ", " << r.steps
                << " reduction steps\n";
      std::cout << print_comb(t) << "\n";
    } else {
      throw ConfigError("unknown target '" + o.target + "' (grammar, comb, dag)");
    }
  }
  return kOk;
}

struct InspectOptions {
  ProofSelect proof;
  ProblemOptions problem;
  std::string registry_file;
};

int cmd_inspect(const InspectOptions& o) {
  SymbolTable st;
  const ProofFile pf = load_proofs(o.proof.proof_file, st);
  std::optional<AxiomBase> axioms;
  if (o.problem.given())
    axioms = load_problem(o.problem, st).axioms;
  else if (pf.meredith)
    axioms = pf.meredith->axioms;
  std::optional<Registry> registry;
  std::string reg_path = o.registry_file;
  if (reg_path.empty() && std::filesystem::exists(CDT_DATA_DIR "/registry.tsv")) reg_path = CDT_DATA_DIR "/registry.tsv";
  if (!reg_path.empty()) registry = Registry::load(read_file(reg_path), st);

  const AxiomId designated = axioms ? axioms->designated() : 1;
  const auto items = o.proof.select(pf);
  std::vector<DTerm> all;
  for (const auto& item : items) all.push_back(pf.meredith && o.problem.given() ? rebase(item.proof, pf.meredith->axioms, *axioms) : item.proof);
  std::cout << "dims\t" << to_string(closed_dims(all, designated)) << "\n";
  for (std::size_t i = 0; i < items.size(); ++i) {
    const DTerm& d = all[i];
    std::cout << "proof\t" << items[i].label << "\n";
    std::cout << "  dims\t" << to_string(closed_dims({d}, designated)) << "\n";
    if (!axioms) continue;
    const auto m = mgt(d, *axioms);
    if (!m) {
      std::cout << "  mgt\tnone\n";
      continue;
    }
    std::cout << "  mgt\t" << print_polish(*m, st) << "\n";
    if (registry) {
      const auto names = registry->lookup(*m);
      std::string joined;
      for (const auto& n : names) joined += (joined.empty() ? "" : ",") + n;
      std::cout << "  registry\t" << (joined.empty() ? "-" : joined) << "\n";
    }
    const DTerm simplified = n_simplify(replace_wildcards(d, designated), *axioms);
    if (simplified == replace_wildcards(d, designated))
      std::cout << "  n-simplify\tunchanged\n";
    else
      std::cout << "  n-simplify\t" << to_string(dims(simplified)) << "\t" << print_dnotation(simplified) << "\n";
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// detect

struct DetectOptions {
  std::string file;
  bool canonical = false;
};

int cmd_detect(const DetectOptions& o) {
  SymbolTable st;
  const Detection d = detect_cd_problem(read_file(o.file), st, std::filesystem::path(o.file).stem().string());
  if (!d.problem) {
    std::cout << "not-cd\t" << to_string(d.reason) << "\t" << d.message << "\n";
    return kNo;
  }
  std::cout << "cd\t" << d.problem->name << "\taxioms " << d.problem->axioms.size() << "\tgoal "
            << print_polish(d.problem->goal, st) << "\n";
  if (o.canonical) std::cout << write_cd_problem(*d.problem, st);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Condensed detachment proof search, verification and compression"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read options from a 'key = value' file");

  ProveOptions prove;
  auto* p = app.add_subcommand("prove", "Search for proofs of the goals");
  prove.problem.add_to(p);
  p->add_option("--preset", prove.preset, "Base configuration (sgcd-1, sgcd-height)");
  p->add_option("--portfolio", prove.portfolio, "Run several presets concurrently; first to prove wins");
  p->add_option("--generator", prove.generator, "tree-size, height or psp");
  p->add_option("--mode", prove.mode, "goal, axiom or blended");
  p->add_option("--alternates", prove.alternates, "Collect up to this many proofs per goal");
  p->add_option("--lookahead", prove.lookahead, "Goal-driven levels tried before each axiom-driven level");
  p->add_option("--capacity", prove.capacity, "Cache capacity (0 = unbounded)");
  p->add_option("--dim-limit", prove.dim_limit, "Dimension limit factor (0 = off)");
  p->add_option("--subsumption", prove.subsumption, "Delete subsumed lemmas (true/false)");
  p->add_option("--residual", prove.residual, "Keep deleted lemmas in a residual store (true/false)");
  p->add_option("--ordering", prove.ordering, "height-size or size-height");
  p->add_option("--max-level", prove.max_level, "Highest level to try");
  p->add_option("--timeout", prove.timeout, "Timeout in seconds");
  p->add_option("--format", prove.format, "dterm, meredith, grammar, comb or stats");
  p->add_option("--output", prove.output, "Also write the proofs to this file");
  p->add_option("--stats", prove.stats_file, "Write statistics to this file instead of stderr");
  p->add_flag("--serial", prove.serial, "Use the serial level expansion");

  VerifyOptions verify_opts;
  auto* v = app.add_subcommand("verify", "Check proofs against a problem");
  v->add_option("proof", verify_opts.proof_file, "Proof file")->required();
  verify_opts.problem.add_to(v, true);

  EnumerateOptions en;
  auto* e = app.add_subcommand("enumerate", "List the D-terms of levels with their MGTs");
  en.problem.add_to(e);
  e->add_option("--generator", en.generator, "tree-size, height or psp");
  e->add_option("--level", en.level, "Only this level");
  e->add_option("--max-level", en.max_level, "Levels 0 to this one");

  CompressOptions co;
  auto* c = app.add_subcommand("compress", "Compress a proof to a tree grammar or combinator term");
  co.proof.add_to(c);
  c->add_option("--target", co.target, "grammar, comb or dag");

  InspectOptions in;
  auto* i = app.add_subcommand("inspect", "Report dimensions, MGTs, registry names and n-simplification");
  in.proof.add_to(i);
  in.problem.add_to(i);
  i->add_option("--registry", in.registry_file, "Name registry (name<TAB>formula)");

  DetectOptions de;
  auto* d = app.add_subcommand("detect", "Classify a clause file as CD problem or not");
  d->add_option("file", de.file, "Clause file")->required();
  d->add_flag("--canonical", de.canonical, "Print the canonicalized problem");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? kOk : kInput;
  }

  try {
    if (*p) return cmd_prove(prove);
    if (*v) return cmd_verify(verify_opts);
    if (*e) return cmd_enumerate(en);
    if (*c) return cmd_compress(co);
    if (*i) return cmd_inspect(in);
    if (*d) return cmd_detect(de);
  } catch (const InputError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kInput;
  } catch (const ParseError& err) {
    std::cerr << "parse error: " << err.what() << "\n";
    return kInput;
  } catch (const ConfigError& err) {
    std::cerr << "configuration error: " << err.what() << "\n";
    return kInput;
  } catch (const NotCd& err) {
    std::cerr << "not a CD problem: " << err.what() << "\n";
    return kInput;
  } catch (const GrammarError& err) {
    std::cerr << "grammar error: " << err.what() << "\n";
    return kInput;
  } catch (const MeredithError& err) {
    std::cerr << "proof file error: " << err.what() << "\n";
    return kInput;
  } catch (const UnknownAxiom& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kInput;
  } catch (const std::exception& err) {
    std::cerr << "internal error: " << err.what() << "\n";
    return kInternal;
  }
  return kInput;
}
