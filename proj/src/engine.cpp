#include "cdt/engine.hpp"

#include <algorithm>
#include <sstream>

#include "cdt/error.hpp"

namespace cdt {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::size_t distinct_vars(const Formula& f) { return f.variables().size(); }

}  // namespace

const char* to_string(CacheOrdering o) { return o == CacheOrdering::HeightSize ? "height-size" : "size-height"; }

CacheOrdering parse_cache_ordering(std::string_view text) {
  if (text == "height-size") return CacheOrdering::HeightSize;
  if (text == "size-height") return CacheOrdering::SizeHeight;
  throw ConfigError("unknown cache ordering '" + std::string(text) + "' (expected height-size or size-height)");
}

void CachePolicy::validate() const {
  if (capacity && *capacity < 1) throw ConfigError("cache capacity must be at least 1");
  if (dim_limit_factor && !(*dim_limit_factor > 0)) throw ConfigError("dimension limit factor must be positive");
}

bool DimensionLimit::admits(const Formula& f) const {
  const auto m = measure(f);
  return static_cast<std::uint64_t>(m.size) <= max_size && static_cast<std::uint64_t>(m.height) <= max_height;
}

std::optional<DimensionLimit> DimensionLimit::from(const CachePolicy& policy, const AxiomBase& axioms,
                                                   const std::vector<Formula>& goals) {
  if (!policy.dim_limit_factor) return std::nullopt;
  std::uint64_t size = 0, height = 0;
  auto take = [&](const Formula& f) {
    const auto m = measure(f);
    size = std::max<std::uint64_t>(size, m.size);
    height = std::max<std::uint64_t>(height, m.height);
  };
  for (const auto& [id, f] : axioms.axioms()) take(f);
  for (const auto& g : goals) take(g);
  const double k = *policy.dim_limit_factor;
  return DimensionLimit{static_cast<std::uint64_t>(k * static_cast<double>(size)),
                        static_cast<std::uint64_t>(k * static_cast<double>(height))};
}

bool cache_before(const CacheEntry& a, const CacheEntry& b, CacheOrdering ordering) {
  const auto ma = measure(a.lemma);
  const auto mb = measure(b.lemma);
  const auto ka = ordering == CacheOrdering::HeightSize ? std::pair(ma.height, ma.size) : std::pair(ma.size, ma.height);
  const auto kb = ordering == CacheOrdering::HeightSize ? std::pair(mb.height, mb.size) : std::pair(mb.size, mb.height);
  if (ka != kb) return ka < kb;
  const auto va = distinct_vars(a.lemma), vb = distinct_vars(b.lemma);
  if (va != vb) return va > vb;
  if (a.age != b.age) return a.age < b.age;
  return a.lemma < b.lemma;
}

CacheUpdate cache_update(std::vector<CacheEntry>& cache, std::vector<CacheEntry> fresh, const CachePolicy& policy,
                         const std::optional<DimensionLimit>& limit) {
  CacheUpdate out;
  struct Candidate {
    CacheEntry entry;
    FormulaMeasure m;
    std::size_t vars;
    bool old;
  };
  std::vector<Candidate> all;
  all.reserve(cache.size() + fresh.size());
  auto add = [&](CacheEntry&& e, bool old) {
    const auto m = measure(e.lemma);
    const auto v = distinct_vars(e.lemma);
    all.push_back({std::move(e), m, v, old});
  };
  for (auto& e : cache) add(std::move(e), true);
  for (auto& e : fresh) {
    if (limit && !limit->admits(e.lemma)) {
      out.dimension.push_back(std::move(e));
      continue;
    }
    add(std::move(e), false);
  }
  cache.clear();
  const bool by_height = policy.ordering == CacheOrdering::HeightSize;
  std::sort(all.begin(), all.end(), [&](const Candidate& a, const Candidate& b) {
    const auto ka = by_height ? std::pair(a.m.height, a.m.size) : std::pair(a.m.size, a.m.height);
    const auto kb = by_height ? std::pair(b.m.height, b.m.size) : std::pair(b.m.size, b.m.height);
    if (ka != kb) return ka < kb;
    if (a.vars != b.vars) return a.vars > b.vars;
    if (a.entry.age != b.entry.age) return a.entry.age < b.entry.age;
    return a.entry.lemma < b.entry.lemma;
  });
  // Walking in this order, every strict subsumer of an entry and every
  // earlier variant of it has already been seen.
  std::vector<const Candidate*> kept;
  std::size_t index = 0;
  for (; index < all.size(); ++index) {
    if (policy.capacity && kept.size() >= *policy.capacity) break;
    const Candidate& c = all[index];
    if (!c.old && policy.subsumption_delete) {
      bool subsumed = false;
      for (const Candidate* k : kept) {
        if (k->m.size > c.m.size || k->m.height > c.m.height) continue;
        if (subsumes(k->entry.lemma, c.entry.lemma)) {
          subsumed = true;
          break;
        }
      }
      if (subsumed) {
        out.subsumed.push_back(c.entry);
        continue;
      }
    }
    kept.push_back(&c);
  }
  for (; index < all.size(); ++index) out.capacity.push_back(std::move(all[index].entry));
  for (const Candidate* k : kept) cache.push_back(k->entry);
  std::sort(cache.begin(), cache.end(), [](const CacheEntry& a, const CacheEntry& b) {
    return std::tie(a.level, a.age) < std::tie(b.level, b.age);
  });
  return out;
}

std::vector<CacheEntry> residual_query(const std::vector<CacheEntry>& store, const Formula& goal) {
  std::vector<CacheEntry> out;
  for (const auto& e : store)
    if (subsumes(e.lemma, goal)) out.push_back(e);
  return out;
}

const char* to_string(StopMode m) {
  switch (m) {
    case StopMode::FirstProof: return "first-proof";
    case StopMode::EnumerateAlternates: return "alternates";
    case StopMode::AxiomDrivenOnly: return "axiom";
    case StopMode::GoalDrivenOnly: return "goal";
  }
  return "?";
}

StopMode parse_stop_mode(std::string_view text) {
  if (text == "first-proof" || text == "blended") return StopMode::FirstProof;
  if (text == "alternates") return StopMode::EnumerateAlternates;
  if (text == "axiom") return StopMode::AxiomDrivenOnly;
  if (text == "goal") return StopMode::GoalDrivenOnly;
  throw ConfigError("unknown mode '" + std::string(text) + "' (expected blended, alternates, axiom or goal)");
}

void SearchConfig::validate() const {
  if (lookahead < 1) throw ConfigError("lookahead must be at least 1");
  if (stop_mode == StopMode::GoalDrivenOnly && goals.empty()) throw ConfigError("goal-driven search needs a goal");
  for (const auto& g : goals)
    if (!g.is_ground()) throw ConfigError("goals must be ground");
  if (max_alternates < 1) throw ConfigError("max_alternates must be at least 1");
}

const char* to_string(NotProvedReason r) {
  switch (r) {
    case NotProvedReason::Exhausted: return "exhausted";
    case NotProvedReason::Timeout: return "timeout";
    case NotProvedReason::LevelCap: return "level-cap";
  }
  return "?";
}

std::string SearchStats::to_text() const {
  std::ostringstream s;
  s << "levels_completed\t" << levels_completed << "\n";
  s << "cache_sizes\t";
  for (std::size_t i = 0; i < cache_sizes.size(); ++i) s << (i ? "," : "") << cache_sizes[i];
  s << "\n";
  s << "generated\t" << generated << "\n";
  s << "deleted_subsumed\t" << deleted_subsumed << "\n";
  s << "deleted_dimension\t" << deleted_dimension << "\n";
  s << "deleted_capacity\t" << deleted_capacity << "\n";
  s << "residual_count\t" << residual_count << "\n";
  s << "goal_driven_runs\t" << goal_driven_runs << "\n";
  s << "goal_driven_attempts\t" << goal_driven_attempts << "\n";
  s << "elapsed_seconds\t" << elapsed_seconds << "\n";
  return s.str();
}

bool SearchOutcome::all_proved() const {
  return std::all_of(goals.begin(), goals.end(), [](const GoalOutcome& g) { return g.proved; });
}

// ---------------------------------------------------------------------------
// The loop

namespace {

class Search {
 public:
  Search(const AxiomBase& axioms, const SearchConfig& cfg, const CachePolicy& policy)
      : axioms_(axioms), cfg_(cfg), policy_(policy), t0_(Clock::now()) {
    interrupt_.cancel = cfg.cancel;
    if (cfg.timeout) interrupt_.deadline = t0_ + *cfg.timeout;
    limit_ = DimensionLimit::from(policy, axioms, cfg.goals);
    for (const auto& g : cfg.goals) {
      GoalOutcome o;
      o.goal = g;
      out_.goals.push_back(std::move(o));
    }
  }

  SearchOutcome run() {
    if (cfg_.stop_mode == StopMode::GoalDrivenOnly)
      goal_driven_only();
    else
      blended();
    out_.stats.elapsed_seconds = seconds_since(t0_);
    out_.cache = std::move(cache_);
    out_.stats.residual_count = out_.residual.size();
    return std::move(out_);
  }

 private:
  bool pending() const {
    return std::any_of(out_.goals.begin(), out_.goals.end(), [](const GoalOutcome& g) { return !g.proved; });
  }

  void finish_unproved(NotProvedReason why) {
    for (auto& g : out_.goals)
      if (!g.proved) g.reason = why;
  }

  void record(GoalOutcome& g, const DTerm& proof, std::size_t level, const char* by) {
    const auto report = verify(proof, axioms_, g.goal);
    if (!report.passed) throw Error("internal: found proof " + print_dnotation(proof) + " fails verification");
    if (!g.proved) {
      g.proved = true;
      g.proof = proof;
      g.level = level;
      g.elapsed_seconds = seconds_since(t0_);
      g.found_by = by;
    }
    if (cfg_.stop_mode == StopMode::EnumerateAlternates && g.level == level &&
        g.alternates.size() < cfg_.max_alternates &&
        std::find(g.alternates.begin(), g.alternates.end(), proof) == g.alternates.end())
      g.alternates.push_back(proof);
  }

  // Goal-driven search for `g` at `level`; returns false on interruption.
  bool goal_driven(GoalOutcome& g, std::size_t level, const LevelTable* cache) {
    Generator gen(cfg_.generator, axioms_, cache);
    gen.set_interrupt(interrupt_);
    ++out_.stats.goal_driven_runs;
    gen.goal_driven(level, g.goal, [&](const Solution& s) {
      record(g, s.proof, level, "goal-driven");
      return cfg_.stop_mode == StopMode::EnumerateAlternates && g.alternates.size() < cfg_.max_alternates;
    });
    out_.stats.goal_driven_attempts += gen.stats().attempts;
    return !gen.interrupted();
  }

  bool level_allowed(std::size_t level) const { return !cfg_.max_level || level <= *cfg_.max_level; }

  void goal_driven_only() {
    for (std::size_t level = 0;; ++level) {
      if (!level_allowed(level)) return finish_unproved(NotProvedReason::LevelCap);
      for (auto& g : out_.goals) {
        if (g.proved) continue;
        if (!goal_driven(g, level, nullptr)) return finish_unproved(NotProvedReason::Timeout);
      }
      out_.stats.levels_completed = level + 1;
      if (!pending()) return;
    }
  }

  void rebuild_view(std::size_t levels) {
    view_.assign(levels, {});
    for (const auto& e : cache_) view_[e.level].push_back({e.proof, e.lemma});
  }

  std::vector<Solution> axiom_level(std::size_t level, bool& complete) {
    complete = true;
    if (level == 0) {
      std::vector<Solution> out;
      for (const auto& [id, f] : axioms_.axioms()) out.push_back({DTerm::leaf(id), f});
      return out;
    }
    if (cfg_.generator == GeneratorKind::Psp) {
      Generator gen(GeneratorKind::Psp, axioms_, &view_);
      gen.set_interrupt(interrupt_);
      auto sols = gen.level(level);
      complete = !gen.interrupted();
      return sols;
    }
    return cfg_.parallel ? expand_level(cfg_.generator, level, view_, interrupt_, &complete)
                         : expand_level_serial(cfg_.generator, level, view_, interrupt_, &complete);
  }

  bool exhausted(std::size_t level) const {
    // Highest level with a cached entry; nothing is cached at all → -1.
    long top = -1;
    for (const auto& e : cache_) top = std::max(top, static_cast<long>(e.level));
    const long l = static_cast<long>(level);
    if (cfg_.generator == GeneratorKind::TreeSize) return top < 0 || l >= 2 * top + 1;
    return top < l;  // Height and PSP need the previous level non-empty
  }

  void blended() {
    const bool lookahead = cfg_.stop_mode != StopMode::AxiomDrivenOnly && !cfg_.goals.empty();
    for (std::size_t level = 0;; ++level) {
      if (!level_allowed(level)) return finish_unproved(NotProvedReason::LevelCap);
      if (lookahead) {
        for (auto& g : out_.goals) {
          if (g.proved) continue;
          for (std::size_t l = level; l < level + cfg_.lookahead && level_allowed(l); ++l) {
            if (!goal_driven(g, l, &view_)) return finish_unproved(NotProvedReason::Timeout);
            if (g.proved) break;
          }
        }
        if (!pending()) return;
      }
      bool complete = true;
      std::vector<Solution> sols = axiom_level(level, complete);
      if (!complete) return finish_unproved(NotProvedReason::Timeout);
      out_.stats.generated += sols.size();
      for (auto& g : out_.goals) {
        if (g.proved && cfg_.stop_mode != StopMode::EnumerateAlternates) continue;
        if (g.proved && g.level != level) continue;
        for (const Solution& s : sols) {
          if (!subsumes(s.lemma, g.goal)) continue;
          record(g, s.proof, level, "axiom-driven");
          if (cfg_.stop_mode != StopMode::EnumerateAlternates || g.alternates.size() >= cfg_.max_alternates) break;
        }
      }
      std::vector<CacheEntry> fresh;
      fresh.reserve(sols.size());
      for (auto& s : sols) fresh.push_back({std::move(s.lemma), std::move(s.proof), level, next_age_++});
      auto upd = cache_update(cache_, std::move(fresh), policy_, limit_);
      out_.stats.deleted_subsumed += upd.subsumed.size();
      out_.stats.deleted_dimension += upd.dimension.size();
      out_.stats.deleted_capacity += upd.capacity.size();
      if (policy_.keep_residual) {
        for (auto& e : upd.dimension) out_.residual.push_back(std::move(e));
        for (auto& e : upd.capacity) out_.residual.push_back(std::move(e));
      }
      rebuild_view(level + 1);
      out_.stats.levels_completed = level + 1;
      out_.stats.cache_sizes.push_back(cache_.size());
      if (!cfg_.goals.empty() && !pending()) return;
      if (exhausted(level)) return finish_unproved(NotProvedReason::Exhausted);
      if (interrupt_.expired()) return finish_unproved(NotProvedReason::Timeout);
    }
  }

  const AxiomBase& axioms_;
  const SearchConfig& cfg_;
  const CachePolicy& policy_;
  Clock::time_point t0_;
  Interrupt interrupt_;
  std::optional<DimensionLimit> limit_;
  std::vector<CacheEntry> cache_;
  LevelTable view_;
  std::uint64_t next_age_ = 0;
  SearchOutcome out_;
};

}  // namespace

SearchOutcome search(const AxiomBase& axioms, const SearchConfig& cfg, const CachePolicy& policy) {
  cfg.validate();
  policy.validate();
  if (axioms.empty()) throw ConfigError("empty axiom base");
  return Search(axioms, cfg, policy).run();
}

std::vector<Preset> presets() {
  std::vector<Preset> out;
  {
    Preset p;
    p.name = "sgcd-1";
    p.description = "tree-size generator, 2 goal-driven levels, dimension factor 5, subsumption, capacity 1000";
    p.config.generator = GeneratorKind::TreeSize;
    p.config.lookahead = 2;
    p.policy.subsumption_delete = true;
    p.policy.capacity = 1000;
    p.policy.dim_limit_factor = 5.0;
    p.policy.ordering = CacheOrdering::HeightSize;
    out.push_back(p);
  }
  {
    Preset p;
    p.name = "sgcd-height";
    p.description = "height generator, 2 goal-driven levels, dimension factor 5, subsumption, capacity 3000";
    p.config.generator = GeneratorKind::Height;
    p.config.lookahead = 2;
    p.policy.subsumption_delete = true;
    p.policy.capacity = 3000;
    p.policy.dim_limit_factor = 5.0;
    p.policy.ordering = CacheOrdering::HeightSize;
    out.push_back(p);
  }
  return out;
}

Preset preset(std::string_view name) {
  for (auto& p : presets())
    if (p.name == name) return p;
  throw ConfigError("unknown preset '" + std::string(name) + "'");
}

}  // namespace cdt
