#pragma once

// Blended proof search: level-by-level axiom-driven lemma generation into a
// policy-managed cache, with goal-driven lookahead before each new level.

#include <atomic>
#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cdt/enumerate.hpp"

namespace cdt {

struct CacheEntry {
  Formula lemma;
  DTerm proof;
  std::size_t level = 0;
  std::uint64_t age = 0;  // creation order; smaller is older
};

enum class CacheOrdering { HeightSize, SizeHeight };

const char* to_string(CacheOrdering o);
CacheOrdering parse_cache_ordering(std::string_view text);

struct CachePolicy {
  bool subsumption_delete = false;
  std::optional<std::size_t> capacity;
  CacheOrdering ordering = CacheOrdering::HeightSize;
  std::optional<double> dim_limit_factor;
  bool keep_residual = false;

  /// Throws ConfigError.
  void validate() const;
};

/// Measure bounds for the dimension limit: factor times the maxima over the
/// input formulas (axioms and goals).
struct DimensionLimit {
  std::uint64_t max_size = 0;
  std::uint64_t max_height = 0;
  bool admits(const Formula& f) const;

  static std::optional<DimensionLimit> from(const CachePolicy& policy, const AxiomBase& axioms,
                                            const std::vector<Formula>& goals);
};

/// Total order used for capacity trimming: the policy's measure key, then
/// more distinct variables first (so a strict subsumer of equal measure
/// precedes its instances), then age, then lemma text.
bool cache_before(const CacheEntry& a, const CacheEntry& b, CacheOrdering ordering);

struct CacheUpdate {
  std::vector<CacheEntry> subsumed;   // dropped, not kept in the residual store
  std::vector<CacheEntry> dimension;  // over the dimension limit
  std::vector<CacheEntry> capacity;   // trimmed by the ordering
};

/// Merges `fresh` into `cache` under `policy`. Afterwards the cache has no
/// entry whose lemma is subsumed by another cached lemma unless it was
/// cached earlier (subsumption is checked for arriving entries only), no
/// entry over the dimension limit, and at most `capacity` entries, the
/// survivors being the first ones of old cache and new entries under
/// `cache_before`. The cache is left sorted by level, then age.
CacheUpdate cache_update(std::vector<CacheEntry>& cache, std::vector<CacheEntry> fresh, const CachePolicy& policy,
                         const std::optional<DimensionLimit>& limit);

/// Entries of a residual store whose lemma subsumes `goal`.
std::vector<CacheEntry> residual_query(const std::vector<CacheEntry>& store, const Formula& goal);

enum class StopMode { FirstProof, EnumerateAlternates, AxiomDrivenOnly, GoalDrivenOnly };

const char* to_string(StopMode m);
StopMode parse_stop_mode(std::string_view text);

struct SearchConfig {
  GeneratorKind generator = GeneratorKind::TreeSize;
  std::size_t lookahead = 1;
  std::optional<std::size_t> max_level;
  std::optional<std::chrono::milliseconds> timeout;
  StopMode stop_mode = StopMode::FirstProof;
  std::vector<Formula> goals;  // ground
  /// Upper bound on proofs collected per goal under EnumerateAlternates.
  std::size_t max_alternates = 64;
  /// Use the OpenMP level-expansion kernel for axiom-driven levels.
  bool parallel = true;
  const std::atomic<bool>* cancel = nullptr;

  /// Throws ConfigError.
  void validate() const;
};

enum class NotProvedReason { Exhausted, Timeout, LevelCap };
const char* to_string(NotProvedReason r);

struct GoalOutcome {
  Formula goal;
  bool proved = false;
  std::optional<DTerm> proof;
  std::size_t level = 0;
  double elapsed_seconds = 0;
  std::string found_by;  // "goal-driven" or "axiom-driven"
  NotProvedReason reason = NotProvedReason::Exhausted;
  std::vector<DTerm> alternates;  // EnumerateAlternates only, includes `proof`
};

struct SearchStats {
  std::size_t levels_completed = 0;
  std::vector<std::size_t> cache_sizes;  // after each completed level
  std::uint64_t generated = 0;           // axiom-driven solutions before policy
  std::uint64_t deleted_subsumed = 0;
  std::uint64_t deleted_dimension = 0;
  std::uint64_t deleted_capacity = 0;
  std::uint64_t residual_count = 0;
  std::uint64_t goal_driven_runs = 0;
  std::uint64_t goal_driven_attempts = 0;
  double elapsed_seconds = 0;

  /// One `key<TAB>value` per line.
  std::string to_text() const;
};

struct SearchOutcome {
  std::vector<GoalOutcome> goals;
  SearchStats stats;
  std::vector<CacheEntry> cache;
  std::vector<CacheEntry> residual;
  bool all_proved() const;
};

/// Runs the blended loop. Every returned proof has been re-checked with
/// `verify`; a failing re-check throws Error (an internal bug).
SearchOutcome search(const AxiomBase& axioms, const SearchConfig& cfg, const CachePolicy& policy);

struct Preset {
  std::string name;
  std::string description;
  SearchConfig config;
  CachePolicy policy;
};

/// Named configurations: "sgcd-1" (tree size, lookahead 2, dimension factor
/// 5, subsumption, capacity 1000) and "sgcd-height" (height, capacity 3000).
std::vector<Preset> presets();
/// Throws ConfigError for unknown names.
Preset preset(std::string_view name);

}  // namespace cdt
