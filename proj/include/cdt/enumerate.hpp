#pragma once

// Level-indexed enumeration of D-terms paired with their MGTs.

#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "cdt/dterm.hpp"
#include "cdt/mgt.hpp"
#include "cdt/unify.hpp"

namespace cdt {

enum class GeneratorKind { TreeSize, Height, Psp };

const char* to_string(GeneratorKind k);
/// Accepts "tree-size", "height", "psp". Throws ConfigError.
GeneratorKind parse_generator_kind(std::string_view text);

struct Solution {
  DTerm proof;
  Formula lemma;  // normalized MGT of proof
};

/// Cached solutions by level. Levels [0, size()) are considered covered;
/// a covered level may be pruned and even empty.
using LevelTable = std::vector<std::vector<Solution>>;

/// Cooperative interruption: a deadline and an optional shared cancel flag.
struct Interrupt {
  std::chrono::steady_clock::time_point deadline = std::chrono::steady_clock::time_point::max();
  const std::atomic<bool>* cancel = nullptr;

  bool expired() const {
    if (cancel && cancel->load(std::memory_order_relaxed)) return true;
    return deadline != std::chrono::steady_clock::time_point::max() && std::chrono::steady_clock::now() >= deadline;
  }
  static Interrupt after(std::chrono::milliseconds ms) { return {std::chrono::steady_clock::now() + ms, nullptr}; }
};

struct GeneratorStats {
  std::uint64_t attempts = 0;       // unification attempts at leaves and cache lookups
  std::uint64_t emitted = 0;
  std::uint64_t recomputations = 0;  // structural enumeration of a level the cache covers
  std::vector<std::uint64_t> generated_levels;  // how often each level was enumerated structurally
};

/// Enumerates the D-terms of one level together with their MGTs.
///
/// TreeSize and Height solve the detachment constraints top-down in a
/// workspace, so a bound conclusion (goal-driven mode) prunes eagerly.
/// Sub-levels covered by the cache are read from it instead of being
/// enumerated again. Visitors return false to stop the enumeration.
class Generator {
 public:
  using Visitor = std::function<bool(const Solution&)>;

  Generator(GeneratorKind kind, const AxiomBase& axioms, const LevelTable* cache = nullptr);

  /// Emits every D-term at `level` with an MGT. Returns false if stopped by
  /// the visitor or interrupted.
  bool axiom_driven(std::size_t level, const Visitor& visit);
  /// Emits the D-terms at `level` whose MGT subsumes the ground `goal`.
  bool goal_driven(std::size_t level, const Formula& goal, const Visitor& visit);

  /// All solutions of a level, in enumeration order.
  std::vector<Solution> level(std::size_t n);

  void set_interrupt(Interrupt i) { interrupt_ = i; }
  bool interrupted() const { return interrupted_; }
  const GeneratorStats& stats() const { return stats_; }
  GeneratorKind kind() const { return kind_; }

 private:
  using Cont = std::function<bool(const DTerm&)>;

  bool run(std::size_t level, Workspace::Ref slot, const Cont& k);
  bool solve(std::size_t level, Workspace::Ref slot, const Cont& k);
  bool generate(std::size_t level, Workspace::Ref slot, const Cont& k);
  bool node(std::size_t major_level, std::size_t minor_level, Workspace::Ref slot, const Cont& k);
  bool tick();

  // PSP: levels are built bottom-up and memoized per generator.
  const std::vector<Solution>& psp_level(std::size_t n);
  const Formula* psp_mgt(const DTerm& d);

  GeneratorKind kind_;
  const AxiomBase& axioms_;
  const LevelTable* cache_;
  Workspace ws_;
  Interrupt interrupt_;
  bool interrupted_ = false;
  std::uint32_t ticks_ = 0;
  GeneratorStats stats_;

  std::vector<std::vector<Solution>> psp_levels_;
  std::unordered_set<DTerm> psp_seen_;
  std::unordered_map<DTerm, std::optional<Formula>> psp_mgts_;
};

/// Enumerates D-term structures without constraint solving: all full binary
/// trees of the given tree size (or height) with leaves from `axiom_ids`.
void enumerate_structures(GeneratorKind kind, std::size_t level, const std::vector<AxiomId>& axiom_ids,
                          const std::function<void(const DTerm&)>& visit);

/// Catalan(n) * k^(n+1): number of tree-size-n structures over k axioms.
std::uint64_t count_raw(std::size_t n, std::uint64_t k);

/// Axiom-driven level `n` of TreeSize or Height when every level below `n`
/// is covered by `cache`: all detachments D(a, b) of cached solutions with
/// the right sub-level combination, in generator order.
///
/// `expand_level` distributes the pairs over OpenMP threads;
/// `expand_level_serial` is the reference it is tested against. Both stop
/// early when `interrupt` expires and then return the prefix computed so far
/// with `*complete` set to false.
std::vector<Solution> expand_level(GeneratorKind kind, std::size_t n, const LevelTable& cache,
                                   const Interrupt& interrupt = {}, bool* complete = nullptr);
std::vector<Solution> expand_level_serial(GeneratorKind kind, std::size_t n, const LevelTable& cache,
                                          const Interrupt& interrupt = {}, bool* complete = nullptr);

/// Sub-level pairs (major level, minor level) of a node at level `n`, in
/// enumeration order: major level descending, then minor level ascending.
std::vector<std::pair<std::size_t, std::size_t>> sublevel_pairs(GeneratorKind kind, std::size_t n);

/// Detaches `minor` from `major` in a fresh namespace: the normalized
/// conclusion y of unifying major with minor=>y, or nullopt.
std::optional<Formula> detach(Workspace& ws, const Formula& major, const Formula& minor);

}  // namespace cdt
