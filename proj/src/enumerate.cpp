#include "cdt/enumerate.hpp"

#include <omp.h>

#include <algorithm>

#include "cdt/error.hpp"

namespace cdt {

const char* to_string(GeneratorKind k) {
  switch (k) {
    case GeneratorKind::TreeSize: return "tree-size";
    case GeneratorKind::Height: return "height";
    case GeneratorKind::Psp: return "psp";
  }
  return "?";
}

GeneratorKind parse_generator_kind(std::string_view text) {
  if (text == "tree-size" || text == "treesize" || text == "size") return GeneratorKind::TreeSize;
  if (text == "height") return GeneratorKind::Height;
  if (text == "psp") return GeneratorKind::Psp;
  throw ConfigError("unknown generator '" + std::string(text) + "' (expected tree-size, height or psp)");
}

std::vector<std::pair<std::size_t, std::size_t>> sublevel_pairs(GeneratorKind kind, std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  if (n == 0) return out;
  switch (kind) {
    case GeneratorKind::TreeSize:
      for (std::size_t n1 = n; n1-- > 0;) out.emplace_back(n1, n - 1 - n1);
      break;
    case GeneratorKind::Height:
      for (std::size_t h1 = n; h1-- > 0;) {
        if (h1 == n - 1)
          for (std::size_t h2 = 0; h2 < n; ++h2) out.emplace_back(h1, h2);
        else
          out.emplace_back(h1, n - 1);
      }
      break;
    case GeneratorKind::Psp: throw Error("PSP levels are not built from sub-level pairs");
  }
  return out;
}

std::optional<Formula> detach(Workspace& ws, const Formula& major, const Formula& minor) {
  ws.clear();
  const auto m = ws.load(major);
  const auto a = ws.load(minor);
  const auto y = ws.fresh_var();
  if (!ws.unify(m, ws.imp(a, y))) return std::nullopt;
  return ws.extract(y);
}

// ---------------------------------------------------------------------------
// Generator

Generator::Generator(GeneratorKind kind, const AxiomBase& axioms, const LevelTable* cache)
    : kind_(kind), axioms_(axioms), cache_(cache) {}

bool Generator::tick() {
  if (interrupted_) return false;
  if ((++ticks_ & 1023u) == 0 && interrupt_.expired()) interrupted_ = true;
  return !interrupted_;
}

bool Generator::solve(std::size_t level, Workspace::Ref slot, const Cont& k) {
  if (cache_ && level < cache_->size()) {
    for (const Solution& s : (*cache_)[level]) {
      ++stats_.attempts;
      if (!tick()) return false;
      const auto m = ws_.mark();
      bool go_on = true;
      if (ws_.unify(slot, ws_.load(s.lemma))) go_on = k(s.proof);
      ws_.undo(m);
      if (!go_on) return false;
    }
    return true;
  }
  return generate(level, slot, k);
}

bool Generator::generate(std::size_t level, Workspace::Ref slot, const Cont& k) {
  if (stats_.generated_levels.size() <= level) stats_.generated_levels.resize(level + 1, 0);
  ++stats_.generated_levels[level];
  if (level == 0) {
    for (const auto& [id, f] : axioms_.axioms()) {
      ++stats_.attempts;
      if (!tick()) return false;
      const auto m = ws_.mark();
      bool go_on = true;
      if (ws_.unify(slot, ws_.load(f))) go_on = k(DTerm::leaf(id));
      ws_.undo(m);
      if (!go_on) return false;
    }
    return true;
  }
  for (const auto& [n1, n2] : sublevel_pairs(kind_, level))
    if (!node(n1, n2, slot, k)) return false;
  return true;
}

bool Generator::node(std::size_t major_level, std::size_t minor_level, Workspace::Ref slot, const Cont& k) {
  const auto m = ws_.mark();
  const auto x = ws_.fresh_var();
  const auto major_slot = ws_.imp(x, slot);
  const bool go_on = solve(major_level, major_slot, [&](const DTerm& major) {
    return solve(minor_level, x, [&](const DTerm& minor) { return k(DTerm::node(major, minor)); });
  });
  ws_.undo(m);
  return go_on;
}

bool Generator::run(std::size_t level, Workspace::Ref slot, const Cont& k) {
  // The query level itself is enumerated structurally; only sub-levels
  // consult the cache. A sub-level the cache covers is never re-enumerated,
  // which `recomputations` makes observable.
  const auto before = stats_.generated_levels;
  const bool ok = generate(level, slot, k);
  if (cache_) {
    for (std::size_t l = 0; l < std::min(cache_->size(), stats_.generated_levels.size()); ++l) {
      const std::uint64_t was = l < before.size() ? before[l] : 0;
      const std::uint64_t top = l == level ? 1 : 0;
      if (stats_.generated_levels[l] > was + top) stats_.recomputations += stats_.generated_levels[l] - was - top;
    }
  }
  return ok && !interrupted_;
}

bool Generator::axiom_driven(std::size_t level, const Visitor& visit) {
  if (kind_ == GeneratorKind::Psp) {
    const auto& sols = psp_level(level);
    if (interrupted_) return false;
    for (const Solution& s : sols) {
      ++stats_.emitted;
      if (!visit(s)) return false;
    }
    return true;
  }
  ws_.clear();
  const auto slot = ws_.fresh_var();
  return run(level, slot, [&](const DTerm& d) {
    ++stats_.emitted;
    return visit(Solution{d, ws_.extract(slot)});
  });
}

bool Generator::goal_driven(std::size_t level, const Formula& goal, const Visitor& visit) {
  if (kind_ == GeneratorKind::Psp) {
    const auto& sols = psp_level(level);
    if (interrupted_) return false;
    for (const Solution& s : sols) {
      if (!subsumes(s.lemma, goal)) continue;
      ++stats_.emitted;
      if (!visit(s)) return false;
    }
    return true;
  }
  ws_.clear();
  const auto slot = ws_.load(goal);
  return run(level, slot, [&](const DTerm& d) {
    ++stats_.emitted;
    // Only the goal instance is bound in the workspace; report the MGT.
    auto lemma = mgt(d, axioms_);
    if (!lemma) throw Error("internal: goal-driven solution without MGT");
    return visit(Solution{d, std::move(*lemma)});
  });
}

std::vector<Solution> Generator::level(std::size_t n) {
  std::vector<Solution> out;
  axiom_driven(n, [&](const Solution& s) {
    out.push_back(s);
    return true;
  });
  return out;
}

// ---------------------------------------------------------------------------
// PSP

const Formula* Generator::psp_mgt(const DTerm& d) {
  auto it = psp_mgts_.find(d);
  if (it != psp_mgts_.end()) return it->second ? &*it->second : nullptr;
  std::optional<Formula> f;
  if (d.is_leaf()) {
    f = axioms_.at(d.axiom());
  } else if (d.is_node()) {
    const Formula* a = psp_mgt(d.major());
    const Formula* b = a ? psp_mgt(d.minor()) : nullptr;
    if (a && b) f = detach(ws_, *a, *b);
  }
  auto [pos, inserted] = psp_mgts_.emplace(d, std::move(f));
  return pos->second ? &*pos->second : nullptr;
}

const std::vector<Solution>& Generator::psp_level(std::size_t n) {
  static const std::vector<Solution> kEmpty;
  while (psp_levels_.size() <= n) {
    const std::size_t i = psp_levels_.size();
    std::vector<Solution> sols;
    if (cache_ && i < cache_->size()) {
      sols = (*cache_)[i];
    } else if (i == 0) {
      if (stats_.generated_levels.size() <= i) stats_.generated_levels.resize(i + 1, 0);
      ++stats_.generated_levels[i];
      for (const auto& [id, f] : axioms_.axioms()) sols.push_back({DTerm::leaf(id), f});
    } else {
      if (stats_.generated_levels.size() <= i) stats_.generated_levels.resize(i + 1, 0);
      ++stats_.generated_levels[i];
      std::unordered_set<DTerm> in_level;
      for (const Solution& s1 : psp_levels_[i - 1]) {
        std::vector<DTerm> partners = subterms(s1.proof);
        for (const auto& [id, f] : axioms_.axioms()) {
          const DTerm leaf = DTerm::leaf(id);
          if (std::find(partners.begin(), partners.end(), leaf) == partners.end()) partners.push_back(leaf);
        }
        for (const DTerm& d2 : partners) {
          for (const DTerm& d : {DTerm::node(s1.proof, d2), DTerm::node(d2, s1.proof)}) {
            ++stats_.attempts;
            if (!tick()) return kEmpty;
            if (psp_seen_.contains(d) || !in_level.insert(d).second) continue;
            if (const Formula* f = psp_mgt(d)) sols.push_back({d, *f});
          }
        }
      }
    }
    for (const Solution& s : sols) {
      psp_seen_.insert(s.proof);
      psp_mgts_.emplace(s.proof, s.lemma);
    }
    psp_levels_.push_back(std::move(sols));
  }
  return psp_levels_[n];
}

// ---------------------------------------------------------------------------
// Structures without constraints

void enumerate_structures(GeneratorKind kind, std::size_t level, const std::vector<AxiomId>& axiom_ids,
                          const std::function<void(const DTerm&)>& visit) {
  if (kind == GeneratorKind::Psp) throw Error("raw structure enumeration is defined for tree-size and height");
  std::vector<std::vector<DTerm>> levels(level + 1);
  for (AxiomId id : axiom_ids) levels[0].push_back(DTerm::leaf(id));
  for (std::size_t n = 1; n <= level; ++n)
    for (const auto& [n1, n2] : sublevel_pairs(kind, n))
      for (const DTerm& a : levels[n1])
        for (const DTerm& b : levels[n2]) levels[n].push_back(DTerm::node(a, b));
  for (const DTerm& d : levels[level]) visit(d);
}

std::uint64_t count_raw(std::size_t n, std::uint64_t k) {
  // Catalan(n) via C(i+1) = C(i) * 2(2i+1) / (i+2).
  std::uint64_t c = 1;
  for (std::uint64_t i = 0; i < n; ++i) c = c * 2 * (2 * i + 1) / (i + 2);
  std::uint64_t p = 1;
  for (std::size_t i = 0; i <= n; ++i) p *= k;
  return c * p;
}

// ---------------------------------------------------------------------------
// Level expansion from a covering cache

namespace {

struct PairSpace {
  struct Block {
    const std::vector<Solution>* major;
    const std::vector<Solution>* minor;
    std::uint64_t offset;
  };
  std::vector<Block> blocks;
  std::uint64_t total = 0;

  PairSpace(GeneratorKind kind, std::size_t n, const LevelTable& cache) {
    if (kind == GeneratorKind::Psp) throw Error("level expansion is defined for tree-size and height");
    if (n == 0) throw Error("level 0 consists of the axioms");
    if (cache.size() < n) throw Error("level expansion needs every lower level cached");
    for (const auto& [n1, n2] : sublevel_pairs(kind, n)) {
      blocks.push_back({&cache[n1], &cache[n2], total});
      total += static_cast<std::uint64_t>(cache[n1].size()) * cache[n2].size();
    }
  }

  std::pair<const Solution*, const Solution*> at(std::uint64_t index) const {
    auto it = std::upper_bound(blocks.begin(), blocks.end(), index,
                               [](std::uint64_t i, const Block& b) { return i < b.offset; });
    --it;
    const std::uint64_t local = index - it->offset;
    const std::uint64_t width = it->minor->size();
    return {&(*it->major)[local / width], &(*it->minor)[local % width]};
  }
};

std::optional<Solution> combine(Workspace& ws, const Solution& a, const Solution& b) {
  auto f = detach(ws, a.lemma, b.lemma);
  if (!f) return std::nullopt;
  return Solution{DTerm::node(a.proof, b.proof), std::move(*f)};
}

}  // namespace

std::vector<Solution> expand_level_serial(GeneratorKind kind, std::size_t n, const LevelTable& cache,
                                          const Interrupt& interrupt, bool* complete) {
  const PairSpace space(kind, n, cache);
  std::vector<Solution> out;
  Workspace ws;
  if (complete) *complete = true;
  for (const auto& block : space.blocks) {
    std::uint64_t counter = 0;
    for (const Solution& a : *block.major) {
      for (const Solution& b : *block.minor) {
        if ((++counter & 1023u) == 0 && interrupt.expired()) {
          if (complete) *complete = false;
          return out;
        }
        if (auto s = combine(ws, a, b)) out.push_back(std::move(*s));
      }
    }
  }
  return out;
}

std::vector<Solution> expand_level(GeneratorKind kind, std::size_t n, const LevelTable& cache,
                                   const Interrupt& interrupt, bool* complete) {
  const PairSpace space(kind, n, cache);
  std::vector<Solution> out;
  if (complete) *complete = true;
  constexpr std::uint64_t kChunk = 1u << 15;
  std::vector<std::optional<Solution>> results;
  for (std::uint64_t begin = 0; begin < space.total; begin += kChunk) {
    const std::uint64_t end = std::min(space.total, begin + kChunk);
    results.assign(end - begin, std::nullopt);
    std::atomic<bool> stop{interrupt.expired()};
#pragma omp parallel
    {
      Workspace ws;
      std::uint64_t counter = 0;
#pragma omp for schedule(dynamic, 256)
      for (std::int64_t i = static_cast<std::int64_t>(begin); i < static_cast<std::int64_t>(end); ++i) {
        if (stop.load(std::memory_order_relaxed)) continue;
        if ((++counter & 1023u) == 0 && interrupt.expired()) stop.store(true, std::memory_order_relaxed);
        const auto [a, b] = space.at(static_cast<std::uint64_t>(i));
        results[static_cast<std::size_t>(static_cast<std::uint64_t>(i) - begin)] = combine(ws, *a, *b);
      }
    }
    if (stop.load()) {
      if (complete) *complete = false;
      return out;
    }
    for (auto& r : results)
      if (r) out.push_back(std::move(*r));
  }
  return out;
}

}  // namespace cdt
