#pragma once

// Most general theorems of D-terms, in-place theorems, verification against
// ground goals and n-simplification.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cdt/dterm.hpp"
#include "cdt/formula.hpp"
#include "cdt/unify.hpp"

namespace cdt {

/// Axioms by id, plus an optional registry of well-known names.
class AxiomBase {
 public:
  AxiomBase() = default;

  void add(AxiomId id, Formula f);
  bool contains(AxiomId id) const { return axioms_.contains(id); }
  /// Throws UnknownAxiom.
  const Formula& at(AxiomId id) const;
  const std::map<AxiomId, Formula>& axioms() const { return axioms_; }
  std::vector<AxiomId> ids() const;
  bool empty() const { return axioms_.empty(); }
  std::size_t size() const { return axioms_.size(); }

  /// The designated axiom that stands in for wildcard minor premises: the
  /// smallest id.
  AxiomId designated() const;

  /// Builds a base from Polish strings, numbered 1, 2, ...
  static AxiomBase from_polish(const std::vector<std::string>& polish, const SymbolTable& symbols);

 private:
  std::map<AxiomId, Formula> axioms_;
};

/// Most general theorem of `d`, or nullopt if its constraints have no
/// solution. Wildcard leaves contribute an unconstrained formula. Computed
/// once per distinct subterm, so deep or heavily shared proofs are cheap.
/// Throws UnknownAxiom.
std::optional<Formula> mgt(const DTerm& d, const AxiomBase& axioms);

/// As `mgt`, additionally reporting why no MGT exists.
struct MgtOutcome {
  std::optional<Formula> conclusion;
  UnifyFailure failure = UnifyFailure::None;
};
MgtOutcome mgt_detailed(const DTerm& d, const AxiomBase& axioms);

struct VerifyReport {
  bool passed = false;
  std::optional<Formula> mgt;
  std::optional<Substitution> sigma;  // mgt·sigma == goal
  std::string message;
};

/// Checks that the MGT of `d` (wildcards replaced by the designated axiom)
/// subsumes `goal`.
VerifyReport verify(const DTerm& d, const AxiomBase& axioms, const Formula& goal);

/// Formula at position `p` under the most general solution of the whole
/// proof's constraints. At a wildcard position the result is the
/// (possibly instantiated) placeholder formula.
std::optional<Formula> ipt(const DTerm& d, const Path& p, const AxiomBase& axioms);

/// Per-node formulas of the whole-proof solution, in pre-order, with a
/// consistent variable naming. Empty if no solution exists.
struct ProofNodeFormula {
  Path path;
  Formula formula;
};
std::vector<ProofNodeFormula> solve_proof(const DTerm& d, const AxiomBase& axioms);

/// True if the minor premise at `minor_path` is irrelevant: with that
/// subproof removed, its slot formula is an unconstrained variable that does
/// not occur in the conclusion.
bool minor_is_irrelevant(const DTerm& d, const Path& minor_path, const AxiomBase& axioms);

/// Replaces irrelevant non-primitive minor subproofs by the designated axiom
/// leaf, outermost first, until a fixpoint is reached. Throws Error if `d`
/// has no MGT.
DTerm n_simplify(const DTerm& d, const AxiomBase& axioms);

}  // namespace cdt
