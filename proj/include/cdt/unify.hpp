#pragma once

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <set>
#include <span>
#include <unordered_map>
#include <vector>

#include "cdt/formula.hpp"

namespace cdt {

enum class UnifyFailure { None, Clash, Occurs };

const char* to_string(UnifyFailure f);

/// Mutable term heap with bindings and an undo trail.
///
/// Terms are loaded from immutable Formulas (optionally with fresh
/// variables), unified in place and extracted back. `mark`/`undo` give
/// Prolog-style backtracking: everything created or bound after a mark is
/// discarded on undo. Unification always performs the occurs check.
class Workspace {
 public:
  using Ref = std::int32_t;

  struct Mark {
    std::size_t nodes = 0;
    std::size_t args = 0;
    std::size_t trail = 0;
  };

  /// Consistent variable naming across several extractions.
  struct Names {
    std::unordered_map<Ref, VarId> ids;
    VarId next = 0;
  };

  Ref fresh_var();
  Ref app(SymbolId symbol, std::span<const Ref> args);
  Ref imp(Ref antecedent, Ref consequent);

  /// Loads `f` with all variables fresh.
  Ref load(const Formula& f);
  /// Loads `f`, mapping variable v to `var_map[v]`; entries equal to -1 are
  /// filled with fresh variables. Used to load several formulas over a shared
  /// variable namespace.
  Ref load(const Formula& f, std::vector<Ref>& var_map);

  Ref deref(Ref r) const;
  bool is_unbound_var(Ref r) const;

  /// Unifies two terms. On failure the bindings made so far are kept; callers
  /// undo to a mark taken before the call.
  bool unify(Ref a, Ref b, UnifyFailure* why = nullptr);

  /// True if the unbound variable `var` occurs in the dereferenced `term`.
  bool occurs(Ref var, Ref term) const;
  /// True if the dereferenced term contains no unbound variables.
  bool is_ground(Ref r) const;

  /// The fully dereferenced term with variables renumbered in
  /// first-occurrence order.
  Formula extract(Ref r) const;
  Formula extract(Ref r, Names& names) const;

  Mark mark() const { return {nodes_.size(), args_.size(), trail_.size()}; }
  void undo(const Mark& m);
  void clear();

  std::size_t node_count() const { return nodes_.size(); }

 private:
  struct Node {
    std::int32_t symbol;  // -1 for variables
    std::int32_t arity;
    std::int32_t ref;  // variables: binding or -1; applications: first arg index in args_
  };

  void bind(Ref var, Ref value);

  std::vector<Node> nodes_;
  std::vector<Ref> args_;
  std::vector<Ref> trail_;
  mutable std::vector<Ref> scratch_;
  mutable std::vector<std::pair<Ref, Ref>> pair_stack_;
};

/// Result of syntactic unification.
struct UnifyOutcome {
  std::optional<Substitution> sigma;
  UnifyFailure failure = UnifyFailure::None;

  explicit operator bool() const { return sigma.has_value(); }
};

/// Most general unifier of `a` and `b`, which share one variable namespace
/// (rename apart first if they should not). The substitution is idempotent.
UnifyOutcome unify(const Formula& a, const Formula& b);

/// One-sided unification: a substitution over the variables of `general`
/// with general·σ == specific. Variables of `specific` are treated as rigid.
std::optional<Substitution> match(const Formula& general, const Formula& specific);

/// True if `general` subsumes `specific` (specific is an instance).
bool subsumes(const Formula& general, const Formula& specific);

/// A variant of `f` sharing no variable with `reserved`. Fresh ids are the
/// smallest ones not in `reserved`, assigned in first-occurrence order.
Formula rename_apart(const Formula& f, const std::set<VarId>& reserved);

/// `b` renamed so that its variables are disjoint from those of `a`.
Formula rename_apart(const Formula& b, const Formula& a);

}  // namespace cdt
