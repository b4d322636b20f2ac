#pragma once

// Proof compression beyond DAGs: straight-line tree grammars over D-terms
// with parameterized nonterminals, and terms with the combinators I', B and
// B<n> whose normal forms are D-terms.

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "cdt/dterm.hpp"
#include "cdt/error.hpp"

namespace cdt {

class GrammarError : public Error {
 public:
  enum class Kind { Undefined, Arity, Cycle, Parameters, Syntax };
  GrammarError(Kind k, const std::string& what) : Error(what), kind_(k) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Right-hand-side tree of a production.
struct GTree {
  enum class Kind { D, Axiom, Wildcard, Param, Call };
  Kind kind = Kind::Axiom;
  AxiomId axiom = 0;
  std::string name;  // parameter or nonterminal
  std::vector<GTree> children;

  static GTree d(GTree major, GTree minor);
  static GTree leaf(AxiomId id);
  static GTree wildcard();
  static GTree param(std::string name);
  static GTree call(std::string name, std::vector<GTree> args = {});

  friend bool operator==(const GTree&, const GTree&) = default;
};

struct Production {
  std::string name;
  std::vector<std::string> params;
  GTree rhs;
};

class Grammar {
 public:
  /// Adds or replaces a production. The first production named "Start", or
  /// else the last one added, is the start symbol.
  void add(Production p);
  const std::vector<Production>& productions() const { return productions_; }
  const Production* find(std::string_view name) const;
  const Production& start() const;
  std::string start_name() const;

  /// Throws GrammarError for undefined nonterminals, arity mismatches,
  /// parameter misuse and cyclic dependencies.
  void validate() const;
  /// Productions ordered so that callees precede callers.
  std::vector<const Production*> dependency_order() const;

 private:
  std::vector<Production> productions_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

/// One production per line: `Name(v, w) -> tree` or `Name -> tree`. Trees
/// use `D(x,y)`, integer axiom ids, `n` for the wildcard, lowercase
/// parameter names and `Name(args)` applications. `#` starts a comment.
Grammar parse_grammar(std::string_view text);
std::string print_grammar(const Grammar& g);

DTerm grammar_expand(const Grammar& g);
/// Sum over productions of the number of parent-child edges in the RHS.
std::uint64_t grammar_size(const Grammar& g);

/// The DAG of `d` as a grammar: one production per shared inner node plus
/// Start, other nodes inlined. Its size is twice the compacted size.
Grammar dag_grammar(const DTerm& d);

/// Greedy digram replacement starting from the DAG grammar: repeatedly
/// replaces the most frequent parent/child pair whose replacement shrinks
/// the grammar, then inlines nonterminals used once. The result expands to
/// `d` and is never larger than `dag_grammar(d)`.
Grammar grammar_compress(const DTerm& d, std::size_t budget = 10000);

// ---------------------------------------------------------------------------
// Combinator terms

class StepCapExceeded : public Error {
 public:
  using Error::Error;
};
class StuckTerm : public Error {
 public:
  using Error::Error;
};
class Unconvertible : public Error {
 public:
  Unconvertible(const std::string& production, const std::string& why)
      : Error("production " + production + " is not convertible: " + why), production_(production) {}
  const std::string& production() const { return production_; }

 private:
  std::string production_;
};

/// A D-term whose leaves may also be the combinators I' or B<n> (n >= 2;
/// B is B3). Nodes are immutable and shared.
class CombTerm {
 public:
  enum class Kind : std::uint8_t { Axiom, Wildcard, IPrime, B, Node };

  static CombTerm axiom(AxiomId id);
  static CombTerm wildcard();
  static CombTerm iprime();
  static CombTerm b(int n = 3);
  static CombTerm node(CombTerm major, CombTerm minor);
  static CombTerm from_dterm(const DTerm& d);

  Kind kind() const { return node_->kind; }
  bool is_node() const { return kind() == Kind::Node; }
  bool is_combinator() const { return kind() == Kind::IPrime || kind() == Kind::B; }
  AxiomId axiom_id() const { return node_->value; }
  /// Number of arguments the combinator consumes.
  int arity() const { return kind() == Kind::IPrime ? 2 : node_->value; }
  const CombTerm& major() const { return node_->children->first; }
  const CombTerm& minor() const { return node_->children->second; }
  bool has_combinators() const { return node_->combinators; }
  const void* identity() const { return node_.get(); }

  /// Throws StuckTerm if a combinator leaf remains.
  DTerm to_dterm() const;

  friend bool operator==(const CombTerm& a, const CombTerm& b);

 private:
  struct Node {
    Kind kind;
    std::int32_t value;
    bool combinators;
    std::unique_ptr<std::pair<CombTerm, CombTerm>> children;
  };
  explicit CombTerm(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// Functional notation: `D(x,y)`, axiom ids, `n`, `I'`, `B`, `B4`, `B<n>`.
std::string print_comb(const CombTerm& t);
CombTerm parse_comb(std::string_view text);

/// ⟨c,t,h⟩ of the term as a DAG over its shared nodes, combinator leaves
/// counted like axiom leaves.
Dimensions comb_dims(const CombTerm& t);

/// Converts each production by bracket abstraction. Productions must have
/// no parameter, or one parameter occurring exactly once; anything else
/// throws Unconvertible.
CombTerm to_combinators(const Grammar& g);

enum class ReductionOrder { LeftmostOutermost, Innermost };

struct ReductionResult {
  DTerm normal_form;
  std::uint64_t steps = 0;
};

/// Rewrites with D(D(I',x),y) -> D(y,x) and
/// D(...D(D(Bn,x1),x2)...,xn) -> D(x1,D(x2,...D(x(n-1),xn))) until no
/// redex remains. Throws StepCapExceeded or StuckTerm.
ReductionResult combinator_reduce(const CombTerm& t, std::uint64_t step_cap = 1000000,
                                  ReductionOrder order = ReductionOrder::LeftmostOutermost);

}  // namespace cdt
