#pragma once

// Problem and proof files: Meredith step lists, the CNF clause subset used
// for CD problems, and the registry of well-known formula names.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cdt/error.hpp"
#include "cdt/mgt.hpp"

namespace cdt {

// ---------------------------------------------------------------------------
// Meredith step lists: `<no>. <Polish> [= <D-expression>]`, `*` before the
// number marks a goal step. D-expressions refer to earlier step numbers
// (single digits or `[12]`) and `n`.

struct MeredithStep {
  int number = 0;
  Formula formula;
  std::optional<DTerm> expression;  // over step numbers; empty for axioms
  DTerm resolved;                   // over axiom step numbers, n kept
  bool goal = false;
  bool is_axiom() const { return !expression.has_value(); }
};

struct MeredithProof {
  std::vector<MeredithStep> steps;
  AxiomBase axioms;  // axiom steps, keyed by their step numbers

  const MeredithStep& step(int number) const;
  std::vector<const MeredithStep*> goals() const;
};

class MeredithError : public Error {
 public:
  enum class Kind { ForwardReference, MgtMismatch, NoMgt, Numbering };
  MeredithError(Kind k, int step, const std::string& what)
      : Error("step " + std::to_string(step) + ": " + what), kind_(k), step_(step) {}
  Kind kind() const { return kind_; }
  int step() const { return step_; }

 private:
  Kind kind_;
  int step_;
};

/// Parses and checks a step list: references must point backwards and each
/// derived step's formula must be a variant of its MGT. Throws ParseError or
/// MeredithError.
MeredithProof read_meredith(std::string_view text, SymbolTable& symbols);
std::string print_meredith(const MeredithProof& proof, const SymbolTable& symbols);

/// Lays out proofs of `goals` as a step list: axioms first, then one step
/// per goal and per subproof used more than once, children before parents.
/// Throws Error if a proof has no MGT.
MeredithProof meredith_layout(const AxiomBase& axioms, const std::vector<DTerm>& goals);

// ---------------------------------------------------------------------------
// CD problems in clause form: `cnf(name, role, clause).` with literals
// `p(t)` and `~p(t)`, `%` comments.

struct CdProblem {
  std::string name;
  AxiomBase axioms;
  Formula goal;  // ground
  std::string predicate;  // original names, for reporting
  std::string implication;
};

enum class NotCdReason {
  Predicate,        // not a single unary predicate
  DetachmentForm,   // no clause of the shape P(y) <- P(x => y), P(x)
  MultipleNonUnit,  // more than one non-unit clause
  NonAtomicGoal,
  NonGroundGoal,
  Goal,   // no goal clause, or more than one
  Axiom,  // an axiom clause is not a positive unit
};
const char* to_string(NotCdReason r);

struct Detection {
  std::optional<CdProblem> problem;
  NotCdReason reason = NotCdReason::Goal;  // meaningful if !problem
  std::string message;
};

/// Classifies a clause file. Function symbols other than the implication
/// are declared in `symbols` under their own names; `not/1` and `n/1` map to
/// negation. Throws ParseError for malformed input.
Detection detect_cd_problem(std::string_view text, SymbolTable& symbols, std::string name = "problem");

class NotCd : public Error {
 public:
  NotCd(NotCdReason r, const std::string& what) : Error(what), reason_(r) {}
  NotCdReason reason() const { return reason_; }

 private:
  NotCdReason reason_;
};

/// As detect_cd_problem, throwing NotCd on rejection.
CdProblem read_cd_problem(std::string_view text, SymbolTable& symbols, std::string name = "problem");

/// Canonical clause text: predicate P, implication imp, variables X0, X1, ...
/// Reading the output back and writing again gives the same text.
std::string write_cd_problem(const CdProblem& p, const SymbolTable& symbols);

// ---------------------------------------------------------------------------
// Name registry, lines `name<TAB>polish`.

class Registry {
 public:
  struct Entry {
    std::string name;
    Formula formula;  // normalized
  };

  void add(std::string name, const Formula& f);
  /// Throws ParseError with the line number.
  static Registry load(std::string_view text, const SymbolTable& symbols);
  std::string print(const SymbolTable& symbols) const;

  /// All names whose formula is a variant of `f`, in file order.
  std::vector<std::string> lookup(const Formula& f) const;
  const std::vector<Entry>& entries() const { return entries_; }

 private:
  std::vector<Entry> entries_;
};

}  // namespace cdt
