#pragma once

// Formula terms (the argument of the implicit predicate P), symbol tables,
// substitutions, measures and Polish notation.

#include <compare>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cdt {

using VarId = std::int32_t;
using SymbolId = std::int32_t;

/// Symbol id of binary implication. Every SymbolTable declares it first.
inline constexpr SymbolId kImp = 0;
/// Symbol id of unary negation. Every SymbolTable declares it second.
inline constexpr SymbolId kNot = 1;

/// Declared function symbols with their arities and Polish letters.
///
/// `imp/2` (letter C) and `not/1` (letter N) are always present. Further
/// symbols, including 0-ary constants introduced for ground goals, are added
/// with `declare`.
class SymbolTable {
 public:
  struct Entry {
    std::string name;
    int arity = 0;
    char letter = 0;  // 0 if the symbol has no Polish letter
  };

  SymbolTable();

  /// Declares a symbol, or returns the id of an existing one with the same
  /// name. Throws ConfigError on an arity clash or if `letter` is taken or
  /// not an uppercase ASCII letter.
  SymbolId declare(std::string_view name, int arity, char letter = 0);

  std::optional<SymbolId> find(std::string_view name) const;
  std::optional<SymbolId> by_letter(char letter) const;
  const Entry& entry(SymbolId id) const { return entries_.at(static_cast<std::size_t>(id)); }
  int arity(SymbolId id) const { return entry(id).arity; }
  std::size_t size() const { return entries_.size(); }

  /// Reads declarations, one per line: `<Letter> <name> <arity>`. Blank lines
  /// and lines starting with '#' are ignored.
  void load_declarations(std::string_view text);

  /// Lowercase letter used for the i-th variable when printing:
  /// p..z then a..o, followed by v0, v1, ...
  static std::string variable_name(std::size_t index);

 private:
  std::vector<Entry> entries_;
  std::map<std::string, SymbolId, std::less<>> by_name_;
  std::map<char, SymbolId> by_letter_;
};

class Substitution;

/// An immutable first-order term stored in prefix order.
///
/// Each cell is either a variable or a function symbol followed by its
/// arguments. Two formulas compare equal iff they are syntactically
/// identical, including variable ids; use `alpha_equivalent` or compare
/// `normalized()` forms for equality up to renaming.
class Formula {
 public:
  struct Cell {
    std::int32_t code = 0;  // >= 0: symbol id, < 0: variable ~code
    std::int32_t arity = 0;

    bool is_var() const { return code < 0; }
    VarId var() const { return ~code; }
    SymbolId symbol() const { return code; }
    friend auto operator<=>(const Cell&, const Cell&) = default;
  };

  Formula() = default;

  static Formula var(VarId v);
  static Formula app(SymbolId symbol, std::span<const Formula> args);
  static Formula constant(SymbolId symbol) { return app(symbol, {}); }
  static Formula imp(const Formula& antecedent, const Formula& consequent);
  static Formula from_cells(std::vector<Cell> cells);

  bool empty() const { return cells_.empty(); }
  std::span<const Cell> cells() const { return cells_; }
  bool is_var() const { return !cells_.empty() && cells_.front().is_var(); }
  VarId var() const { return cells_.front().var(); }
  SymbolId symbol() const { return cells_.front().symbol(); }
  int arity() const { return cells_.empty() ? 0 : cells_.front().arity; }
  bool is_imp() const { return !is_var() && !cells_.empty() && symbol() == kImp; }

  /// The i-th argument of an application.
  Formula arg(std::size_t i) const;
  std::vector<Formula> args() const;

  bool is_ground() const;
  /// Distinct variables in first-occurrence order.
  std::vector<VarId> variables() const;
  /// Largest variable id plus one, or 0 for ground formulas.
  VarId var_bound() const;

  /// Variables renumbered 0,1,2,... in first-occurrence order.
  Formula normalized() const;
  bool alpha_equivalent(const Formula& other) const;

  Formula apply(const Substitution& sigma) const;
  /// Renames variables with `fn`; the result must stay a valid formula.
  Formula map_vars(const std::function<VarId(VarId)>& fn) const;

  std::size_t hash() const;

  friend bool operator==(const Formula&, const Formula&) = default;
  friend auto operator<=>(const Formula& a, const Formula& b) { return a.cells_ <=> b.cells_; }

 private:
  explicit Formula(std::vector<Cell> cells) : cells_(std::move(cells)) {}
  std::vector<Cell> cells_;
};

/// Index one past the end of the subterm starting at `begin`.
std::size_t subterm_end(std::span<const Formula::Cell> cells, std::size_t begin);

struct FormulaHash {
  std::size_t operator()(const Formula& f) const { return f.hash(); }
};

/// A finite map from variables to formulas.
class Substitution {
 public:
  Substitution() = default;

  void bind(VarId v, Formula f) { map_[v] = std::move(f); }
  const Formula* find(VarId v) const;
  bool empty() const { return map_.empty(); }
  std::size_t size() const { return map_.size(); }
  const std::map<VarId, Formula>& bindings() const { return map_; }

  /// True if applying the substitution to its own range changes nothing.
  bool idempotent() const;
  /// True if every binding is v -> v.
  bool is_identity() const;

  friend bool operator==(const Substitution&, const Substitution&) = default;

 private:
  std::map<VarId, Formula> map_;
};

/// size: number of function-symbol occurrences (constants included);
/// height: edges on the longest root-to-leaf path.
struct FormulaMeasure {
  std::int64_t size = 0;
  std::int64_t height = 0;
  friend auto operator<=>(const FormulaMeasure&, const FormulaMeasure&) = default;
};

FormulaMeasure measure(const Formula& f);

/// Parses one formula in Polish notation. Uppercase letters are declared
/// symbols, lowercase letters (optionally followed by digits) are variables,
/// and `{name}` refers to a declared symbol by name (used for symbols without
/// a letter, e.g. goal constants). Whitespace is ignored between tokens.
Formula parse_polish(std::string_view text, const SymbolTable& symbols);

/// Prints in Polish notation with variables named in first-occurrence order.
/// Symbols without a letter print as `{name}`.
std::string print_polish(const Formula& f, const SymbolTable& symbols);

/// Infix rendering with `=>` for implication, for logs and diagnostics.
std::string print_infix(const Formula& f, const SymbolTable& symbols);

/// Replaces every variable by a constant, producing a ground goal. The i-th
/// variable (first-occurrence order) becomes the constant named after the
/// i-th printed variable name, declared in `symbols` on demand.
Formula skolemize(const Formula& f, SymbolTable& symbols);

}  // namespace cdt

template <>
struct std::hash<cdt::Formula> {
  std::size_t operator()(const cdt::Formula& f) const { return f.hash(); }
};
