#include "cdt/formula.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <unordered_map>

#include "cdt/error.hpp"

namespace cdt {

// ---------------------------------------------------------------------------
// SymbolTable

SymbolTable::SymbolTable() {
  declare("imp", 2, 'C');
  declare("not", 1, 'N');
}

SymbolId SymbolTable::declare(std::string_view name, int arity, char letter) {
  if (auto it = by_name_.find(name); it != by_name_.end()) {
    const Entry& e = entries_[static_cast<std::size_t>(it->second)];
    if (e.arity != arity)
      throw ConfigError("symbol '" + std::string(name) + "' redeclared with arity " +
                        std::to_string(arity) + " (was " + std::to_string(e.arity) + ")");
    if (letter != 0 && e.letter != letter)
      throw ConfigError("symbol '" + std::string(name) + "' redeclared with another letter");
    return it->second;
  }
  if (arity < 0) throw ConfigError("negative arity for '" + std::string(name) + "'");
  if (letter != 0) {
    if (letter < 'A' || letter > 'Z')
      throw ConfigError(std::string("Polish letter must be uppercase: '") + letter + "'");
    if (by_letter_.contains(letter))
      throw ConfigError(std::string("Polish letter already declared: '") + letter + "'");
  }
  const auto id = static_cast<SymbolId>(entries_.size());
  entries_.push_back({std::string(name), arity, letter});
  by_name_.emplace(std::string(name), id);
  if (letter != 0) by_letter_.emplace(letter, id);
  return id;
}

std::optional<SymbolId> SymbolTable::find(std::string_view name) const {
  if (auto it = by_name_.find(name); it != by_name_.end()) return it->second;
  return std::nullopt;
}

std::optional<SymbolId> SymbolTable::by_letter(char letter) const {
  if (auto it = by_letter_.find(letter); it != by_letter_.end()) return it->second;
  return std::nullopt;
}

void SymbolTable::load_declarations(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream fields(line);
    std::string letter, name;
    int arity = -1;
    if (!(fields >> letter)) continue;
    if (letter.front() == '#') continue;
    if (!(fields >> name >> arity) || letter.size() != 1)
      throw ParseError("expected '<Letter> <name> <arity>'", 0, lineno);
    declare(name, arity, letter.front());
  }
}

std::string SymbolTable::variable_name(std::size_t index) {
  static constexpr std::string_view kLetters = "pqrstuvwxyzabcdefghijklmno";
  if (index < kLetters.size()) return std::string(1, kLetters[index]);
  return "v" + std::to_string(index - kLetters.size());
}

// ---------------------------------------------------------------------------
// Formula

std::size_t subterm_end(std::span<const Formula::Cell> cells, std::size_t begin) {
  std::size_t pending = 1;
  std::size_t i = begin;
  while (pending > 0) {
    pending += static_cast<std::size_t>(cells[i].arity);
    --pending;
    ++i;
  }
  return i;
}

Formula Formula::var(VarId v) { return Formula({Cell{~v, 0}}); }

Formula Formula::app(SymbolId symbol, std::span<const Formula> args) {
  std::size_t total = 1;
  for (const auto& a : args) total += a.cells_.size();
  std::vector<Cell> cells;
  cells.reserve(total);
  cells.push_back({symbol, static_cast<std::int32_t>(args.size())});
  for (const auto& a : args) cells.insert(cells.end(), a.cells_.begin(), a.cells_.end());
  return Formula(std::move(cells));
}

Formula Formula::imp(const Formula& antecedent, const Formula& consequent) {
  const Formula args[] = {antecedent, consequent};
  return app(kImp, args);
}

Formula Formula::from_cells(std::vector<Cell> cells) {
  if (cells.empty() || subterm_end(cells, 0) != cells.size())
    throw Error("malformed formula cell sequence");
  return Formula(std::move(cells));
}

Formula Formula::arg(std::size_t i) const {
  std::size_t pos = 1;
  for (std::size_t k = 0; k < i; ++k) pos = subterm_end(cells_, pos);
  const std::size_t end = subterm_end(cells_, pos);
  return Formula(std::vector<Cell>(cells_.begin() + static_cast<std::ptrdiff_t>(pos),
                                   cells_.begin() + static_cast<std::ptrdiff_t>(end)));
}

std::vector<Formula> Formula::args() const {
  std::vector<Formula> out;
  if (cells_.empty() || is_var()) return out;
  std::size_t pos = 1;
  for (int k = 0; k < arity(); ++k) {
    const std::size_t end = subterm_end(cells_, pos);
    out.push_back(Formula(std::vector<Cell>(cells_.begin() + static_cast<std::ptrdiff_t>(pos),
                                            cells_.begin() + static_cast<std::ptrdiff_t>(end))));
    pos = end;
  }
  return out;
}

bool Formula::is_ground() const {
  return std::none_of(cells_.begin(), cells_.end(), [](const Cell& c) { return c.is_var(); });
}

std::vector<VarId> Formula::variables() const {
  std::vector<VarId> out;
  for (const auto& c : cells_)
    if (c.is_var() && std::find(out.begin(), out.end(), c.var()) == out.end()) out.push_back(c.var());
  return out;
}

VarId Formula::var_bound() const {
  VarId bound = 0;
  for (const auto& c : cells_)
    if (c.is_var()) bound = std::max(bound, c.var() + 1);
  return bound;
}

Formula Formula::normalized() const {
  std::vector<Cell> out(cells_);
  std::vector<std::pair<VarId, VarId>> seen;
  for (auto& c : out) {
    if (!c.is_var()) continue;
    const VarId v = c.var();
    auto it = std::find_if(seen.begin(), seen.end(), [v](const auto& p) { return p.first == v; });
    VarId n;
    if (it == seen.end()) {
      n = static_cast<VarId>(seen.size());
      seen.emplace_back(v, n);
    } else {
      n = it->second;
    }
    c.code = ~n;
  }
  return Formula(std::move(out));
}

bool Formula::alpha_equivalent(const Formula& other) const {
  if (cells_.size() != other.cells_.size()) return false;
  return normalized() == other.normalized();
}

Formula Formula::apply(const Substitution& sigma) const {
  if (sigma.empty()) return *this;
  std::vector<Cell> out;
  out.reserve(cells_.size());
  for (const auto& c : cells_) {
    if (c.is_var()) {
      if (const Formula* f = sigma.find(c.var())) {
        out.insert(out.end(), f->cells_.begin(), f->cells_.end());
        continue;
      }
    }
    out.push_back(c);
  }
  return Formula(std::move(out));
}

Formula Formula::map_vars(const std::function<VarId(VarId)>& fn) const {
  std::vector<Cell> out(cells_);
  for (auto& c : out)
    if (c.is_var()) c.code = ~fn(c.var());
  return Formula(std::move(out));
}

std::size_t Formula::hash() const {
  std::uint64_t h = 1469598103934665603ull;
  for (const auto& c : cells_) {
    h ^= static_cast<std::uint32_t>(c.code);
    h *= 1099511628211ull;
  }
  return static_cast<std::size_t>(h);
}

// ---------------------------------------------------------------------------
// Substitution

const Formula* Substitution::find(VarId v) const {
  auto it = map_.find(v);
  return it == map_.end() ? nullptr : &it->second;
}

bool Substitution::idempotent() const {
  for (const auto& [v, f] : map_)
    if (f.apply(*this) != f) return false;
  return true;
}

bool Substitution::is_identity() const {
  return std::all_of(map_.begin(), map_.end(),
                     [](const auto& kv) { return kv.second.is_var() && kv.second.var() == kv.first; });
}

// ---------------------------------------------------------------------------
// Measures

FormulaMeasure measure(const Formula& f) {
  FormulaMeasure m;
  // Depth of each pending argument slot, processed in prefix order.
  std::vector<std::int64_t> depth_stack{0};
  for (const auto& c : f.cells()) {
    const std::int64_t depth = depth_stack.back();
    depth_stack.pop_back();
    m.height = std::max(m.height, depth);
    if (!c.is_var()) {
      ++m.size;
      for (int k = 0; k < c.arity; ++k) depth_stack.push_back(depth + 1);
    }
  }
  return m;
}

// ---------------------------------------------------------------------------
// Polish notation

Formula parse_polish(std::string_view text, const SymbolTable& symbols) {
  std::vector<Formula::Cell> cells;
  std::unordered_map<std::string, VarId> vars;
  std::size_t pending = 1;
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  skip_ws();
  while (pending > 0) {
    if (i >= text.size()) throw ParseError("premature end of Polish formula", i);
    const char ch = text[i];
    const std::size_t start = i;
    if (ch >= 'a' && ch <= 'z') {
      ++i;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      std::string name(text.substr(start, i - start));
      auto [it, inserted] = vars.try_emplace(name, static_cast<VarId>(vars.size()));
      cells.push_back({~it->second, 0});
      --pending;
    } else if (ch >= 'A' && ch <= 'Z') {
      auto id = symbols.by_letter(ch);
      if (!id) throw ParseError(std::string("unknown Polish letter '") + ch + "'", i);
      ++i;
      const int arity = symbols.arity(*id);
      cells.push_back({*id, arity});
      pending += static_cast<std::size_t>(arity);
      --pending;
    } else if (ch == '{') {
      const auto close = text.find('}', i);
      if (close == std::string_view::npos) throw ParseError("unterminated '{'", i);
      const auto name = text.substr(i + 1, close - i - 1);
      auto id = symbols.find(name);
      if (!id) throw ParseError("unknown symbol '" + std::string(name) + "'", i);
      i = close + 1;
      const int arity = symbols.arity(*id);
      cells.push_back({*id, arity});
      pending += static_cast<std::size_t>(arity);
      --pending;
    } else {
      throw ParseError(std::string("unexpected character '") + ch + "'", i);
    }
    skip_ws();
  }
  if (i != text.size()) throw ParseError("trailing input after formula", i);
  return Formula::from_cells(std::move(cells));
}

std::string print_polish(const Formula& f, const SymbolTable& symbols) {
  std::string out;
  std::vector<std::pair<VarId, std::size_t>> names;
  for (const auto& c : f.cells()) {
    if (c.is_var()) {
      auto it = std::find_if(names.begin(), names.end(), [&](const auto& p) { return p.first == c.var(); });
      std::size_t idx;
      if (it == names.end()) {
        idx = names.size();
        names.emplace_back(c.var(), idx);
      } else {
        idx = it->second;
      }
      out += SymbolTable::variable_name(idx);
    } else {
      const auto& e = symbols.entry(c.symbol());
      if (e.letter != 0)
        out += e.letter;
      else
        out += "{" + e.name + "}";
    }
  }
  return out;
}

namespace {

void infix_rec(std::span<const Formula::Cell> cells, std::size_t& pos, const SymbolTable& symbols,
               std::vector<std::pair<VarId, std::size_t>>& names, std::string& out, bool top) {
  const auto c = cells[pos++];
  if (c.is_var()) {
    auto it = std::find_if(names.begin(), names.end(), [&](const auto& p) { return p.first == c.var(); });
    std::size_t idx;
    if (it == names.end()) {
      idx = names.size();
      names.emplace_back(c.var(), idx);
    } else {
      idx = it->second;
    }
    out += SymbolTable::variable_name(idx);
    return;
  }
  if (c.symbol() == kImp) {
    if (!top) out += '(';
    infix_rec(cells, pos, symbols, names, out, false);
    out += "=>";
    infix_rec(cells, pos, symbols, names, out, false);
    if (!top) out += ')';
    return;
  }
  out += symbols.entry(c.symbol()).name;
  if (c.arity == 0) return;
  out += '(';
  for (int k = 0; k < c.arity; ++k) {
    if (k) out += ',';
    infix_rec(cells, pos, symbols, names, out, true);
  }
  out += ')';
}

}  // namespace

std::string print_infix(const Formula& f, const SymbolTable& symbols) {
  std::string out;
  std::vector<std::pair<VarId, std::size_t>> names;
  std::size_t pos = 0;
  if (!f.empty()) infix_rec(f.cells(), pos, symbols, names, out, true);
  return out;
}

Formula skolemize(const Formula& f, SymbolTable& symbols) {
  const auto vars = f.variables();
  std::vector<Formula::Cell> cells(f.cells().begin(), f.cells().end());
  for (auto& c : cells) {
    if (!c.is_var()) continue;
    const auto idx = static_cast<std::size_t>(std::find(vars.begin(), vars.end(), c.var()) - vars.begin());
    c = {symbols.declare(SymbolTable::variable_name(idx), 0), 0};
  }
  return Formula::from_cells(std::move(cells));
}

}  // namespace cdt
