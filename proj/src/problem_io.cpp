#include "cdt/problem_io.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <set>
#include <unordered_map>

namespace cdt {

// ---------------------------------------------------------------------------
// Meredith step lists

const MeredithStep& MeredithProof::step(int number) const {
  for (const auto& s : steps)
    if (s.number == number) return s;
  throw Error("no step " + std::to_string(number));
}

std::vector<const MeredithStep*> MeredithProof::goals() const {
  std::vector<const MeredithStep*> out;
  for (const auto& s : steps)
    if (s.goal) out.push_back(&s);
  return out;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    lines.push_back(text.substr(0, nl));
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
  return lines;
}

}  // namespace

MeredithProof read_meredith(std::string_view text, SymbolTable& symbols) {
  MeredithProof proof;
  std::map<int, DTerm> resolved;
  const auto lines = split_lines(text);
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    std::string_view line = lines[ln];
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t line_no = ln + 1;
    MeredithStep step;
    if (line.front() == '*') {
      step.goal = true;
      line = trim(line.substr(1));
    }
    std::size_t i = 0;
    while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) ++i;
    if (i == 0 || i >= line.size() || line[i] != '.') throw ParseError("expected '<number>.'", i, line_no);
    step.number = std::stoi(std::string(line.substr(0, i)));
    if (!proof.steps.empty() && step.number <= proof.steps.back().number)
      throw MeredithError(MeredithError::Kind::Numbering, step.number, "step numbers must increase");
    std::string_view rest = line.substr(i + 1);
    const auto eq = rest.find('=');
    try {
      step.formula = parse_polish(trim(rest.substr(0, eq)), symbols);
      if (eq != std::string_view::npos) step.expression = parse_dnotation(trim(rest.substr(eq + 1)));
    } catch (const ParseError& e) {
      throw ParseError(e.what(), e.position(), line_no);
    }
    if (step.is_axiom()) {
      proof.axioms.add(step.number, step.formula);
      step.resolved = DTerm::leaf(step.number);
    } else {
      std::function<DTerm(const DTerm&)> subst = [&](const DTerm& d) -> DTerm {
        if (d.is_wildcard()) return d;
        if (d.is_leaf()) {
          auto it = resolved.find(d.axiom());
          if (it == resolved.end())
            throw MeredithError(MeredithError::Kind::ForwardReference, step.number,
                                "reference to step " + std::to_string(d.axiom()) + " which is not an earlier step");
          return it->second;
        }
        return DTerm::node(subst(d.major()), subst(d.minor()));
      };
      step.resolved = subst(*step.expression);
      const auto m = mgt(step.resolved, proof.axioms);
      if (!m) throw MeredithError(MeredithError::Kind::NoMgt, step.number, "the D-expression has no MGT");
      if (!m->alpha_equivalent(step.formula))
        throw MeredithError(MeredithError::Kind::MgtMismatch, step.number,
                            "stated " + print_polish(step.formula, symbols) + " but the MGT is " +
                                print_polish(*m, symbols));
    }
    resolved.emplace(step.number, step.resolved);
    proof.steps.push_back(std::move(step));
  }
  return proof;
}

std::string print_meredith(const MeredithProof& proof, const SymbolTable& symbols) {
  std::string out;
  for (const auto& s : proof.steps) {
    if (s.goal) out += '*';
    out += std::to_string(s.number) + ". " + print_polish(s.formula, symbols);
    if (s.expression) out += " = " + print_dnotation(*s.expression);
    out += '\n';
  }
  return out;
}

MeredithProof meredith_layout(const AxiomBase& axioms, const std::vector<DTerm>& goals) {
  MeredithProof proof;
  std::map<AxiomId, int> axiom_step;
  int next = 1;
  for (const auto& [id, f] : axioms.axioms()) {
    axiom_step.emplace(id, next);
    proof.axioms.add(next, f);
    MeredithStep s;
    s.number = next;
    s.formula = f.normalized();
    s.resolved = DTerm::leaf(next);
    proof.steps.push_back(std::move(s));
    ++next;
  }
  const DTermDag dag = compact(goals);
  const auto& entries = dag.entries();
  const auto refs = dag.reference_counts();
  std::vector<bool> is_root(entries.size(), false);
  for (const auto r : dag.roots()) {
    const auto& e = entries[static_cast<std::size_t>(r)];
    if (e.kind == DTerm::Kind::Wildcard) throw Error("a goal proof cannot be the wildcard alone");
    if (e.kind == DTerm::Kind::Leaf) {
      const auto it = axiom_step.find(e.axiom);
      if (it == axiom_step.end()) throw UnknownAxiom(e.axiom);
      proof.steps[static_cast<std::size_t>(it->second - 1)].goal = true;
    } else {
      is_root[static_cast<std::size_t>(r)] = true;
    }
  }
  std::vector<int> step_of(entries.size(), 0);
  std::vector<DTerm> full(entries.size());
  std::function<DTerm(std::size_t, bool)> expr = [&](std::size_t i, bool top) -> DTerm {
    const auto& e = entries[i];
    if (e.kind == DTerm::Kind::Wildcard) return DTerm::wildcard();
    if (e.kind == DTerm::Kind::Leaf) {
      const auto it = axiom_step.find(e.axiom);
      if (it == axiom_step.end()) throw UnknownAxiom(e.axiom);
      return DTerm::leaf(it->second);
    }
    if (!top && step_of[i]) return DTerm::leaf(step_of[i]);
    return DTerm::node(expr(static_cast<std::size_t>(e.major), false), expr(static_cast<std::size_t>(e.minor), false));
  };
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    if (e.kind == DTerm::Kind::Node)
      full[i] = DTerm::node(full[static_cast<std::size_t>(e.major)], full[static_cast<std::size_t>(e.minor)]);
    else if (e.kind == DTerm::Kind::Wildcard)
      full[i] = DTerm::wildcard();
    else
      full[i] = expr(i, true);
    if (e.kind != DTerm::Kind::Node || (refs[i] < 2 && !is_root[i])) continue;
    MeredithStep s;
    s.number = next;
    s.expression = expr(i, true);
    s.resolved = full[i];
    s.goal = is_root[i];
    const auto m = mgt(s.resolved, proof.axioms);
    if (!m) throw Error("proof has no MGT: " + print_dnotation(s.resolved));
    s.formula = m->normalized();
    step_of[i] = next++;
    proof.steps.push_back(std::move(s));
  }
  return proof;
}

// ---------------------------------------------------------------------------
// Clause files

const char* to_string(NotCdReason r) {
  switch (r) {
    case NotCdReason::Predicate: return "predicate";
    case NotCdReason::DetachmentForm: return "detachment-form";
    case NotCdReason::MultipleNonUnit: return "multiple-non-unit";
    case NotCdReason::NonAtomicGoal: return "non-atomic-goal";
    case NotCdReason::NonGroundGoal: return "non-ground-goal";
    case NotCdReason::Goal: return "goal";
    case NotCdReason::Axiom: return "axiom";
  }
  return "?";
}

namespace {

struct PTerm {
  std::string name;
  bool var = false;
  std::vector<PTerm> args;
};

struct Literal {
  bool positive = true;
  PTerm atom;
};

struct Clause {
  std::string name;
  std::string role;
  std::vector<Literal> literals;
};

class CnfParser {
 public:
  explicit CnfParser(std::string_view s) : s_(s) {}

  std::vector<Clause> file() {
    std::vector<Clause> out;
    for (;;) {
      skip();
      if (pos_ >= s_.size()) return out;
      const std::string kw = word();
      if (kw != "cnf") fail(kw.empty() ? "expected cnf(...)" : "unsupported statement '" + kw + "'");
      expect('(');
      Clause c;
      c.name = word();
      if (c.name.empty()) fail("expected a clause name");
      expect(',');
      c.role = word();
      if (c.role.empty()) fail("expected a role");
      expect(',');
      skip();
      if (peek() == '(') {
        ++pos_;
        c.literals = disjunction();
        expect(')');
      } else {
        c.literals = disjunction();
      }
      skip();
      if (peek() == ',') fail("clause annotations are not supported");
      expect(')');
      expect('.');
      out.push_back(std::move(c));
    }
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    const std::size_t line = 1 + static_cast<std::size_t>(std::count(s_.begin(), s_.begin() + static_cast<std::ptrdiff_t>(std::min(pos_, s_.size())), '\n'));
    throw ParseError(what, pos_, line);
  }
  void skip() {
    for (;;) {
      while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (pos_ < s_.size() && s_[pos_] == '%') {
        while (pos_ < s_.size() && s_[pos_] != '\n') ++pos_;
        continue;
      }
      if (s_.substr(pos_, 2) == "/*") {
        const auto end = s_.find("*/", pos_ + 2);
        if (end == std::string_view::npos) fail("unterminated comment");
        pos_ = end + 2;
        continue;
      }
      return;
    }
  }
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  void expect(char c) {
    skip();
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  std::string word() {
    skip();
    if (peek() == '\'') {
      const auto end = s_.find('\'', pos_ + 1);
      if (end == std::string_view::npos) fail("unterminated quoted name");
      std::string w(s_.substr(pos_ + 1, end - pos_ - 1));
      pos_ = end + 1;
      return w;
    }
    const std::size_t b = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    return std::string(s_.substr(b, pos_ - b));
  }
  std::vector<Literal> disjunction() {
    std::vector<Literal> out;
    for (;;) {
      skip();
      Literal l;
      if (peek() == '~') {
        ++pos_;
        l.positive = false;
      }
      l.atom = term();
      if (l.atom.var) fail("a literal must be an atom, not a variable");
      out.push_back(std::move(l));
      skip();
      if (peek() != '|') return out;
      ++pos_;
    }
  }
  PTerm term() {
    skip();
    const bool quoted = peek() == '\'';
    PTerm t;
    t.name = word();
    if (t.name.empty()) fail("expected a term");
    skip();
    // An uppercase name applied to arguments is a symbol, so the canonical
    // predicate P reads back.
    t.var = !quoted && peek() != '(' && (std::isupper(static_cast<unsigned char>(t.name[0])) || t.name[0] == '_');
    if (!t.var && peek() == '(') {
      ++pos_;
      for (;;) {
        t.args.push_back(term());
        skip();
        if (peek() == ',') {
          ++pos_;
          continue;
        }
        expect(')');
        break;
      }
    }
    return t;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

bool ground(const PTerm& t) {
  return !t.var && std::all_of(t.args.begin(), t.args.end(), [](const PTerm& a) { return ground(a); });
}

// Name of the binary functor if `c` is P(y) <- P(f(x,y)), P(x) up to
// literal order and variable names.
std::optional<std::string> detachment_functor(const Clause& c) {
  if (c.literals.size() != 3) return std::nullopt;
  const Literal* pos = nullptr;
  std::vector<const Literal*> neg;
  for (const auto& l : c.literals) {
    if (l.positive) {
      if (pos) return std::nullopt;
      pos = &l;
    } else {
      neg.push_back(&l);
    }
  }
  if (!pos || neg.size() != 2) return std::nullopt;
  const PTerm& y = pos->atom.args[0];
  if (!y.var) return std::nullopt;
  for (int k = 0; k < 2; ++k) {
    const PTerm& major = neg[k]->atom.args[0];
    const PTerm& x = neg[1 - k]->atom.args[0];
    if (!x.var || x.name == y.name || major.var || major.args.size() != 2) continue;
    if (major.args[0].var && major.args[0].name == x.name && major.args[1].var && major.args[1].name == y.name)
      return major.name;
  }
  return std::nullopt;
}

Detection reject(NotCdReason r, std::string message) {
  Detection d;
  d.reason = r;
  d.message = std::move(message);
  return d;
}

}  // namespace

Detection detect_cd_problem(std::string_view text, SymbolTable& symbols, std::string name) {
  const std::vector<Clause> clauses = CnfParser(text).file();
  if (clauses.empty()) return reject(NotCdReason::Goal, "no clauses");

  std::optional<std::string> predicate;
  for (const auto& c : clauses)
    for (const auto& l : c.literals) {
      if (l.atom.args.size() != 1)
        return reject(NotCdReason::Predicate, "clause " + c.name + ": predicate " + l.atom.name + " is not unary");
      if (predicate && *predicate != l.atom.name)
        return reject(NotCdReason::Predicate, "more than one predicate (" + *predicate + ", " + l.atom.name + ")");
      predicate = l.atom.name;
    }

  std::vector<const Clause*> goals, units, nonunits;
  for (const auto& c : clauses) {
    const bool all_negative =
        std::none_of(c.literals.begin(), c.literals.end(), [](const Literal& l) { return l.positive; });
    if (all_negative)
      goals.push_back(&c);
    else if (c.literals.size() == 1)
      units.push_back(&c);
    else
      nonunits.push_back(&c);
  }
  if (goals.empty()) return reject(NotCdReason::Goal, "no negative goal clause");
  if (goals.size() > 1) return reject(NotCdReason::Goal, "more than one negative clause");
  const Clause& goal = *goals.front();
  if (goal.literals.size() != 1)
    return reject(NotCdReason::NonAtomicGoal, "goal clause " + goal.name + " has " +
                                                  std::to_string(goal.literals.size()) + " literals");
  if (!ground(goal.literals[0].atom)) return reject(NotCdReason::NonGroundGoal, "goal clause " + goal.name + " has variables");
  if (nonunits.size() > 1)
    return reject(NotCdReason::MultipleNonUnit, std::to_string(nonunits.size()) + " non-unit clauses");
  if (nonunits.empty()) return reject(NotCdReason::DetachmentForm, "no detachment clause");
  const auto imp = detachment_functor(*nonunits.front());
  if (!imp)
    return reject(NotCdReason::DetachmentForm,
                  "clause " + nonunits.front()->name + " is not of the form P(y) <- P(x => y), P(x)");
  if (units.empty()) return reject(NotCdReason::Axiom, "no axioms");

  // Canonical vocabulary.
  std::map<std::string, std::pair<std::size_t, int>> arities;
  std::function<void(const PTerm&)> scan = [&](const PTerm& t) {
    if (t.var) return;
    arities.emplace(t.name, std::pair(arities.size(), static_cast<int>(t.args.size())));
    for (const auto& a : t.args) scan(a);
  };
  for (const Clause* c : units) scan(c->literals[0].atom.args[0]);
  scan(goal.literals[0].atom.args[0]);
  std::map<std::string, SymbolId> ids;
  for (const auto& [fname, info] : arities) {
    const int arity = info.second;
    if (fname == *imp) {
      if (arity != 2) return reject(NotCdReason::DetachmentForm, "implication symbol " + fname + " used with arity " + std::to_string(arity));
      ids[fname] = kImp;
    } else if ((fname == "not" || fname == "n") && arity == 1) {
      ids[fname] = kNot;
    } else if (fname == "imp" || fname == "not") {
      return reject(NotCdReason::Predicate, "symbol " + fname + " clashes with the canonical vocabulary");
    } else {
      ids[fname] = symbols.declare(fname, arity);
    }
  }
  std::function<Formula(const PTerm&, std::map<std::string, VarId>&)> convert =
      [&](const PTerm& t, std::map<std::string, VarId>& vars) -> Formula {
    if (t.var) return Formula::var(vars.emplace(t.name, static_cast<VarId>(vars.size())).first->second);
    std::vector<Formula> args;
    for (const auto& a : t.args) args.push_back(convert(a, vars));
    return Formula::app(ids.at(t.name), args);
  };

  CdProblem p;
  p.name = std::move(name);
  p.predicate = *predicate;
  p.implication = *imp;
  AxiomId next = 1;
  for (const Clause* c : units) {
    std::map<std::string, VarId> vars;
    p.axioms.add(next++, convert(c->literals[0].atom.args[0], vars).normalized());
  }
  std::map<std::string, VarId> none;
  p.goal = convert(goal.literals[0].atom.args[0], none);
  Detection d;
  d.problem = std::move(p);
  return d;
}

CdProblem read_cd_problem(std::string_view text, SymbolTable& symbols, std::string name) {
  Detection d = detect_cd_problem(text, symbols, std::move(name));
  if (!d.problem) throw NotCd(d.reason, std::string(to_string(d.reason)) + ": " + d.message);
  return std::move(*d.problem);
}

namespace {

void write_term(const Formula& f, const SymbolTable& symbols, std::string& out) {
  const auto cells = f.cells();
  std::size_t i = 0;
  std::function<void()> go = [&] {
    const auto c = cells[i++];
    if (c.is_var()) {
      out += "X" + std::to_string(c.var());
      return;
    }
    out += symbols.entry(c.symbol()).name;
    if (c.arity == 0) return;
    out += '(';
    for (int k = 0; k < c.arity; ++k) {
      if (k) out += ',';
      go();
    }
    out += ')';
  };
  go();
}

}  // namespace

std::string write_cd_problem(const CdProblem& p, const SymbolTable& symbols) {
  std::string out = "% " + p.name + "\n";
  out += "cnf(detachment, axiom, ~P(imp(X0,X1)) | ~P(X0) | P(X1)).\n";
  for (const auto& [id, f] : p.axioms.axioms()) {
    out += "cnf(axiom" + std::to_string(id) + ", axiom, P(";
    write_term(f.normalized(), symbols, out);
    out += ")).\n";
  }
  out += "cnf(goal, negated_conjecture, ~P(";
  write_term(p.goal, symbols, out);
  out += ")).\n";
  return out;
}

// ---------------------------------------------------------------------------
// Registry

void Registry::add(std::string name, const Formula& f) { entries_.push_back({std::move(name), f.normalized()}); }

Registry Registry::load(std::string_view text, const SymbolTable& symbols) {
  Registry r;
  const auto lines = split_lines(text);
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    const std::string_view line = trim(lines[ln]);
    if (line.empty() || line.front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos) throw ParseError("expected name<TAB>formula", 0, ln + 1);
    try {
      r.add(std::string(trim(line.substr(0, tab))), parse_polish(trim(line.substr(tab + 1)), symbols));
    } catch (const ParseError& e) {
      throw ParseError(e.what(), e.position(), ln + 1);
    }
  }
  return r;
}

std::string Registry::print(const SymbolTable& symbols) const {
  std::string out;
  for (const auto& e : entries_) out += e.name + "\t" + print_polish(e.formula, symbols) + "\n";
  return out;
}

std::vector<std::string> Registry::lookup(const Formula& f) const {
  const Formula key = f.normalized();
  std::vector<std::string> out;
  for (const auto& e : entries_)
    if (e.formula == key) out.push_back(e.name);
  return out;
}

}  // namespace cdt
