#pragma once

// Concrete syntax of BGS programs (.bgs).
//
// Header lines declare the vocabulary and the PTime bounds:
//
//   #steps 3 1               p(n) = 3 + n
//   #active 0 0 4            q(n) = 4n^2
//   #requires card
//   #rel Edge/2              input relation (Boolean)
//   #fun F/1                 input function
//   #const C                 nullary input value (`val` in .str files)
//   #dynamic Mode/0 [bool]   dynamic function; Halt and Output are implicit
//   #external MatMul2/2 [bool]
//   #let Succ(x) = Union(Pair(x, Pair(x, x)))
//
// Other lines starting with `#` are comments. The body is a rule:
//
//   skip
//   f(t1, ..., tj) := t0
//   if phi then R [else R] endif
//   do forall v in r, R enddo
//   do in parallel R; ...; R enddo
//
// Terms: integer literals (von Neumann ordinals), variables, applications,
// { t : v in r : phi } and { t : v in r }, the builtins true false not and
// or eq in empty Atoms Union TheUnique Pair Card, and the infix forms
// `a = b`, `a != b`, `a in b`, `a notin b`.

#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "choiceless/bgs/ast.hpp"
#include "choiceless/errors.hpp"
#include "choiceless/lexer.hpp"

namespace choiceless::bgs {

struct ParseOptions {
  /// When false, programs declaring `#requires card` are rejected.
  bool card_enabled = true;
};

namespace detail {

inline const std::set<std::string>& keywords() {
  static const std::set<std::string> k = {
      "skip",  "if",    "then",  "else",  "endif",     "do",   "forall",
      "in",    "notin", "parallel", "enddo", "true",   "false", "not",
      "and",   "or",    "eq",    "empty", "Atoms",     "Union", "TheUnique",
      "Pair",  "Card"};
  return k;
}

inline std::optional<Builtin> builtin_named(const std::string& s) {
  if (s == "Union") return Builtin::Union;
  if (s == "TheUnique") return Builtin::TheUnique;
  if (s == "Pair") return Builtin::Pair;
  if (s == "Card") return Builtin::Card;
  if (s == "eq") return Builtin::Eq;
  if (s == "in") return Builtin::In;
  if (s == "and") return Builtin::And;
  if (s == "or") return Builtin::Or;
  return std::nullopt;
}

class Parser {
 public:
  explicit Parser(ParseOptions options) : options_(options) {}

  Program parse(std::string_view text) {
    add_symbol("Halt", 0, true, SymbolKind::Dynamic, {});
    add_symbol("Output", 0, true, SymbolKind::Dynamic, {});
    prog_.halt = 0;
    prog_.output = 1;

    // Directives are blanked out of the body so line numbers survive.
    std::string body;
    std::vector<std::pair<std::size_t, std::string>> lets;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      std::size_t first = line.find_first_not_of(" \t\r");
      if (first != std::string::npos && line[first] == '#') {
        std::string rest = line.substr(first + 1);
        std::istringstream words(rest);
        std::string directive;
        words >> directive;
        if (directive == "let") {
          lets.emplace_back(lineno, line.substr(first + 4));
        } else if (is_directive(directive)) {
          header(directive, line.substr(first + 1 + directive.size()),
                 lineno, first + 2 + directive.size());
        }
        body += '\n';
        continue;
      }
      body += line;
      body += '\n';
    }

    for (const auto& [ln, text_of_let] : lets) parse_let(text_of_let, ln);

    if (prog_.requires_card && !options_.card_enabled)
      throw ParseError("program requires Card but the run is CPT-only");

    ts_ = TokenStream(tokenize(body));
    if (ts_.at_end()) ts_.fail("expected a rule");
    prog_.body = rule_seq({});
    if (!ts_.at_end()) ts_.fail("expected end of program");
    return std::move(prog_);
  }

 private:
  static bool is_directive(const std::string& d) {
    return d == "steps" || d == "active" || d == "requires" || d == "rel" ||
           d == "fun" || d == "const" || d == "dynamic" || d == "external";
  }

  void add_symbol(const std::string& name, std::size_t arity, bool boolean,
                  SymbolKind kind, SourcePos pos) {
    if (keywords().count(name))
      throw ParseError("'" + name + "' is a reserved word", pos.line,
                       pos.column);
    if (prog_.find_symbol(name))
      throw ParseError("symbol '" + name + "' declared twice", pos.line,
                       pos.column);
    prog_.symbols.push_back(Symbol{name, arity, boolean, kind});
  }

  void header(const std::string& directive, const std::string& rest,
              std::size_t lineno, std::size_t column) {
    TokenStream ts(tokenize(rest, lineno));
    SourcePos pos{lineno, column};
    if (directive == "steps" || directive == "active") {
      Polynomial p;
      while (!ts.at_end()) p.coeffs.push_back(ts.expect_int());
      if (p.coeffs.empty()) ts.fail("expected polynomial coefficients");
      (directive == "steps" ? prog_.steps : prog_.active) = p;
      return;
    }
    if (directive == "requires") {
      const Token& t = ts.expect_ident();
      if (t.text != "card")
        throw ParseError("unknown requirement '" + t.text + "'", t.line,
                         t.column);
      prog_.requires_card = true;
      return;
    }
    std::string name = ts.expect_ident().text;
    std::size_t ar = 0;
    if (directive != "const") {
      ts.expect("/");
      ar = ts.expect_int();
    }
    bool boolean = false;
    if (ts.peek().is("bool")) {
      ts.next();
      boolean = true;
    }
    if (!ts.at_end()) ts.fail("unexpected text after declaration");
    if (directive == "rel") {
      add_symbol(name, ar, true, SymbolKind::InputRelation, pos);
    } else if (directive == "fun") {
      add_symbol(name, ar, boolean, SymbolKind::InputFunction, pos);
    } else if (directive == "const") {
      add_symbol(name, 0, false, SymbolKind::Constant, pos);
    } else if (directive == "dynamic") {
      add_symbol(name, ar, boolean, SymbolKind::Dynamic, pos);
    } else {
      add_symbol(name, ar, boolean, SymbolKind::External, pos);
    }
  }

  void parse_let(const std::string& text, std::size_t lineno) {
    ts_ = TokenStream(tokenize(text, lineno));
    const Token& name = ts_.expect_ident();
    if (keywords().count(name.text) || prog_.find_symbol(name.text) ||
        find_macro(name.text))
      throw ParseError("'" + name.text + "' cannot be redefined", name.line,
                       name.column);
    Macro m;
    m.name = name.text;
    if (ts_.accept("(")) {
      if (!ts_.peek().is(")")) {
        do {
          const Token& p = ts_.expect_ident();
          if (keywords().count(p.text))
            throw ParseError("'" + p.text + "' is a reserved word", p.line,
                             p.column);
          m.params.push_back(p.text);
        } while (ts_.accept(","));
      }
      ts_.expect(")");
    }
    ts_.expect("=");
    scope_ = m.params;
    m.body = term();
    scope_.clear();
    if (!ts_.at_end()) ts_.fail("unexpected text after definition");
    prog_.macros.push_back(std::move(m));
  }

  std::optional<std::size_t> find_macro(const std::string& name) const {
    for (std::size_t i = 0; i < prog_.macros.size(); ++i)
      if (prog_.macros[i].name == name) return i;
    return std::nullopt;
  }

  // ---- rules --------------------------------------------------------------

  bool at_terminator(const std::vector<std::string_view>& terms) const {
    if (ts_.at_end()) return true;
    for (auto t : terms)
      if (ts_.peek().is(t)) return true;
    return false;
  }

  RulePtr rule_seq(const std::vector<std::string_view>& terminators) {
    SourcePos pos = here();
    std::vector<RulePtr> rules;
    rules.push_back(rule());
    while (true) {
      while (ts_.accept(";")) {
      }
      if (at_terminator(terminators)) break;
      rules.push_back(rule());
    }
    if (rules.size() == 1) return rules.front();
    return make_rule(Rule::Par{std::move(rules)}, pos);
  }

  RulePtr rule() {
    SourcePos pos = here();
    if (ts_.accept("skip")) return make_rule(Rule::Skip{}, pos);
    if (ts_.accept("if")) {
      TermPtr cond = term();
      require_boolean(cond, "if condition");
      ts_.expect("then");
      RulePtr then_rule = rule_seq({"else", "endif"});
      RulePtr else_rule = make_rule(Rule::Skip{}, here());
      if (ts_.accept("else")) else_rule = rule_seq({"endif"});
      ts_.expect("endif");
      return make_rule(Rule::Conditional{cond, then_rule, else_rule}, pos);
    }
    if (ts_.accept("do")) {
      if (ts_.accept("forall")) {
        std::string var = binder();
        ts_.expect("in");
        TermPtr range = term();
        ts_.expect(",");
        scope_.push_back(var);
        RulePtr body = rule_seq({"enddo"});
        scope_.pop_back();
        ts_.expect("enddo");
        return make_rule(Rule::Forall{var, scope_.size(), range, body}, pos);
      }
      ts_.expect("in");
      ts_.expect("parallel");
      RulePtr inner = rule_seq({"enddo"});
      ts_.expect("enddo");
      if (std::holds_alternative<Rule::Par>(inner->node)) return inner;
      return make_rule(Rule::Par{{inner}}, pos);
    }
    if (ts_.peek().kind != TokenKind::Ident || keywords().count(ts_.peek().text))
      ts_.fail("expected a rule");
    const Token& name = ts_.next();
    auto sym = prog_.find_symbol(name.text);
    if (!sym || prog_.symbols[*sym].kind != SymbolKind::Dynamic)
      throw ParseError("'" + name.text + "' is not a dynamic function",
                       name.line, name.column);
    std::vector<TermPtr> args = optional_args();
    const Symbol& s = prog_.symbols[*sym];
    if (args.size() != s.arity)
      throw ParseError("arity mismatch: '" + s.name + "' takes " +
                           std::to_string(s.arity) + " arguments",
                       name.line, name.column);
    ts_.expect(":=");
    TermPtr value = term();
    if (s.boolean && !value->boolean)
      throw ParseError("Boolean function '" + s.name +
                           "' must be assigned a Boolean term",
                       value->pos.line, value->pos.column);
    return make_rule(Rule::Update{*sym, std::move(args), value}, pos);
  }

  std::string binder() {
    const Token& v = ts_.expect_ident();
    if (keywords().count(v.text) || prog_.find_symbol(v.text) ||
        find_macro(v.text))
      throw ParseError("'" + v.text + "' cannot be used as a variable", v.line,
                       v.column);
    return v.text;
  }

  // ---- terms --------------------------------------------------------------

  TermPtr term() {
    TermPtr lhs = and_term();
    while (ts_.peek().is("or")) {
      SourcePos pos = here();
      ts_.next();
      TermPtr rhs = and_term();
      lhs = builtin(Builtin::Or, {lhs, rhs}, pos);
    }
    return lhs;
  }

  TermPtr and_term() {
    TermPtr lhs = not_term();
    while (ts_.peek().is("and")) {
      SourcePos pos = here();
      ts_.next();
      TermPtr rhs = not_term();
      lhs = builtin(Builtin::And, {lhs, rhs}, pos);
    }
    return lhs;
  }

  TermPtr not_term() {
    if (ts_.peek().is("not")) {
      SourcePos pos = here();
      ts_.next();
      return builtin(Builtin::Not, {not_term()}, pos);
    }
    return comparison();
  }

  TermPtr comparison() {
    TermPtr lhs = primary();
    SourcePos pos = here();
    if (ts_.accept("=")) return builtin(Builtin::Eq, {lhs, primary()}, pos);
    if (ts_.accept("!="))
      return builtin(Builtin::Not, {builtin(Builtin::Eq, {lhs, primary()}, pos)},
                     pos);
    if (ts_.peek().is("in") && !ts_.peek(1).is("(")) {
      ts_.next();
      return builtin(Builtin::In, {lhs, primary()}, pos);
    }
    if (ts_.accept("notin"))
      return builtin(Builtin::Not, {builtin(Builtin::In, {lhs, primary()}, pos)},
                     pos);
    return lhs;
  }

  TermPtr primary() {
    SourcePos pos = here();
    const Token& t = ts_.peek();
    if (t.kind == TokenKind::Int) {
      std::size_t n = ts_.expect_int();
      return literal(ordinal(n), false, pos);
    }
    if (ts_.accept("(")) {
      TermPtr inner = term();
      ts_.expect(")");
      return inner;
    }
    if (ts_.accept("{")) return comprehension(pos);
    if (t.kind != TokenKind::Ident) ts_.fail("expected a term");
    std::string name = ts_.next().text;

    if (name == "true") return builtin(Builtin::True, {}, pos);
    if (name == "false") return builtin(Builtin::False, {}, pos);
    if (name == "empty") return builtin(Builtin::Empty, {}, pos);
    if (name == "Atoms") return builtin(Builtin::Atoms, {}, pos);
    if (auto b = builtin_named(name)) {
      std::vector<TermPtr> args = call_args(name, arity(*b), pos);
      if (*b == Builtin::Card && !prog_.requires_card)
        throw ParseError("Card used without '#requires card'", pos.line,
                         pos.column);
      return builtin(*b, std::move(args), pos);
    }
    if (keywords().count(name))
      throw ParseError("unexpected '" + name + "'", pos.line, pos.column);

    for (std::size_t k = scope_.size(); k-- > 0;) {
      if (scope_[k] == name) {
        auto term = std::make_shared<Term>();
        term->node = Term::Variable{name, k};
        term->pos = pos;
        return term;
      }
    }
    if (auto m = find_macro(name)) {
      const Macro& macro = prog_.macros[*m];
      std::vector<TermPtr> args = optional_args();
      if (args.size() != macro.params.size())
        throw ParseError("arity mismatch: '" + name + "' takes " +
                             std::to_string(macro.params.size()) + " arguments",
                         pos.line, pos.column);
      auto term = std::make_shared<Term>();
      term->node = Term::MacroCall{*m, std::move(args)};
      term->boolean = macro.body->boolean;
      term->pos = pos;
      return term;
    }
    if (auto s = prog_.find_symbol(name)) {
      const Symbol& sym = prog_.symbols[*s];
      std::vector<TermPtr> args = optional_args();
      if (args.size() != sym.arity)
        throw ParseError("arity mismatch: '" + name + "' takes " +
                             std::to_string(sym.arity) + " arguments",
                         pos.line, pos.column);
      auto term = std::make_shared<Term>();
      term->node = Term::SymbolCall{*s, std::move(args)};
      term->boolean = sym.boolean;
      term->pos = pos;
      return term;
    }
    throw ParseError("unbound variable '" + name + "'", pos.line, pos.column);
  }

  // `{ t : v in r : phi }`. The binder follows the body textually, so the
  // range and guard are parsed first and the body afterwards with v in scope.
  TermPtr comprehension(SourcePos pos) {
    std::size_t body_start = ts_.position();
    int depth = 0;
    while (true) {
      const Token& t = ts_.peek();
      if (t.kind == TokenKind::End) ts_.fail("unterminated comprehension");
      if (t.is("(") || t.is("{")) ++depth;
      if (t.is(")") || t.is("}")) {
        if (depth == 0) ts_.fail("expected ':' in comprehension");
        --depth;
      }
      if (depth == 0 && t.is(":")) break;
      ts_.next();
    }
    ts_.expect(":");
    std::string var = binder();
    ts_.expect("in");
    TermPtr range = term();
    TermPtr guard;
    scope_.push_back(var);
    if (ts_.accept(":")) {
      guard = term();
      require_boolean(guard, "comprehension guard");
    } else {
      guard = builtin(Builtin::True, {}, pos);
    }
    ts_.expect("}");
    std::size_t end = ts_.position();

    ts_.seek(body_start);
    TermPtr body = term();
    if (!ts_.peek().is(":")) ts_.fail("expected ':' in comprehension");
    scope_.pop_back();
    ts_.seek(end);

    auto t = std::make_shared<Term>();
    t->node = Term::Comprehension{var, scope_.size(), body, range, guard};
    t->pos = pos;
    return t;
  }

  std::vector<TermPtr> optional_args() {
    std::vector<TermPtr> args;
    if (!ts_.accept("(")) return args;
    if (!ts_.peek().is(")")) {
      do {
        args.push_back(term());
      } while (ts_.accept(","));
    }
    ts_.expect(")");
    return args;
  }

  std::vector<TermPtr> call_args(const std::string& name, std::size_t n,
                                 SourcePos pos) {
    if (!ts_.peek().is("(")) ts_.fail("expected '(' after '" + name + "'");
    std::vector<TermPtr> args = optional_args();
    if (args.size() != n)
      throw ParseError("arity mismatch: '" + name + "' takes " +
                           std::to_string(n) + " arguments",
                       pos.line, pos.column);
    return args;
  }

  TermPtr builtin(Builtin op, std::vector<TermPtr> args, SourcePos pos) {
    if (op == Builtin::Not || op == Builtin::And || op == Builtin::Or)
      for (const auto& a : args) require_boolean(a, "logical connective");
    auto t = std::make_shared<Term>();
    t->node = Term::BuiltinCall{op, std::move(args)};
    t->boolean = is_boolean(op);
    t->pos = pos;
    return t;
  }

  TermPtr literal(HfValue v, bool boolean, SourcePos pos) {
    auto t = std::make_shared<Term>();
    t->node = Term::Literal{v};
    t->boolean = boolean;
    t->pos = pos;
    return t;
  }

  static void require_boolean(const TermPtr& t, const std::string& where) {
    if (!t->boolean)
      throw ParseError(where + " must be a Boolean term", t->pos.line,
                       t->pos.column);
  }

  RulePtr make_rule(decltype(Rule::node) node, SourcePos pos) {
    auto r = std::make_shared<Rule>();
    r->node = std::move(node);
    r->pos = pos;
    return r;
  }

  SourcePos here() const { return {ts_.peek().line, ts_.peek().column}; }

  ParseOptions options_;
  Program prog_;
  TokenStream ts_{std::vector<Token>{Token{}}};
  std::vector<std::string> scope_;
};

}  // namespace detail

/// Parses a .bgs program. Throws ParseError on syntax errors, arity
/// mismatches, Boolean-typing violations and unbound variables.
inline Program parse_program(std::string_view text, ParseOptions options = {}) {
  return detail::Parser(options).parse(text);
}

}  // namespace choiceless::bgs
