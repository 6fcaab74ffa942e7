#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "choiceless/hfset.hpp"

namespace choiceless::bgs {

enum class Builtin {
  True,
  False,
  Not,
  And,
  Or,
  Eq,
  In,
  Empty,
  Atoms,
  Union,
  TheUnique,
  Pair,
  Card,
};

inline bool is_boolean(Builtin b) {
  switch (b) {
    case Builtin::True:
    case Builtin::False:
    case Builtin::Not:
    case Builtin::And:
    case Builtin::Or:
    case Builtin::Eq:
    case Builtin::In:
      return true;
    default:
      return false;
  }
}

inline std::size_t arity(Builtin b) {
  switch (b) {
    case Builtin::Not:
    case Builtin::Union:
    case Builtin::TheUnique:
    case Builtin::Card:
      return 1;
    case Builtin::And:
    case Builtin::Or:
    case Builtin::Eq:
    case Builtin::In:
    case Builtin::Pair:
      return 2;
    default:
      return 0;
  }
}

enum class SymbolKind {
  InputRelation,  // Boolean, read from the input structure
  InputFunction,  // read from the input structure, 0 off the universe
  Constant,       // nullary `val` of the input structure
  Dynamic,        // state table, initially constantly 0
  External,       // supplied by the host (e.g. matrix multiplication)
};

struct Symbol {
  std::string name;
  std::size_t arity = 0;
  bool boolean = false;
  SymbolKind kind = SymbolKind::Dynamic;
};

struct SourcePos {
  std::size_t line = 0;
  std::size_t column = 0;
};

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  struct Variable {
    std::string name;
    std::size_t slot;
  };
  struct Literal {
    HfValue value;
  };
  struct BuiltinCall {
    Builtin op;
    std::vector<TermPtr> args;
  };
  struct SymbolCall {
    std::size_t symbol;
    std::vector<TermPtr> args;
  };
  struct MacroCall {
    std::size_t macro;
    std::vector<TermPtr> args;
  };
  /// { body(v) : v in range : guard(v) }
  struct Comprehension {
    std::string var;
    std::size_t slot;
    TermPtr body;
    TermPtr range;
    TermPtr guard;
  };

  std::variant<Variable, Literal, BuiltinCall, SymbolCall, MacroCall,
               Comprehension>
      node;
  /// Outermost constructor is a Boolean symbol.
  bool boolean = false;
  SourcePos pos;
};

struct Rule;
using RulePtr = std::shared_ptr<const Rule>;

struct Rule {
  struct Skip {};
  struct Update {
    std::size_t symbol;
    std::vector<TermPtr> args;
    TermPtr value;
  };
  struct Conditional {
    TermPtr condition;
    RulePtr then_rule;
    RulePtr else_rule;
  };
  struct Forall {
    std::string var;
    std::size_t slot;
    TermPtr range;
    RulePtr body;
  };
  /// Simultaneous block; its updates are the union of its children's.
  struct Par {
    std::vector<RulePtr> rules;
  };

  std::variant<Skip, Update, Conditional, Forall, Par> node;
  SourcePos pos;
};

/// A static function defined by a term over its parameters (`#let`).
struct Macro {
  std::string name;
  std::vector<std::string> params;
  TermPtr body;
};

/// Polynomial with nonnegative integer coefficients, constant term first.
struct Polynomial {
  std::vector<std::uint64_t> coeffs;

  boost::multiprecision::cpp_int operator()(std::size_t n) const {
    boost::multiprecision::cpp_int acc = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
      acc = acc * n + *it;
    return acc;
  }
};

struct Program {
  std::vector<Symbol> symbols;
  std::vector<Macro> macros;
  RulePtr body;
  std::optional<Polynomial> steps;
  std::optional<Polynomial> active;
  bool requires_card = false;
  std::size_t halt = 0;
  std::size_t output = 0;

  std::optional<std::size_t> find_symbol(const std::string& name) const {
    for (std::size_t i = 0; i < symbols.size(); ++i)
      if (symbols[i].name == name) return i;
    return std::nullopt;
  }
};

}  // namespace choiceless::bgs
