#pragma once

// Finite input structures and the .str text format:
//
//   atoms: a b c
//   rel Edge/2: (a,b) (b,c)
//   fun F/1: (a)->b (b)->c (c)->a
//   val C: {0, 1}
//
// `val` binds a nullary constant to a hereditarily finite value built from
// ordinals, atoms and braces. Atom listing order is internal only.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "choiceless/errors.hpp"
#include "choiceless/hfset.hpp"
#include "choiceless/lexer.hpp"

namespace choiceless {

using AtomTuple = std::vector<std::uint32_t>;

struct RelationTable {
  std::size_t arity = 0;
  std::set<AtomTuple> tuples;
};

struct FunctionTable {
  std::size_t arity = 0;
  std::map<AtomTuple, std::uint32_t> values;
};

class InputStructure {
 public:
  std::size_t size() const { return atoms_.size(); }
  const std::vector<std::string>& atom_names() const { return atoms_; }
  const std::string& atom_name(std::uint32_t id) const { return atoms_.at(id); }

  std::uint32_t add_atom(const std::string& name) {
    if (index_.count(name)) throw ParseError("duplicate atom '" + name + "'");
    auto id = static_cast<std::uint32_t>(atoms_.size());
    atoms_.push_back(name);
    index_.emplace(name, id);
    return id;
  }

  std::optional<std::uint32_t> find_atom(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::uint32_t atom_id(const std::string& name) const {
    auto id = find_atom(name);
    if (!id) throw ParseError("unknown atom '" + name + "'");
    return *id;
  }

  RelationTable& relation(const std::string& name, std::size_t arity) {
    auto [it, inserted] = relations_.try_emplace(name);
    if (inserted) it->second.arity = arity;
    if (it->second.arity != arity)
      throw ParseError("relation '" + name + "' redeclared with arity " +
                       std::to_string(arity));
    return it->second;
  }

  FunctionTable& function(const std::string& name, std::size_t arity) {
    auto [it, inserted] = functions_.try_emplace(name);
    if (inserted) it->second.arity = arity;
    if (it->second.arity != arity)
      throw ParseError("function '" + name + "' redeclared with arity " +
                       std::to_string(arity));
    return it->second;
  }

  void add_tuple(const std::string& rel, AtomTuple tuple) {
    auto& table = relation(rel, tuple.size());
    for (auto id : tuple)
      if (id >= size()) throw ParseError("tuple outside the universe");
    table.tuples.insert(std::move(tuple));
  }

  void set_constant(const std::string& name, HfValue value) {
    constants_[name] = value;
  }

  const RelationTable* find_relation(const std::string& name) const {
    auto it = relations_.find(name);
    return it == relations_.end() ? nullptr : &it->second;
  }
  const FunctionTable* find_function(const std::string& name) const {
    auto it = functions_.find(name);
    return it == functions_.end() ? nullptr : &it->second;
  }
  std::optional<HfValue> find_constant(const std::string& name) const {
    auto it = constants_.find(name);
    if (it == constants_.end()) return std::nullopt;
    return it->second;
  }

  bool holds(const std::string& rel, const AtomTuple& tuple) const {
    const auto* r = find_relation(rel);
    return r != nullptr && r->tuples.count(tuple) > 0;
  }

  const std::map<std::string, RelationTable>& relations() const {
    return relations_;
  }
  const std::map<std::string, FunctionTable>& functions() const {
    return functions_;
  }
  const std::map<std::string, HfValue>& constants() const { return constants_; }

  /// Throws ParseError unless every input function is total on the universe.
  void validate() const {
    for (const auto& [name, fn] : functions_) {
      std::size_t expected = 1;
      for (std::size_t k = 0; k < fn.arity; ++k) expected *= size();
      if (fn.values.size() != expected)
        throw ParseError("function '" + name + "' is not total");
      for (const auto& [args, value] : fn.values) {
        if (value >= size()) throw ParseError("function value outside universe");
        for (auto a : args)
          if (a >= size()) throw ParseError("function argument outside universe");
      }
    }
  }

  /// Renames atoms: atom i of this structure becomes atom perm[i] of the
  /// result. The result is isomorphic to this structure.
  InputStructure permuted(const std::vector<std::uint32_t>& perm) const {
    InputStructure out;
    std::vector<std::string> names(size());
    for (std::uint32_t i = 0; i < size(); ++i) names[perm.at(i)] = atoms_[i];
    for (const auto& n : names) out.add_atom(n);
    auto map_tuple = [&](const AtomTuple& t) {
      AtomTuple r(t.size());
      for (std::size_t k = 0; k < t.size(); ++k) r[k] = perm[t[k]];
      return r;
    };
    for (const auto& [name, rel] : relations_) {
      auto& table = out.relation(name, rel.arity);
      for (const auto& t : rel.tuples) table.tuples.insert(map_tuple(t));
    }
    for (const auto& [name, fn] : functions_) {
      auto& table = out.function(name, fn.arity);
      for (const auto& [args, v] : fn.values)
        table.values[map_tuple(args)] = perm[v];
    }
    for (const auto& [name, v] : constants_)
      out.constants_[name] = rename_atoms(v, perm);
    return out;
  }

  static HfValue rename_atoms(HfValue v, const std::vector<std::uint32_t>& perm) {
    if (v.is_atom()) return HfValue::atom(perm.at(v.atom_id()));
    std::vector<HfValue> ms;
    for (HfValue m : v.members()) ms.push_back(rename_atoms(m, perm));
    return make_set(std::move(ms));
  }

 private:
  std::vector<std::string> atoms_;
  std::unordered_map<std::string, std::uint32_t> index_;
  std::map<std::string, RelationTable> relations_;
  std::map<std::string, FunctionTable> functions_;
  std::map<std::string, HfValue> constants_;
};

namespace detail {

inline HfValue parse_hf_literal(TokenStream& ts, const InputStructure& s) {
  if (ts.peek().kind == TokenKind::Int) return ordinal(ts.expect_int());
  if (ts.accept("{")) {
    std::vector<HfValue> elems;
    if (!ts.accept("}")) {
      do {
        elems.push_back(parse_hf_literal(ts, s));
      } while (ts.accept(","));
      ts.expect("}");
    }
    return make_set(std::move(elems));
  }
  const Token& t = ts.expect_ident();
  auto id = s.find_atom(t.text);
  if (!id) throw ParseError("unknown atom '" + t.text + "'", t.line, t.column);
  return HfValue::atom(*id);
}

inline std::uint32_t parse_atom_ref(TokenStream& ts, const InputStructure& s) {
  const Token& t = ts.expect_ident();
  auto id = s.find_atom(t.text);
  if (!id) throw ParseError("unknown atom '" + t.text + "'", t.line, t.column);
  return *id;
}

inline AtomTuple parse_atom_tuple(TokenStream& ts, const InputStructure& s,
                                  std::size_t arity) {
  const Token& open = ts.expect("(");
  AtomTuple t;
  if (!ts.peek().is(")")) {
    do {
      t.push_back(parse_atom_ref(ts, s));
    } while (ts.accept(","));
  }
  ts.expect(")");
  if (t.size() != arity)
    throw ParseError("tuple arity " + std::to_string(t.size()) +
                         " does not match declared arity " +
                         std::to_string(arity),
                     open.line, open.column);
  return t;
}

}  // namespace detail

/// Parses the .str format. Throws ParseError with line/column information.
inline InputStructure parse_structure(std::string_view text) {
  TokenStream ts(tokenize(text));
  InputStructure s;
  auto at_keyword = [&] {
    const Token& t = ts.peek();
    return t.kind == TokenKind::End ||
           (t.kind == TokenKind::Ident &&
            (t.text == "rel" || t.text == "fun" || t.text == "val" ||
             (t.text == "atoms" && ts.peek(1).is(":"))));
  };
  while (!ts.at_end()) {
    const Token& kw = ts.expect_ident();
    if (kw.text == "atoms") {
      ts.expect(":");
      while (!at_keyword()) s.add_atom(ts.expect_ident().text);
    } else if (kw.text == "rel" || kw.text == "fun") {
      std::string name = ts.expect_ident().text;
      ts.expect("/");
      std::size_t arity = ts.expect_int();
      ts.expect(":");
      if (kw.text == "rel") {
        s.relation(name, arity);
        while (!at_keyword())
          s.add_tuple(name, detail::parse_atom_tuple(ts, s, arity));
      } else {
        auto& fn = s.function(name, arity);
        while (!at_keyword()) {
          auto args = detail::parse_atom_tuple(ts, s, arity);
          ts.expect("->");
          fn.values[args] = detail::parse_atom_ref(ts, s);
        }
      }
    } else if (kw.text == "val") {
      std::string name = ts.expect_ident().text;
      ts.expect(":");
      s.set_constant(name, detail::parse_hf_literal(ts, s));
    } else {
      throw ParseError("expected 'atoms:', 'rel', 'fun' or 'val', found '" +
                           kw.text + "'",
                       kw.line, kw.column);
    }
  }
  s.validate();
  return s;
}

inline std::string write_structure(const InputStructure& s) {
  std::ostringstream out;
  out << "atoms:";
  for (const auto& a : s.atom_names()) out << ' ' << a;
  out << '\n';
  auto tuple = [&](const AtomTuple& t) {
    std::string r = "(";
    for (std::size_t k = 0; k < t.size(); ++k) {
      if (k) r += ',';
      r += s.atom_name(t[k]);
    }
    return r + ")";
  };
  for (const auto& [name, rel] : s.relations()) {
    out << "rel " << name << '/' << rel.arity << ':';
    for (const auto& t : rel.tuples) out << ' ' << tuple(t);
    out << '\n';
  }
  for (const auto& [name, fn] : s.functions()) {
    out << "fun " << name << '/' << fn.arity << ':';
    for (const auto& [args, v] : fn.values)
      out << ' ' << tuple(args) << "->" << s.atom_name(v);
    out << '\n';
  }
  for (const auto& [name, v] : s.constants()) {
    out << "val " << name << ": "
        << to_string(v, [&](std::uint32_t id) { return s.atom_name(id); })
        << '\n';
  }
  return out.str();
}

}  // namespace choiceless
