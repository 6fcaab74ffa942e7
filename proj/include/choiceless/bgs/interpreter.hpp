#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "choiceless/bgs/ast.hpp"
#include "choiceless/errors.hpp"
#include "choiceless/hfset.hpp"
#include "choiceless/structure.hpp"

namespace choiceless::bgs {

using Args = std::vector<HfValue>;

struct ArgsHash {
  std::size_t operator()(const Args& args) const {
    std::size_t h = args.size();
    for (HfValue v : args) h = choiceless::detail::mix_hash(h, v.hash());
    return h;
  }
};

/// Host-supplied static functions, e.g. matrix multiplication used as an
/// "external" function by the power program.
struct ExternalFunction {
  std::size_t arity = 0;
  std::function<HfValue(std::span<const HfValue>)> fn;
};
using Externals = std::map<std::string, ExternalFunction>;

/// Dynamic function tables. Locations not present hold ordinal 0.
class State {
 public:
  explicit State(const Program& prog) : tables_(prog.symbols.size()) {}

  HfValue get(std::size_t symbol, const Args& args) const {
    const auto& table = tables_.at(symbol);
    auto it = table.find(args);
    return it == table.end() ? ordinal(0) : it->second;
  }

  void set(std::size_t symbol, const Args& args, HfValue value) {
    auto& table = tables_.at(symbol);
    if (value == ordinal(0))
      table.erase(args);
    else
      table[args] = value;
  }

  /// Non-default entries of one dynamic function.
  const std::unordered_map<Args, HfValue, ArgsHash>& table(
      std::size_t symbol) const {
    return tables_.at(symbol);
  }

  friend bool operator==(const State& a, const State& b) {
    return a.tables_ == b.tables_;
  }

 private:
  std::vector<std::unordered_map<Args, HfValue, ArgsHash>> tables_;
};

struct UpdateTriple {
  std::size_t symbol;
  Args args;
  HfValue value;
};
using UpdateSet = std::vector<UpdateTriple>;

/// Two triples at the same location with different values.
inline bool has_clash(const UpdateSet& updates) {
  std::vector<const UpdateTriple*> sorted;
  sorted.reserve(updates.size());
  for (const auto& u : updates) sorted.push_back(&u);
  auto location_less = [](const UpdateTriple* a, const UpdateTriple* b) {
    if (a->symbol != b->symbol) return a->symbol < b->symbol;
    return std::lexicographical_compare(a->args.begin(), a->args.end(),
                                        b->args.begin(), b->args.end(),
                                        HfLess{});
  };
  std::sort(sorted.begin(), sorted.end(), location_less);
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    const auto* a = sorted[i - 1];
    const auto* b = sorted[i];
    if (a->symbol == b->symbol && a->args == b->args && !(a->value == b->value))
      return true;
  }
  return false;
}

/// Applies a clash-free update set simultaneously; leaves the state unchanged
/// and returns false if the set contains a clash.
inline bool apply_updates(State& state, const UpdateSet& updates) {
  if (has_clash(updates)) return false;
  for (const auto& u : updates) state.set(u.symbol, u.args, u.value);
  return true;
}

inline State fire(const State& state, const UpdateSet& updates) {
  State next = state;
  apply_updates(next, updates);
  return next;
}

/// Hereditary closure of everything involved in fired updates.
class ActiveSet {
 public:
  void add(HfValue v) {
    std::vector<HfValue> stack{v};
    while (!stack.empty()) {
      HfValue x = stack.back();
      stack.pop_back();
      // Members of an already active value are already active.
      if (!seen_.insert(x).second) continue;
      for (HfValue m : x.members()) stack.push_back(m);
    }
  }
  void add(const UpdateSet& updates) {
    for (const auto& u : updates) {
      for (HfValue a : u.args) add(a);
      add(u.value);
    }
  }
  std::size_t size() const { return seen_.size(); }

 private:
  std::unordered_set<HfValue, HfHash> seen_;
};

/// Number of active elements after firing the given update sets in order.
inline std::size_t active_count(std::span<const UpdateSet> trace) {
  ActiveSet active;
  for (const auto& u : trace) active.add(u);
  return active.size();
}

using Env = std::vector<HfValue>;

/// A program bound to an input structure and host externals.
class Machine {
 public:
  Machine(const Program& prog, const InputStructure& input,
          const Externals& externals = {}, bool card_enabled = true)
      : prog_(prog), input_(input), card_enabled_(card_enabled) {
    bound_.resize(prog.symbols.size());
    for (std::size_t i = 0; i < prog.symbols.size(); ++i) {
      const Symbol& s = prog.symbols[i];
      Binding& b = bound_[i];
      switch (s.kind) {
        case SymbolKind::InputRelation:
          b.relation = input.find_relation(s.name);
          if (b.relation == nullptr || b.relation->arity != s.arity)
            throw Error("input structure lacks relation " + s.name + "/" +
                        std::to_string(s.arity));
          break;
        case SymbolKind::InputFunction:
          b.function = input.find_function(s.name);
          if (b.function == nullptr || b.function->arity != s.arity)
            throw Error("input structure lacks function " + s.name + "/" +
                        std::to_string(s.arity));
          break;
        case SymbolKind::Constant: {
          auto c = input.find_constant(s.name);
          if (!c) throw Error("input structure lacks value " + s.name);
          b.constant = *c;
          break;
        }
        case SymbolKind::External: {
          auto it = externals.find(s.name);
          if (it == externals.end() || it->second.arity != s.arity)
            throw Error("no external function " + s.name + "/" +
                        std::to_string(s.arity));
          b.external = &it->second;
          break;
        }
        case SymbolKind::Dynamic:
          break;
      }
    }
    std::vector<HfValue> atoms;
    for (std::uint32_t a = 0; a < input.size(); ++a)
      atoms.push_back(HfValue::atom(a));
    atoms_ = make_set(std::move(atoms));
  }

  const Program& program() const { return prog_; }
  const InputStructure& input() const { return input_; }

  HfValue eval(const State& state, Env& env, const Term& t) const {
    return std::visit(
        [&](const auto& node) { return eval_node(state, env, node); }, t.node);
  }

  /// Appends the updates produced by `r` to `out`.
  void collect(const State& state, Env& env, const Rule& r,
               UpdateSet& out) const {
    std::visit([&](const auto& node) { collect_node(state, env, node, out); },
               r.node);
  }

  UpdateSet collect_updates(const State& state, Env& env, const Rule& r) const {
    UpdateSet out;
    collect(state, env, r, out);
    return out;
  }

 private:
  struct Binding {
    const RelationTable* relation = nullptr;
    const FunctionTable* function = nullptr;
    HfValue constant;
    const ExternalFunction* external = nullptr;
  };

  Args eval_args(const State& state, Env& env,
                 const std::vector<TermPtr>& args) const {
    Args out;
    out.reserve(args.size());
    for (const auto& a : args) out.push_back(eval(state, env, *a));
    return out;
  }

  bool to_atom_tuple(const Args& args, AtomTuple& tuple) const {
    tuple.resize(args.size());
    for (std::size_t k = 0; k < args.size(); ++k) {
      if (!args[k].is_atom() || args[k].atom_id() >= input_.size())
        return false;
      tuple[k] = args[k].atom_id();
    }
    return true;
  }

  HfValue eval_node(const State&, Env& env, const Term::Variable& v) const {
    return env.at(v.slot);
  }

  HfValue eval_node(const State&, Env&, const Term::Literal& l) const {
    return l.value;
  }

  HfValue eval_node(const State& state, Env& env,
                    const Term::BuiltinCall& c) const {
    auto arg = [&](std::size_t k) { return eval(state, env, *c.args[k]); };
    switch (c.op) {
      case Builtin::True:
        return truth(true);
      case Builtin::False:
        return truth(false);
      case Builtin::Empty:
        return empty_set();
      case Builtin::Atoms:
        return atoms_;
      case Builtin::Not:
        return truth(!is_true(arg(0)));
      case Builtin::And:
        return truth(is_true(arg(0)) && is_true(arg(1)));
      case Builtin::Or:
        return truth(is_true(arg(0)) || is_true(arg(1)));
      case Builtin::Eq:
        return truth(arg(0) == arg(1));
      case Builtin::In: {
        HfValue x = arg(0);
        HfValue s = arg(1);
        return truth(s.is_set() && s.contains(x));
      }
      case Builtin::Union:
        return union_all(arg(0));
      case Builtin::TheUnique:
        return the_unique(arg(0));
      case Builtin::Pair:
        return pair(arg(0), arg(1));
      case Builtin::Card:
        if (!card_enabled_)
          throw UnsupportedSymbolError("Card is not available in a CPT run");
        return card(arg(0));
    }
    return ordinal(0);
  }

  HfValue eval_node(const State& state, Env& env,
                    const Term::SymbolCall& c) const {
    const Symbol& s = prog_.symbols[c.symbol];
    const Binding& b = bound_[c.symbol];
    Args args = eval_args(state, env, c.args);
    switch (s.kind) {
      case SymbolKind::Dynamic:
        return state.get(c.symbol, args);
      case SymbolKind::Constant:
        return b.constant;
      case SymbolKind::External:
        return b.external->fn(args);
      case SymbolKind::InputRelation: {
        AtomTuple t;
        if (!to_atom_tuple(args, t)) return truth(false);
        return truth(b.relation->tuples.count(t) > 0);
      }
      case SymbolKind::InputFunction: {
        AtomTuple t;
        if (!to_atom_tuple(args, t)) return ordinal(0);
        auto it = b.function->values.find(t);
        if (it == b.function->values.end()) return ordinal(0);
        return HfValue::atom(it->second);
      }
    }
    return ordinal(0);
  }

  HfValue eval_node(const State& state, Env& env,
                    const Term::MacroCall& c) const {
    const Macro& m = prog_.macros[c.macro];
    Env inner = eval_args(state, env, c.args);
    return eval(state, inner, *m.body);
  }

  HfValue eval_node(const State& state, Env& env,
                    const Term::Comprehension& c) const {
    HfValue range = eval(state, env, *c.range);
    std::vector<HfValue> out;
    env.resize(c.slot + 1);
    for (HfValue v : range.members()) {
      env[c.slot] = v;
      if (is_true(eval(state, env, *c.guard)))
        out.push_back(eval(state, env, *c.body));
    }
    env.resize(c.slot);
    return make_set(std::move(out));
  }

  void collect_node(const State&, Env&, const Rule::Skip&, UpdateSet&) const {}

  void collect_node(const State& state, Env& env, const Rule::Update& u,
                    UpdateSet& out) const {
    Args args = eval_args(state, env, u.args);
    HfValue value = eval(state, env, *u.value);
    out.push_back(UpdateTriple{u.symbol, std::move(args), value});
  }

  void collect_node(const State& state, Env& env, const Rule::Conditional& c,
                    UpdateSet& out) const {
    if (is_true(eval(state, env, *c.condition)))
      collect(state, env, *c.then_rule, out);
    else
      collect(state, env, *c.else_rule, out);
  }

  void collect_node(const State& state, Env& env, const Rule::Forall& f,
                    UpdateSet& out) const {
    HfValue range = eval(state, env, *f.range);
    env.resize(f.slot + 1);
    for (HfValue v : range.members()) {
      env[f.slot] = v;
      collect(state, env, *f.body, out);
    }
    env.resize(f.slot);
  }

  void collect_node(const State& state, Env& env, const Rule::Par& p,
                    UpdateSet& out) const {
    for (const auto& r : p.rules) collect(state, env, *r, out);
  }

  const Program& prog_;
  const InputStructure& input_;
  bool card_enabled_;
  std::vector<Binding> bound_;
  HfValue atoms_;
};

struct RunBounds {
  Polynomial steps;
  Polynomial active;
  bool card_enabled = true;

  /// The bounds declared in the program header.
  static RunBounds from_program(const Program& prog, bool card_enabled = true) {
    if (!prog.steps || !prog.active)
      throw Error("program does not declare #steps and #active bounds");
    return RunBounds{*prog.steps, *prog.active, card_enabled};
  }
};

enum class Verdict { Accept, Reject, BoundExceeded };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Accept:
      return "accept";
    case Verdict::Reject:
      return "reject";
    case Verdict::BoundExceeded:
      return "bound-exceeded";
  }
  return "?";
}

struct RunOutcome {
  Verdict verdict = Verdict::BoundExceeded;
  std::uint64_t steps = 0;
  std::uint64_t peak_active = 0;
  HfValue output;
  State final_state;
};

/// Runs a closed program from the initial state until Halt = 1 or a bound is
/// crossed. Steps are counted as firings; the step bound p(n) caps them. The
/// active set accumulates after every firing and must stay within q(n).
inline RunOutcome run(const Program& prog, const InputStructure& input,
                      const RunBounds& bounds, const Externals& externals = {}) {
  if (prog.requires_card && !bounds.card_enabled)
    throw UnsupportedSymbolError("program requires Card but the run is CPT-only");
  Machine machine(prog, input, externals, bounds.card_enabled);
  const auto max_steps = bounds.steps(input.size());
  const auto max_active = bounds.active(input.size());

  RunOutcome out{Verdict::BoundExceeded, 0, 0, HfValue(), State(prog)};
  State& state = out.final_state;
  ActiveSet active;
  Env env;
  while (true) {
    if (out.steps >= max_steps) return out;
    UpdateSet updates = machine.collect_updates(state, env, *prog.body);
    ++out.steps;
    if (apply_updates(state, updates)) active.add(updates);
    out.peak_active = active.size();
    if (out.peak_active > max_active) return out;
    if (is_true(state.get(prog.halt, {}))) {
      out.output = state.get(prog.output, {});
      out.verdict = is_true(out.output) ? Verdict::Accept : Verdict::Reject;
      return out;
    }
  }
}

}  // namespace choiceless::bgs
