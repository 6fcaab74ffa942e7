#pragma once

// Hereditarily finite sets over a finite set of atoms.
//
// Every value is interned: two HfValues are equal iff they point at the same
// node, so equality is a pointer comparison regardless of membership depth.
// Set members are stored duplicate-free and sorted by an internal total order
// (atoms first, by id; then sets by cardinality and lexicographically by
// members). That order is an implementation detail: none of the builtins
// below lets a caller observe it, except compare() which exists for
// containers and printing.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

namespace choiceless {

namespace detail {
struct HfNode;
}

class HfValue {
 public:
  /// The empty set, which is also the ordinal 0 and the truth value false.
  HfValue();

  static HfValue atom(std::uint32_t id);

  bool is_atom() const;
  bool is_set() const { return !is_atom(); }
  std::uint32_t atom_id() const;

  /// Members in canonical order; empty for atoms.
  std::span<const HfValue> members() const;
  std::size_t size() const { return members().size(); }
  bool empty() const { return members().empty(); }
  bool contains(HfValue x) const;

  /// The natural number this value denotes, if it is a von Neumann ordinal.
  std::optional<std::size_t> as_ordinal() const;

  std::size_t hash() const;
  const detail::HfNode* node() const { return node_; }

  friend bool operator==(HfValue a, HfValue b) { return a.node_ == b.node_; }

 private:
  friend class HfStore;
  explicit HfValue(const detail::HfNode* node) : node_(node) {}

  const detail::HfNode* node_;
};

namespace detail {

struct HfNode {
  bool is_atom = false;
  std::uint32_t atom_id = 0;
  std::vector<HfValue> members;
  std::size_t hash = 0;
  // -1 unless the node is the ordinal {0,...,n-1}.
  std::int64_t ordinal = -1;
};

inline std::size_t mix_hash(std::size_t seed, std::size_t value) {
  return seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

inline std::strong_ordering compare_nodes(const HfNode* a, const HfNode* b) {
  if (a == b) return std::strong_ordering::equal;
  if (a->is_atom != b->is_atom)
    return a->is_atom ? std::strong_ordering::less
                      : std::strong_ordering::greater;
  if (a->is_atom) return a->atom_id <=> b->atom_id;
  if (a->members.size() != b->members.size())
    return a->members.size() <=> b->members.size();
  for (std::size_t i = 0; i < a->members.size(); ++i) {
    auto c = compare_nodes(a->members[i].node(), b->members[i].node());
    if (c != std::strong_ordering::equal) return c;
  }
  return std::strong_ordering::equal;
}

}  // namespace detail

/// Internal total order; consistent with equality.
inline std::strong_ordering compare(HfValue a, HfValue b) {
  return detail::compare_nodes(a.node(), b.node());
}

struct HfLess {
  bool operator()(HfValue a, HfValue b) const { return compare(a, b) < 0; }
};

struct HfHash {
  std::size_t operator()(HfValue v) const { return v.hash(); }
};

/// The interning table. Nodes are never freed; the table is the only
/// synchronization point, so values can be built from several threads.
class HfStore {
 public:
  static HfStore& instance() {
    static HfStore store;
    return store;
  }

  HfValue atom(std::uint32_t id) {
    std::lock_guard lock(mu_);
    while (atoms_.size() <= id) {
      auto& node = nodes_.emplace_back();
      node.is_atom = true;
      node.atom_id = static_cast<std::uint32_t>(atoms_.size());
      node.hash = detail::mix_hash(0x5157, node.atom_id);
      atoms_.push_back(&node);
    }
    return HfValue(atoms_[id]);
  }

  /// `members` must already be sorted by compare() and duplicate-free.
  HfValue set_from_canonical(std::vector<HfValue> members) {
    std::lock_guard lock(mu_);
    return HfValue(intern_locked(std::move(members)));
  }

  HfValue ordinal(std::size_t n) {
    std::lock_guard lock(mu_);
    while (ordinals_.size() <= n) {
      std::vector<HfValue> members(ordinals_.begin(), ordinals_.end());
      ordinals_.push_back(HfValue(intern_locked(std::move(members))));
    }
    return ordinals_[n];
  }

  const detail::HfNode* empty_node() {
    std::lock_guard lock(mu_);
    return empty_;
  }

  std::size_t node_count() {
    std::lock_guard lock(mu_);
    return nodes_.size();
  }

 private:
  struct NodeHash {
    std::size_t operator()(const detail::HfNode* n) const { return n->hash; }
  };
  struct NodeEq {
    bool operator()(const detail::HfNode* a, const detail::HfNode* b) const {
      return a->members == b->members;
    }
  };

  HfStore() { empty_ = intern_locked({}); }

  const detail::HfNode* intern_locked(std::vector<HfValue> members) {
    std::size_t h = detail::mix_hash(0x5e7, members.size());
    for (const HfValue& m : members)
      h = detail::mix_hash(h, std::hash<const void*>{}(m.node()));
    detail::HfNode probe;
    probe.members = std::move(members);
    probe.hash = h;
    if (auto it = table_.find(&probe); it != table_.end()) return *it;

    std::int64_t ordinal = static_cast<std::int64_t>(probe.members.size());
    for (std::size_t k = 0; k < probe.members.size(); ++k) {
      if (probe.members[k].node()->ordinal != static_cast<std::int64_t>(k)) {
        ordinal = -1;
        break;
      }
    }
    probe.ordinal = ordinal;
    auto& node = nodes_.emplace_back(std::move(probe));
    table_.insert(&node);
    return &node;
  }

  std::mutex mu_;
  std::deque<detail::HfNode> nodes_;
  std::unordered_set<const detail::HfNode*, NodeHash, NodeEq> table_;
  std::vector<const detail::HfNode*> atoms_;
  std::vector<HfValue> ordinals_;
  const detail::HfNode* empty_ = nullptr;
};

inline HfValue::HfValue() : node_(HfStore::instance().empty_node()) {}

inline HfValue HfValue::atom(std::uint32_t id) {
  return HfStore::instance().atom(id);
}

inline bool HfValue::is_atom() const { return node_->is_atom; }
inline std::uint32_t HfValue::atom_id() const { return node_->atom_id; }
inline std::span<const HfValue> HfValue::members() const {
  return node_->members;
}
inline std::size_t HfValue::hash() const { return node_->hash; }

inline std::optional<std::size_t> HfValue::as_ordinal() const {
  if (node_->ordinal < 0) return std::nullopt;
  return static_cast<std::size_t>(node_->ordinal);
}

inline bool HfValue::contains(HfValue x) const {
  auto ms = members();
  auto it = std::lower_bound(ms.begin(), ms.end(), x, HfLess{});
  return it != ms.end() && *it == x;
}

// ---------------------------------------------------------------------------
// Construction

inline HfValue empty_set() { return HfValue(); }

inline HfValue ordinal(std::size_t n) { return HfStore::instance().ordinal(n); }

inline HfValue truth(bool b) { return ordinal(b ? 1 : 0); }

inline bool is_true(HfValue v) { return v == ordinal(1); }

/// The set of the given elements; order and duplicates are irrelevant.
inline HfValue make_set(std::vector<HfValue> elems) {
  std::sort(elems.begin(), elems.end(), HfLess{});
  elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
  return HfStore::instance().set_from_canonical(std::move(elems));
}

inline HfValue make_set(std::initializer_list<HfValue> elems) {
  return make_set(std::vector<HfValue>(elems));
}

inline HfValue singleton(HfValue x) { return make_set({x}); }

// ---------------------------------------------------------------------------
// Builtins of the BGS state

/// {x, y}; the singleton {x} when x = y.
inline HfValue pair(HfValue x, HfValue y) { return make_set({x, y}); }

/// Kuratowski pair {{x}, {x, y}}.
inline HfValue ordered_pair(HfValue x, HfValue y) {
  return pair(pair(x, x), pair(x, y));
}

/// Inverse of ordered_pair; nullopt if `p` is not a Kuratowski pair.
inline std::optional<std::pair<HfValue, HfValue>> decode_ordered_pair(
    HfValue p) {
  if (!p.is_set() || p.size() == 0 || p.size() > 2) return std::nullopt;
  for (HfValue m : p.members())
    if (!m.is_set() || m.size() == 0 || m.size() > 2) return std::nullopt;
  if (p.size() == 1) {
    HfValue only = p.members()[0];
    if (only.size() != 1) return std::nullopt;
    return std::pair{only.members()[0], only.members()[0]};
  }
  // Canonical order puts the singleton {x} before the doubleton {x, y}.
  HfValue a = p.members()[0], b = p.members()[1];
  if (a.size() != 1 || b.size() != 2 || !b.contains(a.members()[0]))
    return std::nullopt;
  HfValue x = a.members()[0];
  HfValue y = b.members()[0] == x ? b.members()[1] : b.members()[0];
  if (ordered_pair(x, y) != p) return std::nullopt;
  return std::pair{x, y};
}

/// Union of the members that are sets; atoms contribute nothing.
inline HfValue union_all(HfValue x) {
  std::vector<HfValue> out;
  for (HfValue m : x.members()) {
    auto inner = m.members();
    out.insert(out.end(), inner.begin(), inner.end());
  }
  return make_set(std::move(out));
}

inline HfValue set_union(HfValue a, HfValue b) { return union_all(pair(a, b)); }

/// The sole member of a singleton, 0 otherwise.
inline HfValue the_unique(HfValue x) {
  if (x.is_set() && x.size() == 1) return x.members()[0];
  return ordinal(0);
}

/// Cardinality as an ordinal; atoms have cardinality 0.
inline HfValue card(HfValue x) { return ordinal(x.is_atom() ? 0 : x.size()); }

/// a + b as |a ∪ {<0,x> : x ∈ b}|.
inline HfValue add_via_card(HfValue a, HfValue b) {
  std::vector<HfValue> tagged;
  for (HfValue x : b.members()) tagged.push_back(ordered_pair(ordinal(0), x));
  return card(set_union(a, make_set(std::move(tagged))));
}

/// a · b as |⋃{{<x,y> : x ∈ a} : y ∈ b}|.
inline HfValue mul_via_card(HfValue a, HfValue b) {
  std::vector<HfValue> rows;
  for (HfValue y : b.members()) {
    std::vector<HfValue> row;
    for (HfValue x : a.members()) row.push_back(ordered_pair(x, y));
    rows.push_back(make_set(std::move(row)));
  }
  return card(union_all(make_set(std::move(rows))));
}

/// {x} together with all hereditary members of x, in canonical order.
inline std::vector<HfValue> transitive_closure(HfValue x) {
  std::unordered_set<HfValue, HfHash> seen;
  std::vector<HfValue> stack{x};
  while (!stack.empty()) {
    HfValue v = stack.back();
    stack.pop_back();
    if (!seen.insert(v).second) continue;
    for (HfValue m : v.members()) stack.push_back(m);
  }
  std::vector<HfValue> out(seen.begin(), seen.end());
  std::sort(out.begin(), out.end(), HfLess{});
  return out;
}

/// Renders ordinals as decimals, atoms through `atom_name`, other sets in
/// braces.
inline std::string to_string(
    HfValue v, const std::function<std::string(std::uint32_t)>& atom_name =
                   [](std::uint32_t id) { return "@" + std::to_string(id); }) {
  if (v.is_atom()) return atom_name(v.atom_id());
  if (auto n = v.as_ordinal()) return std::to_string(*n);
  std::string out = "{";
  bool first = true;
  for (HfValue m : v.members()) {
    if (!first) out += ", ";
    first = false;
    out += to_string(m, atom_name);
  }
  return out + "}";
}

}  // namespace choiceless

template <>
struct std::hash<choiceless::HfValue> {
  std::size_t operator()(choiceless::HfValue v) const { return v.hash(); }
};
