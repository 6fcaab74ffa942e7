#pragma once

// Finite fields. Elements are the indices 0..q-1 (0 is zero, 1 is one);
// the index order is the field's linear ordering. Prime fields use modular
// arithmetic; prime-power fields carry full addition and multiplication
// tables, built from an irreducible polynomial or supplied by the caller.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "choiceless/errors.hpp"

namespace choiceless::linalg {

using Elem = std::uint32_t;

class FiniteField {
 public:
  /// Z/p. Throws for non-primes.
  static FiniteField prime(std::uint32_t p) {
    if (!is_prime(p)) throw Error(std::to_string(p) + " is not prime");
    FiniteField f;
    f.q_ = f.p_ = p;
    f.e_ = 1;
    return f;
  }

  /// GF(p^e) as polynomials over Z/p modulo `modulus` (coefficients, constant
  /// term first, monic of degree e). Element index = Σ c_i p^i.
  static FiniteField extension(std::uint32_t p,
                               const std::vector<std::uint32_t>& modulus) {
    if (!is_prime(p)) throw Error(std::to_string(p) + " is not prime");
    const std::size_t e = modulus.size() - 1;
    if (e < 1 || modulus.back() != 1) throw Error("modulus must be monic");
    std::uint32_t q = 1;
    for (std::size_t k = 0; k < e; ++k) q *= p;
    auto digits = [&](Elem x) {
      std::vector<std::uint32_t> d(e);
      for (std::size_t k = 0; k < e; ++k) {
        d[k] = x % p;
        x /= p;
      }
      return d;
    };
    auto pack = [&](const std::vector<std::uint32_t>& d) {
      Elem x = 0;
      for (std::size_t k = e; k-- > 0;) x = x * p + d[k];
      return x;
    };
    std::vector<Elem> add(q * q), mul(q * q);
    for (Elem a = 0; a < q; ++a)
      for (Elem b = 0; b < q; ++b) {
        auto da = digits(a), db = digits(b);
        std::vector<std::uint32_t> s(e);
        for (std::size_t k = 0; k < e; ++k) s[k] = (da[k] + db[k]) % p;
        add[a * q + b] = pack(s);
        std::vector<std::uint32_t> prod(2 * e, 0);
        for (std::size_t i = 0; i < e; ++i)
          for (std::size_t j = 0; j < e; ++j)
            prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
        for (std::size_t k = 2 * e - 1; k >= e; --k) {
          std::uint32_t c = prod[k];
          if (c == 0) continue;
          // x^k = x^{k-e} * x^e, and x^e = -Σ modulus[i] x^i.
          for (std::size_t i = 0; i < e; ++i)
            prod[k - e + i] = (prod[k - e + i] + c * (p - modulus[i]) % p) % p;
          prod[k] = 0;
        }
        prod.resize(e);
        mul[a * q + b] = pack(prod);
      }
    return from_tables(q, std::move(add), std::move(mul));
  }

  /// A field given by its tables (row-major q×q, 0 = zero, 1 = one). The
  /// field axioms are verified when q <= 64.
  static FiniteField from_tables(std::uint32_t q, std::vector<Elem> add,
                                 std::vector<Elem> mul) {
    if (q < 2) throw Error("a field has at least two elements");
    if (add.size() != std::size_t{q} * q || mul.size() != std::size_t{q} * q)
      throw Error("field tables must be q x q");
    FiniteField f;
    f.q_ = q;
    f.add_ = std::move(add);
    f.mul_ = std::move(mul);
    for (Elem x : f.add_)
      if (x >= q) throw Error("field table entry out of range");
    for (Elem x : f.mul_)
      if (x >= q) throw Error("field table entry out of range");
    // Characteristic: order of one under addition.
    Elem acc = 1;
    std::uint32_t p = 1;
    while (acc != 0 && p <= q) {
      acc = f.add(acc, 1);
      ++p;
    }
    if (!is_prime(p)) throw Error("tables do not define a field");
    f.p_ = p;
    std::uint32_t e = 0;
    for (std::uint64_t t = 1; t < q; t *= p) ++e;
    std::uint64_t pe = 1;
    for (std::uint32_t k = 0; k < e; ++k) pe *= p;
    if (pe != q) throw Error("field order must be a prime power");
    f.e_ = e;
    f.build_inverses();
    if (q <= 64) f.check_axioms();
    return f;
  }

  std::uint32_t order() const { return q_; }
  std::uint32_t characteristic() const { return p_; }
  std::uint32_t degree() const { return e_; }
  bool is_prime_field() const { return add_.empty(); }
  Elem zero() const { return 0; }
  Elem one() const { return 1; }

  Elem add(Elem a, Elem b) const {
    if (add_.empty()) {
      Elem s = a + b;
      return s >= q_ ? s - q_ : s;
    }
    return add_[a * q_ + b];
  }
  Elem mul(Elem a, Elem b) const {
    if (mul_.empty())
      return static_cast<Elem>(std::uint64_t{a} * b % q_);
    return mul_[a * q_ + b];
  }
  Elem neg(Elem a) const {
    if (add_.empty()) return a == 0 ? 0 : q_ - a;
    return neg_[a];
  }
  Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }
  /// Multiplicative inverse; throws for zero.
  Elem inv(Elem a) const {
    if (a == 0) throw Error("zero has no inverse");
    if (add_.empty()) return pow_prime(a, q_ - 2);
    return inv_[a];
  }
  /// n·a as repeated addition (n reduced mod p first).
  Elem times(std::uint64_t n, Elem a) const {
    n %= p_;
    if (add_.empty()) return static_cast<Elem>(n * a % q_);
    Elem acc = 0;
    for (std::uint64_t k = 0; k < n; ++k) acc = add(acc, a);
    return acc;
  }

  friend bool operator==(const FiniteField& a, const FiniteField& b) {
    return a.q_ == b.q_ && a.add_ == b.add_ && a.mul_ == b.mul_;
  }

  static bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
      if (n % d == 0) return false;
    return true;
  }

 private:
  Elem pow_prime(Elem a, std::uint32_t k) const {
    std::uint64_t r = 1, b = a;
    while (k) {
      if (k & 1u) r = r * b % q_;
      b = b * b % q_;
      k >>= 1;
    }
    return static_cast<Elem>(r);
  }

  void build_inverses() {
    neg_.assign(q_, q_);
    inv_.assign(q_, q_);
    for (Elem a = 0; a < q_; ++a)
      for (Elem b = 0; b < q_; ++b) {
        if (add(a, b) == 0) neg_[a] = b;
        if (mul(a, b) == 1) inv_[a] = b;
      }
    for (Elem a = 0; a < q_; ++a) {
      if (neg_[a] == q_) throw Error("tables do not define a field: no negative");
      if (a != 0 && inv_[a] == q_)
        throw Error("tables do not define a field: no inverse");
    }
  }

  void check_axioms() const {
    for (Elem a = 0; a < q_; ++a) {
      if (add(a, 0) != a || mul(a, 1) != a || mul(a, 0) != 0)
        throw Error("tables do not define a field: identities");
      for (Elem b = 0; b < q_; ++b) {
        if (add(a, b) != add(b, a) || mul(a, b) != mul(b, a))
          throw Error("tables do not define a field: commutativity");
        for (Elem c = 0; c < q_; ++c) {
          if (add(add(a, b), c) != add(a, add(b, c)) ||
              mul(mul(a, b), c) != mul(a, mul(b, c)))
            throw Error("tables do not define a field: associativity");
          if (mul(a, add(b, c)) != add(mul(a, b), mul(a, c)))
            throw Error("tables do not define a field: distributivity");
        }
      }
    }
  }

  std::uint32_t q_ = 2, p_ = 2, e_ = 1;
  std::vector<Elem> add_, mul_, neg_, inv_;
};

/// Z/p for primes, otherwise a table field from a fixed irreducible
/// polynomial (q in {4, 8, 9, 16, 25, 27, 32, 49, 64}).
inline FiniteField finite_field(std::uint32_t q) {
  if (FiniteField::is_prime(q)) return FiniteField::prime(q);
  static const std::map<std::uint32_t,
                        std::pair<std::uint32_t, std::vector<std::uint32_t>>>
      moduli = {
          {4, {2, {1, 1, 1}}},           // x^2 + x + 1
          {8, {2, {1, 1, 0, 1}}},        // x^3 + x + 1
          {9, {3, {1, 0, 1}}},           // x^2 + 1
          {16, {2, {1, 1, 0, 0, 1}}},    // x^4 + x + 1
          {25, {5, {2, 0, 1}}},          // x^2 + 2
          {27, {3, {1, 2, 0, 1}}},       // x^3 + 2x + 1
          {32, {2, {1, 0, 1, 0, 0, 1}}}, // x^5 + x^2 + 1
          {49, {7, {1, 0, 1}}},          // x^2 + 1
          {64, {2, {1, 1, 0, 0, 0, 0, 1}}},  // x^6 + x + 1
      };
  auto it = moduli.find(q);
  if (it == moduli.end())
    throw Error("no field of order " + std::to_string(q) + " available");
  return FiniteField::extension(it->second.first, it->second.second);
}

}  // namespace choiceless::linalg
