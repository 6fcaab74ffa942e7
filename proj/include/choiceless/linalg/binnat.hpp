#pragma once

// Natural numbers as finite sets of bit positions: value = Σ_{c∈C} 2^c.
// Arithmetic is schoolbook on a little-endian bit vector.

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "choiceless/errors.hpp"

namespace choiceless::linalg {

class BinNat {
 public:
  BinNat() = default;
  explicit BinNat(std::uint64_t v) {
    for (std::uint32_t c = 0; v; ++c, v >>= 1)
      if (v & 1u) bits_.push_back(c);
  }
  static BinNat from_positions(std::vector<std::uint32_t> c) {
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    BinNat r;
    r.bits_ = std::move(c);
    return r;
  }

  /// Ascending bit positions.
  const std::vector<std::uint32_t>& positions() const { return bits_; }
  bool is_zero() const { return bits_.empty(); }
  bool test(std::uint32_t c) const {
    return std::binary_search(bits_.begin(), bits_.end(), c);
  }
  /// Highest set bit; throws for zero.
  std::uint32_t max_bit() const {
    if (bits_.empty()) throw Error("zero has no highest bit");
    return bits_.back();
  }

  friend BinNat operator+(const BinNat& a, const BinNat& b) {
    auto x = a.dense(), y = b.dense();
    if (x.size() < y.size()) std::swap(x, y);
    std::vector<std::uint8_t> out(x.size() + 1, 0);
    std::uint8_t carry = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      std::uint8_t s = x[i] + (i < y.size() ? y[i] : 0) + carry;
      out[i] = s & 1u;
      carry = s >> 1;
    }
    out[x.size()] = carry;
    return from_dense(out);
  }

  /// a - b; throws when b > a.
  friend BinNat operator-(const BinNat& a, const BinNat& b) {
    if (a < b) throw Error("BinNat subtraction would be negative");
    auto x = a.dense(), y = b.dense();
    std::int32_t borrow = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      std::int32_t d = x[i] - (i < y.size() ? y[i] : 0) - borrow;
      borrow = d < 0;
      x[i] = static_cast<std::uint8_t>(d & 1);
    }
    return from_dense(x);
  }

  friend BinNat operator*(const BinNat& a, const BinNat& b) {
    BinNat acc;
    for (std::uint32_t c : b.bits_) acc = acc + a.shifted(c);
    return acc;
  }

  BinNat shifted(std::uint32_t k) const {
    BinNat r = *this;
    for (auto& c : r.bits_) c += k;
    return r;
  }

  friend bool operator==(const BinNat& a, const BinNat& b) {
    return a.bits_ == b.bits_;
  }
  friend bool operator!=(const BinNat& a, const BinNat& b) { return !(a == b); }
  friend bool operator<(const BinNat& a, const BinNat& b) {
    // Compare from the top bit down.
    auto i = a.bits_.rbegin(), j = b.bits_.rbegin();
    for (; i != a.bits_.rend() && j != b.bits_.rend(); ++i, ++j)
      if (*i != *j) return *i < *j;
    return i == a.bits_.rend() && j != b.bits_.rend();
  }

  /// Decimal rendering.
  std::string to_decimal() const {
    if (bits_.empty()) return "0";
    // Little-endian base 10^9 limbs, doubling from the top bit.
    std::vector<std::uint64_t> limbs{0};
    auto d = dense();
    for (std::size_t i = d.size(); i-- > 0;) {
      std::uint64_t carry = d[i];
      for (auto& l : limbs) {
        std::uint64_t v = l * 2 + carry;
        l = v % 1000000000u;
        carry = v / 1000000000u;
      }
      if (carry) limbs.push_back(carry);
    }
    std::string s = std::to_string(limbs.back());
    for (std::size_t i = limbs.size() - 1; i-- > 0;) {
      std::string part = std::to_string(limbs[i]);
      s += std::string(9 - part.size(), '0') + part;
    }
    return s;
  }

 private:
  std::vector<std::uint8_t> dense() const {
    std::vector<std::uint8_t> d(bits_.empty() ? 0 : bits_.back() + 1, 0);
    for (auto c : bits_) d[c] = 1;
    return d;
  }
  static BinNat from_dense(const std::vector<std::uint8_t>& d) {
    BinNat r;
    for (std::uint32_t i = 0; i < d.size(); ++i)
      if (d[i]) r.bits_.push_back(i);
    return r;
  }

  std::vector<std::uint32_t> bits_;
};

/// |GL_n(F_q)| = ∏_{i<n} (q^n - q^i).
inline BinNat gl_order(std::uint32_t q, std::uint32_t n) {
  if (q < 2) throw Error("gl_order needs q >= 2");
  BinNat bq(q);
  std::vector<BinNat> powers{BinNat(1)};
  for (std::uint32_t i = 0; i < n; ++i) powers.push_back(powers.back() * bq);
  BinNat g(1);
  for (std::uint32_t i = 0; i < n; ++i) g = g * (powers[n] - powers[i]);
  return g;
}

}  // namespace choiceless::linalg
