#pragma once

// Integer matrices as two-sorted data: binary digits M(i,j,s) for s = 0..k
// and a sign relation. Zero-testing of the determinant goes through the
// reductions modulo the first 2n² primes, n = max(|I|, k+1).

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "choiceless/errors.hpp"
#include "choiceless/linalg/field.hpp"
#include "choiceless/linalg/matrix.hpp"
#include "choiceless/linalg/primes.hpp"

namespace choiceless::linalg {

using BigInt = boost::multiprecision::cpp_int;

class IntMatrix {
 public:
  IntMatrix() = default;
  explicit IntMatrix(std::vector<std::string> index)
      : index_(std::move(index)), entries_(index_.size() * index_.size(), 0) {
    FieldMatrix::square(index_);  // rejects duplicate names
  }
  static IntMatrix from_rows(const std::vector<std::vector<BigInt>>& v) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < v.size(); ++i) names.push_back(std::to_string(i));
    IntMatrix m(names);
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i].size() != v.size()) throw Error("from_rows needs a square array");
      for (std::size_t j = 0; j < v.size(); ++j) m.at(i, j) = v[i][j];
    }
    return m;
  }
  /// Build from the relational form: digits (i, j, s) meaning bit s of
  /// |M(i,j)| is one, and the (i, j) whose entry is positive.
  static IntMatrix from_digits(
      std::vector<std::string> index,
      const std::set<std::tuple<std::size_t, std::size_t, std::uint32_t>>& digits,
      const std::set<std::pair<std::size_t, std::size_t>>& positive) {
    IntMatrix m(std::move(index));
    for (auto [i, j, s] : digits) m.at(i, j) += BigInt(1) << s;
    for (std::size_t i = 0; i < m.size(); ++i)
      for (std::size_t j = 0; j < m.size(); ++j)
        if (m.at(i, j) != 0 && !positive.count({i, j})) m.at(i, j) = -m.at(i, j);
    return m;
  }

  const std::vector<std::string>& index() const { return index_; }
  std::size_t size() const { return index_.size(); }
  BigInt& at(std::size_t i, std::size_t j) { return entries_[i * size() + j]; }
  const BigInt& at(std::size_t i, std::size_t j) const {
    return entries_[i * size() + j];
  }

  /// Highest digit index k: the largest set bit over all |entries| (0 when
  /// every entry is zero).
  std::uint32_t digit_bound() const {
    std::uint32_t k = 0;
    for (const auto& e : entries_)
      if (e != 0)
        k = std::max<std::uint32_t>(
            k, static_cast<std::uint32_t>(boost::multiprecision::msb(abs(e))));
    return k;
  }
  bool digit(std::size_t i, std::size_t j, std::uint32_t s) const {
    return bit_test(abs(at(i, j)), s);
  }
  bool positive(std::size_t i, std::size_t j) const { return at(i, j) > 0; }

  /// Entries read from the digit and sign relations, reduced modulo p.
  FieldMatrix reduce(std::uint32_t p) const {
    FieldMatrix m = FieldMatrix::square(index_);
    const std::uint32_t k = digit_bound();
    std::vector<std::uint64_t> pow2(k + 1);
    pow2[0] = 1 % p;
    for (std::uint32_t s = 1; s <= k; ++s) pow2[s] = pow2[s - 1] * 2 % p;
    for (std::size_t i = 0; i < size(); ++i)
      for (std::size_t j = 0; j < size(); ++j) {
        std::uint64_t r = 0;
        for (std::uint32_t s = 0; s <= k; ++s)
          if (digit(i, j, s)) r = (r + pow2[s]) % p;
        if (!positive(i, j) && r != 0) r = p - r;
        m.at(i, j) = static_cast<Elem>(r);
      }
    return m;
  }

  IntMatrix relisted(const std::vector<std::size_t>& perm) const {
    std::vector<std::string> names;
    for (auto i : perm) names.push_back(index_.at(i));
    IntMatrix m(names);
    for (std::size_t a = 0; a < perm.size(); ++a)
      for (std::size_t b = 0; b < perm.size(); ++b)
        m.at(a, b) = at(perm[a], perm[b]);
    return m;
  }

 private:
  std::vector<std::string> index_;
  std::vector<BigInt> entries_;
};

/// n = max(|I|, k+1).
inline std::size_t crt_dimension(const IntMatrix& m) {
  return std::max<std::size_t>(m.size(), m.digit_bound() + 1);
}

/// The first 2n² primes used for the modular test.
inline std::vector<std::uint32_t> crt_primes(const IntMatrix& m) {
  std::size_t n = crt_dimension(m);
  return sieve_first_primes(2 * n * n);
}

/// Non-zero determinant iff some reduction modulo one of the first 2n²
/// primes is non-singular.
inline bool nonsingular_int(const IntMatrix& m) {
  for (std::uint32_t p : crt_primes(m))
    if (nonsingular_square(FiniteField::prime(p), m.reduce(p))) return true;
  return false;
}

/// The listed primes modulo which M is singular. For non-singular M these
/// are exactly the prime divisors of det M; for singular M it is all of them.
inline std::vector<std::uint32_t> det_prime_divisors(const IntMatrix& m) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t p : crt_primes(m))
    if (!nonsingular_square(FiniteField::prime(p), m.reduce(p))) out.push_back(p);
  return out;
}

}  // namespace choiceless::linalg
