#pragma once

// Exact integer determinants by fraction-free (Bareiss) elimination, and
// trial-division factoring. Test-only reference code.

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace choiceless::testing {

using boost::multiprecision::cpp_int;

inline cpp_int exact_det(std::vector<std::vector<cpp_int>> a) {
  const std::size_t n = a.size();
  if (n > 6) throw std::invalid_argument("exact_det is limited to n <= 6");
  if (n == 0) return 1;
  cpp_int prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t r = k + 1;
      while (r < n && a[r][k] == 0) ++r;
      if (r == n) return 0;
      std::swap(a[k], a[r]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

/// Determinant over Z/p of a small matrix via the exact integer value.
inline std::uint32_t det_mod(const std::vector<std::vector<std::uint32_t>>& m,
                             std::uint32_t p) {
  std::vector<std::vector<cpp_int>> a(m.size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (auto x : m[i]) a[i].push_back(x);
  cpp_int d = exact_det(a) % p;
  if (d < 0) d += p;
  return static_cast<std::uint32_t>(d);
}

/// Distinct prime factors of |d|; d must fit in 62 bits.
inline std::vector<std::uint64_t> prime_factors(const cpp_int& value) {
  cpp_int mag = value < 0 ? cpp_int(-value) : value;
  if (mag >= (cpp_int(1) << 62))
    throw std::invalid_argument("prime_factors needs |d| < 2^62");
  auto d = static_cast<std::uint64_t>(mag);
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = 2; p * p <= d; ++p) {
    if (d % p != 0) continue;
    out.push_back(p);
    while (d % p == 0) d /= p;
  }
  if (d > 1) out.push_back(d);
  return out;
}

}  // namespace choiceless::testing
