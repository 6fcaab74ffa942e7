#pragma once

#include <cstdint>
#include <vector>

#include "choiceless/errors.hpp"

namespace choiceless::linalg {

/// The first k primes. The sieve bound starts small and doubles until it
/// holds k primes.
inline std::vector<std::uint32_t> sieve_first_primes(std::size_t k) {
  if (k == 0) throw Error("sieve_first_primes needs k >= 1");
  for (std::size_t bound = 16;; bound *= 2) {
    std::vector<bool> composite(bound + 1, false);
    std::vector<std::uint32_t> primes;
    for (std::size_t i = 2; i <= bound && primes.size() < k; ++i) {
      if (composite[i]) continue;
      primes.push_back(static_cast<std::uint32_t>(i));
      for (std::size_t j = i * i; j <= bound; j += i) composite[j] = true;
    }
    if (primes.size() == k) return primes;
  }
}

}  // namespace choiceless::linalg
