#pragma once

// Host externals available to programs via `#external`.

#include <map>
#include <vector>

#include "choiceless/bgs/interpreter.hpp"
#include "choiceless/hfset.hpp"

namespace choiceless::bgs {

/// Product over Z/2 of two 0/1 matrices, each given as the set of ordered
/// pairs <i,j> where the entry is 1. Members that are not pairs are ignored.
inline HfValue matmul2(HfValue x, HfValue y) {
  std::map<HfValue, std::vector<HfValue>, HfLess> rows_of_y;
  for (HfValue p : y.members())
    if (auto d = decode_ordered_pair(p)) rows_of_y[d->first].push_back(d->second);
  std::map<std::pair<HfValue, HfValue>, int,
           decltype([](const auto& a, const auto& b) {
             if (a.first != b.first) return HfLess{}(a.first, b.first);
             return HfLess{}(a.second, b.second);
           })>
      count;
  for (HfValue p : x.members()) {
    auto d = decode_ordered_pair(p);
    if (!d) continue;
    auto it = rows_of_y.find(d->second);
    if (it == rows_of_y.end()) continue;
    for (HfValue j : it->second) count[{d->first, j}] ^= 1;
  }
  std::vector<HfValue> out;
  for (const auto& [ij, parity] : count)
    if (parity) out.push_back(ordered_pair(ij.first, ij.second));
  return make_set(std::move(out));
}

inline Externals standard_externals() {
  Externals ext;
  ext["MatMul2"] = ExternalFunction{
      2, [](std::span<const HfValue> a) { return matmul2(a[0], a[1]); }};
  return ext;
}

}  // namespace choiceless::bgs
