#pragma once

#include <algorithm>
#include <span>
#include <string>
#include <vector>

#include "factorder/domain.hpp"

namespace factorder {

inline void require_legal(std::span<const FactTypeId> legal) {
  require(!legal.empty(), ErrorKind::prediction, "legal class set is empty");
}

/// Sorts `legal` by descending score, ties by ascending id.
template <typename Score>
std::vector<FactTypeId> rank_descending(std::span<const FactTypeId> legal, Score&& score) {
  std::vector<FactTypeId> ranked(legal.begin(), legal.end());
  std::stable_sort(ranked.begin(), ranked.end(), [&](FactTypeId a, FactTypeId b) {
    const auto sa = score(a);
    const auto sb = score(b);
    if (sa != sb) return sa > sb;
    return a < b;
  });
  return ranked;
}

/// Every catalog id, 0..T-1.
inline std::vector<FactTypeId> all_types(std::size_t num_types) {
  std::vector<FactTypeId> ids(num_types);
  for (std::size_t i = 0; i < num_types; ++i) ids[i] = fact_type(i);
  return ids;
}

}  // namespace factorder
