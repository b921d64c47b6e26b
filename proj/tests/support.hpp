#pragma once

#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "factorder/factorder.hpp"

namespace factorder::testing {

inline std::vector<std::string> letters(std::size_t count) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < count; ++i) names.push_back(std::string(1, static_cast<char>('a' + i)));
  return names;
}

/// Dataset over `names` from gold orderings spelled with catalog names.
inline Dataset dataset_of(const std::vector<std::string>& names, const std::vector<std::vector<std::string>>& orders) {
  Dataset d{build_catalog(names), {}, orders.empty() ? 0 : orders.front().size()};
  for (std::size_t i = 0; i < orders.size(); ++i) {
    OrderedSequence seq;
    for (const auto& n : orders[i]) seq.push_back(d.catalog.id(n));
    d.instances.push_back({"i" + std::to_string(i), seq});
  }
  return d;
}

inline PlannerConfig config_for(Scheme scheme, std::size_t n) {
  PlannerConfig c;
  c.scheme = scheme;
  c.sequence_length = n;
  return c;
}

template <typename F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected a factorder::Error";
  return ErrorKind::contract;
}

}  // namespace factorder::testing
