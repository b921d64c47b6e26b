#pragma once

// Base planner: one predefined total order over all fact types, applied at
// every stage.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "factorder/encoding.hpp"
#include "factorder/learners/ranking.hpp"

namespace factorder {

struct FixedOrderModel {
  std::vector<FactTypeId> canonical;  // first = placed earliest
  std::vector<std::uint32_t> rank;    // rank[id] = position of id in canonical

  std::size_t num_types() const noexcept { return canonical.size(); }
  friend bool operator==(const FixedOrderModel&, const FixedOrderModel&) = default;
};

inline FixedOrderModel make_fixed_order(std::span<const FactTypeId> canonical, std::size_t num_types) {
  require(canonical.size() == num_types, ErrorKind::configuration,
          "canonical order covers " + std::to_string(canonical.size()) + " of " +
              std::to_string(num_types) + " fact types");
  FixedOrderModel model;
  model.canonical.assign(canonical.begin(), canonical.end());
  model.rank.assign(num_types, static_cast<std::uint32_t>(num_types));
  for (std::size_t pos = 0; pos < canonical.size(); ++pos) {
    const FactTypeId id = canonical[pos];
    require(id.index() < num_types && model.rank[id.index()] == num_types, ErrorKind::configuration,
            "canonical order is not a permutation of the catalog (offending id " +
                std::to_string(id.value) + ")");
    model.rank[id.index()] = static_cast<std::uint32_t>(pos);
  }
  return model;
}

inline std::vector<FactTypeId> predict_ranked(const FixedOrderModel& model, const StageFeatureVector&,
                                              std::span<const FactTypeId> legal) {
  require_legal(legal);
  // Lower canonical position ranks higher; negate so rank_descending applies.
  return rank_descending(legal, [&](FactTypeId id) {
    return -static_cast<std::int64_t>(id.index() < model.rank.size() ? model.rank[id.index()]
                                                                     : model.rank.size());
  });
}

}  // namespace factorder
