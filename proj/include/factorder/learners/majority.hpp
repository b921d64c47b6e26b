#pragma once

// Majority baseline: pick the legal fact seen most often at this position in
// training.

#include <cstdint>
#include <span>
#include <vector>

#include "factorder/encoding.hpp"
#include "factorder/learners/ranking.hpp"

namespace factorder {

struct MajorityModel {
  std::vector<std::uint64_t> counts;  // label frequency, indexed by type id

  std::size_t num_types() const noexcept { return counts.size(); }
  friend bool operator==(const MajorityModel&, const MajorityModel&) = default;
};

inline MajorityModel train_majority(std::span<const StageExample> examples) {
  require(!examples.empty(), ErrorKind::training, "majority scheme needs at least one example");
  MajorityModel model;
  model.counts.assign(examples.front().vector.presence.size(), 0);
  for (const auto& ex : examples) {
    require(ex.label.index() < model.counts.size(), ErrorKind::training, "label outside catalog");
    ++model.counts[ex.label.index()];
  }
  return model;
}

/// Descending frequency, ties by ascending id. The query is ignored.
inline std::vector<FactTypeId> predict_ranked(const MajorityModel& model, const StageFeatureVector&,
                                              std::span<const FactTypeId> legal) {
  require_legal(legal);
  return rank_descending(legal, [&](FactTypeId id) {
    return id.index() < model.counts.size() ? model.counts[id.index()] : std::uint64_t{0};
  });
}

}  // namespace factorder
