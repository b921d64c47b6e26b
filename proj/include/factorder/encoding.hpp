#pragma once

// Stage-wise instance encoding.
//
// The classifier for stage s (1-based) sees T binary presence attributes, one
// per catalog type, set when the type is among the facts still to be placed,
// followed by s-1 nominal attributes naming the types already placed at
// positions 1..s-1. Attribute index a < T is presence bit a; index T+i is the
// (i+1)-th selected fact.

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "factorder/domain.hpp"

namespace factorder {

struct StageFeatureVector {
  std::vector<std::uint8_t> presence;  // size T
  std::vector<FactTypeId> selected;    // size stage-1

  std::size_t stage() const noexcept { return selected.size() + 1; }
  std::size_t width() const noexcept { return presence.size() + selected.size(); }

  /// Value of attribute `a`: 0/1 for presence bits, a type id for selected slots.
  std::uint32_t attribute(std::size_t a) const {
    return a < presence.size() ? presence[a] : selected[a - presence.size()].value;
  }

  friend bool operator==(const StageFeatureVector&, const StageFeatureVector&) = default;
};

struct StageExample {
  StageFeatureVector vector;
  FactTypeId label;

  friend bool operator==(const StageExample&, const StageExample&) = default;
};

inline StageFeatureVector encode_stage(const FactTypeCatalog& catalog, const FactSet& remaining,
                                       const std::vector<FactTypeId>& prefix, std::size_t stage) {
  require(stage >= 1 && stage == prefix.size() + 1, ErrorKind::contract,
          "stage " + std::to_string(stage) + " does not match prefix of length " +
              std::to_string(prefix.size()));
  StageFeatureVector v;
  v.presence.assign(catalog.size(), 0);
  for (FactTypeId id : remaining) {
    require(catalog.contains(id), ErrorKind::unknown_type,
            "type id " + std::to_string(id.value) + " outside catalog");
    v.presence[id.index()] = 1;
  }
  v.selected.reserve(prefix.size());
  for (FactTypeId id : prefix) {
    require(catalog.contains(id), ErrorKind::unknown_type,
            "type id " + std::to_string(id.value) + " outside catalog");
    require(v.presence[id.index()] == 0, ErrorKind::encoding,
            "'" + catalog.name(id) + "' is both placed and remaining");
    v.selected.push_back(id);
  }
  return v;
}

/// Teacher-forced examples: the prefix is always the gold prefix.
inline std::vector<StageExample> training_examples_for_stage(const Dataset& dataset,
                                                             std::size_t stage) {
  const std::size_t n = dataset.sequence_length;
  require(stage >= 1 && stage <= n, ErrorKind::contract,
          "stage " + std::to_string(stage) + " outside 1.." + std::to_string(n));
  std::vector<StageExample> examples;
  examples.reserve(dataset.size());
  for (const auto& instance : dataset.instances) {
    const auto& gold = instance.order;
    require(gold.size() == n, ErrorKind::contract, "instance '" + instance.id + "' has wrong length");
    std::vector<FactTypeId> prefix(gold.begin(), gold.begin() + static_cast<std::ptrdiff_t>(stage - 1));
    auto remaining = FactSet::from_ids({gold.begin() + static_cast<std::ptrdiff_t>(stage - 1), gold.end()});
    examples.push_back({encode_stage(dataset.catalog, remaining, prefix, stage), gold[stage - 1]});
  }
  return examples;
}

/// The facts a stage may choose from: exactly the remaining ones.
inline std::vector<FactTypeId> legal_classes(const FactSet& remaining) {
  return remaining.members();
}

/// Debug dump: {"presence": [0/1...], "selected": [name...]}.
inline nlohmann::json dump_stage_vector(const FactTypeCatalog& catalog, const StageFeatureVector& v) {
  nlohmann::json selected = nlohmann::json::array();
  for (FactTypeId id : v.selected) selected.push_back(catalog.name(id));
  return {{"presence", v.presence}, {"selected", std::move(selected)}};
}

}  // namespace factorder
