#pragma once

// The planner: a chain of n stage classifiers. Stage s picks the fact for
// position s from the facts not yet placed, seeing the facts it and earlier
// stages already placed.
//
// Training conditions every stage on gold prefixes. Ordering conditions each
// stage on the planner's own earlier choices, so one early mistake changes the
// inputs of every later stage.

#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "factorder/domain.hpp"
#include "factorder/encoding.hpp"
#include "factorder/learners/stage_model.hpp"

namespace factorder {

inline constexpr int kPlannerFormatVersion = 1;

struct TrainedPlanner {
  FactTypeCatalog catalog;
  PlannerConfig config;
  std::vector<StageModel> stages;

  std::size_t sequence_length() const noexcept { return config.sequence_length; }
};

inline TrainedPlanner train_planner(const Dataset& dataset, const PlannerConfig& config) {
  require(!dataset.instances.empty(), ErrorKind::training, "dataset has no instances");
  require(dataset.sequence_length == config.sequence_length, ErrorKind::training,
          "dataset sequence length " + std::to_string(dataset.sequence_length) +
              " does not match planner length " + std::to_string(config.sequence_length));
  validate_config(config, dataset.catalog);
  require_valid(dataset, ErrorKind::training);

  TrainedPlanner planner{dataset.catalog, config, {}};
  planner.stages.reserve(config.sequence_length);
  for (std::size_t stage = 1; stage <= config.sequence_length; ++stage) {
    const auto examples = training_examples_for_stage(dataset, stage);
    planner.stages.push_back(train_stage_model(config, examples, dataset.catalog.size()));
  }
  return planner;
}

/// Called once per stage with the encoded query and the fact chosen.
using StageObserver = std::function<void(std::size_t stage, const StageFeatureVector&, FactTypeId chosen)>;

inline OrderedSequence order_facts(const TrainedPlanner& planner, const FactSet& input,
                                   const StageObserver& observer = {}) {
  const std::size_t n = planner.sequence_length();
  require(input.size() == n, ErrorKind::input,
          "expected " + std::to_string(n) + " facts, got " + std::to_string(input.size()));
  for (FactTypeId id : input) {
    require(planner.catalog.contains(id), ErrorKind::input,
            "type id " + std::to_string(id.value) + " is not in the planner's catalog");
  }
  FactSet remaining = input;
  OrderedSequence prefix;
  prefix.reserve(n);
  for (std::size_t stage = 1; stage <= n; ++stage) {
    const auto vector = encode_stage(planner.catalog, remaining, prefix, stage);
    const auto legal = legal_classes(remaining);
    const FactTypeId chosen =
        legal.size() == 1 ? legal.front() : planner.stages[stage - 1].predict(vector, legal);
    if (observer) observer(stage, vector, chosen);
    prefix.push_back(chosen);
    remaining.erase(chosen);
  }
  return prefix;
}

/// Orders a fact set built against `source`; the catalogs must agree.
inline OrderedSequence order_facts(const TrainedPlanner& planner, const FactTypeCatalog& source,
                                   const FactSet& input) {
  require(source == planner.catalog, ErrorKind::compatibility,
          "fact set comes from a different catalog than the planner was trained on");
  return order_facts(planner, input);
}

inline OrderedSequence order_facts(const TrainedPlanner& planner, const std::vector<std::string>& names,
                                   const StageObserver& observer = {}) {
  FactSet input;
  try {
    input = make_fact_set(planner.catalog, names);
  } catch (const Error& e) {
    fail(ErrorKind::input, e.what());
  }
  return order_facts(planner, input, observer);
}

// ---------------------------------------------------------------------------
// Persistence

inline nlohmann::json config_to_json(const PlannerConfig& config, const FactTypeCatalog& catalog) {
  nlohmann::json j{{"sequence_length", config.sequence_length},
                   {"scheme", std::string(to_string(config.scheme))},
                   {"rng_seed", config.rng_seed}};
  switch (config.scheme) {
    case Scheme::knn: j["k"] = config.k; break;
    case Scheme::fixed_order: j["canonical_order"] = sequence_names(catalog, config.canonical_order); break;
    case Scheme::decision_tree:
      j["tree"] = {{"min_instances_per_leaf", config.tree.min_instances_per_leaf},
                   {"pruning_enabled", config.tree.pruning_enabled},
                   {"confidence_factor", config.tree.confidence_factor}};
      break;
    case Scheme::majority: break;
  }
  return j;
}

inline PlannerConfig config_from_json(const nlohmann::json& j, const FactTypeCatalog& catalog) {
  PlannerConfig config;
  config.sequence_length = j.at("sequence_length").get<std::size_t>();
  const auto tag = j.at("scheme").get<std::string>();
  auto scheme = parse_scheme(tag);
  require(scheme.has_value(), ErrorKind::deserialization, "unknown scheme '" + tag + "'");
  config.scheme = *scheme;
  config.rng_seed = j.value("rng_seed", std::uint64_t{0});
  if (j.contains("k")) config.k = j.at("k").get<std::size_t>();
  if (j.contains("canonical_order")) {
    for (const auto& name : j.at("canonical_order")) {
      auto id = catalog.find(name.get<std::string>());
      require(id.has_value(), ErrorKind::deserialization, "canonical order names unknown type");
      config.canonical_order.push_back(*id);
    }
  }
  if (j.contains("tree")) {
    const auto& t = j.at("tree");
    config.tree.min_instances_per_leaf = t.at("min_instances_per_leaf").get<std::size_t>();
    config.tree.pruning_enabled = t.at("pruning_enabled").get<bool>();
    config.tree.confidence_factor = t.at("confidence_factor").get<double>();
  }
  return config;
}

inline nlohmann::json planner_to_json(const TrainedPlanner& planner) {
  nlohmann::json stages = nlohmann::json::array();
  for (const auto& stage : planner.stages) stages.push_back(to_json(stage));
  return {{"format_version", kPlannerFormatVersion},
          {"catalog", planner.catalog.names()},
          {"config", config_to_json(planner.config, planner.catalog)},
          {"stages", std::move(stages)}};
}

inline TrainedPlanner planner_from_json(const nlohmann::json& j) {
  try {
    const int version = j.at("format_version").get<int>();
    require(version == kPlannerFormatVersion, ErrorKind::deserialization,
            "unsupported planner format version " + std::to_string(version));
    TrainedPlanner planner;
    try {
      planner.catalog = build_catalog(j.at("catalog").get<std::vector<std::string>>());
    } catch (const Error& e) {
      fail(ErrorKind::deserialization, std::string("catalog: ") + e.what());
    }
    planner.config = config_from_json(j.at("config"), planner.catalog);
    try {
      validate_config(planner.config, planner.catalog);
    } catch (const Error& e) {
      fail(ErrorKind::deserialization, std::string("config: ") + e.what());
    }
    const auto& stages = j.at("stages");
    require(stages.size() == planner.config.sequence_length, ErrorKind::deserialization,
            "planner has " + std::to_string(stages.size()) + " stages, expected " +
                std::to_string(planner.config.sequence_length));
    for (std::size_t s = 0; s < stages.size(); ++s) {
      auto model = stage_model_from_json(stages[s], planner.catalog.size());
      require(model.scheme() == planner.config.scheme, ErrorKind::deserialization,
              "stage " + std::to_string(s + 1) + " scheme does not match config");
      if (const auto* tree = std::get_if<TreeModel>(&model.payload())) {
        require(tree->width == planner.catalog.size() + s, ErrorKind::deserialization,
                "stage " + std::to_string(s + 1) + " tree has the wrong width");
      }
      planner.stages.push_back(std::move(model));
    }
    return planner;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::deserialization, e.what());
  }
}

inline std::string save_planner(const TrainedPlanner& planner) { return planner_to_json(planner).dump(1); }

inline TrainedPlanner load_planner(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorKind::deserialization, "at byte " + std::to_string(e.byte) + ": " + e.what());
  }
  return planner_from_json(j);
}

}  // namespace factorder
