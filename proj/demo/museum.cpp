// A small museum domain: fifteen exhibit fact types, every six-fact
// combination that includes `subclass`, ordered by a curator's priority.
// Trains a decision-tree planner on a sample and orders one exhibit's facts.
//
//   museum_demo            print the ordering
//   museum_demo <dir>      also write museum.schema.json and museum.jsonl to <dir>

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "factorder/factorder.hpp"

namespace fo = factorder;

namespace {

// Curator's order; earlier names are told first.
const std::vector<std::string> kPriority = {
    "subclass",          "creation-period",        "creation-time",        "painted-by",
    "potter-is",         "painting-technique-used", "technique-description", "opposite-technique",
    "exhibit-depicts",   "exhibit-characteristics", "person-information",    "period-story",
    "original-location", "current-location",       "museum-country"};

fo::Dataset build_corpus(const fo::FactTypeCatalog& catalog, std::size_t sample, std::uint64_t seed) {
  // All 2002 combinations of five non-subclass types, each ordered by priority.
  std::vector<fo::OrderedSequence> all;
  std::vector<bool> pick(catalog.size() - 1, false);
  std::fill(pick.begin(), pick.begin() + 5, true);
  do {
    fo::OrderedSequence order{catalog.id("subclass")};
    for (std::size_t i = 0; i < pick.size(); ++i) {
      if (pick[i]) order.push_back(catalog.id(kPriority[i + 1]));
    }
    all.push_back(order);
  } while (std::prev_permutation(pick.begin(), pick.end()));

  auto engine = fo::make_engine(seed, 0);
  fo::shuffle(std::span<fo::OrderedSequence>(all), engine);
  all.resize(std::min(sample, all.size()));

  fo::Dataset corpus{catalog, {}, 6};
  for (std::size_t i = 0; i < all.size(); ++i) corpus.instances.push_back({"exhibit-set-" + std::to_string(i + 1), all[i]});
  return corpus;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    auto names = kPriority;
    std::sort(names.begin(), names.end());
    const auto catalog = fo::build_catalog(names);
    const auto corpus = build_corpus(catalog, 880, 7);

    if (argc > 1) {
      const std::filesystem::path dir = argv[1];
      std::filesystem::create_directories(dir);
      fo::DomainSchema schema{catalog, std::vector<fo::FactTypeId>{}};
      for (const auto& n : kPriority) schema.canonical_order->push_back(catalog.id(n));
      fo::write_file_atomic(dir / "museum.schema.json", fo::schema_to_json(schema).dump(2) + "\n");
      fo::write_file_atomic(dir / "museum.jsonl", fo::dataset_to_jsonl(corpus));
    }

    fo::PlannerConfig config;
    config.sequence_length = 6;
    config.scheme = fo::Scheme::decision_tree;
    const auto planner = fo::train_planner(corpus, config);

    const std::vector<std::string> exhibit9 = {"current-location", "original-location", "painted-by",
                                               "creation-time",    "creation-period",   "subclass"};
    const auto order = fo::order_facts(planner, exhibit9, [&](std::size_t stage, const fo::StageFeatureVector&,
                                                              fo::FactTypeId chosen) {
      std::cout << "classifier " << stage << " selects " << catalog.name(chosen) << '\n';
    });
    std::cout << "ordering:";
    for (const auto& n : fo::sequence_names(catalog, order)) std::cout << ' ' << n;
    std::cout << '\n';
  } catch (const fo::Error& e) {
    std::cerr << e.what() << '\n';
    return 1;
  }
}
