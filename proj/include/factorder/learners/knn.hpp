#pragma once

// Instance-based stage classifier (k-nearest neighbours, overlap metric).

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "factorder/encoding.hpp"
#include "factorder/learners/ranking.hpp"

namespace factorder {

struct KnnModel {
  std::size_t k = 1;
  std::vector<StageExample> stored;

  friend bool operator==(const KnnModel&, const KnnModel&) = default;
};

inline KnnModel train_knn(std::span<const StageExample> examples, std::size_t k) {
  require(k >= 1, ErrorKind::configuration, "k must be a positive integer");
  require(!examples.empty(), ErrorKind::training, "knn scheme needs at least one example");
  return KnnModel{k, {examples.begin(), examples.end()}};
}

/// Number of differing presence bits plus number of differing selected slots.
inline std::size_t knn_distance(const StageFeatureVector& a, const StageFeatureVector& b) {
  require(a.presence.size() == b.presence.size() && a.selected.size() == b.selected.size(),
          ErrorKind::contract, "knn_distance on vectors of different width");
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.presence.size(); ++i) d += a.presence[i] != b.presence[i];
  for (std::size_t i = 0; i < a.selected.size(); ++i) d += a.selected[i] != b.selected[i];
  return d;
}

/// Votes among the k nearest stored examples whose label is legal. Distance
/// ties go to the lower storage index, vote ties to the lower type id, and
/// legal classes without votes follow in ascending id order. With k = 1 this
/// returns the label of the nearest neighbour that is still placeable.
inline std::vector<FactTypeId> predict_ranked(const KnnModel& model, const StageFeatureVector& query,
                                              std::span<const FactTypeId> legal) {
  require_legal(legal);
  std::vector<std::uint8_t> is_legal;
  for (FactTypeId id : legal) {
    if (id.index() >= is_legal.size()) is_legal.resize(id.index() + 1, 0);
    is_legal[id.index()] = 1;
  }
  auto legal_label = [&](FactTypeId id) { return id.index() < is_legal.size() && is_legal[id.index()]; };

  struct Candidate {
    std::size_t distance;
    std::size_t index;
  };
  std::vector<Candidate> candidates;
  candidates.reserve(model.stored.size());
  for (std::size_t i = 0; i < model.stored.size(); ++i) {
    if (!legal_label(model.stored[i].label)) continue;
    candidates.push_back({knn_distance(query, model.stored[i].vector), i});
  }
  const std::size_t take = std::min(model.k, candidates.size());
  auto by_distance = [](const Candidate& a, const Candidate& b) {
    return a.distance != b.distance ? a.distance < b.distance : a.index < b.index;
  };
  std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(take),
                    candidates.end(), by_distance);

  std::vector<std::size_t> votes(is_legal.size(), 0);
  for (std::size_t i = 0; i < take; ++i) ++votes[model.stored[candidates[i].index].label.index()];
  return rank_descending(legal, [&](FactTypeId id) { return votes[id.index()]; });
}

}  // namespace factorder
