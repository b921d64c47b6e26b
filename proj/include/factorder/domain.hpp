#pragma once

// Fact types, fact sets, orderings, and datasets.
//
// A fact is identified solely by its type. Every input set holds at most one
// fact per type, so a set of facts is a set of type ids and an ordering is a
// permutation of such a set.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "factorder/error.hpp"

namespace factorder {

/// Dense 0-based index of a fact type within its catalog.
struct FactTypeId {
  std::uint32_t value = 0;

  constexpr std::size_t index() const noexcept { return value; }
  friend constexpr auto operator<=>(FactTypeId, FactTypeId) = default;
};

constexpr FactTypeId fact_type(std::size_t index) noexcept {
  return FactTypeId{static_cast<std::uint32_t>(index)};
}

/// The closed, ordered set of fact types for a domain.
class FactTypeCatalog {
 public:
  FactTypeCatalog() = default;

  std::size_t size() const noexcept { return names_.size(); }
  bool empty() const noexcept { return names_.empty(); }
  const std::vector<std::string>& names() const noexcept { return names_; }

  const std::string& name(FactTypeId id) const {
    require(contains(id), ErrorKind::unknown_type,
            "type id " + std::to_string(id.value) + " outside catalog of size " +
                std::to_string(size()));
    return names_[id.index()];
  }

  bool contains(FactTypeId id) const noexcept { return id.index() < names_.size(); }

  std::optional<FactTypeId> find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  FactTypeId id(std::string_view name) const {
    auto found = find(name);
    if (!found) fail(ErrorKind::unknown_type, "'" + std::string(name) + "' is not in the catalog");
    return *found;
  }

  friend bool operator==(const FactTypeCatalog& a, const FactTypeCatalog& b) {
    return a.names_ == b.names_;
  }

  friend FactTypeCatalog build_catalog(const std::vector<std::string>& names);

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, FactTypeId> index_;
};

/// Ids are assigned in declaration order.
inline FactTypeCatalog build_catalog(const std::vector<std::string>& names) {
  require(!names.empty(), ErrorKind::validation, "catalog needs at least one fact type");
  FactTypeCatalog catalog;
  catalog.names_.reserve(names.size());
  for (const auto& name : names) {
    require(!name.empty(), ErrorKind::validation,
            "empty fact-type name at position " + std::to_string(catalog.names_.size()));
    auto [it, inserted] = catalog.index_.emplace(name, fact_type(catalog.names_.size()));
    require(inserted, ErrorKind::validation, "duplicate fact-type name '" + name + "'");
    catalog.names_.push_back(name);
  }
  return catalog;
}

/// An unordered set of distinct fact types. Members are kept sorted by id, so
/// iteration order never depends on how the set was built.
class FactSet {
 public:
  FactSet() = default;

  /// Throws duplicate_fact if an id repeats.
  static FactSet from_ids(std::vector<FactTypeId> ids) {
    std::sort(ids.begin(), ids.end());
    auto dup = std::adjacent_find(ids.begin(), ids.end());
    require(dup == ids.end(), ErrorKind::duplicate_fact,
            "fact type id " + (dup == ids.end() ? std::string() : std::to_string(dup->value)) +
                " given more than once");
    FactSet set;
    set.members_ = std::move(ids);
    return set;
  }

  std::size_t size() const noexcept { return members_.size(); }
  bool empty() const noexcept { return members_.empty(); }
  const std::vector<FactTypeId>& members() const noexcept { return members_; }
  auto begin() const noexcept { return members_.begin(); }
  auto end() const noexcept { return members_.end(); }

  bool contains(FactTypeId id) const {
    return std::binary_search(members_.begin(), members_.end(), id);
  }

  /// Returns false if `id` was not a member.
  bool erase(FactTypeId id) {
    auto it = std::lower_bound(members_.begin(), members_.end(), id);
    if (it == members_.end() || *it != id) return false;
    members_.erase(it);
    return true;
  }

  friend bool operator==(const FactSet&, const FactSet&) = default;

 private:
  std::vector<FactTypeId> members_;
};

inline FactSet make_fact_set(const FactTypeCatalog& catalog, const std::vector<std::string>& names) {
  std::vector<FactTypeId> ids;
  ids.reserve(names.size());
  for (const auto& name : names) {
    const FactTypeId id = catalog.id(name);
    require(std::find(ids.begin(), ids.end(), id) == ids.end(), ErrorKind::duplicate_fact,
            "'" + name + "' appears more than once");
    ids.push_back(id);
  }
  return FactSet::from_ids(std::move(ids));
}

inline std::vector<std::string> fact_names(const FactTypeCatalog& catalog, const FactSet& set) {
  std::vector<std::string> names;
  names.reserve(set.size());
  for (FactTypeId id : set) names.push_back(catalog.name(id));
  return names;
}

/// A total order over a fact set; index 0 is the first fact.
using OrderedSequence = std::vector<FactTypeId>;

/// Throws duplicate_fact when the sequence repeats a type.
inline FactSet members_of(const OrderedSequence& sequence) {
  return FactSet::from_ids(sequence);
}

inline std::vector<std::string> sequence_names(const FactTypeCatalog& catalog,
                                               const OrderedSequence& sequence) {
  std::vector<std::string> names;
  names.reserve(sequence.size());
  for (FactTypeId id : sequence) names.push_back(catalog.name(id));
  return names;
}

struct Instance {
  std::string id;
  OrderedSequence order;  // gold ordering
};

struct Dataset {
  FactTypeCatalog catalog;
  std::vector<Instance> instances;
  std::size_t sequence_length = 0;

  std::size_t size() const noexcept { return instances.size(); }

  /// Copies the instances at `indices`, in the order given.
  Dataset subset(const std::vector<std::size_t>& indices) const {
    Dataset out{catalog, {}, sequence_length};
    out.instances.reserve(indices.size());
    for (std::size_t i : indices) out.instances.push_back(instances.at(i));
    return out;
  }
};

enum class ViolationKind { length, permutation, unknown_id };

struct Violation {
  std::size_t index = 0;  // instance index within the dataset
  ViolationKind kind = ViolationKind::length;
  std::string message;
};

/// Lists every instance that breaks the length, permutation, or id-validity
/// rules. An instance can contribute more than one violation.
inline std::vector<Violation> validate_dataset(const Dataset& dataset) {
  std::vector<Violation> report;
  const std::size_t n = dataset.sequence_length;
  for (std::size_t i = 0; i < dataset.instances.size(); ++i) {
    const auto& order = dataset.instances[i].order;
    if (order.size() != n) {
      report.push_back({i, ViolationKind::length,
                        "length " + std::to_string(order.size()) + ", expected " + std::to_string(n)});
    }
    bool bad_id = false;
    for (FactTypeId id : order) {
      if (!dataset.catalog.contains(id)) {
        report.push_back({i, ViolationKind::unknown_id,
                          "type id " + std::to_string(id.value) + " not in catalog"});
        bad_id = true;
        break;
      }
    }
    if (bad_id) continue;
    std::vector<FactTypeId> sorted = order;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      report.push_back({i, ViolationKind::permutation, "repeated fact type"});
    }
  }
  return report;
}

inline void require_valid(const Dataset& dataset, ErrorKind kind = ErrorKind::training) {
  require(dataset.sequence_length >= 1, kind, "sequence length must be at least 1");
  auto report = validate_dataset(dataset);
  if (!report.empty()) {
    fail(kind, "instance " + std::to_string(report.front().index) + " (" +
                   dataset.instances[report.front().index].id + "): " + report.front().message +
                   (report.size() > 1 ? " (+" + std::to_string(report.size() - 1) + " more)" : ""));
  }
}

enum class Scheme { majority, fixed_order, knn, decision_tree };

inline std::string_view to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::majority: return "majority";
    case Scheme::fixed_order: return "fixed-order";
    case Scheme::knn: return "knn";
    case Scheme::decision_tree: return "decision-tree";
  }
  return "?";
}

inline constexpr std::string_view kSchemeNames = "majority, fixed-order, knn, decision-tree";

inline std::optional<Scheme> parse_scheme(std::string_view name) {
  for (Scheme s : {Scheme::majority, Scheme::fixed_order, Scheme::knn, Scheme::decision_tree}) {
    if (to_string(s) == name) return s;
  }
  return std::nullopt;
}

struct TreeParams {
  std::size_t min_instances_per_leaf = 2;
  bool pruning_enabled = true;
  double confidence_factor = 0.25;
};

struct PlannerConfig {
  std::size_t sequence_length = 6;
  Scheme scheme = Scheme::decision_tree;
  std::size_t k = 1;                         // knn
  std::vector<FactTypeId> canonical_order;   // fixed-order; a permutation of the catalog
  TreeParams tree;                           // decision-tree
  std::uint64_t rng_seed = 0;
};

/// Checks the scheme parameters against `catalog`.
inline void validate_config(const PlannerConfig& config, const FactTypeCatalog& catalog) {
  require(config.sequence_length >= 1, ErrorKind::configuration, "sequence length must be >= 1");
  require(config.sequence_length <= catalog.size(), ErrorKind::configuration,
          "sequence length " + std::to_string(config.sequence_length) + " exceeds catalog size " +
              std::to_string(catalog.size()));
  switch (config.scheme) {
    case Scheme::knn:
      require(config.k >= 1, ErrorKind::configuration, "k must be a positive integer");
      break;
    case Scheme::decision_tree:
      require(config.tree.min_instances_per_leaf >= 1, ErrorKind::configuration,
              "min_instances_per_leaf must be >= 1");
      require(config.tree.confidence_factor > 0.0 && config.tree.confidence_factor <= 0.5,
              ErrorKind::configuration, "confidence factor must lie in (0, 0.5]");
      break;
    case Scheme::fixed_order: {
      require(config.canonical_order.size() == catalog.size(), ErrorKind::configuration,
              "canonical order has " + std::to_string(config.canonical_order.size()) +
                  " types, catalog has " + std::to_string(catalog.size()));
      std::vector<bool> seen(catalog.size(), false);
      for (FactTypeId id : config.canonical_order) {
        require(catalog.contains(id) && !seen[id.index()], ErrorKind::configuration,
                "canonical order is not a permutation of the catalog");
        seen[id.index()] = true;
      }
      break;
    }
    case Scheme::majority:
      break;
  }
}

}  // namespace factorder
