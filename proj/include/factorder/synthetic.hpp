#pragma once

// Synthetic ordering domains with known ground truth.
//
// Every domain has an anchor type that is present in every fact set and
// always placed first. A fixed-priority domain orders facts by one total
// priority. A context-dependent domain adds rules over pairs (a, b) that sit
// next to each other in the priority: when the condition type c is in the
// set, a precedes b, otherwise b precedes a. Because a and b are adjacent in
// the priority, flipping them never conflicts with anything else, so every
// set still gets exactly one order.
//
// Randomness: mt19937_64 seeded through make_engine(seed, stream), with
// stream 0 for the domain and stream 2 for instance sampling.

#include <algorithm>
#include <cstdint>
#include <iomanip>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "factorder/domain.hpp"
#include "factorder/io.hpp"
#include "factorder/learners/ranking.hpp"
#include "factorder/random.hpp"

namespace factorder {

enum class PolicyKind { fixed_priority, context_dependent };

inline std::string_view to_string(PolicyKind kind) {
  return kind == PolicyKind::fixed_priority ? "fixed-priority" : "context-dependent";
}

inline std::optional<PolicyKind> parse_policy_kind(std::string_view name) {
  if (name == "fixed-priority") return PolicyKind::fixed_priority;
  if (name == "context-dependent") return PolicyKind::context_dependent;
  return std::nullopt;
}

struct ContextRule {
  FactTypeId condition;
  FactTypeId first;   // precedes `second` when `condition` is present
  FactTypeId second;  // precedes `first` otherwise; directly after `first` in the priority

  friend bool operator==(const ContextRule&, const ContextRule&) = default;
};

struct OrderingPolicy {
  PolicyKind kind = PolicyKind::fixed_priority;
  std::vector<FactTypeId> priority;  // anchor first
  std::vector<ContextRule> rules;    // empty for fixed-priority

  friend bool operator==(const OrderingPolicy&, const OrderingPolicy&) = default;
};

struct SyntheticParams {
  std::size_t num_types = 42;
  std::size_t sequence_length = 6;
  PolicyKind kind = PolicyKind::fixed_priority;
  double noise = 0.0;
  std::uint64_t seed = 0;
};

struct SyntheticDomainSpec {
  SyntheticParams params;
  FactTypeCatalog catalog;
  FactTypeId anchor;
  OrderingPolicy policy;

  std::size_t sequence_length() const noexcept { return params.sequence_length; }
};

inline std::vector<std::string> synthetic_type_names(std::size_t num_types) {
  const auto width = std::to_string(num_types - 1).size() < 2 ? 2 : std::to_string(num_types - 1).size();
  std::vector<std::string> names{"anchor"};
  for (std::size_t i = 1; i < num_types; ++i) {
    std::ostringstream name;
    name << "type-" << std::setw(static_cast<int>(width)) << std::setfill('0') << i;
    names.push_back(name.str());
  }
  return names;
}

inline void validate_synthetic(const SyntheticParams& p) {
  require(p.sequence_length >= 2, ErrorKind::configuration, "sequence length must be at least 2");
  require(p.num_types >= p.sequence_length, ErrorKind::configuration,
          "sequence length " + std::to_string(p.sequence_length) + " exceeds " + std::to_string(p.num_types) +
              " fact types");
  require(p.noise >= 0.0 && p.noise < 1.0, ErrorKind::configuration, "noise must lie in [0, 1)");
  if (p.kind == PolicyKind::context_dependent) {
    // A rule needs sets {anchor, c, a, b} and sets holding a and b without c.
    require(p.sequence_length >= 4, ErrorKind::configuration,
            "context-dependent domains need sequence length >= 4");
    require(p.num_types >= p.sequence_length + 1, ErrorKind::configuration,
            "context-dependent domains need more fact types than the sequence length");
  }
}

inline SyntheticDomainSpec generate_domain(const SyntheticParams& params) {
  validate_synthetic(params);
  const std::size_t T = params.num_types;
  SyntheticDomainSpec spec{params, build_catalog(synthetic_type_names(T)), fact_type(0), {}};
  Engine engine = make_engine(params.seed, 0);

  std::vector<FactTypeId> rest;
  for (std::size_t i = 1; i < T; ++i) rest.push_back(fact_type(i));
  shuffle(std::span<FactTypeId>(rest), engine);
  spec.policy.kind = params.kind;
  spec.policy.priority.push_back(spec.anchor);
  spec.policy.priority.insert(spec.policy.priority.end(), rest.begin(), rest.end());

  if (params.kind == PolicyKind::context_dependent) {
    // Disjoint adjacent priority slots (1,2), (3,4), ...; use a third of the
    // non-anchor types' worth of rules, at least one.
    std::vector<std::size_t> slots;
    for (std::size_t s = 1; s + 1 < T; s += 2) slots.push_back(s);
    shuffle(std::span<std::size_t>(slots), engine);
    const std::size_t rule_count = std::clamp<std::size_t>((T - 1) / 3, 1, slots.size());
    slots.resize(rule_count);
    std::sort(slots.begin(), slots.end());
    for (std::size_t s : slots) {
      const FactTypeId first = spec.policy.priority[s];
      const FactTypeId second = spec.policy.priority[s + 1];
      std::vector<FactTypeId> conditions;
      for (FactTypeId id : rest) {
        if (id != first && id != second) conditions.push_back(id);
      }
      const FactTypeId condition = conditions[uniform_below(engine, conditions.size())];
      spec.policy.rules.push_back({condition, first, second});
    }
  }
  return spec;
}

/// The unique policy-consistent order of `facts`, anchor first.
inline OrderedSequence ground_truth_order(const OrderingPolicy& policy, FactTypeId anchor, const FactSet& facts) {
  require(facts.contains(anchor), ErrorKind::contract, "fact set lacks the anchor type");
  std::vector<std::uint32_t> rank(policy.priority.size());
  for (std::size_t i = 0; i < policy.priority.size(); ++i) rank[policy.priority[i].index()] = static_cast<std::uint32_t>(i);
  OrderedSequence order = facts.members();
  for (FactTypeId id : order) {
    require(id.index() < rank.size(), ErrorKind::contract, "fact outside the policy's catalog");
  }
  std::sort(order.begin(), order.end(), [&](FactTypeId a, FactTypeId b) { return rank[a.index()] < rank[b.index()]; });
  for (const auto& rule : policy.rules) {
    if (facts.contains(rule.condition) || !facts.contains(rule.first) || !facts.contains(rule.second)) continue;
    auto it = std::find(order.begin(), order.end(), rule.first);
    std::iter_swap(it, it + 1);  // `second` sits right after `first`
  }
  return order;
}

inline OrderedSequence ground_truth_order(const SyntheticDomainSpec& spec, const FactSet& facts) {
  require(facts.size() == spec.sequence_length(), ErrorKind::contract,
          "fact set has " + std::to_string(facts.size()) + " facts, domain uses " +
              std::to_string(spec.sequence_length()));
  return ground_truth_order(spec.policy, spec.anchor, facts);
}

inline Dataset generate_dataset(const SyntheticDomainSpec& spec, std::size_t count) {
  require(count >= 1, ErrorKind::configuration, "instance count must be at least 1");
  validate_synthetic(spec.params);
  const std::size_t n = spec.sequence_length();
  Engine engine = make_engine(spec.params.seed, 2);

  std::vector<FactTypeId> pool;
  for (std::size_t i = 0; i < spec.catalog.size(); ++i) {
    if (fact_type(i) != spec.anchor) pool.push_back(fact_type(i));
  }
  const auto id_width = std::to_string(count).size();

  Dataset dataset{spec.catalog, {}, n};
  dataset.instances.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    // partial Fisher-Yates: the first n-1 slots become the sample
    for (std::size_t j = 0; j + 1 < n; ++j) {
      const auto pick = j + static_cast<std::size_t>(uniform_below(engine, pool.size() - j));
      std::swap(pool[j], pool[pick]);
    }
    std::vector<FactTypeId> members(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(n - 1));
    members.push_back(spec.anchor);
    auto order = ground_truth_order(spec.policy, spec.anchor, FactSet::from_ids(std::move(members)));

    if (bernoulli(engine, spec.params.noise) && n >= 3) {
      const auto j = 1 + static_cast<std::size_t>(uniform_below(engine, n - 2));  // never touches position 1
      std::swap(order[j], order[j + 1]);
    }
    std::ostringstream id;
    id << "syn-" << std::setw(static_cast<int>(id_width)) << std::setfill('0') << (i + 1);
    dataset.instances.push_back({id.str(), std::move(order)});
  }
  return dataset;
}

// ---------------------------------------------------------------------------
// Exhaustive best fixed order

inline constexpr std::size_t kOracleMaxTypes = 8;

struct FixedOrderBound {
  std::vector<FactTypeId> canonical;  // first optimum in lexicographic id order
  std::vector<double> per_position;
  double mean_accuracy = 0.0;
};

/// Tries every total order over the catalog as a fixed-order planner and
/// returns the one with the highest mean per-position accuracy on `dataset`.
inline FixedOrderBound best_fixed_order_oracle(const Dataset& dataset) {
  const std::size_t T = dataset.catalog.size();
  require(T <= kOracleMaxTypes, ErrorKind::configuration,
          "exhaustive fixed-order search is limited to " + std::to_string(kOracleMaxTypes) + " fact types, catalog has " +
              std::to_string(T));
  require(!dataset.instances.empty(), ErrorKind::contract, "oracle on an empty dataset");
  require_valid(dataset, ErrorKind::contract);
  const std::size_t n = dataset.sequence_length;

  std::map<OrderedSequence, std::size_t> distinct;  // gold order -> multiplicity
  for (const auto& inst : dataset.instances) ++distinct[inst.order];

  std::vector<FactTypeId> perm = all_types(T);
  std::vector<std::uint32_t> rank(T);
  std::vector<double> hits(n);
  FixedOrderBound best;
  best.mean_accuracy = -1.0;
  const auto total = static_cast<double>(dataset.size());
  do {
    for (std::size_t i = 0; i < T; ++i) rank[perm[i].index()] = static_cast<std::uint32_t>(i);
    std::fill(hits.begin(), hits.end(), 0.0);
    for (const auto& [gold, weight] : distinct) {
      OrderedSequence predicted = gold;
      std::sort(predicted.begin(), predicted.end(),
                [&](FactTypeId a, FactTypeId b) { return rank[a.index()] < rank[b.index()]; });
      for (std::size_t p = 0; p < n; ++p) {
        if (predicted[p] == gold[p]) hits[p] += static_cast<double>(weight);
      }
    }
    double sum = 0.0;
    for (double h : hits) sum += h / total;
    const double m = sum / static_cast<double>(n);
    if (m > best.mean_accuracy + 1e-12) {
      best.mean_accuracy = m;
      best.canonical = perm;
      best.per_position.resize(n);
      for (std::size_t p = 0; p < n; ++p) best.per_position[p] = hits[p] / total;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// ---------------------------------------------------------------------------
// Sidecar: a domain schema (fact_types + canonical_order = the generating
// priority) plus a "synthetic" block sufficient to regenerate the dataset.

inline nlohmann::json sidecar_to_json(const SyntheticDomainSpec& spec, std::size_t count) {
  const auto& c = spec.catalog;
  nlohmann::json rules = nlohmann::json::array();
  for (const auto& r : spec.policy.rules) {
    rules.push_back({{"if_present", c.name(r.condition)}, {"first", c.name(r.first)}, {"second", c.name(r.second)}});
  }
  return {{"fact_types", c.names()},
          {"canonical_order", sequence_names(c, spec.policy.priority)},
          {"synthetic",
           {{"types", spec.params.num_types},
            {"sequence_length", spec.params.sequence_length},
            {"kind", std::string(to_string(spec.params.kind))},
            {"noise", spec.params.noise},
            {"seed", spec.params.seed},
            {"instances", count},
            {"anchor", c.name(spec.anchor)},
            {"generator", "mt19937_64, splitmix64-derived stream seeds"},
            {"policy", {{"priority", sequence_names(c, spec.policy.priority)}, {"rules", std::move(rules)}}}}}};
}

struct SidecarInfo {
  SyntheticDomainSpec spec;
  std::size_t instances = 0;
};

/// Regenerates the domain from a sidecar and checks that its recorded policy
/// matches what the generator produces.
inline SidecarInfo spec_from_sidecar(const nlohmann::json& j) {
  try {
    const auto& s = j.at("synthetic");
    SyntheticParams p;
    p.num_types = s.at("types").get<std::size_t>();
    p.sequence_length = s.at("sequence_length").get<std::size_t>();
    auto kind = parse_policy_kind(s.at("kind").get<std::string>());
    require(kind.has_value(), ErrorKind::data, "sidecar: unknown policy kind");
    p.kind = *kind;
    p.noise = s.at("noise").get<double>();
    p.seed = s.at("seed").get<std::uint64_t>();
    SidecarInfo info{generate_domain(p), s.at("instances").get<std::size_t>()};
    const auto& c = info.spec.catalog;
    require(s.at("policy").at("priority").get<std::vector<std::string>>() == sequence_names(c, info.spec.policy.priority),
            ErrorKind::data, "sidecar priority does not match the generator for this seed");
    return info;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::data, std::string("sidecar: ") + e.what());
  }
}

}  // namespace factorder
