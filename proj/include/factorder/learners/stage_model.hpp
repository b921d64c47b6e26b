#pragma once

#include <span>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "factorder/domain.hpp"
#include "factorder/encoding.hpp"
#include "factorder/learners/fixed_order.hpp"
#include "factorder/learners/knn.hpp"
#include "factorder/learners/majority.hpp"
#include "factorder/learners/tree.hpp"

namespace factorder {

/// One trained stage classifier of any scheme. Immutable after training.
class StageModel {
 public:
  using Payload = std::variant<MajorityModel, FixedOrderModel, KnnModel, TreeModel>;

  explicit StageModel(Payload payload) : payload_(std::move(payload)) {}

  Scheme scheme() const noexcept { return static_cast<Scheme>(payload_.index()); }
  const Payload& payload() const noexcept { return payload_; }

  /// Ranking restricted to `legal`: a permutation of it, best first.
  std::vector<FactTypeId> predict_ranked(const StageFeatureVector& query,
                                         std::span<const FactTypeId> legal) const {
    return std::visit([&](const auto& m) { return factorder::predict_ranked(m, query, legal); }, payload_);
  }

  FactTypeId predict(const StageFeatureVector& query, std::span<const FactTypeId> legal) const {
    return predict_ranked(query, legal).front();
  }

  friend bool operator==(const StageModel&, const StageModel&) = default;

 private:
  Payload payload_;
};

static_assert(std::is_same_v<std::variant_alternative_t<static_cast<std::size_t>(Scheme::majority), StageModel::Payload>, MajorityModel>);
static_assert(std::is_same_v<std::variant_alternative_t<static_cast<std::size_t>(Scheme::fixed_order), StageModel::Payload>, FixedOrderModel>);
static_assert(std::is_same_v<std::variant_alternative_t<static_cast<std::size_t>(Scheme::knn), StageModel::Payload>, KnnModel>);
static_assert(std::is_same_v<std::variant_alternative_t<static_cast<std::size_t>(Scheme::decision_tree), StageModel::Payload>, TreeModel>);

inline StageModel train_stage_model(const PlannerConfig& config, std::span<const StageExample> examples,
                                    std::size_t num_types) {
  switch (config.scheme) {
    case Scheme::majority: return StageModel(train_majority(examples));
    case Scheme::fixed_order: return StageModel(make_fixed_order(config.canonical_order, num_types));
    case Scheme::knn: return StageModel(train_knn(examples, config.k));
    case Scheme::decision_tree: return StageModel(train_tree(examples, config.tree));
  }
  fail(ErrorKind::configuration, "unknown scheme");
}

// ---------------------------------------------------------------------------
// JSON persistence. Type ids are stored as integers; the owning planner file
// carries the catalog that gives them names.

namespace detail {

inline std::vector<std::uint32_t> ids_to_ints(const std::vector<FactTypeId>& ids) {
  std::vector<std::uint32_t> out;
  out.reserve(ids.size());
  for (FactTypeId id : ids) out.push_back(id.value);
  return out;
}

inline std::vector<FactTypeId> ints_to_ids(const nlohmann::json& j) {
  std::vector<FactTypeId> out;
  for (const auto& v : j) out.push_back(FactTypeId{v.get<std::uint32_t>()});
  return out;
}

/// Sparse [[id, count], ...] for non-zero counts.
template <typename Count>
nlohmann::json sparse_counts(const std::vector<Count>& counts) {
  nlohmann::json out = nlohmann::json::array();
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] != 0) out.push_back({i, counts[i]});
  }
  return out;
}

template <typename Count>
std::vector<Count> dense_counts(const nlohmann::json& j, std::size_t num_types) {
  std::vector<Count> out(num_types, 0);
  for (const auto& pair : j) {
    const auto id = pair.at(0).get<std::size_t>();
    require(id < num_types, ErrorKind::deserialization, "class id " + std::to_string(id) + " out of range");
    out[id] = pair.at(1).get<Count>();
  }
  return out;
}

inline nlohmann::json vector_to_json(const StageFeatureVector& v) {
  return {{"presence", v.presence}, {"selected", ids_to_ints(v.selected)}};
}

inline StageFeatureVector vector_from_json(const nlohmann::json& j) {
  StageFeatureVector v;
  v.presence = j.at("presence").get<std::vector<std::uint8_t>>();
  v.selected = ints_to_ids(j.at("selected"));
  return v;
}

}  // namespace detail

inline nlohmann::json to_json(const StageModel& model) {
  using nlohmann::json;
  json out{{"scheme", std::string(to_string(model.scheme()))}};
  std::visit(
      [&](const auto& m) {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, MajorityModel>) {
          out["num_types"] = m.counts.size();
          out["counts"] = detail::sparse_counts(m.counts);
        } else if constexpr (std::is_same_v<M, FixedOrderModel>) {
          out["canonical"] = detail::ids_to_ints(m.canonical);
        } else if constexpr (std::is_same_v<M, KnnModel>) {
          out["k"] = m.k;
          json stored = json::array();
          for (const auto& ex : m.stored) {
            json e = detail::vector_to_json(ex.vector);
            e["label"] = ex.label.value;
            stored.push_back(std::move(e));
          }
          out["stored"] = std::move(stored);
        } else {
          out["num_types"] = m.num_types;
          out["width"] = m.width;
          json nodes = json::array();
          for (const auto& node : m.nodes) {
            json n{{"counts", detail::sparse_counts(node.counts)}};
            if (node.attribute) {
              n["attribute"] = *node.attribute;
              json children = json::array();
              for (auto [value, child] : node.children) children.push_back({value, child});
              n["children"] = std::move(children);
            }
            nodes.push_back(std::move(n));
          }
          out["nodes"] = std::move(nodes);
        }
      },
      model.payload());
  return out;
}

/// Rebuilds a stage model; `num_types` is the size of the owning catalog.
inline StageModel stage_model_from_json(const nlohmann::json& j, std::size_t num_types) {
  const auto tag = j.at("scheme").get<std::string>();
  const auto scheme = parse_scheme(tag);
  require(scheme.has_value(), ErrorKind::deserialization, "unknown scheme tag '" + tag + "'");
  switch (*scheme) {
    case Scheme::majority: {
      require(j.at("num_types").get<std::size_t>() == num_types, ErrorKind::deserialization,
              "majority table size does not match catalog");
      return StageModel(MajorityModel{detail::dense_counts<std::uint64_t>(j.at("counts"), num_types)});
    }
    case Scheme::fixed_order: {
      auto canonical = detail::ints_to_ids(j.at("canonical"));
      try {
        return StageModel(make_fixed_order(canonical, num_types));
      } catch (const Error& e) {
        fail(ErrorKind::deserialization, e.what());
      }
    }
    case Scheme::knn: {
      KnnModel m;
      m.k = j.at("k").get<std::size_t>();
      require(m.k >= 1, ErrorKind::deserialization, "k must be positive");
      for (const auto& e : j.at("stored")) {
        StageExample ex{detail::vector_from_json(e), FactTypeId{e.at("label").get<std::uint32_t>()}};
        require(ex.vector.presence.size() == num_types && ex.label.index() < num_types,
                ErrorKind::deserialization, "stored knn example does not match catalog");
        m.stored.push_back(std::move(ex));
      }
      return StageModel(std::move(m));
    }
    case Scheme::decision_tree: {
      TreeModel m;
      m.num_types = j.at("num_types").get<std::size_t>();
      m.width = j.at("width").get<std::size_t>();
      require(m.num_types == num_types, ErrorKind::deserialization, "tree does not match catalog");
      const auto& nodes = j.at("nodes");
      require(!nodes.empty(), ErrorKind::deserialization, "tree without nodes");
      for (const auto& n : nodes) {
        TreeNode node;
        node.counts = detail::dense_counts<std::uint32_t>(n.at("counts"), num_types);
        if (n.contains("attribute")) {
          node.attribute = n.at("attribute").get<std::uint32_t>();
          require(*node.attribute < m.width, ErrorKind::deserialization, "split attribute out of range");
          for (const auto& c : n.at("children")) {
            const auto child = c.at(1).get<std::uint32_t>();
            require(child > m.nodes.size() && child < nodes.size(), ErrorKind::deserialization,
                    "child index out of range");
            node.children.emplace_back(c.at(0).get<std::uint32_t>(), child);
          }
          require(std::is_sorted(node.children.begin(), node.children.end()), ErrorKind::deserialization,
                  "tree children must be sorted by value");
        }
        m.nodes.push_back(std::move(node));
      }
      return StageModel(std::move(m));
    }
  }
  fail(ErrorKind::deserialization, "unknown scheme");
}

}  // namespace factorder
