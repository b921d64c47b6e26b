#pragma once

// C4.5-style decision tree over stage feature vectors.
//
// Presence bits split two ways, selected-fact attributes split once per
// observed value. Splits are chosen by gain ratio among attributes whose gain
// is at least the average gain of the usable candidates, and the grown tree is
// optionally pruned by pessimistic-error subtree replacement.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <type_traits>
#include <utility>
#include <vector>

#include <boost/math/distributions/normal.hpp>

#include "factorder/encoding.hpp"
#include "factorder/learners/ranking.hpp"

namespace factorder {

using ClassCounts = std::vector<std::uint32_t>;  // indexed by type id

struct TreeNode {
  std::optional<std::uint32_t> attribute;                          // empty for a leaf
  ClassCounts counts;                                              // training instances reaching the node
  std::vector<std::pair<std::uint32_t, std::uint32_t>> children;  // (attribute value, node index), by value

  bool is_leaf() const noexcept { return !attribute.has_value(); }
  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

struct TreeModel {
  std::size_t num_types = 0;
  std::size_t width = 0;        // attributes per query: T + stage - 1
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  const TreeNode& root() const { return nodes.front(); }
  std::size_t leaf_count() const {
    return static_cast<std::size_t>(std::count_if(nodes.begin(), nodes.end(),
                                                  [](const TreeNode& n) { return n.is_leaf(); }));
  }
  friend bool operator==(const TreeModel&, const TreeModel&) = default;
};

/// Shannon entropy in bits of a class-count table.
template <typename Count>
double entropy(std::span<const Count> counts) {
  double total = 0.0;
  for (Count c : counts) {
    if constexpr (std::is_signed_v<Count>) require(c >= 0, ErrorKind::contract, "negative class count");
    total += static_cast<double>(c);
  }
  require(total > 0.0, ErrorKind::contract, "entropy of an empty count table");
  double h = 0.0;
  for (Count c : counts) {
    if (c > 0) {
      const double p = static_cast<double>(c) / total;
      h -= p * std::log2(p);
    }
  }
  return h;
}

inline double entropy(const ClassCounts& counts) { return entropy(std::span<const std::uint32_t>(counts)); }

namespace detail {

inline constexpr double kEpsilon = 1e-10;

struct SplitStats {
  double gain = 0.0;
  double split_info = 0.0;
  std::size_t branches = 0;       // non-empty branches
  std::size_t large_branches = 0; // branches holding at least min_instances_per_leaf
};

inline std::size_t attribute_arity(std::size_t attribute, std::size_t num_types) {
  return attribute < num_types ? 2 : num_types;
}

/// Class counts per attribute value over the instances in `rows`.
inline std::vector<ClassCounts> partition_counts(std::span<const StageExample> examples,
                                                 std::span<const std::size_t> rows, std::size_t attribute,
                                                 std::size_t num_types) {
  std::vector<ClassCounts> table(attribute_arity(attribute, num_types), ClassCounts(num_types, 0));
  for (std::size_t r : rows) {
    const auto& ex = examples[r];
    ++table[ex.vector.attribute(attribute)][ex.label.index()];
  }
  return table;
}

inline double count_total(const ClassCounts& counts) {
  double t = 0.0;
  for (auto c : counts) t += c;
  return t;
}

inline SplitStats split_stats(const ClassCounts& parent, const std::vector<ClassCounts>& table,
                              std::size_t min_instances) {
  SplitStats s;
  const double total = count_total(parent);
  double remainder = 0.0;
  for (const auto& branch : table) {
    const double size = count_total(branch);
    if (size == 0.0) continue;
    ++s.branches;
    if (size >= static_cast<double>(min_instances)) ++s.large_branches;
    const double w = size / total;
    remainder += w * entropy(branch);
    s.split_info -= w * std::log2(w);
  }
  s.gain = entropy(parent) - remainder;
  return s;
}

inline std::optional<double> ratio_if_usable(const SplitStats& s) {
  if (s.split_info <= kEpsilon || s.gain <= kEpsilon) return std::nullopt;
  return s.gain / s.split_info;
}

}  // namespace detail

/// Gain ratio of splitting `examples` on `attribute`; empty when the split
/// information is zero or the gain is not positive.
inline std::optional<double> gain_ratio(std::span<const StageExample> examples, std::size_t attribute) {
  require(!examples.empty(), ErrorKind::contract, "gain ratio of an empty example set");
  const std::size_t num_types = examples.front().vector.presence.size();
  require(attribute < examples.front().vector.width(), ErrorKind::contract, "attribute index out of range");
  std::vector<std::size_t> rows(examples.size());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  ClassCounts parent(num_types, 0);
  for (const auto& ex : examples) ++parent[ex.label.index()];
  auto table = detail::partition_counts(examples, rows, attribute, num_types);
  return detail::ratio_if_usable(detail::split_stats(parent, table, 1));
}

/// Upper confidence limit on errors at a leaf, less the observed errors
/// (C4.5's pessimistic estimate; binomial with a normal approximation).
inline double pessimistic_extra_errors(double n, double errors, double confidence) {
  if (errors < 1.0) {
    const double base = n * (1.0 - std::pow(confidence, 1.0 / n));
    if (errors == 0.0) return base;
    return base + errors * (pessimistic_extra_errors(n, 1.0, confidence) - base);
  }
  if (errors + 0.5 >= n) return std::max(n - errors, 0.0);
  const double z = boost::math::quantile(boost::math::normal_distribution<double>(), 1.0 - confidence);
  const double f = (errors + 0.5) / n;
  const double r =
      (f + z * z / (2 * n) + z * std::sqrt(f / n - f * f / n + z * z / (4 * n * n))) / (1 + z * z / n);
  return r * n - errors;
}

namespace detail {

class TreeBuilder {
 public:
  TreeBuilder(std::span<const StageExample> examples, const TreeParams& params)
      : examples_(examples),
        params_(params),
        num_types_(examples.front().vector.presence.size()),
        width_(examples.front().vector.width()) {}

  TreeModel build() {
    std::vector<std::size_t> rows(examples_.size());
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
    TreeModel model{num_types_, width_, {}};
    grow(model, rows);
    if (params_.pruning_enabled) {
      prune(model, 0);
      model = compact(model);
    }
    return model;
  }

 private:
  std::uint32_t grow(TreeModel& model, const std::vector<std::size_t>& rows) {
    const auto index = static_cast<std::uint32_t>(model.nodes.size());
    model.nodes.push_back({});
    ClassCounts counts(num_types_, 0);
    for (std::size_t r : rows) ++counts[examples_[r].label.index()];

    const bool pure = std::count_if(counts.begin(), counts.end(), [](auto c) { return c > 0; }) <= 1;
    std::optional<std::size_t> attribute;
    if (!pure && rows.size() >= params_.min_instances_per_leaf) attribute = choose(counts, rows);

    if (attribute) {
      std::vector<std::vector<std::size_t>> parts(attribute_arity(*attribute, num_types_));
      for (std::size_t r : rows) parts[examples_[r].vector.attribute(*attribute)].push_back(r);
      std::vector<std::pair<std::uint32_t, std::uint32_t>> children;
      for (std::size_t v = 0; v < parts.size(); ++v) {
        if (parts[v].empty()) continue;
        children.emplace_back(static_cast<std::uint32_t>(v), grow(model, parts[v]));
      }
      model.nodes[index].attribute = static_cast<std::uint32_t>(*attribute);
      model.nodes[index].children = std::move(children);
    }
    model.nodes[index].counts = std::move(counts);
    return index;
  }

  std::optional<std::size_t> choose(const ClassCounts& counts, const std::vector<std::size_t>& rows) const {
    struct Candidate {
      std::size_t attribute;
      double gain;
      double ratio;
    };
    std::vector<Candidate> usable;
    std::optional<std::size_t> first_separating;
    for (std::size_t a = 0; a < width_; ++a) {
      auto table = partition_counts(examples_, rows, a, num_types_);
      auto stats = split_stats(counts, table, params_.min_instances_per_leaf);
      if (stats.large_branches < 2) continue;
      if (!first_separating) first_separating = a;
      if (auto ratio = ratio_if_usable(stats)) usable.push_back({a, stats.gain, *ratio});
    }
    // Parity-like nodes where every single attribute has zero gain: split
    // anyway so that an unpruned tree can still separate its training rows.
    if (usable.empty()) return first_separating;
    double mean_gain = 0.0;
    for (const auto& c : usable) mean_gain += c.gain;
    mean_gain /= static_cast<double>(usable.size());

    const Candidate* best = nullptr;
    for (const auto& c : usable) {
      if (c.gain < mean_gain - kEpsilon) continue;
      if (!best || c.ratio > best->ratio + kEpsilon) best = &c;
    }
    return best->attribute;
  }

  double leaf_error(const ClassCounts& counts) const {
    const double n = count_total(counts);
    const double errors = n - static_cast<double>(*std::max_element(counts.begin(), counts.end()));
    return errors + pessimistic_extra_errors(n, errors, params_.confidence_factor);
  }

  /// Bottom-up subtree replacement; returns the estimated errors of the
  /// (possibly collapsed) subtree rooted at `index`.
  double prune(TreeModel& model, std::uint32_t index) {
    if (model.nodes[index].is_leaf()) return leaf_error(model.nodes[index].counts);
    double subtree = 0.0;
    for (auto [value, child] : model.nodes[index].children) subtree += prune(model, child);
    const double as_leaf = leaf_error(model.nodes[index].counts);
    if (as_leaf <= subtree + 0.1) {
      model.nodes[index].attribute.reset();
      model.nodes[index].children.clear();
      return as_leaf;
    }
    return subtree;
  }

  /// Drops nodes orphaned by pruning; preorder numbering is preserved.
  static TreeModel compact(const TreeModel& in) {
    TreeModel out{in.num_types, in.width, {}};
    copy(in, out, 0);
    return out;
  }

  static std::uint32_t copy(const TreeModel& in, TreeModel& out, std::uint32_t index) {
    const auto at = static_cast<std::uint32_t>(out.nodes.size());
    out.nodes.push_back(in.nodes[index]);
    const auto& children = in.nodes[index].children;
    for (std::size_t c = 0; c < children.size(); ++c) {
      const auto moved = copy(in, out, children[c].second);
      out.nodes[at].children[c].second = moved;
    }
    return at;
  }

  std::span<const StageExample> examples_;
  TreeParams params_;
  std::size_t num_types_;
  std::size_t width_;
};

}  // namespace detail

inline TreeModel train_tree(std::span<const StageExample> examples, const TreeParams& params = {}) {
  require(!examples.empty(), ErrorKind::training, "decision tree needs at least one example");
  require(params.min_instances_per_leaf >= 1, ErrorKind::configuration, "min_instances_per_leaf must be >= 1");
  require(params.confidence_factor > 0.0 && params.confidence_factor <= 0.5, ErrorKind::configuration,
          "confidence factor must lie in (0, 0.5]");
  const std::size_t width = examples.front().vector.width();
  for (const auto& ex : examples) {
    require(ex.vector.width() == width && ex.vector.presence.size() == examples.front().vector.presence.size(),
            ErrorKind::training, "examples of mixed stage width");
  }
  return detail::TreeBuilder(examples, params).build();
}

/// Index of the node a query settles in: a leaf, or the deepest node whose
/// branch for the query's value was never seen in training.
inline std::uint32_t descend(const TreeModel& model, const StageFeatureVector& query) {
  require(query.width() == model.width && query.presence.size() == model.num_types, ErrorKind::contract,
          "query width " + std::to_string(query.width()) + " does not match tree width " +
              std::to_string(model.width));
  std::uint32_t index = 0;
  for (;;) {
    const TreeNode& node = model.nodes[index];
    if (node.is_leaf()) return index;
    const std::uint32_t value = query.attribute(*node.attribute);
    auto it = std::lower_bound(node.children.begin(), node.children.end(), value,
                               [](const auto& child, std::uint32_t v) { return child.first < v; });
    if (it == node.children.end() || it->first != value) return index;
    index = it->second;
  }
}

inline std::vector<FactTypeId> predict_ranked(const TreeModel& model, const StageFeatureVector& query,
                                              std::span<const FactTypeId> legal) {
  require_legal(legal);
  const ClassCounts& counts = model.nodes[descend(model, query)].counts;
  return rank_descending(legal, [&](FactTypeId id) {
    return id.index() < counts.size() ? counts[id.index()] : std::uint32_t{0};
  });
}

}  // namespace factorder
