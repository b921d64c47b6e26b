#pragma once

// Stratified k-fold cross-validation of whole planners.
//
// Accuracy at position p is the fraction of test instances whose p-th output
// fact matches the gold fact, with every stage conditioned on the planner's
// own earlier output. One misplaced fact therefore usually costs several
// positions.

#include <algorithm>
#include <cstdint>
#include <future>
#include <iomanip>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "factorder/domain.hpp"
#include "factorder/planner.hpp"
#include "factorder/random.hpp"
#include "factorder/statistics.hpp"

namespace factorder {

// ---------------------------------------------------------------------------
// Folds

struct FoldAssignment {
  std::vector<std::size_t> fold_of;  // instance index -> fold id
  std::size_t k = 0;
  std::uint64_t seed = 0;

  std::vector<std::size_t> test_indices(std::size_t fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < fold_of.size(); ++i) {
      if (fold_of[i] == fold) out.push_back(i);
    }
    return out;
  }

  std::vector<std::size_t> train_indices(std::size_t fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < fold_of.size(); ++i) {
      if (fold_of[i] != fold) out.push_back(i);
    }
    return out;
  }

  friend bool operator==(const FoldAssignment&, const FoldAssignment&) = default;
};

/// Stratification label: the gold fact at position 2, the first position
/// whose class is not fixed by the domain (position 1 when n = 1).
inline FactTypeId stratum_of(const Instance& instance) {
  return instance.order.size() >= 2 ? instance.order[1] : instance.order.at(0);
}

/// Shuffles each stratum with the seeded engine, lays the strata end to end
/// in ascending label order, and deals the result round-robin into k folds.
inline FoldAssignment stratified_folds(const Dataset& dataset, std::size_t k, std::uint64_t seed) {
  require(k >= 2, ErrorKind::configuration, "need at least 2 folds, got " + std::to_string(k));
  require(k <= dataset.size(), ErrorKind::configuration,
          std::to_string(k) + " folds requested for " + std::to_string(dataset.size()) + " instances");
  std::map<FactTypeId, std::vector<std::size_t>> strata;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    require(!dataset.instances[i].order.empty(), ErrorKind::contract, "empty instance");
    strata[stratum_of(dataset.instances[i])].push_back(i);
  }
  Engine engine = make_engine(seed, /*stream=*/1);
  std::vector<std::size_t> dealt;
  dealt.reserve(dataset.size());
  for (auto& [label, members] : strata) {
    shuffle(std::span<std::size_t>(members), engine);
    dealt.insert(dealt.end(), members.begin(), members.end());
  }
  FoldAssignment folds{std::vector<std::size_t>(dataset.size()), k, seed};
  for (std::size_t pos = 0; pos < dealt.size(); ++pos) folds.fold_of[dealt[pos]] = pos % k;
  return folds;
}

// ---------------------------------------------------------------------------
// Metrics

inline void require_aligned(const std::vector<OrderedSequence>& predicted, const std::vector<OrderedSequence>& gold) {
  require(predicted.size() == gold.size(), ErrorKind::contract,
          "predicted and gold lists differ in length (" + std::to_string(predicted.size()) + " vs " +
              std::to_string(gold.size()) + ")");
  require(!gold.empty(), ErrorKind::contract, "no sequences to score");
  for (std::size_t i = 0; i < gold.size(); ++i) {
    require(predicted[i].size() == gold.front().size() && gold[i].size() == gold.front().size(),
            ErrorKind::contract, "sequence " + std::to_string(i) + " has a different length");
  }
}

inline std::vector<double> per_position_accuracy(const std::vector<OrderedSequence>& predicted,
                                                 const std::vector<OrderedSequence>& gold) {
  require_aligned(predicted, gold);
  const std::size_t n = gold.front().size();
  std::vector<double> accuracy(n, 0.0);
  for (std::size_t i = 0; i < gold.size(); ++i) {
    for (std::size_t p = 0; p < n; ++p) accuracy[p] += predicted[i][p] == gold[i][p];
  }
  for (double& a : accuracy) a /= static_cast<double>(gold.size());
  return accuracy;
}

namespace detail {

inline std::size_t merge_count(std::vector<std::size_t>& v, std::vector<std::size_t>& scratch, std::size_t lo,
                               std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::size_t inversions = merge_count(v, scratch, lo, mid) + merge_count(v, scratch, mid, hi);
  std::size_t i = lo, j = mid, out = lo;
  while (i < mid && j < hi) {
    if (v[j] < v[i]) {
      inversions += mid - i;
      scratch[out++] = v[j++];
    } else {
      scratch[out++] = v[i++];
    }
  }
  while (i < mid) scratch[out++] = v[i++];
  while (j < hi) scratch[out++] = v[j++];
  std::copy(scratch.begin() + static_cast<std::ptrdiff_t>(lo), scratch.begin() + static_cast<std::ptrdiff_t>(hi),
            v.begin() + static_cast<std::ptrdiff_t>(lo));
  return inversions;
}

}  // namespace detail

/// Minimum number of adjacent transpositions turning `gold` into `predicted`.
inline std::size_t swap_edit_distance(const OrderedSequence& predicted, const OrderedSequence& gold) {
  require(predicted.size() == gold.size(), ErrorKind::contract, "sequences differ in length");
  std::map<FactTypeId, std::size_t> gold_position;
  for (std::size_t i = 0; i < gold.size(); ++i) gold_position[gold[i]] = i;
  require(gold_position.size() == gold.size(), ErrorKind::contract, "gold sequence repeats a fact");
  std::vector<std::size_t> ranks;
  ranks.reserve(predicted.size());
  std::vector<bool> used(gold.size(), false);
  for (FactTypeId id : predicted) {
    auto it = gold_position.find(id);
    require(it != gold_position.end() && !used[it->second], ErrorKind::contract,
            "predicted sequence is not a permutation of the gold facts");
    used[it->second] = true;
    ranks.push_back(it->second);
  }
  std::vector<std::size_t> scratch(ranks.size());
  return detail::merge_count(ranks, scratch, 0, ranks.size());
}

/// Kendall rank correlation between two orderings of the same facts.
inline double kendall_tau(const OrderedSequence& predicted, const OrderedSequence& gold) {
  const std::size_t n = gold.size();
  const std::size_t inversions = swap_edit_distance(predicted, gold);
  if (n < 2) return 1.0;
  const double pairs = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
  return 1.0 - 2.0 * static_cast<double>(inversions) / pairs;
}

struct SequenceMetrics {
  double exact_match = 0.0;
  double kendall_tau = 0.0;
  double swap_edit_distance = 0.0;
};

inline SequenceMetrics sequence_metrics(const std::vector<OrderedSequence>& predicted,
                                        const std::vector<OrderedSequence>& gold) {
  require_aligned(predicted, gold);
  SequenceMetrics m;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    m.exact_match += predicted[i] == gold[i];
    m.kendall_tau += kendall_tau(predicted[i], gold[i]);
    m.swap_edit_distance += static_cast<double>(swap_edit_distance(predicted[i], gold[i]));
  }
  const auto count = static_cast<double>(gold.size());
  m.exact_match /= count;
  m.kendall_tau /= count;
  m.swap_edit_distance /= count;
  return m;
}

// ---------------------------------------------------------------------------
// Cross-validation

/// Accuracy of each stage classifier on its own, fed the gold prefix rather
/// than the pipeline's earlier output. The last stage is always 1.0.
inline std::vector<double> stage_accuracy(const TrainedPlanner& planner, const std::vector<OrderedSequence>& gold) {
  require(!gold.empty(), ErrorKind::contract, "no sequences to score");
  const std::size_t n = planner.sequence_length();
  std::vector<double> hits(n, 0.0);
  for (const auto& order : gold) {
    require(order.size() == n, ErrorKind::contract, "gold sequence has the wrong length");
    FactSet remaining = members_of(order);
    OrderedSequence prefix;
    for (std::size_t stage = 1; stage <= n; ++stage) {
      const auto legal = legal_classes(remaining);
      const FactTypeId chosen =
          legal.size() == 1 ? legal.front()
                            : planner.stages[stage - 1].predict(encode_stage(planner.catalog, remaining, prefix, stage), legal);
      hits[stage - 1] += chosen == order[stage - 1];
      prefix.push_back(order[stage - 1]);
      remaining.erase(order[stage - 1]);
    }
  }
  for (double& h : hits) h /= static_cast<double>(gold.size());
  return hits;
}

struct FoldResult {
  std::size_t fold = 0;
  std::size_t train_size = 0;
  std::size_t test_size = 0;
  std::vector<double> accuracy;        // per position, end-to-end pipeline output
  std::vector<double> stage_accuracy;  // per stage classifier, given the gold prefix
  SequenceMetrics metrics;
  std::vector<std::size_t> test_indices;
  std::vector<OrderedSequence> predicted;  // aligned with test_indices
};

struct PositionComparison {
  std::size_t position = 0;  // 1-based
  double mean_a = 0.0;
  double mean_b = 0.0;
  TTestResult test;
};

struct Comparison {
  std::string scheme_a;
  std::string scheme_b;
  double alpha = 0.005;
  std::vector<PositionComparison> positions;
};

struct EvaluationReport {
  std::string scheme;
  std::size_t k = 0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::vector<FoldResult> folds;
  std::vector<double> mean;        // per position, over folds
  std::vector<double> sd;          // per position, sample sd over folds
  std::vector<double> stage_mean;  // per stage classifier with gold prefixes, over folds
  SequenceMetrics metrics;   // pooled over every test instance
  std::vector<Comparison> significance;

  /// Accuracy of every fold at one position (1-based).
  std::vector<double> fold_scores(std::size_t position) const {
    std::vector<double> out;
    for (const auto& f : folds) out.push_back(f.accuracy.at(position - 1));
    return out;
  }

  double interior_mean() const {
    if (n < 3) return 1.0;
    double s = 0.0;
    for (std::size_t p = 1; p + 1 < n; ++p) s += mean[p];
    return s / static_cast<double>(n - 2);
  }
};

struct CrossValidationOptions {
  bool parallel = true;
};

inline FoldResult run_fold(const Dataset& dataset, const PlannerConfig& config, const FoldAssignment& folds,
                           std::size_t fold) {
  FoldResult result;
  result.fold = fold;
  const auto train = folds.train_indices(fold);
  result.test_indices = folds.test_indices(fold);
  result.train_size = train.size();
  result.test_size = result.test_indices.size();
  require(!result.test_indices.empty(), ErrorKind::configuration, "fold is empty");

  std::vector<bool> in_train(dataset.size(), false);
  for (std::size_t i : train) in_train[i] = true;
  for (std::size_t i : result.test_indices) {
    require(!in_train[i], ErrorKind::contract, "test instance " + std::to_string(i) + " leaked into training");
  }

  const auto planner = train_planner(dataset.subset(train), config);
  std::vector<OrderedSequence> gold;
  for (std::size_t i : result.test_indices) {
    const auto& order = dataset.instances[i].order;
    gold.push_back(order);
    result.predicted.push_back(order_facts(planner, members_of(order)));
  }
  result.accuracy = per_position_accuracy(result.predicted, gold);
  result.stage_accuracy = stage_accuracy(planner, gold);
  result.metrics = sequence_metrics(result.predicted, gold);
  return result;
}

inline EvaluationReport cross_validate(const Dataset& dataset, const PlannerConfig& config,
                                       const FoldAssignment& folds, const CrossValidationOptions& options = {}) {
  require(folds.fold_of.size() == dataset.size(), ErrorKind::contract,
          "fold assignment was built for a different dataset");
  require(dataset.sequence_length == config.sequence_length, ErrorKind::configuration,
          "planner length does not match dataset");
  validate_config(config, dataset.catalog);
  require_valid(dataset, ErrorKind::data);

  EvaluationReport report;
  report.scheme = std::string(to_string(config.scheme));
  report.k = folds.k;
  report.n = dataset.sequence_length;
  report.seed = folds.seed;

  auto guarded = [&](std::size_t f) {
    try {
      return run_fold(dataset, config, folds, f);
    } catch (const Error& e) {
      fail(e.kind(), "fold " + std::to_string(f) + ": " + e.detail());
    }
  };
  if (options.parallel) {
    std::vector<std::future<FoldResult>> pending;
    for (std::size_t f = 0; f < folds.k; ++f) pending.push_back(std::async(std::launch::async, guarded, f));
    for (auto& p : pending) report.folds.push_back(p.get());
  } else {
    for (std::size_t f = 0; f < folds.k; ++f) report.folds.push_back(guarded(f));
  }

  report.mean.assign(report.n, 0.0);
  report.sd.assign(report.n, 0.0);
  report.stage_mean.assign(report.n, 0.0);
  for (std::size_t p = 1; p <= report.n; ++p) {
    const auto scores = report.fold_scores(p);
    report.mean[p - 1] = mean(scores);
    report.sd[p - 1] = sample_sd(scores);
    for (const auto& f : report.folds) report.stage_mean[p - 1] += f.stage_accuracy[p - 1];
    report.stage_mean[p - 1] /= static_cast<double>(report.folds.size());
  }

  std::vector<OrderedSequence> predicted, gold;
  for (const auto& f : report.folds) {
    for (std::size_t j = 0; j < f.test_indices.size(); ++j) {
      predicted.push_back(f.predicted[j]);
      gold.push_back(dataset.instances[f.test_indices[j]].order);
    }
  }
  report.metrics = sequence_metrics(predicted, gold);
  return report;
}

/// Per-position paired t-tests of a against b; both reports must come from
/// the same folds.
inline Comparison compare_reports(const EvaluationReport& a, const EvaluationReport& b,
                                  const SignificanceConfig& config = {}) {
  validate_significance(config);
  require(a.k == b.k && a.n == b.n && a.seed == b.seed, ErrorKind::contract,
          "reports were produced on different folds");
  for (std::size_t f = 0; f < a.folds.size(); ++f) {
    require(a.folds[f].test_indices == b.folds[f].test_indices, ErrorKind::contract,
            "fold " + std::to_string(f) + " differs between the two reports");
  }
  Comparison c{a.scheme, b.scheme, config.alpha, {}};
  for (std::size_t p = 1; p <= a.n; ++p) {
    const auto sa = a.fold_scores(p);
    const auto sb = b.fold_scores(p);
    c.positions.push_back({p, a.mean[p - 1], b.mean[p - 1], paired_t_test(sa, sb, config)});
  }
  return c;
}

// ---------------------------------------------------------------------------
// Report output

inline nlohmann::json json_number(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

inline nlohmann::json to_json(const SequenceMetrics& m) {
  return {{"exact_match", m.exact_match}, {"kendall_tau", m.kendall_tau}, {"swap_edit_distance", m.swap_edit_distance}};
}

inline nlohmann::json to_json(const Comparison& c) {
  nlohmann::json positions = nlohmann::json::array();
  for (const auto& p : c.positions) {
    positions.push_back({{"position", p.position},
                         {"mean_a", p.mean_a},
                         {"mean_b", p.mean_b},
                         {"t", json_number(p.test.t)},
                         {"df", p.test.df},
                         {"p", p.test.p},
                         {"significant", p.test.significant},
                         {"degenerate_variance", p.test.degenerate_variance}});
  }
  return {{"scheme_a", c.scheme_a}, {"scheme_b", c.scheme_b}, {"alpha", c.alpha}, {"test", "paired two-tailed t"},
          {"positions", std::move(positions)}};
}

inline nlohmann::json to_json(const EvaluationReport& r) {
  nlohmann::json folds = nlohmann::json::array();
  nlohmann::json matrix = nlohmann::json::array();
  for (const auto& f : r.folds) {
    matrix.push_back(f.accuracy);
    folds.push_back({{"fold", f.fold},
                     {"train_size", f.train_size},
                     {"test_size", f.test_size},
                     {"accuracy", f.accuracy},
                     {"stage_accuracy", f.stage_accuracy},
                     {"metrics", to_json(f.metrics)}});
  }
  nlohmann::json significance = nlohmann::json::array();
  for (const auto& c : r.significance) significance.push_back(to_json(c));
  return {{"scheme", r.scheme},
          {"folds", r.k},
          {"sequence_length", r.n},
          {"seed", r.seed},
          {"accuracy", std::move(matrix)},
          {"mean", r.mean},
          {"sd", r.sd},
          {"stage_mean", r.stage_mean},
          {"metrics", to_json(r.metrics)},
          {"fold_details", std::move(folds)},
          {"significance", std::move(significance)}};
}

/// Positions down, schemes across: mean accuracy (sd) per cell.
inline std::string format_accuracy_table(const std::vector<const EvaluationReport*>& reports) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(3);
  out << std::left << std::setw(10) << "position";
  for (const auto* r : reports) out << std::setw(20) << r->scheme;
  out << '\n';
  const std::size_t n = reports.empty() ? 0 : reports.front()->n;
  for (std::size_t p = 0; p < n; ++p) {
    out << std::setw(10) << (p + 1);
    for (const auto* r : reports) {
      std::ostringstream cell;
      cell << std::fixed << std::setprecision(3) << r->mean[p] << " (" << r->sd[p] << ")";
      out << std::setw(20) << cell.str();
    }
    out << '\n';
  }
  out << std::setw(10) << "exact";
  for (const auto* r : reports) out << std::setw(20) << r->metrics.exact_match;
  out << '\n' << std::setw(10) << "tau";
  for (const auto* r : reports) out << std::setw(20) << r->metrics.kendall_tau;
  out << '\n' << std::setw(10) << "swaps";
  for (const auto* r : reports) out << std::setw(20) << r->metrics.swap_edit_distance;
  out << '\n';
  return out.str();
}

inline std::string format_comparison_table(const Comparison& c) {
  std::ostringstream out;
  out << c.scheme_a << " vs " << c.scheme_b << " (paired two-tailed t, alpha " << c.alpha << ")\n";
  out << std::left << std::setw(10) << "position" << std::setw(10) << "mean_a" << std::setw(10) << "mean_b"
      << std::setw(12) << "t" << std::setw(12) << "p" << "verdict\n";
  for (const auto& p : c.positions) {
    std::ostringstream t, pv;
    t << std::setprecision(4) << p.test.t;
    pv << std::setprecision(4) << p.test.p;
    out << std::setw(10) << p.position << std::fixed << std::setprecision(3) << std::setw(10) << p.mean_a
        << std::setw(10) << p.mean_b << std::setw(12) << t.str() << std::setw(12) << pv.str()
        << (p.test.significant ? "significant" : "not significant")
        << (p.test.degenerate_variance ? " (zero variance)" : "") << '\n';
    out.unsetf(std::ios::fixed);
  }
  return out.str();
}

}  // namespace factorder
