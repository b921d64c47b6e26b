#pragma once

// The factorder command line. `run` is the whole program; main() only
// forwards argv and the standard streams so tests can drive it in-process.
//
// Exit codes: 0 success, 1 usage or configuration, 2 bad data or input,
// 3 internal failure.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "factorder/factorder.hpp"

namespace factorder::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kData = 2, kInternal = 3 };

inline int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::configuration:
    case ErrorKind::validation:
      return kUsage;
    case ErrorKind::unknown_type:
    case ErrorKind::duplicate_fact:
    case ErrorKind::encoding:
    case ErrorKind::training:
    case ErrorKind::input:
    case ErrorKind::compatibility:
    case ErrorKind::deserialization:
    case ErrorKind::data:
      return kData;
    case ErrorKind::contract:
    case ErrorKind::prediction:
      return kInternal;
  }
  return kInternal;
}

inline std::vector<std::string> split_names(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    const auto last = item.find_last_not_of(" \t");
    out.push_back(first == std::string::npos ? std::string() : item.substr(first, last - first + 1));
  }
  return out;
}

inline std::string join(const std::vector<std::string>& names, const char* sep = ",") {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) out += sep;
    out += names[i];
  }
  return out;
}

inline Scheme scheme_or_usage(const std::string& name) {
  auto scheme = parse_scheme(name);
  require(scheme.has_value(), ErrorKind::configuration,
          "unknown scheme '" + name + "'; valid schemes: " + std::string(kSchemeNames));
  return *scheme;
}

struct SchemeFlags {
  std::size_t k = 1;
  std::size_t min_leaf = 2;
  bool no_prune = false;
  double confidence = 0.25;
  std::string canonical;
  std::uint64_t seed = 0;
};

inline void add_scheme_flags(CLI::App* cmd, SchemeFlags& f) {
  cmd->add_option("--k", f.k, "neighbours for knn")->capture_default_str();
  cmd->add_option("--min-leaf", f.min_leaf, "minimum instances per tree leaf")->capture_default_str();
  cmd->add_flag("--no-prune", f.no_prune, "disable pessimistic pruning");
  cmd->add_option("--confidence", f.confidence, "pruning confidence factor")->capture_default_str();
  cmd->add_option("--canonical-order", f.canonical,
                  "comma-separated total order for fixed-order (default: the schema's canonical_order)");
}

struct Inputs {
  DomainSchema schema;
  Dataset dataset;
};

inline Inputs load_inputs(const std::string& data, const std::string& schema_path,
                          std::optional<std::size_t> length) {
  Inputs in;
  if (!schema_path.empty()) {
    in.schema = load_schema(schema_path);
  } else {
    std::ifstream stream(data);
    require(static_cast<bool>(stream), ErrorKind::data, "cannot open '" + data + "'");
    in.schema.catalog = infer_catalog(stream, data);
  }
  in.dataset = load_dataset(data, in.schema.catalog, length);
  return in;
}

inline PlannerConfig make_config(Scheme scheme, const SchemeFlags& f, const Inputs& in) {
  PlannerConfig config;
  config.sequence_length = in.dataset.sequence_length;
  config.scheme = scheme;
  config.k = f.k;
  config.tree.min_instances_per_leaf = f.min_leaf;
  config.tree.pruning_enabled = !f.no_prune;
  config.tree.confidence_factor = f.confidence;
  config.rng_seed = f.seed;
  if (scheme == Scheme::fixed_order) {
    if (!f.canonical.empty()) {
      for (const auto& name : split_names(f.canonical)) {
        auto id = in.schema.catalog.find(name);
        require(id.has_value(), ErrorKind::configuration, "--canonical-order: unknown fact type '" + name + "'");
        config.canonical_order.push_back(*id);
      }
    } else {
      require(in.schema.canonical_order.has_value(), ErrorKind::configuration,
              "fixed-order needs --canonical-order or a schema with canonical_order");
      config.canonical_order = *in.schema.canonical_order;
    }
  }
  validate_config(config, in.schema.catalog);
  return config;
}

inline std::filesystem::path report_path(const std::string& flag, const std::string& default_name) {
  if (!flag.empty()) return flag;
  const char* dir = std::getenv("FACTORDER_REPORT_DIR");
  return std::filesystem::path(dir && *dir ? dir : ".") / default_name;
}

// ---------------------------------------------------------------------------

struct TrainArgs {
  std::string data, schema, scheme = "decision-tree", out;
  std::optional<std::size_t> length;
  SchemeFlags flags;
};

inline int train(const TrainArgs& a, std::ostream& out) {
  const Scheme scheme = scheme_or_usage(a.scheme);
  const auto in = load_inputs(a.data, a.schema, a.length);
  const auto config = make_config(scheme, a.flags, in);
  const auto planner = train_planner(in.dataset, config);
  write_file_atomic(a.out, save_planner(planner));
  out << "trained " << to_string(scheme) << " planner: n=" << planner.sequence_length()
      << " T=" << planner.catalog.size() << " instances=" << in.dataset.size() << " -> " << a.out << '\n';
  return kOk;
}

struct OrderArgs {
  std::string model, facts;
  bool from_stdin = false;
  bool json = false;
};

inline nlohmann::json parse_order_line(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  if (j.is_object()) {
    if (j.contains("facts")) return j.at("facts");
    if (j.contains("order")) return j.at("order");
  }
  return j;
}

inline int order(const OrderArgs& a, std::istream& in, std::ostream& out) {
  require(a.from_stdin != !a.facts.empty(), ErrorKind::configuration, "give exactly one of --facts or --stdin");
  const auto planner = load_planner(read_file(a.model));

  std::vector<std::vector<std::string>> sets;
  std::vector<std::string> labels;
  if (a.from_stdin) {
    std::string text;
    std::size_t line = 0;
    while (std::getline(in, text)) {
      ++line;
      if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
      const std::string where = "stdin:" + std::to_string(line);
      nlohmann::json names;
      try {
        names = parse_order_line(text);
      } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::input, where + ": " + e.what());
      }
      require(names.is_array(), ErrorKind::input, where + ": expected an array of names or {\"facts\": [...]}");
      std::vector<std::string> set;
      for (const auto& n : names) {
        require(n.is_string(), ErrorKind::input, where + ": fact-type names must be strings");
        set.push_back(n.get<std::string>());
      }
      sets.push_back(std::move(set));
      labels.push_back(where);
    }
  } else {
    sets.push_back(split_names(a.facts));
    labels.push_back("--facts");
  }

  // Every set is ordered before anything is printed.
  std::vector<std::vector<std::string>> results;
  results.reserve(sets.size());
  for (std::size_t i = 0; i < sets.size(); ++i) {
    try {
      results.push_back(sequence_names(planner.catalog, order_facts(planner, sets[i])));
    } catch (const Error& e) {
      fail(e.kind(), labels[i] + " [" + join(sets[i], ", ") + "]: " + e.detail());
    }
  }
  for (const auto& r : results) out << (a.json ? nlohmann::json(r).dump() : join(r)) << '\n';
  return kOk;
}

struct EvaluateArgs {
  std::string data, schema, scheme = "decision-tree", report;
  std::optional<std::size_t> length;
  std::size_t folds = 10;
  std::uint64_t seed = 0;
  bool sequential = false;
  SchemeFlags flags;
};

inline int evaluate(const EvaluateArgs& a, std::ostream& out) {
  const Scheme scheme = scheme_or_usage(a.scheme);
  const auto in = load_inputs(a.data, a.schema, a.length);
  const auto config = make_config(scheme, a.flags, in);
  const auto folds = stratified_folds(in.dataset, a.folds, a.seed);
  const auto report = cross_validate(in.dataset, config, folds, {.parallel = !a.sequential});
  const auto path = report_path(a.report, "evaluation-" + report.scheme + ".json");
  write_file_atomic(path, to_json(report).dump(2) + "\n");
  out << a.folds << "-fold cross-validation, " << in.dataset.size() << " instances, seed " << a.seed << "\n"
      << format_accuracy_table({&report}) << "report: " << path.string() << '\n';
  return kOk;
}

struct CompareArgs {
  std::string data, schema, scheme_a = "decision-tree", scheme_b = "fixed-order", report;
  std::optional<std::size_t> length;
  std::size_t folds = 10;
  std::uint64_t seed = 0;
  double alpha = 0.005;
  bool sequential = false;
  SchemeFlags flags;
};

inline int compare(const CompareArgs& a, std::ostream& out) {
  const Scheme sa = scheme_or_usage(a.scheme_a);
  const Scheme sb = scheme_or_usage(a.scheme_b);
  const SignificanceConfig significance{a.alpha};
  validate_significance(significance);
  const auto in = load_inputs(a.data, a.schema, a.length);
  const auto ca = make_config(sa, a.flags, in);
  const auto cb = make_config(sb, a.flags, in);
  const auto folds = stratified_folds(in.dataset, a.folds, a.seed);
  auto ra = cross_validate(in.dataset, ca, folds, {.parallel = !a.sequential});
  auto rb = cross_validate(in.dataset, cb, folds, {.parallel = !a.sequential});
  const auto comparison = compare_reports(ra, rb, significance);
  ra.significance.push_back(comparison);

  const auto path = report_path(a.report, "comparison-" + ra.scheme + "-vs-" + rb.scheme + ".json");
  const nlohmann::json doc{{"reports", {to_json(ra), to_json(rb)}}, {"comparison", to_json(comparison)}};
  write_file_atomic(path, doc.dump(2) + "\n");
  out << a.folds << "-fold cross-validation, " << in.dataset.size() << " instances, seed " << a.seed << "\n"
      << format_accuracy_table({&ra, &rb}) << '\n'
      << format_comparison_table(comparison) << "report: " << path.string() << '\n';
  return kOk;
}

struct SynthArgs {
  SyntheticParams params;
  std::string kind = "fixed-priority";
  std::size_t instances = 880;
  std::string out, spec_out;
};

inline int synth(SynthArgs a, std::ostream& out) {
  auto kind = parse_policy_kind(a.kind);
  require(kind.has_value(), ErrorKind::configuration,
          "unknown --kind '" + a.kind + "'; valid kinds: fixed-priority, context-dependent");
  a.params.kind = *kind;
  require(a.instances >= 1, ErrorKind::configuration, "--instances must be >= 1");
  const auto spec = generate_domain(a.params);
  const auto dataset = generate_dataset(spec, a.instances);
  const std::filesystem::path data_path = a.out;
  std::filesystem::path spec_path = a.spec_out;
  if (spec_path.empty()) spec_path = data_path.string() + ".spec.json";

  write_file_atomic(data_path, dataset_to_jsonl(dataset));
  try {
    write_file_atomic(spec_path, sidecar_to_json(spec, a.instances).dump(2) + "\n");
  } catch (...) {
    std::filesystem::remove(data_path);
    throw;
  }
  out << "wrote " << dataset.size() << " instances (T=" << spec.catalog.size() << ", n=" << spec.sequence_length()
      << ", " << to_string(spec.params.kind) << ", noise " << spec.params.noise << ") to " << data_path.string()
      << "\nspec: " << spec_path.string() << '\n';
  return kOk;
}

struct InspectArgs {
  std::string model, facts;
};

inline std::string describe(const StageModel& model, const FactTypeCatalog& catalog) {
  std::ostringstream out;
  std::visit(
      [&](const auto& m) {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, MajorityModel>) {
          std::uint64_t total = 0;
          std::size_t best = 0;
          for (std::size_t i = 0; i < m.counts.size(); ++i) {
            total += m.counts[i];
            if (m.counts[i] > m.counts[best]) best = i;
          }
          out << "majority, " << total << " examples, most frequent " << catalog.name(fact_type(best)) << " ("
              << m.counts[best] << ")";
        } else if constexpr (std::is_same_v<M, FixedOrderModel>) {
          out << "fixed-order, canonical " << join(sequence_names(catalog, m.canonical), " < ");
        } else if constexpr (std::is_same_v<M, KnnModel>) {
          out << "knn, k=" << m.k << ", " << m.stored.size() << " stored examples";
        } else {
          out << "decision-tree, " << m.nodes.size() << " nodes, " << m.leaf_count() << " leaves, width " << m.width;
        }
      },
      model.payload());
  return out.str();
}

inline int inspect(const InspectArgs& a, std::ostream& out) {
  const auto planner = load_planner(read_file(a.model));
  const auto& c = planner.catalog;
  out << "scheme: " << to_string(planner.config.scheme) << "\nsequence length: " << planner.sequence_length()
      << "\nfact types: " << c.size() << '\n';
  for (std::size_t s = 0; s < planner.stages.size(); ++s) {
    out << "stage " << (s + 1) << ": " << describe(planner.stages[s], c) << '\n';
  }
  if (!a.facts.empty()) {
    const auto names = split_names(a.facts);
    std::ostringstream trace;
    const auto result = order_facts(planner, names, [&](std::size_t stage, const StageFeatureVector& v, FactTypeId chosen) {
      trace << "stage " << stage << " chose " << c.name(chosen) << ": " << dump_stage_vector(c, v).dump() << '\n';
    });
    out << trace.str() << "ordering: " << join(sequence_names(c, result), ", ") << '\n';
  }
  return kOk;
}

// ---------------------------------------------------------------------------

inline int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Learn and evaluate fact-ordering planners", "factorder"};
  app.require_subcommand(1);

  TrainArgs train_args;
  auto* train_cmd = app.add_subcommand("train", "train a planner and save it");
  train_cmd->add_option("--data", train_args.data, "gold orderings (JSON lines)")->required();
  train_cmd->add_option("--schema", train_args.schema, "domain schema (default: infer from the data)");
  train_cmd->add_option("--scheme", train_args.scheme, std::string(kSchemeNames))->capture_default_str();
  train_cmd->add_option("--out", train_args.out, "planner file to write")->required();
  train_cmd->add_option("--length", train_args.length, "expected facts per ordering");
  train_cmd->add_option("--seed", train_args.flags.seed, "seed recorded in the planner");
  add_scheme_flags(train_cmd, train_args.flags);

  OrderArgs order_args;
  auto* order_cmd = app.add_subcommand("order", "order fact sets with a saved planner");
  order_cmd->add_option("--model", order_args.model, "planner file")->required();
  order_cmd->add_option("--facts", order_args.facts, "comma-separated fact-type names");
  order_cmd->add_flag("--stdin", order_args.from_stdin, "read one JSON array of names per line");
  order_cmd->add_flag("--json", order_args.json, "print JSON arrays instead of comma-separated names");

  EvaluateArgs eval_args;
  auto* eval_cmd = app.add_subcommand("evaluate", "stratified k-fold cross-validation of one scheme");
  eval_cmd->add_option("--data", eval_args.data, "gold orderings (JSON lines)")->required();
  eval_cmd->add_option("--schema", eval_args.schema, "domain schema (default: infer from the data)");
  eval_cmd->add_option("--scheme", eval_args.scheme, std::string(kSchemeNames))->capture_default_str();
  eval_cmd->add_option("--folds", eval_args.folds, "number of folds")->capture_default_str();
  eval_cmd->add_option("--seed", eval_args.seed, "fold shuffling seed")->capture_default_str();
  eval_cmd->add_option("--report", eval_args.report, "JSON report path (default: $FACTORDER_REPORT_DIR or .)");
  eval_cmd->add_option("--length", eval_args.length, "expected facts per ordering");
  eval_cmd->add_flag("--sequential", eval_args.sequential, "run folds one after another");
  add_scheme_flags(eval_cmd, eval_args.flags);

  CompareArgs cmp_args;
  auto* cmp_cmd = app.add_subcommand("compare", "paired t-tests between two schemes on the same folds");
  cmp_cmd->add_option("--data", cmp_args.data, "gold orderings (JSON lines)")->required();
  cmp_cmd->add_option("--schema", cmp_args.schema, "domain schema (default: infer from the data)");
  cmp_cmd->add_option("--scheme-a", cmp_args.scheme_a, "first scheme")->capture_default_str();
  cmp_cmd->add_option("--scheme-b", cmp_args.scheme_b, "second scheme")->capture_default_str();
  cmp_cmd->add_option("--folds", cmp_args.folds, "number of folds")->capture_default_str();
  cmp_cmd->add_option("--seed", cmp_args.seed, "fold shuffling seed")->capture_default_str();
  cmp_cmd->add_option("--alpha", cmp_args.alpha, "significance level")->capture_default_str();
  cmp_cmd->add_option("--report", cmp_args.report, "JSON report path (default: $FACTORDER_REPORT_DIR or .)");
  cmp_cmd->add_option("--length", cmp_args.length, "expected facts per ordering");
  cmp_cmd->add_flag("--sequential", cmp_args.sequential, "run folds one after another");
  add_scheme_flags(cmp_cmd, cmp_args.flags);

  SynthArgs syn_args;
  auto* syn_cmd = app.add_subcommand("synth", "generate a synthetic domain and dataset");
  syn_cmd->add_option("--types", syn_args.params.num_types, "catalog size T")->capture_default_str();
  syn_cmd->add_option("--length", syn_args.params.sequence_length, "facts per ordering n")->capture_default_str();
  syn_cmd->add_option("--kind", syn_args.kind, "fixed-priority or context-dependent")->capture_default_str();
  syn_cmd->add_option("--noise", syn_args.params.noise, "probability of one adjacent swap")->capture_default_str();
  syn_cmd->add_option("--instances", syn_args.instances, "number of orderings N")->capture_default_str();
  syn_cmd->add_option("--seed", syn_args.params.seed, "generator seed")->capture_default_str();
  syn_cmd->add_option("--out", syn_args.out, "dataset file to write")->required();
  syn_cmd->add_option("--spec-out", syn_args.spec_out, "sidecar file (default: <out>.spec.json)");

  InspectArgs insp_args;
  auto* insp_cmd = app.add_subcommand("inspect", "summarise a planner and optionally trace one ordering");
  insp_cmd->add_option("--model", insp_args.model, "planner file")->required();
  insp_cmd->add_option("--facts", insp_args.facts, "comma-separated names to trace stage by stage");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*train_cmd) return train(train_args, out);
    if (*order_cmd) return order(order_args, in, out);
    if (*eval_cmd) return evaluate(eval_args, out);
    if (*cmp_cmd) return compare(cmp_args, out);
    if (*syn_cmd) return synth(syn_args, out);
    if (*insp_cmd) return inspect(insp_args, out);
  } catch (const Error& e) {
    err << "factorder: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "factorder: internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kUsage;
}

}  // namespace factorder::cli
