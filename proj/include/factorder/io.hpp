#pragma once

// Domain schema and dataset files.
//
//   schema (JSON):   {"fact_types": [name...], "canonical_order": [name...]}
//   dataset (JSONL): {"id": text, "order": [name...]} per line, gold order
//
// Blank lines in a dataset are skipped. Errors carry 1-based line numbers.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "factorder/domain.hpp"

namespace factorder {

struct DomainSchema {
  FactTypeCatalog catalog;
  std::optional<std::vector<FactTypeId>> canonical_order;
};

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorKind::data, "cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

/// Writes to a sibling temporary file, then renames over `path`.
inline void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    require(static_cast<bool>(out), ErrorKind::data, "cannot write '" + tmp.string() + "'");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) {
      out.close();
      std::filesystem::remove(tmp);
      fail(ErrorKind::data, "write to '" + tmp.string() + "' failed");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    fail(ErrorKind::data, "cannot move output into place at '" + path.string() + "': " + ec.message());
  }
}

inline std::vector<FactTypeId> resolve_names(const FactTypeCatalog& catalog, const nlohmann::json& names,
                                             const std::string& where) {
  std::vector<FactTypeId> ids;
  for (const auto& name : names) {
    require(name.is_string(), ErrorKind::data, where + ": fact-type names must be strings");
    auto id = catalog.find(name.get<std::string>());
    require(id.has_value(), ErrorKind::data, where + ": unknown fact type '" + name.get<std::string>() + "'");
    ids.push_back(*id);
  }
  return ids;
}

inline DomainSchema parse_schema(const nlohmann::json& j) {
  require(j.is_object() && j.contains("fact_types") && j.at("fact_types").is_array(), ErrorKind::data,
          "schema needs a \"fact_types\" array");
  DomainSchema schema;
  std::vector<std::string> names;
  for (const auto& n : j.at("fact_types")) {
    require(n.is_string(), ErrorKind::data, "schema: fact-type names must be strings");
    names.push_back(n.get<std::string>());
  }
  try {
    schema.catalog = build_catalog(names);
  } catch (const Error& e) {
    fail(ErrorKind::data, std::string("schema: ") + e.what());
  }
  if (j.contains("canonical_order")) {
    auto order = resolve_names(schema.catalog, j.at("canonical_order"), "schema canonical_order");
    schema.canonical_order = std::move(order);
  }
  return schema;
}

inline DomainSchema load_schema(const std::filesystem::path& path) {
  const auto text = read_file(path);
  try {
    return parse_schema(nlohmann::json::parse(text));
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::data, path.string() + ": " + e.what());
  }
}

inline nlohmann::json schema_to_json(const DomainSchema& schema) {
  nlohmann::json j{{"fact_types", schema.catalog.names()}};
  if (schema.canonical_order) j["canonical_order"] = sequence_names(schema.catalog, *schema.canonical_order);
  return j;
}

namespace detail {

struct RawLine {
  std::size_t line = 0;
  std::string id;
  std::vector<std::string> order;
};

inline std::vector<RawLine> parse_jsonl(std::istream& in, const std::string& source) {
  std::vector<RawLine> rows;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = source + ":" + std::to_string(line);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      fail(ErrorKind::data, where + ": " + e.what());
    }
    require(j.is_object() && j.contains("order") && j.at("order").is_array(), ErrorKind::data,
            where + ": expected an object with an \"order\" array");
    RawLine row{line, "line-" + std::to_string(line), {}};
    if (j.contains("id")) row.id = j.at("id").is_string() ? j.at("id").get<std::string>() : j.at("id").dump();
    for (const auto& name : j.at("order")) {
      require(name.is_string(), ErrorKind::data, where + ": fact-type names must be strings");
      row.order.push_back(name.get<std::string>());
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace detail

/// Reads a JSONL dataset against `catalog`. The sequence length is
/// `expected_length` when given, otherwise the length of the first line; any
/// line of another length, with an unknown type, or with a repeated type is a
/// data error citing the line.
inline Dataset read_dataset(std::istream& in, const FactTypeCatalog& catalog,
                            std::optional<std::size_t> expected_length = std::nullopt,
                            const std::string& source = "<dataset>") {
  auto rows = detail::parse_jsonl(in, source);
  require(!rows.empty(), ErrorKind::data, source + ": dataset is empty");
  Dataset dataset{catalog, {}, expected_length.value_or(rows.front().order.size())};
  for (auto& row : rows) {
    const std::string where = source + ":" + std::to_string(row.line);
    require(row.order.size() == dataset.sequence_length, ErrorKind::data,
            where + ": ordering has " + std::to_string(row.order.size()) + " facts, expected " +
                std::to_string(dataset.sequence_length));
    OrderedSequence order;
    for (const auto& name : row.order) {
      auto id = catalog.find(name);
      require(id.has_value(), ErrorKind::data, where + ": unknown fact type '" + name + "'");
      require(std::find(order.begin(), order.end(), *id) == order.end(), ErrorKind::data,
              where + ": fact type '" + name + "' repeated");
      order.push_back(*id);
    }
    dataset.instances.push_back({std::move(row.id), std::move(order)});
  }
  return dataset;
}

/// Without a schema, the catalog lists types in order of first appearance.
inline FactTypeCatalog infer_catalog(std::istream& in, const std::string& source = "<dataset>") {
  auto rows = detail::parse_jsonl(in, source);
  std::vector<std::string> names;
  for (const auto& row : rows) {
    for (const auto& name : row.order) {
      if (std::find(names.begin(), names.end(), name) == names.end()) names.push_back(name);
    }
  }
  require(!names.empty(), ErrorKind::data, source + ": no fact types found");
  try {
    return build_catalog(names);
  } catch (const Error& e) {
    fail(ErrorKind::data, source + ": " + e.what());
  }
}

inline Dataset load_dataset(const std::filesystem::path& path, const FactTypeCatalog& catalog,
                            std::optional<std::size_t> expected_length = std::nullopt) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorKind::data, "cannot open '" + path.string() + "'");
  return read_dataset(in, catalog, expected_length, path.string());
}

inline std::string dataset_to_jsonl(const Dataset& dataset) {
  std::string out;
  for (const auto& instance : dataset.instances) {
    nlohmann::json j{{"id", instance.id}, {"order", sequence_names(dataset.catalog, instance.order)}};
    out += j.dump();
    out += '\n';
  }
  return out;
}

}  // namespace factorder
