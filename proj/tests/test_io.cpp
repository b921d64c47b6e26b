#include <filesystem>
#include <sstream>

#include "support.hpp"

using namespace factorder;
using factorder::testing::kind_of;

namespace {

std::string message_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST(Schema, ParsesTypesAndCanonicalOrder) {
  const auto s = parse_schema(nlohmann::json::parse(R"({"fact_types":["a","b","c"],"canonical_order":["c","a","b"]})"));
  EXPECT_EQ(s.catalog.size(), 3u);
  ASSERT_TRUE(s.canonical_order.has_value());
  EXPECT_EQ(s.canonical_order->front(), s.catalog.id("c"));
  EXPECT_EQ(schema_to_json(s).dump(), R"({"canonical_order":["c","a","b"],"fact_types":["a","b","c"]})");
}

TEST(Schema, RejectsMalformedInput) {
  EXPECT_EQ(kind_of([] { parse_schema(nlohmann::json::parse(R"({"types":[]})")); }), ErrorKind::data);
  EXPECT_EQ(kind_of([] { parse_schema(nlohmann::json::parse(R"({"fact_types":["a","a"]})")); }), ErrorKind::data);
  EXPECT_EQ(kind_of([] { parse_schema(nlohmann::json::parse(R"({"fact_types":["a"],"canonical_order":["b"]})")); }),
            ErrorKind::data);
}

TEST(DatasetFile, ReadsLinesAndSkipsBlanks) {
  const auto c = build_catalog({"a", "b", "c"});
  std::istringstream in(R"({"id":"x","order":["a","b"]}

{"order":["c","a"]}
)");
  const auto d = read_dataset(in, c);
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d.sequence_length, 2u);
  EXPECT_EQ(d.instances[0].id, "x");
  EXPECT_EQ(d.instances[1].id, "line-3");
  EXPECT_EQ(d.instances[1].order, (OrderedSequence{c.id("c"), c.id("a")}));
}

TEST(DatasetFile, ErrorsCiteTheLine) {
  const auto c = build_catalog({"a", "b", "c"});
  auto read = [&](const std::string& text, std::optional<std::size_t> n = std::nullopt) {
    std::istringstream in(text);
    read_dataset(in, c, n, "corpus.jsonl");
  };
  EXPECT_NE(message_of([&] { read("{\"order\":[\"a\",\"b\"]}\n{\"order\":[\"a\"]}\n"); }).find("corpus.jsonl:2"),
            std::string::npos);
  EXPECT_NE(message_of([&] { read("{\"order\":[\"a\",\"q\"]}\n"); }).find("corpus.jsonl:1: unknown fact type 'q'"),
            std::string::npos);
  EXPECT_NE(message_of([&] { read("{\"order\":[\"a\",\"a\"]}\n"); }).find("repeated"), std::string::npos);
  EXPECT_NE(message_of([&] { read("{\"order\":[\"a\",\"b\"]}\nnot json\n"); }).find("corpus.jsonl:2"),
            std::string::npos);
  EXPECT_NE(message_of([&] { read("{\"order\":[\"a\",\"b\"]}\n", 3); }).find("expected 3"), std::string::npos);
  EXPECT_EQ(kind_of([&] { read(""); }), ErrorKind::data);
  EXPECT_EQ(kind_of([&] { read("[1,2]\n"); }), ErrorKind::data);
}

TEST(DatasetFile, InferredCatalogFollowsFirstAppearance) {
  std::istringstream in("{\"order\":[\"s\",\"q\"]}\n{\"order\":[\"s\",\"b\"]}\n");
  EXPECT_EQ(infer_catalog(in).names(), (std::vector<std::string>{"s", "q", "b"}));
}

TEST(DatasetFile, JsonlRoundTrip) {
  const auto c = build_catalog({"a", "b", "c"});
  std::istringstream in("{\"id\":\"one\",\"order\":[\"b\",\"c\"]}\n{\"id\":\"two\",\"order\":[\"a\",\"b\"]}\n");
  const auto d = read_dataset(in, c);
  const auto text = dataset_to_jsonl(d);
  std::istringstream again(text);
  const auto e = read_dataset(again, c);
  EXPECT_EQ(e.instances.size(), 2u);
  EXPECT_EQ(e.instances[1].id, "two");
  EXPECT_EQ(e.instances[0].order, d.instances[0].order);
  EXPECT_EQ(dataset_to_jsonl(e), text);
}

TEST(Files, AtomicWriteReplacesContentAndLeavesNoTemp) {
  const auto dir = std::filesystem::temp_directory_path() / "factorder-io-test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "out.json";
  write_file_atomic(path, "first");
  write_file_atomic(path, "second");
  EXPECT_EQ(read_file(path), "second");
  EXPECT_FALSE(std::filesystem::exists(dir / "out.json.tmp"));
  EXPECT_EQ(kind_of([&] { write_file_atomic(dir / "missing" / "x.json", "x"); }), ErrorKind::data);
  EXPECT_EQ(kind_of([&] { read_file(dir / "nope.json"); }), ErrorKind::data);
  std::filesystem::remove_all(dir);
}
