#include "support.hpp"

using namespace factorder;
using factorder::testing::dataset_of;
using factorder::testing::kind_of;

namespace {

const std::vector<std::string> kNames = {"subclass",      "creation-period",   "creation-time", "painted-by",
                                         "original-location", "current-location", "made-of"};

}  // namespace

TEST(Encoding, FirstStageIsPresenceOnly) {
  const auto c = build_catalog(kNames);
  const auto input = make_fact_set(c, {"subclass", "creation-period", "creation-time", "painted-by",
                                       "original-location", "current-location"});
  const auto v = encode_stage(c, input, {}, 1);
  EXPECT_EQ(v.presence, (std::vector<std::uint8_t>{1, 1, 1, 1, 1, 1, 0}));
  EXPECT_TRUE(v.selected.empty());
  EXPECT_EQ(v.width(), 7u);
  EXPECT_EQ(v.stage(), 1u);
}

TEST(Encoding, LaterStagesCarryTheChosenPrefix) {
  const auto c = build_catalog(kNames);
  const auto remaining = make_fact_set(c, {"creation-time", "painted-by", "original-location", "current-location"});
  const std::vector<FactTypeId> prefix = {c.id("subclass"), c.id("creation-period")};
  const auto v = encode_stage(c, remaining, prefix, 3);
  EXPECT_EQ(v.presence, (std::vector<std::uint8_t>{0, 0, 1, 1, 1, 1, 0}));
  EXPECT_EQ(v.selected, prefix);
  EXPECT_EQ(v.width(), 9u);
  EXPECT_EQ(v.attribute(2), 1u);
  EXPECT_EQ(v.attribute(7), c.id("subclass").value);
  EXPECT_EQ(v.attribute(8), c.id("creation-period").value);
}

TEST(Encoding, RejectsOverlapAndStageMismatch) {
  const auto c = build_catalog(kNames);
  const auto remaining = make_fact_set(c, {"subclass", "made-of"});
  EXPECT_EQ(kind_of([&] { encode_stage(c, remaining, {c.id("subclass")}, 2); }), ErrorKind::encoding);
  EXPECT_EQ(kind_of([&] { encode_stage(c, remaining, {}, 2); }), ErrorKind::contract);
  EXPECT_EQ(kind_of([&] { encode_stage(c, FactSet::from_ids({fact_type(40)}), {}, 1); }), ErrorKind::unknown_type);
}

TEST(Encoding, TrainingExamplesUseGoldPrefixes) {
  const auto d = dataset_of({"a", "b", "c", "d"}, {{"a", "c", "b"}, {"a", "b", "d"}});
  for (std::size_t stage = 1; stage <= 3; ++stage) {
    const auto ex = training_examples_for_stage(d, stage);
    ASSERT_EQ(ex.size(), 2u);
    for (std::size_t i = 0; i < ex.size(); ++i) {
      const auto& gold = d.instances[i].order;
      EXPECT_EQ(ex[i].label, gold[stage - 1]);
      EXPECT_EQ(ex[i].vector.width(), 4 + stage - 1);
      const auto present = std::count(ex[i].vector.presence.begin(), ex[i].vector.presence.end(), 1);
      EXPECT_EQ(static_cast<std::size_t>(present), 3 - stage + 1);
      EXPECT_TRUE(ex[i].vector.presence[ex[i].label.index()]);
      EXPECT_EQ(ex[i].vector.selected, std::vector<FactTypeId>(gold.begin(), gold.begin() + stage - 1));
    }
  }
  EXPECT_EQ(kind_of([&] { training_examples_for_stage(d, 4); }), ErrorKind::contract);
}

TEST(Encoding, LegalClassesAreTheRemainingFacts) {
  const auto s = FactSet::from_ids({fact_type(3), fact_type(1)});
  EXPECT_EQ(legal_classes(s), (std::vector<FactTypeId>{fact_type(1), fact_type(3)}));
}

TEST(Encoding, DebugDumpUsesNames) {
  const auto c = build_catalog({"x", "y", "z"});
  const auto v = encode_stage(c, make_fact_set(c, {"z"}), {c.id("y")}, 2);
  EXPECT_EQ(dump_stage_vector(c, v).dump(), R"({"presence":[0,0,1],"selected":["y"]})");
}
