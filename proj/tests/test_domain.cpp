#include "support.hpp"

using namespace factorder;
using factorder::testing::dataset_of;
using factorder::testing::kind_of;

TEST(Catalog, ResolvesNamesBothWays) {
  const auto c = build_catalog({"subclass", "creation-period", "painted-by"});
  EXPECT_EQ(c.size(), 3u);
  EXPECT_EQ(c.id("painted-by"), fact_type(2));
  EXPECT_EQ(c.name(fact_type(1)), "creation-period");
  EXPECT_FALSE(c.find("made-of").has_value());
  EXPECT_EQ(kind_of([&] { c.id("made-of"); }), ErrorKind::unknown_type);
}

TEST(Catalog, RejectsEmptyAndDuplicateNames) {
  EXPECT_EQ(kind_of([] { build_catalog({}); }), ErrorKind::validation);
  EXPECT_EQ(kind_of([] { build_catalog({"a", "b", "a"}); }), ErrorKind::validation);
  EXPECT_EQ(kind_of([] { build_catalog({"a", ""}); }), ErrorKind::validation);
}

TEST(FactSet, KeepsMembersSortedAndRejectsRepeats) {
  const auto c = build_catalog({"a", "b", "c", "d"});
  const auto s = make_fact_set(c, {"d", "a", "c"});
  EXPECT_EQ(s.members(), (std::vector<FactTypeId>{fact_type(0), fact_type(2), fact_type(3)}));
  EXPECT_TRUE(s.contains(fact_type(2)));
  EXPECT_FALSE(s.contains(fact_type(1)));
  EXPECT_EQ(kind_of([&] { make_fact_set(c, {"a", "b", "a"}); }), ErrorKind::duplicate_fact);
  EXPECT_EQ(kind_of([&] { make_fact_set(c, {"a", "zz"}); }), ErrorKind::unknown_type);
}

TEST(FactSet, EraseRemovesOneMember) {
  auto s = FactSet::from_ids({fact_type(4), fact_type(1)});
  s.erase(fact_type(4));
  EXPECT_EQ(s.members(), std::vector<FactTypeId>{fact_type(1)});
}

TEST(Dataset, ValidationReportsEveryBadInstance) {
  auto d = dataset_of({"a", "b", "c"}, {{"a", "b"}, {"b", "a"}});
  EXPECT_TRUE(validate_dataset(d).empty());
  d.instances.push_back({"short", {fact_type(0)}});
  d.instances.push_back({"repeat", {fact_type(1), fact_type(1)}});
  d.instances.push_back({"alien", {fact_type(0), fact_type(9)}});
  const auto v = validate_dataset(d);
  ASSERT_EQ(v.size(), 3u);
  EXPECT_EQ(v[0].index, 2u);
  EXPECT_EQ(v[0].kind, ViolationKind::length);
  EXPECT_EQ(v[1].kind, ViolationKind::permutation);
  EXPECT_EQ(v[2].kind, ViolationKind::unknown_id);
  EXPECT_EQ(kind_of([&] { require_valid(d); }), ErrorKind::training);
}

TEST(Dataset, SubsetKeepsCatalogAndLength) {
  const auto d = dataset_of({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}, {"c", "a"}});
  const auto s = d.subset({2, 0});
  EXPECT_EQ(s.size(), 2u);
  EXPECT_EQ(s.instances[0].id, "i2");
  EXPECT_EQ(s.catalog, d.catalog);
  EXPECT_EQ(s.sequence_length, 2u);
}

TEST(Scheme, NamesRoundTrip) {
  for (auto s : {Scheme::majority, Scheme::fixed_order, Scheme::knn, Scheme::decision_tree}) {
    EXPECT_EQ(parse_scheme(to_string(s)), s);
  }
  EXPECT_FALSE(parse_scheme("c4.5").has_value());
}

TEST(PlannerConfig, ValidationCatchesBadParameters) {
  const auto c = build_catalog({"a", "b", "c"});
  PlannerConfig cfg;
  cfg.sequence_length = 4;
  EXPECT_EQ(kind_of([&] { validate_config(cfg, c); }), ErrorKind::configuration);

  cfg.sequence_length = 3;
  cfg.scheme = Scheme::knn;
  cfg.k = 0;
  EXPECT_EQ(kind_of([&] { validate_config(cfg, c); }), ErrorKind::configuration);

  cfg.scheme = Scheme::decision_tree;
  cfg.tree.confidence_factor = 0.0;
  EXPECT_EQ(kind_of([&] { validate_config(cfg, c); }), ErrorKind::configuration);
  cfg.tree.confidence_factor = 0.25;
  cfg.tree.min_instances_per_leaf = 0;
  EXPECT_EQ(kind_of([&] { validate_config(cfg, c); }), ErrorKind::configuration);

  cfg.scheme = Scheme::fixed_order;
  cfg.canonical_order = {fact_type(0), fact_type(0), fact_type(1)};
  EXPECT_EQ(kind_of([&] { validate_config(cfg, c); }), ErrorKind::configuration);
  cfg.canonical_order = {fact_type(2), fact_type(0), fact_type(1)};
  EXPECT_NO_THROW(validate_config(cfg, c));
}

TEST(Error, MessageCarriesKindAndDetail) {
  const Error e(ErrorKind::data, "line 3: bad");
  EXPECT_EQ(e.detail(), "line 3: bad");
  EXPECT_EQ(std::string(e.what()), "data error: line 3: bad");
}
