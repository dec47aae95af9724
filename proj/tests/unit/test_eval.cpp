#include <random>

#include <gtest/gtest.h>
#include <json.hpp>

#include "engage/engage.hpp"

using namespace engage;
using namespace engage::eval;
using nlohmann::json;

namespace {

json oracle(const char* name) { return json::parse(io::read_file(std::string(ENGAGE_TEST_DIR) + "/oracles/" + name)); }

PredictionRecord rec(const std::string& session, const std::string& wearer, const std::string& item,
                     const std::string& ablation, int truth, std::optional<int> pred) {
  PredictionRecord r;
  r.session_id = session;
  r.dyad_id = "d" + session;
  r.wearer_id = wearer;
  r.item_id = item;
  r.ablation = ablation;
  r.truth = truth;
  r.pred = pred;
  if (pred) r.pred_raw = *pred;
  r.source = pred ? "direct" : "failed";
  return r;
}

}  // namespace

TEST(Categories, ExhaustiveOverTheScale) {
  const Valence expected[] = {Valence::disagree, Valence::disagree, Valence::disagree, Valence::neutral,
                              Valence::agree,    Valence::agree,    Valence::agree};
  for (int r = 1; r <= 7; ++r) {
    EXPECT_EQ(categorize(r).valence, expected[r - 1]);
    EXPECT_EQ(categorize(r).arousal, std::abs(r - 4));
  }
  EXPECT_THROW(categorize(0), OutOfRange);
  EXPECT_THROW(categorize(8), OutOfRange);
}

TEST(Rmse, PerFoldThenAcrossFolds) {
  std::vector<PredictionRecord> r{rec("1", "a", "Q1", "4", 4, 5), rec("1", "b", "Q1", "4", 4, 2),
                                  rec("2", "c", "Q1", "4", 3, 3), rec("2", "d", "Q1", "4", 6, 6),
                                  rec("2", "e", "Q1", "4", 6, std::nullopt)};
  const auto s = rmse(r);
  ASSERT_EQ(s.folds.size(), 2u);
  EXPECT_DOUBLE_EQ(s.folds[0].second, std::sqrt(2.5));
  EXPECT_DOUBLE_EQ(s.folds[1].second, 0.0);
  EXPECT_DOUBLE_EQ(s.mean, std::sqrt(2.5) / 2);
  EXPECT_DOUBLE_EQ(s.std, std::sqrt(2.5) / std::sqrt(2.0));
  EXPECT_EQ(s.n_records, 4u);
  std::vector<PredictionRecord> none{rec("1", "a", "Q1", "4", 4, std::nullopt)};
  EXPECT_THROW(rmse(none), NoPredictions);
}

TEST(Rmse, UsesUnroundedValueWhenPresent) {
  auto r = rec("1", "a", "Q1", "4", 4, 5);
  r.pred_raw = 4.5;
  std::vector<PredictionRecord> v{r};
  EXPECT_DOUBLE_EQ(rmse(v).mean, 0.5);
}

TEST(Alpha, FrozenFixtures) {
  for (const auto& f : oracle("alpha.json")) {
    std::vector<std::pair<int, int>> units;
    for (const auto& u : f["units"]) units.emplace_back(u[0].get<int>(), u[1].get<int>());
    for (const char* level : {"nominal", "ordinal", "interval"}) {
      const auto a = krippendorff_alpha(units, parse_alpha_level(level));
      ASSERT_TRUE(a);
      EXPECT_NEAR(*a, f[level].get<double>(), 1e-9) << f["name"] << " " << level;
    }
  }
}

TEST(Alpha, PerfectAndUndefined) {
  std::vector<std::pair<int, int>> same{{1, 1}, {4, 4}, {7, 7}};
  EXPECT_DOUBLE_EQ(*krippendorff_alpha(same, AlphaLevel::interval), 1.0);
  std::vector<std::pair<int, int>> constant{{3, 3}, {3, 3}};
  EXPECT_FALSE(krippendorff_alpha(constant, AlphaLevel::nominal));
  std::vector<std::pair<int, int>> one{{3, 4}};
  EXPECT_THROW(krippendorff_alpha(one, AlphaLevel::nominal), Error);
  EXPECT_THROW(parse_alpha_level("ratio"), Error);
}

TEST(Alpha, ByItemSkipsUndefinedItems) {
  std::vector<PredictionRecord> r{rec("1", "a", "Q1", "4", 2, 2), rec("1", "b", "Q1", "4", 6, 6),
                                  rec("1", "a", "Q2", "4", 5, 5), rec("1", "b", "Q2", "4", 5, 5)};
  const auto s = alpha_by_item(r, AlphaScale::exact, AlphaLevel::interval);
  EXPECT_EQ(s.items, 2u);
  EXPECT_EQ(s.undefined_items, 1u);
  EXPECT_DOUBLE_EQ(s.mean, 1.0);
  EXPECT_EQ(project(2, AlphaScale::valence), static_cast<int>(Valence::disagree));
  EXPECT_EQ(project(7, AlphaScale::arousal), 3);
}

TEST(Confusion, AccuracyFromCounts) {
  const auto c = finish_confusion({{{{1072, 44, 52}}, {{91, 18, 33}}, {{105, 62, 325}}}});
  EXPECT_NEAR(*c.class_accuracy[0], 91.8, 0.05);
  EXPECT_NEAR(*c.class_accuracy[1], 12.7, 0.05);
  EXPECT_NEAR(*c.class_accuracy[2], 66.1, 0.05);
  EXPECT_NEAR(*c.macro_accuracy, 56.9, 0.05);
  EXPECT_EQ(c.total, 1802u);
}

TEST(Confusion, EmptyClassIsUndefined) {
  std::vector<PredictionRecord> r{rec("1", "a", "Q1", "4", 6, 5), rec("1", "a", "Q2", "4", 2, 4)};
  const auto c = confusion_and_accuracies(r);
  EXPECT_EQ(c.counts[0][0], 1u);
  EXPECT_EQ(c.counts[2][1], 1u);
  EXPECT_FALSE(c.class_accuracy[1]);
  EXPECT_DOUBLE_EQ(*c.macro_accuracy, 50.0);
}

TEST(TTest, FrozenScipyFixtures) {
  for (const auto& f : oracle("ttest.json")) {
    const auto a = f["a"].get<std::vector<double>>();
    const auto b = f["b"].get<std::vector<double>>();
    const auto r = paired_t_test(a, b);
    ASSERT_TRUE(r.t && r.p);
    EXPECT_NEAR(*r.t, f["t"].get<double>(), 1e-6);
    EXPECT_NEAR(*r.p, f["p"].get<double>(), 1e-6);
  }
}

TEST(TTest, ZeroVarianceIsFlagged) {
  std::vector<double> a{1, 2, 3}, b{0, 1, 2};
  const auto r = paired_t_test(a, b);
  EXPECT_TRUE(r.zero_variance);
  EXPECT_FALSE(r.t);
  std::vector<double> c{1, 2};
  EXPECT_THROW(paired_t_test(a, c), DimensionMismatch);
}

TEST(TTest, ResidualsPairOnSessionWearerItem) {
  std::vector<PredictionRecord> r{rec("1", "a", "Q1", "4", 4, 6), rec("1", "a", "Q1", "4S", 4, 3),
                                  rec("1", "a", "Q2", "4", 4, 4), rec("1", "a", "Q2", "4S", 4, std::nullopt),
                                  rec("1", "b", "Q1", "4S", 4, 4)};
  const auto p = pair_residuals(r, "4", "4S");
  ASSERT_EQ(p.a.size(), 1u);
  EXPECT_EQ(p.a[0], 2.0);
  EXPECT_EQ(p.b[0], 1.0);
  const auto s = pair_residuals(r, "4", "4S", false);
  EXPECT_EQ(s.b[0], -1.0);
}

TEST(ItemAccuracy, SortedByMeanThenId) {
  std::vector<PredictionRecord> r{rec("1", "a", "Q2", "4", 4, 4), rec("1", "a", "Q2", "4S", 4, 5),
                                  rec("1", "a", "Q1", "4", 4, 4), rec("1", "a", "Q1", "4S", 4, 3),
                                  rec("1", "a", "Q3", "4", 4, 4), rec("1", "a", "Q3", "4S", 4, 4)};
  const auto acc = per_item_accuracy(r);
  ASSERT_EQ(acc.size(), 3u);
  EXPECT_EQ(acc[0].item_id, "Q3");
  EXPECT_EQ(acc[1].item_id, "Q1");
  EXPECT_DOUBLE_EQ(acc[1].mean, 50.0);
  EXPECT_DOUBLE_EQ(acc[1].std, 50.0);
  EXPECT_EQ(acc[1].groups, 2u);
  EXPECT_EQ(per_item_accuracy(r, AccuracyGrouping::ablation_fold)[0].groups, 2u);
}

TEST(Correlation, SpearmanMatchesScipy) {
  for (const auto& f : oracle("spearman.json")) {
    const auto x = f["x"].get<std::vector<double>>();
    const auto y = f["y"].get<std::vector<double>>();
    EXPECT_NEAR(spearman(x, y), f["rho"].get<double>(), 1e-12);
  }
  std::vector<double> flat{1, 1, 1}, up{1, 2, 3};
  EXPECT_THROW(spearman(flat, up), DegenerateInput);
}

TEST(Records, JsonlRoundTripSkipsSummary) {
  std::vector<PredictionRecord> r{rec("1", "a", "Q1", "4", 4, 6), rec("1", "b", "Q1", "4", 2, std::nullopt)};
  r[1].truth.reset();
  const auto text = records_to_jsonl(r) + R"({"summary":{"records":2}})" + "\n";
  EXPECT_EQ(parse_records(text), r);
  EXPECT_THROW(parse_records("{not json\n"), SchemaViolation);
}

TEST(Report, ReverseCodingFlipsOnlyNegativeItems) {
  std::vector<core::QuestionnaireItem> items{{"Q1", "a", false}, {"Q2", "b", true}};
  std::vector<PredictionRecord> r{rec("1", "a", "Q1", "4", 2, 3), rec("1", "a", "Q2", "4", 2, 3)};
  r[1].pred_raw = 3.25;
  const auto f = reverse_code(r, items);
  EXPECT_EQ(*f[0].truth, 2);
  EXPECT_EQ(*f[1].truth, 6);
  EXPECT_EQ(*f[1].pred, 5);
  EXPECT_DOUBLE_EQ(*f[1].pred_raw, 4.75);
}

TEST(Report, JsonTextAndSvg) {
  std::mt19937 rng(4);
  std::uniform_int_distribution<int> rating(1, 7), jitter(-1, 1);
  std::vector<PredictionRecord> r;
  for (int s = 0; s < 4; ++s) {
    for (const char* w : {"a", "b"}) {
      for (int i = 1; i <= 5; ++i) {
        const int t = rating(rng);
        for (const char* abl : {"4", "4SGF"}) {
          r.push_back(rec(std::to_string(s), w, "Q" + std::to_string(i), abl, t, std::clamp(t + jitter(rng), 1, 7)));
        }
      }
    }
  }
  const auto rep = compute_report(r);
  EXPECT_EQ(rep["ablations"]["4"]["records"], 40);
  EXPECT_EQ(rep["t_tests"].size(), 1u);
  EXPECT_EQ(rep["t_tests"][0]["n"], 40);
  EXPECT_TRUE(rep["t_tests"][0].contains("t"));
  EXPECT_TRUE(rep["t_tests"][0].contains("p"));
  EXPECT_EQ(rep["ablations"]["4SGF"]["confusion"]["order"], json({"agree", "neutral", "disagree"}));
  const auto text = render_text(rep);
  EXPECT_NE(text.find("Agr"), std::string::npos);
  EXPECT_NE(text.find("4SGF"), std::string::npos);
  const auto svg = render_svg(rep);
  EXPECT_TRUE(svg.starts_with("<svg"));
  EXPECT_TRUE(svg.ends_with("</svg>\n"));

  ReportOptions only;
  only.metrics = MetricSelection::parse("rmse");
  const auto small = compute_report(r, only);
  EXPECT_TRUE(small["ablations"]["4"].contains("rmse"));
  EXPECT_FALSE(small["ablations"]["4"].contains("confusion"));
  EXPECT_THROW(MetricSelection::parse("rmse,bogus"), Error);
}
