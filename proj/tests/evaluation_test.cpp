/*
 * Copyright 2026 The ilcml Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <vector>

#include "gtest/gtest.h"
#include "ilcml/evaluation.hpp"
#include "ilcml/reproduce.hpp"
#include "test_util.hpp"

namespace ilcml {
namespace {

RuleOutcome Outcome(double p, std::size_t c, bool terminal = true) {
  RuleOutcome o;
  o.precision = p;
  o.classified = c;
  o.correct = static_cast<std::size_t>(p * static_cast<double>(c) + 0.5);
  o.terminal = terminal;
  return o;
}

TEST(WeightedPrecisionTest, WeightsByClassifiedCases) {
  EXPECT_NEAR(100 * WeightedPrecision({Outcome(0.9, 100), Outcome(0.8, 200)}),
              83.33, 0.01);
  // (1.0 * 4 + 0.5 * 2) / 6
  EXPECT_NEAR(WeightedPrecision({Outcome(1.0, 4), Outcome(0.5, 2)}),
              5.0 / 6.0, 1e-12);
  EXPECT_NEAR(WeightedPrecision({Outcome(1.0, 4), Outcome(0.5, 2),
                                 Outcome(0.0, 50, false)}),
              5.0 / 6.0, 1e-12);
  EXPECT_NEAR(WeightedPrecision({Outcome(0.9, 10), Outcome(0.2, 0)}), 0.9,
              1e-12);
  EXPECT_THROW(WeightedPrecision({Outcome(1.0, 0), Outcome(0.5, 0)}), Error);
  EXPECT_THROW(WeightedPrecision({}), Error);
  EXPECT_NEAR(WeightedPrecision({Outcome(1.0, 4), Outcome(0.5, 2)},
                                [](const RuleOutcome& o) {
                                  return o.precision < 1.0;
                                }),
              0.5, 1e-12);
}

TEST(WeightedPrecisionTest, EqualsCorrectOverClassifiedOnRandomOutcomes) {
  Rng rng(12);
  for (int t = 0; t < 500; ++t) {
    std::vector<RuleOutcome> v;
    std::size_t correct = 0, classified = 0;
    const std::size_t n = 1 + rng.Below(8);
    for (std::size_t i = 0; i < n; ++i) {
      RuleOutcome o;
      o.classified = rng.Below(20);
      o.correct = o.classified ? rng.Below(o.classified + 1) : 0;
      o.precision = o.classified ? double(o.correct) / double(o.classified) : -1;
      o.terminal = rng.Below(4) != 0;
      if (o.terminal) {
        correct += o.correct;
        classified += o.classified;
      }
      v.push_back(o);
    }
    if (classified == 0) {
      EXPECT_THROW(WeightedPrecision(v), Error);
    } else {
      EXPECT_NEAR(WeightedPrecision(v), double(correct) / double(classified),
                  1e-12);
    }
  }
}

TEST(RuleMetricsTest, RefusingRulesAreNotTerminal) {
  const Dataset wbc = testing::Wbc();
  const RuleSet rs = WbcReferenceRules(wbc, 7);
  const auto polylines = ProjectCases(wbc, rs.projection);
  const RuleSet pruned =
      Prune(rs, polylines, wbc.labels(), 17, PruneMode::kRefuse, {4}).ruleset;
  const auto outcomes = RuleMetrics(pruned, wbc, SplitRole::kTrain);
  ASSERT_EQ(outcomes.size(), 7u);
  EXPECT_FALSE(outcomes[4].terminal);
  EXPECT_EQ(outcomes[0].classified, 382u);
  EXPECT_EQ(outcomes[0].correct, 382u);
  EXPECT_NEAR(outcomes[0].recall, 382.0 / 444.0, 1e-12);
  EXPECT_NEAR(WeightedPrecision(outcomes), 1.0, 1e-12);

  FittedModel m;
  m.kind = PipelineKind::kBc;
  m.rules = pruned;
  m.class_names = {"benign", "malignant"};
  const SplitReport r = EvaluateModel(m, wbc, SplitRole::kTrain);
  EXPECT_EQ(r.cases, 683u);
  EXPECT_EQ(r.classified, 382u + 166 + 28 + 26 + 18 + 13);
  EXPECT_EQ(r.refused, r.cases - r.classified);
  EXPECT_NEAR(r.weighted_precision, 1.0, 1e-12);
}

Dataset Clusters() {
  Rng rng(23);
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  const double centers[3][2] = {{1, 1}, {5, 1}, {1, 5}};
  for (int c = 0; c < 3; ++c) {
    for (int i = 0; i < 30; ++i) {
      rows.push_back({centers[c][0] + rng.Uniform(-0.8, 0.8),
                      centers[c][1] + rng.Uniform(-0.8, 0.8)});
      labels.push_back(c);
    }
  }
  return testing::MakeDataset(rows, labels, 3);
}

TEST(RuleMetricsTest, IntermediateHierarchyRulesAreNotTerminal) {
  const Dataset d = Clusters();
  ClassHierarchy h;
  h.class_count = 3;
  h.nodes.push_back({{{0}, {1, 2}}, {-1, 1}});
  h.nodes.push_back({{{1}, {2}}, {-1, -1}});
  DcConfig cfg;
  cfg.nodes[0].refine_step = 0.1;
  cfg.nodes[0].tree = {3, 2};
  const HierarchicalModel m = DcFit(d, h, cfg);
  const auto outcomes = RuleMetrics(m, d, SplitRole::kTrain);
  std::size_t intermediate = 0, correct = 0, classified = 0;
  for (const auto& o : outcomes) {
    if (o.node == 0 && o.predicted_class == kRefuse) {
      EXPECT_FALSE(o.terminal);
      ++intermediate;
    }
    if (o.terminal) {
      correct += o.correct;
      classified += o.classified;
    }
  }
  EXPECT_GE(intermediate, 1u);
  ASSERT_GT(classified, 0u);
  EXPECT_NEAR(WeightedPrecision(outcomes), double(correct) / double(classified),
              1e-12);
}

TEST(PipelineTest, ModelJsonRoundTripKeepsPredictions) {
  const Dataset wbc = testing::Wbc();
  for (auto kind : {PipelineKind::kTree, PipelineKind::kMajority,
                    PipelineKind::kBc}) {
    PipelineConfig cfg;
    cfg.kind = kind;
    cfg.projection.mode = ProjectionMode::kIlc2Static;
    cfg.projection.assignment = AxisAssignment::Zip(9);
    cfg.grid.cell_width = 1;
    cfg.grid.cell_height = 1;
    const FittedModel m = FitPipeline(wbc, cfg);
    const std::string text = ToJson(m).dump();
    const FittedModel back = FittedModelFromJson(nlohmann::json::parse(text));
    EXPECT_EQ(ToJson(back).dump(), text) << PipelineKindName(kind);
    for (const auto& c : wbc.cases) {
      ASSERT_EQ(PredictModel(back, c.values), PredictModel(m, c.values));
    }
  }
  nlohmann::json bad = {{"format", "nope"}};
  EXPECT_THROW(FittedModelFromJson(bad), Error);
}

TEST(PipelineTest, TreeCrossValidationSeesOnlyTrainingFolds) {
  const Dataset wbc = testing::Wbc();
  PipelineConfig cfg;
  cfg.kind = PipelineKind::kTree;
  cfg.tree = {3, 5};
  SplitPlan plan;
  plan.fold_count = 5;
  const CvReport r = CrossValidate(wbc, cfg, plan);
  ASSERT_EQ(r.folds.size(), 5u);
  double sum = 0;
  std::size_t test_cases = 0;
  for (const auto& f : r.folds) {
    const SplitReport* test = f.Find(SplitRole::kTest);
    ASSERT_NE(test, nullptr);
    test_cases += test->cases;
    sum += test->weighted_precision;
    EXPECT_GT(test->weighted_precision, 0.85);
  }
  EXPECT_EQ(test_cases, wbc.size());
  EXPECT_NEAR(r.average_test_precision, sum / 5.0, 1e-12);
  ASSERT_EQ(r.class_hit_folds.size(), 2u);
  EXPECT_EQ(r.class_hit_folds[0], 5u);
}

TEST(PipelineTest, ConfigJsonRoundTrip) {
  const PipelineConfig c = PipelineConfig::PbcDtgBc();
  const nlohmann::json j = ToJson(c);
  EXPECT_EQ(ToJson(PipelineConfigFromJson(j)), j);
  EXPECT_THROW(ParsePipelineKind("forest"), Error);
}

}  // namespace
}  // namespace ilcml
