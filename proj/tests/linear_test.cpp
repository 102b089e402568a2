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

#include <cmath>
#include <vector>

#include "gtest/gtest.h"
#include "ilcml/linear.hpp"
#include "test_util.hpp"

namespace ilcml {
namespace {

ProjectionSpec Spec(std::size_t dim) {
  ProjectionSpec s;
  s.mode = ProjectionMode::kIlc2Static;
  s.assignment = AxisAssignment::Zip(dim);
  return s;
}

Dataset Separable(Rng& rng, double gap) {
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  // Class 0 above x + y = 4, class 1 below, nothing within the gap.
  while (rows.size() < 80) {
    const double x = rng.Uniform(0, 4), y = rng.Uniform(0, 4);
    if (std::fabs(x + y - 4) < gap) continue;
    rows.push_back({x, y});
    labels.push_back(x + y > 4 ? 0 : 1);
  }
  return testing::MakeDataset(rows, labels, 2);
}

TEST(LinearTest, ScoreMapsEndpointsToZeroAndOne) {
  const ProjectionLine line{{1, 1}, {3, 5}, -1};
  EXPECT_DOUBLE_EQ(ScorePoint({1, 1}, line), 0.0);
  EXPECT_DOUBLE_EQ(ScorePoint({3, 5}, line), 1.0);
  EXPECT_DOUBLE_EQ(ScorePoint({2, 3}, line), 0.5);
  // Orthogonal offsets do not move the score.
  EXPECT_NEAR(ScorePoint({2 + 2, 3 - 1}, line), 0.5, 1e-12);
  EXPECT_THROW(ScorePoint({0, 0}, ProjectionLine{{1, 1}, {1, 1}, -1}), Error);
}

TEST(LinearTest, ScoreIsInvariantToUniformScalingOfTheLine) {
  Rng rng(4);
  for (int t = 0; t < 1000; ++t) {
    const Point2 p0{rng.Uniform(-5, 5), rng.Uniform(-5, 5)};
    const Point2 d{rng.Uniform(-3, 3), rng.Uniform(-3, 3)};
    if (d.x * d.x + d.y * d.y < 1e-3) continue;
    const Point2 n{rng.Uniform(-5, 5), rng.Uniform(-5, 5)};
    const double s = rng.Uniform(0.1, 10);
    const double a = ScorePoint(n, {p0, {p0.x + d.x, p0.y + d.y}, -1});
    const double b = ScorePoint({p0.x + s * (n.x - p0.x), p0.y + s * (n.y - p0.y)},
                                {p0, {p0.x + s * d.x, p0.y + s * d.y}, -1});
    ASSERT_NEAR(a, b, 1e-9);
  }
}

TEST(LinearTest, SeparatesSeparableClasses) {
  Rng rng(9);
  const Dataset d = Separable(rng, 1.0);
  for (auto form : {LinearForm::kOneSided, LinearForm::kTwoSided}) {
    const LinearFit f = FitLinear(d, Spec(2), form, 0, 1);
    EXPECT_DOUBLE_EQ(f.precision, 1.0) << LinearFormName(form);
    const LinearFit again = MeasureLinear(f.model, d, Spec(2));
    EXPECT_DOUBLE_EQ(again.precision, f.precision);
    EXPECT_DOUBLE_EQ(again.recall, f.recall);
    if (form == LinearForm::kTwoSided) {
      EXPECT_DOUBLE_EQ(f.accuracy, 1.0);
    } else {
      EXPECT_GE(f.recall, 0.5);
    }
  }
}

TEST(LinearTest, ConjunctionUsesTwoTerms) {
  Rng rng(10);
  const Dataset d = Separable(rng, 1.0);
  LinearSearch s;
  s.first_node = 0;
  s.second_node = 0;
  const LinearFit f = FitLinear(d, Spec(2), LinearForm::kConjunction, 0, 1, s);
  ASSERT_EQ(f.model.terms.size(), 2u);
  EXPECT_DOUBLE_EQ(f.precision, 1.0);
}

TEST(LinearTest, RecallFloorFailureCarriesBestModel) {
  Rng rng(11);
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (int i = 0; i < 60; ++i) {
    rows.push_back({rng.Uniform(0, 1), rng.Uniform(0, 1)});
    labels.push_back(i % 2);
  }
  const Dataset d = testing::MakeDataset(rows, labels, 2);
  LinearSearch s;
  s.min_recall = 1.0;
  try {
    const LinearFit f = FitLinear(d, Spec(2), LinearForm::kOneSided, 0, 1, s);
    EXPECT_GE(f.recall, 1.0);
  } catch (const LinearFitError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kFailedPrecondition);
    EXPECT_FALSE(e.best().model.terms.empty());
  }
  EXPECT_THROW(FitLinear(d, Spec(2), LinearForm::kOneSided, 0, 0), Error);
}

TEST(LinearTest, JsonRoundTrip) {
  LinearModel m;
  m.form = LinearForm::kConjunction;
  m.terms = {{{{0, 0}, {1, 2}, 0}, 0.25}, {{{1, 1}, {3, 1}, -1}, 0.75}};
  m.positive_class = 1;
  m.negative_class = 0;
  const nlohmann::json j = ToJson(m);
  EXPECT_EQ(ToJson(LinearModelFromJson(j)), j);
  Rng rng(3);
  for (int t = 0; t < 200; ++t) {
    const std::vector<double> v{rng.Uniform(0, 4), rng.Uniform(0, 4),
                                rng.Uniform(0, 4), rng.Uniform(0, 4)};
    EXPECT_EQ(ClassifyLinear(LinearModelFromJson(j), v, Spec(4)),
              ClassifyLinear(m, v, Spec(4)));
  }
  EXPECT_THROW(ParseLinearForm("cubic"), Error);
}

}  // namespace
}  // namespace ilcml
