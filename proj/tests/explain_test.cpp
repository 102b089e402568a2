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
#include "ilcml/explain.hpp"
#include "ilcml/reproduce.hpp"
#include "test_util.hpp"

namespace ilcml {
namespace {

ProjectionSpec TwoD() {
  ProjectionSpec s;
  s.mode = ProjectionMode::kIlc2Static;
  s.assignment = AxisAssignment::Zip(2);
  return s;
}

int Parity(const std::vector<double>& v) {
  return static_cast<int>(std::llround(v[0] * 10) + std::llround(v[1] * 10)) % 2;
}

TEST(ExplainTest, CheckerboardHasNoPureBox) {
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (int i = 0; i <= 100; ++i) {
    for (int j = 0; j <= 100; ++j) {
      rows.push_back({0.1 * i, 0.1 * j});
      labels.push_back((i + j) % 2);
    }
  }
  const Dataset d = testing::MakeDataset(rows, labels, 2);
  ExplainRequest req;
  req.point = {5.03, 4.96};
  req.predictor = Parity;
  req.floor = 0.25;
  const Explanation e = ExplainLocal(req, d, TwoD());
  EXPECT_EQ(e.verdict, Verdict::kNoBoxFound);
  EXPECT_TRUE(e.boxes.empty());
  EXPECT_EQ(e.predicted, Parity(req.point));
  ASSERT_FALSE(e.resolutions_tried.empty());
  EXPECT_DOUBLE_EQ(e.resolutions_tried.front(), 2.0);
  EXPECT_GE(e.resolutions_tried.back(), 0.25 - 1e-12);
  for (std::size_t i = 1; i < e.resolutions_tried.size(); ++i) {
    EXPECT_LT(e.resolutions_tried[i], e.resolutions_tried[i - 1]);
  }
}

TEST(ExplainTest, UniformRegionIsExplained) {
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (int i = 0; i <= 20; ++i) {
    for (int j = 0; j <= 20; ++j) {
      rows.push_back({0.5 * i, 0.5 * j});
      labels.push_back(i < 10 ? 0 : 1);
    }
  }
  const Dataset d = testing::MakeDataset(rows, labels, 2);
  ExplainRequest req;
  req.point = {1.2, 3.3};
  req.predictor = [](const std::vector<double>& v) { return v[0] < 4.75 ? 0 : 1; };
  const Explanation e = ExplainLocal(req, d, TwoD());
  ASSERT_EQ(e.verdict, Verdict::kExplained);
  ASSERT_FALSE(e.boxes.empty());
  for (const auto& b : e.boxes) {
    EXPECT_EQ(b.stats.dominant, 0);
    EXPECT_DOUBLE_EQ(b.stats.purity_fraction, 1.0);
    EXPECT_TRUE(b.rect.Contains({1.2, 3.3}));
  }
}

TEST(ExplainTest, SandwichesBracketThePointOnWbc) {
  const Dataset wbc = testing::Wbc();
  const RuleSet rs = WbcReferenceRules(wbc, 7);
  const ProjectionSpec spec = rs.projection;
  Rng rng(77);
  std::size_t explained = 0;
  for (int t = 0; t < 40; ++t) {
    ExplainRequest req;
    req.point = wbc.cases[rng.Below(wbc.size())].values;
    req.predictor = RuleSetPredictor(rs);
    req.purity = 0.9;
    req.max_boxes = 3;
    const Explanation e = ExplainLocal(req, wbc, spec);
    if (e.verdict != Verdict::kExplained) continue;
    ++explained;
    for (const auto& b : e.boxes) {
      EXPECT_GE(b.stats.purity_fraction, 0.9);
      EXPECT_EQ(b.stats.dominant, e.predicted);
      auto check = [&](const Sandwich& s) {
        ASSERT_EQ(s.low.size(), req.point.size());
        for (std::size_t a = 0; a < req.point.size(); ++a) {
          EXPECT_LE(s.low[a], req.point[a] + 1e-9);
          EXPECT_GE(s.high[a], req.point[a] - 1e-9);
        }
        EXPECT_TRUE(testing::OracleMember(Project(s.low, spec), b.rect,
                                          Membership::kEdgeCross));
        EXPECT_TRUE(testing::OracleMember(Project(s.high, spec), b.rect,
                                          Membership::kEdgeCross));
      };
      check(b.artificial);
      if (b.training) {
        check(*b.training);
        ASSERT_TRUE(b.training->low_case && b.training->high_case);
        EXPECT_EQ(wbc.cases[*b.training->low_case].values, b.training->low);
      }
    }
  }
  EXPECT_GT(explained, 20u);
}

TEST(ExplainTest, RejectsBadRequests) {
  const Dataset wbc = testing::Wbc();
  ExplainRequest req;
  req.point = {1, 2};
  req.predictor = [](const std::vector<double>&) { return 0; };
  EXPECT_THROW(ExplainLocal(req, wbc, WbcLinkProjection()), Error);
  req.point = wbc.cases[0].values;
  req.decrement = 0;
  EXPECT_THROW(ExplainLocal(req, wbc, WbcLinkProjection()), Error);
}

TEST(TreeFormTest, FirstWbcBoxAsConditions) {
  const Dataset wbc = testing::Wbc();
  const RuleSet rs = WbcReferenceRules(wbc, 7);
  const auto chains = BoxesToTreeForm(rs, rs.rules[0]);
  ASSERT_EQ(chains.size(), 1u);
  EXPECT_EQ(chains[0].text, "15 ≤ x & x ≤ 20.5 & 1 ≤ y & y ≤ 1.5");
  EXPECT_FALSE(chains[0].pairs.empty());
  const auto polylines = ProjectCases(wbc, rs.projection);
  for (const auto& rule : rs.rules) {
    for (const auto& ch : BoxesToTreeForm(rs, rule)) {
      const Rect& r = rs.box(ch.box).rect;
      for (const auto& p : polylines) {
        ASSERT_EQ(ChainHolds(ch, p),
                  testing::OracleMember(p, r, Membership::kNodeIn));
      }
    }
  }
  RuleSet dyn = rs;
  dyn.projection.mode = ProjectionMode::kIlc2FullyDynamic;
  EXPECT_THROW(BoxesToTreeForm(dyn, dyn.rules[0]), Error);
}

}  // namespace
}  // namespace ilcml
