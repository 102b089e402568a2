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
#include "ilcml/projection.hpp"
#include "test_util.hpp"

namespace ilcml {
namespace {

ProjectionSpec Spec(ProjectionMode mode, AxisAssignment a) {
  ProjectionSpec s;
  s.mode = mode;
  s.assignment = std::move(a);
  if (mode == ProjectionMode::kIlc2WeightedDynamic) {
    for (std::size_t i = 0; i < s.assignment.dimension; ++i) {
      s.weights.push_back(0.5 + 0.25 * static_cast<double>(i));
    }
  }
  if (mode == ProjectionMode::kStaticGeneric) {
    for (std::size_t c = 0; c < s.assignment.coordinate_count(); ++c) {
      s.coordinate_offsets.push_back(3.0 * static_cast<double>(c * c));
    }
  }
  s.Validate();
  return s;
}

const ProjectionMode kAllModes[] = {
    ProjectionMode::kStaticSequential,   ProjectionMode::kStaticCollocated,
    ProjectionMode::kStaticGeneric,      ProjectionMode::kIlc2Static,
    ProjectionMode::kIlc2PartialDynamic, ProjectionMode::kIlc2FullyDynamic,
    ProjectionMode::kIlc2WeightedDynamic};

TEST(ProjectionTest, WorkedExampleFullyDynamicBothDirections) {
  const ProjectionSpec s =
      Spec(ProjectionMode::kIlc2FullyDynamic, AxisAssignment::Zip(10));
  const std::vector<double> truth{5, 1, 1, 1, 2, 1, 3, 1, 1, 1};
  const std::vector<double> drawn{5, 1, 6, 2, 8, 3, 11, 4, 12, 5};
  const Polyline2D p = Project(truth, s);
  ASSERT_EQ(p.nodes.size(), 5u);
  for (std::size_t k = 0; k < 5; ++k) {
    EXPECT_EQ(p.nodes[k].x, drawn[2 * k]);
    EXPECT_EQ(p.nodes[k].y, drawn[2 * k + 1]);
  }
  Polyline2D q;
  for (std::size_t k = 0; k < 5; ++k) {
    q.nodes.push_back({drawn[2 * k], drawn[2 * k + 1]});
  }
  EXPECT_EQ(Invert(q, s), truth);
}

TEST(ProjectionTest, StaticSequentialOffsetsAreCoordinateTimesSpacing) {
  ProjectionSpec s = Spec(ProjectionMode::kStaticSequential,
                          AxisAssignment::Zip(6));
  s.axis_spacing = 7.5;
  const std::vector<double> v{1, 2, 3, 4, 5, 6};
  const Polyline2D p = Project(v, s);
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_DOUBLE_EQ(p.nodes[k].x, v[2 * k] + 7.5 * static_cast<double>(k));
    EXPECT_DOUBLE_EQ(p.nodes[k].y, v[2 * k + 1]);
  }
}

TEST(ProjectionTest, PartialDynamicAccumulatesOnlyHorizontally) {
  const ProjectionSpec s =
      Spec(ProjectionMode::kIlc2PartialDynamic, AxisAssignment::Zip(4));
  const Polyline2D p = Project({2, 3, 4, 5}, s);
  EXPECT_EQ(p.nodes[0], (Point2{2, 3}));
  EXPECT_EQ(p.nodes[1], (Point2{6, 5}));
}

TEST(ProjectionTest, LinkLayoutForNineAttributes) {
  const AxisAssignment a = AxisAssignment::Links(9);
  const std::vector<AxisPair> expected{{0, 1}, {3, 2}, {3, 4},
                                       {6, 5}, {6, 7}, {9, 8}};
  EXPECT_EQ(a.pairing, expected);
  ASSERT_EQ(a.duplicates.size(), 1u);
  EXPECT_EQ(a.duplicates[0], 8u);
  EXPECT_EQ(a.coordinate_count(), 4u);
  const ProjectionSpec s = Spec(ProjectionMode::kStaticSequential, a);
  const Polyline2D p = Project({1, 2, 3, 4, 5, 6, 7, 8, 9}, s);
  // x4 at offset 10 carries x3 and x5; x10 copies x9 at offset 30.
  EXPECT_EQ(p.nodes[1], (Point2{14, 3}));
  EXPECT_EQ(p.nodes[2], (Point2{14, 5}));
  EXPECT_EQ(p.nodes[5], (Point2{39, 9}));
}

TEST(ProjectionTest, OddDimensionZipDuplicatesLastAttribute) {
  const AxisAssignment a = AxisAssignment::Zip(5);
  EXPECT_EQ(a.extended_dimension(), 6u);
  EXPECT_EQ(a.Source(5), 4u);
}

TEST(ProjectionTest, RejectsLossyOrMalformedAssignments) {
  AxisAssignment a;
  a.dimension = 3;
  a.pairing = {{0, 1}};
  EXPECT_THROW(a.Validate(), Error);
  AxisAssignment b;
  b.dimension = 2;
  b.pairing = {{0, 0}};
  EXPECT_THROW(b.Validate(), Error);
  ProjectionSpec w = Spec(ProjectionMode::kIlc2FullyDynamic,
                          AxisAssignment::Zip(2));
  w.mode = ProjectionMode::kIlc2WeightedDynamic;
  EXPECT_THROW(w.Validate(), Error);
  EXPECT_THROW(Project({1, 2, 3}, Spec(ProjectionMode::kIlc2Static,
                                       AxisAssignment::Zip(2))),
               Error);
}

TEST(ProjectionTest, ZeroWeightIsNotInvertible) {
  ProjectionSpec s = Spec(ProjectionMode::kIlc2WeightedDynamic,
                          AxisAssignment::Zip(2));
  s.weights = {1.0, 0.0};
  EXPECT_THROW(Invert(Project({1, 2}, s), s), Error);
}

TEST(ProjectionTest, ModeNamesRoundTrip) {
  for (auto m : kAllModes) {
    EXPECT_EQ(ParseMode(ModeName(m)), m);
  }
  EXPECT_EQ(ParseMode("ilc2-partial-dynamic"),
            ProjectionMode::kIlc2PartialDynamic);
  EXPECT_THROW(ParseMode("spiral"), Error);
}

// 1000 random 10-D cases per mode and layout survive Project then Invert.
TEST(ProjectionPropertyTest, LosslessRoundTripEveryMode) {
  Rng rng(20260101);
  const AxisAssignment layouts[] = {
      AxisAssignment::Zip(10), AxisAssignment::Links(10),
      AxisAssignment::FromPairs(10, {{3, 0}, {3, 7}, {9, 1}})};
  for (auto mode : kAllModes) {
    for (const auto& layout : layouts) {
      const ProjectionSpec s = Spec(mode, layout);
      double worst = 0.0;
      for (int t = 0; t < 1000; ++t) {
        std::vector<double> v(10);
        for (auto& x : v) {
          // Mix integer-valued and wide-range reals.
          x = (t % 3 == 0) ? std::floor(rng.Uniform(1, 11))
                           : rng.Uniform(-1e3, 1e3);
        }
        const auto back = Invert(Project(v, s), s);
        ASSERT_EQ(back.size(), v.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
          worst = std::max(worst, std::fabs(back[i] - v[i]));
        }
      }
      EXPECT_LE(worst, 1e-9) << ModeName(mode);
    }
  }
}

TEST(ProjectionTest, SpecJsonRoundTrip) {
  for (auto mode : kAllModes) {
    const ProjectionSpec s = Spec(mode, AxisAssignment::Links(9));
    const ProjectionSpec back =
        ProjectionSpecFromJson(nlohmann::json::parse(ToJson(s).dump()));
    EXPECT_EQ(ToJson(back).dump(), ToJson(s).dump());
  }
}

TEST(ProjectionTest, ProjectCasesKeepsCaseIndex) {
  const Dataset d = testing::Wbc();
  const ProjectionSpec s =
      Spec(ProjectionMode::kIlc2Static, AxisAssignment::Zip(9));
  const auto all = ProjectCases(d, s);
  ASSERT_EQ(all.size(), d.size());
  EXPECT_EQ(all[10].case_index, 10u);
  const auto mirrored = ProjectAll(d, s, Mirror::kByClass);
  for (const auto& r : mirrored) EXPECT_EQ(r.mirrored, r.label == 1);
}

}  // namespace
}  // namespace ilcml
