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

#include <algorithm>
#include <set>

#include "gtest/gtest.h"
#include "ilcml/dataset.hpp"
#include "test_util.hpp"

namespace ilcml {
namespace {

using testing::MakeDataset;

TEST(IngestTest, WisconsinCountsAfterDroppingMissingRows) {
  const Dataset d = testing::Wbc();
  EXPECT_EQ(d.size(), 683u);
  EXPECT_EQ(d.dimension(), 9u);
  ASSERT_EQ(d.class_count(), 2u);
  EXPECT_EQ(d.classes[0].name, "benign");
  EXPECT_EQ(d.classes[0].count, 444u);
  EXPECT_EQ(d.classes[1].count, 239u);
  for (const auto& a : d.attributes) {
    EXPECT_EQ(a.observed_min, 1.0);
    EXPECT_EQ(a.observed_max, 10.0);
    EXPECT_EQ(a.quantum, 1.0);
  }
}

TEST(IngestTest, WisconsinMissingPolicyErrorReportsRow) {
  try {
    IngestCsv(testing::DataPath("breast-cancer-wisconsin.data"),
              CsvSchema::Wbc(), MissingPolicy::kError);
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.row(), 24u);
    EXPECT_EQ(e.code(), ErrorCode::kParse);
  }
}

TEST(IngestTest, PageBlocksShippedFile) {
  const Dataset d = testing::Pbc();
  EXPECT_EQ(d.size(), 5472u);
  EXPECT_EQ(d.dimension(), 10u);
  const std::size_t expected[] = {4913, 329, 28, 87, 115};
  for (std::size_t c = 0; c < 5; ++c) {
    EXPECT_EQ(d.classes[c].count, expected[c]) << c;
  }
}

TEST(IngestTest, MalformedRowsFailWithLineNumber) {
  CsvSchema s;
  try {
    IngestCsvText("1,2,a\n3,x,b\n", s);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.row(), 2u);
  }
  try {
    IngestCsvText("1,2,a\n3,b\n", s);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.row(), 2u);
  }
  EXPECT_THROW(IngestCsvText("\n\n", s), Error);
}

TEST(IngestTest, HeaderAndNaturalLabelOrder) {
  CsvSchema s;
  s.has_header = true;
  const Dataset d = IngestCsvText("u,v,cls\n1,2,10\n3,4,2\n5,6,10\n", s);
  ASSERT_EQ(d.class_count(), 2u);
  // Numeric labels order by value.
  EXPECT_EQ(d.classes[0].name, "2");
  EXPECT_EQ(d.classes[1].name, "10");
  EXPECT_EQ(d.attributes[0].name, "u");
  EXPECT_EQ(d.cases[0].label, 1);
  EXPECT_EQ(d.cases[0].source_row, 2u);
  const Dataset t = IngestCsvText("1,2,b\n3,4,a\n5,6,7\n", CsvSchema{});
  EXPECT_EQ(t.classes[0].name, "7");
  EXPECT_EQ(t.classes[1].name, "a");
  EXPECT_EQ(t.classes[2].name, "b");
}

TEST(NormalizeTest, UnitRangeAndInverse) {
  const Dataset raw = MakeDataset({{2, 5, 7}, {4, 5, 9}, {3, 5, 8}}, {0, 1, 0}, 2);
  const Dataset u = Normalize(raw, Normalization::kMinMaxUnit);
  EXPECT_DOUBLE_EQ(u.cases[0].values[0], 0.0);
  EXPECT_DOUBLE_EQ(u.cases[1].values[0], 1.0);
  EXPECT_DOUBLE_EQ(u.cases[2].values[0], 0.5);
  // Constant attribute.
  EXPECT_DOUBLE_EQ(u.cases[1].values[1], 0.0);
  const Dataset back = Denormalize(u);
  for (std::size_t i = 0; i < raw.size(); ++i) {
    for (std::size_t a = 0; a < 3; ++a) {
      EXPECT_NEAR(back.cases[i].values[a], raw.cases[i].values[a], 1e-12);
    }
  }
}

TEST(NormalizeTest, PageBlocksAllValuesInUnitInterval) {
  const Dataset u = Normalize(testing::Pbc(), Normalization::kMinMaxUnit);
  for (const auto& c : u.cases) {
    for (double v : c.values) {
      ASSERT_GE(v, 0.0);
      ASSERT_LE(v, 1.0);
    }
  }
}

void ExpectPartition(const Partition& p, std::size_t n) {
  std::vector<std::size_t> all;
  all.insert(all.end(), p.train.begin(), p.train.end());
  all.insert(all.end(), p.validation.begin(), p.validation.end());
  all.insert(all.end(), p.test.begin(), p.test.end());
  std::sort(all.begin(), all.end());
  ASSERT_EQ(all.size(), n);
  for (std::size_t i = 0; i < n; ++i) ASSERT_EQ(all[i], i);
}

TEST(SplitTest, KFoldTestPartsPartitionTheDataAndStayStratified) {
  const Dataset d = testing::Wbc();
  SplitPlan plan;
  plan.validation = 0.1;
  const auto parts = StratifiedSplit(d, plan);
  ASSERT_EQ(parts.size(), 10u);
  std::vector<int> seen(d.size(), 0);
  for (const auto& p : parts) {
    ExpectPartition(p, d.size());
    std::size_t benign = 0;
    for (std::size_t i : p.test) {
      seen[i]++;
      if (d.cases[i].label == 0) ++benign;
    }
    EXPECT_NEAR(static_cast<double>(benign), 44.4, 1.0);
    EXPECT_NEAR(static_cast<double>(p.test.size()), 68.3, 1.0);
  }
  for (int s : seen) EXPECT_EQ(s, 1);
}

TEST(SplitTest, SeedDeterminesPartition) {
  const Dataset d = testing::Wbc();
  SplitPlan a, b;
  b.seed = 2;
  EXPECT_EQ(StratifiedSplit(d, a)[0].test, StratifiedSplit(d, a)[0].test);
  EXPECT_NE(StratifiedSplit(d, a)[0].test, StratifiedSplit(d, b)[0].test);
}

TEST(SplitTest, HoldoutProportionsPerClass) {
  const Dataset d = testing::Pbc();
  SplitPlan plan;
  plan.kind = SplitKind::kHoldout;
  plan.train = 0.81;
  plan.validation = 0.09;
  plan.test = 0.10;
  const auto parts = StratifiedSplit(d, plan);
  ASSERT_EQ(parts.size(), 1u);
  ExpectPartition(parts[0], d.size());
  std::vector<std::size_t> test_count(5, 0);
  for (std::size_t i : parts[0].test) test_count[d.cases[i].label]++;
  for (std::size_t c = 0; c < 5; ++c) {
    EXPECT_NEAR(static_cast<double>(test_count[c]),
                0.1 * static_cast<double>(d.classes[c].count), 0.5 + 1e-9);
  }
}

TEST(SplitTest, RejectsBadPlans) {
  const Dataset d = testing::Wbc();
  SplitPlan p;
  p.fold_count = 1;
  EXPECT_THROW(StratifiedSplit(d, p), Error);
  SplitPlan h;
  h.kind = SplitKind::kHoldout;
  h.train = 0.5;
  h.test = 0.1;
  EXPECT_THROW(StratifiedSplit(d, h), Error);
  SplitPlan big;
  big.fold_count = 30;
  EXPECT_THROW(StratifiedSplit(testing::Pbc(), big), Error);
}

TEST(DatasetJsonTest, RoundTripIsExact) {
  const Dataset d = Normalize(testing::Pbc(), Normalization::kMinMaxUnit);
  const Dataset back = DatasetFromJson(nlohmann::json::parse(ToJson(d).dump()));
  ASSERT_EQ(back.size(), d.size());
  EXPECT_EQ(back.normalization, d.normalization);
  for (std::size_t i = 0; i < d.size(); ++i) {
    ASSERT_EQ(back.cases[i].values, d.cases[i].values);
    ASSERT_EQ(back.cases[i].label, d.cases[i].label);
  }
  for (std::size_t a = 0; a < d.dimension(); ++a) {
    EXPECT_EQ(back.attributes[a].scale_max, d.attributes[a].scale_max);
  }
  EXPECT_EQ(ToJson(back).dump(), ToJson(d).dump());
}

TEST(DatasetTest, SubsetRefreshesStatistics) {
  const Dataset d = MakeDataset({{1, 0}, {5, 0}, {3, 1}}, {0, 1, 1}, 2);
  const Dataset s = d.Subset({0, 2});
  EXPECT_EQ(s.size(), 2u);
  EXPECT_EQ(s.classes[0].count, 1u);
  EXPECT_EQ(s.classes[1].count, 1u);
  EXPECT_EQ(s.attributes[0].observed_max, 3.0);
  EXPECT_EQ(s.attributes[0].quantum, 2.0);
}

}  // namespace
}  // namespace ilcml
