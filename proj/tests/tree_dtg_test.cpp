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
#include <cmath>
#include <set>
#include <vector>

#include "gtest/gtest.h"
#include "ilcml/dtg.hpp"
#include "ilcml/tree.hpp"
#include "test_util.hpp"

namespace ilcml {
namespace {

double OracleEntropy(const std::vector<std::size_t>& counts) {
  double n = 0, h = 0;
  for (auto c : counts) n += static_cast<double>(c);
  for (auto c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / n;
    h -= p * std::log2(p);
  }
  return h;
}

struct OracleSplit {
  double gain = 0.0;
  std::set<double> thresholds;
};

// Best information gain over every attribute and every midpoint.
OracleSplit BestRootSplit(const std::vector<std::vector<double>>& x,
                          const std::vector<int>& y, std::size_t k,
                          std::size_t min_leaf) {
  std::vector<std::size_t> all(k, 0);
  for (int c : y) all[c]++;
  const double parent = OracleEntropy(all);
  OracleSplit best;
  for (std::size_t a = 0; a < x[0].size(); ++a) {
    std::set<double> values;
    for (const auto& row : x) values.insert(row[a]);
    std::vector<double> v(values.begin(), values.end());
    for (std::size_t i = 1; i < v.size(); ++i) {
      const double t = 0.5 * (v[i - 1] + v[i]);
      std::vector<std::size_t> l(k, 0), r(k, 0);
      std::size_t nl = 0, nr = 0;
      for (std::size_t j = 0; j < x.size(); ++j) {
        if (x[j][a] <= t) {
          l[y[j]]++;
          ++nl;
        } else {
          r[y[j]]++;
          ++nr;
        }
      }
      if (nl < min_leaf || nr < min_leaf) continue;
      const double n = static_cast<double>(x.size());
      const double g = parent - (nl * OracleEntropy(l) + nr * OracleEntropy(r)) / n;
      if (g > best.gain + 1e-12) {
        best.gain = g;
        best.thresholds = {t};
      } else if (std::abs(g - best.gain) <= 1e-12) {
        best.thresholds.insert(t);
      }
    }
  }
  return best;
}

TEST(TreeTest, RootSplitMaximizesGainAtAMidpoint) {
  Rng rng(5);
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = 4 + rng.Below(40), dim = 1 + rng.Below(4);
    const std::size_t k = 2 + rng.Below(3);
    std::vector<std::vector<double>> x(n, std::vector<double>(dim));
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (auto& v : x[i]) v = static_cast<double>(rng.Below(8));
      y[i] = static_cast<int>(rng.Below(k));
    }
    const std::size_t min_leaf = 1 + rng.Below(3);
    const DecisionTree tree = InduceTree(x, y, k, {1, min_leaf});
    const OracleSplit oracle = BestRootSplit(x, y, k, min_leaf);
    const TreeNode& root = tree.nodes[0];
    if (oracle.gain <= 1e-12) {
      EXPECT_TRUE(root.leaf()) << t;
      continue;
    }
    ASSERT_FALSE(root.leaf()) << t;
    std::vector<std::size_t> l(k, 0), r(k, 0), all(k, 0);
    std::size_t nl = 0;
    for (std::size_t i = 0; i < n; ++i) {
      all[y[i]]++;
      if (x[i][root.attribute] <= root.threshold) {
        l[y[i]]++;
        ++nl;
      } else {
        r[y[i]]++;
      }
    }
    const double g = OracleEntropy(all) -
                     (nl * OracleEntropy(l) + (n - nl) * OracleEntropy(r)) /
                         static_cast<double>(n);
    EXPECT_NEAR(g, oracle.gain, 1e-9) << t;
    EXPECT_TRUE(oracle.thresholds.count(root.threshold)) << t;
  }
}

TEST(TreeTest, LeavesRespectDepthAndMinimumSize) {
  const Dataset wbc = testing::Wbc();
  const DecisionTree tree = InduceTree(wbc, {3, 5});
  for (const auto& node : tree.nodes) {
    EXPECT_LE(node.depth, 3u);
    std::size_t total = 0;
    for (auto c : node.counts) total += c;
    if (node.leaf()) EXPECT_GE(total, 5u);
  }
  const DecisionTree back = DecisionTreeFromJson(ToJson(tree));
  for (const auto& c : wbc.cases) {
    ASSERT_EQ(back.Predict(c.values), tree.Predict(c.values));
  }
  EXPECT_THROW(InduceTree(wbc, {3, 0}), Error);
}

TEST(TreeTest, BranchesPartitionTheTrainingCases) {
  const Dataset wbc = testing::Wbc();
  const DecisionTree tree = InduceTree(wbc, {4, 5});
  const auto branches = AllBranches(tree);
  EXPECT_EQ(branches.size(), tree.leaf_count());
  std::size_t total = 0;
  for (const auto& b : branches) {
    for (auto c : b.counts) total += c;
  }
  EXPECT_EQ(total, wbc.size());
  const auto pure = SelectBranches(tree, 0.95);
  for (std::size_t i = 0; i < pure.size(); ++i) {
    EXPECT_GE(pure[i].purity, 0.95);
    if (i) EXPECT_GE(pure[i - 1].covered(), pure[i].covered());
  }
  // Every case satisfies exactly the conditions of its own leaf's branch.
  for (const auto& c : wbc.cases) {
    std::size_t hits = 0;
    for (const auto& b : branches) {
      bool ok = true;
      for (const auto& cond : b.conditions) {
        const double v = c.values[cond.attribute];
        ok = ok && (cond.relation == Relation::kLe ? v <= cond.threshold
                                                   : v > cond.threshold);
      }
      if (ok) {
        ++hits;
        EXPECT_EQ(b.leaf, tree.LeafOf(c.values));
      }
    }
    EXPECT_EQ(hits, 1u);
  }
}

TEST(DtgTest, BranchBoxesHoldTheBranchCases) {
  ProjectionSpec spec;
  spec.mode = ProjectionMode::kIlc2Static;
  spec.assignment = AxisAssignment::Zip(4);
  const std::vector<AttributeRange> bounds(4, AttributeRange{0, 10});
  Branch b;
  b.conditions = {{0, Relation::kLe, 2.0, 0},
                  {1, Relation::kGt, 3.0, 1},
                  {2, Relation::kLe, 5.0, 2}};
  b.counts = {4, 0};
  b.dominant = 0;
  b.purity = 1.0;
  const auto seeds = BranchToBoxes(b, spec, bounds);
  ASSERT_EQ(seeds.size(), 2u);
  EXPECT_EQ(seeds[0].pair, 0u);
  EXPECT_EQ(seeds[0].depth, 0u);
  EXPECT_EQ(seeds[1].pair, 1u);
  EXPECT_EQ(seeds[1].depth, 2u);
  Rng rng(3);
  for (int t = 0; t < 2000; ++t) {
    std::vector<double> v(4);
    for (auto& e : v) e = rng.Uniform(0, 10);
    const Polyline2D p = Project(v, spec);
    const bool in_branch = v[0] <= 2 && v[1] > 3 && v[2] <= 5;
    const bool in0 = seeds[0].rect.Contains(p.nodes[0]);
    const bool in1 = seeds[1].rect.Contains(p.nodes[1]);
    if (in_branch) {
      ASSERT_TRUE(in0 && in1);
    }
    if (v[0] > 2.01 || v[1] < 2.99) ASSERT_FALSE(in0);
    if (v[2] > 5.01) ASSERT_FALSE(in1);
  }
}

TEST(DtgTest, RefineMatchesLatticeEnumeration) {
  Rng rng(17);
  for (int t = 0; t < 120; ++t) {
    auto g = testing::RandomGridInstance(rng);
    RefineParams params;
    params.step_x = 0.5;
    params.step_y = 0.5;
    params.radius = 1 + rng.Below(3);
    params.membership = g.grid.membership;
    const double targets[] = {1.0, 0.9, 0.7};
    params.purity_target = targets[rng.Below(3)];
    const int target = static_cast<int>(rng.Below(g.classes));
    const Rect seed{1.0, 2.0, 1.0, 2.0};
    const RefineResult got = RefineBox(seed, target, g.polylines, g.labels,
                                       g.classes, g.remaining, params);
    ASSERT_TRUE(got.exhaustive);
    auto eval = [&](const Rect& r) {
      std::size_t total = 0, hit = 0;
      for (std::size_t i = 0; i < g.polylines.size(); ++i) {
        if (!g.remaining[i] ||
            !testing::OracleMember(g.polylines[i], r, params.membership)) {
          continue;
        }
        ++total;
        if (g.labels[i] == target) ++hit;
      }
      return std::make_pair(total == 0 ? -1.0 : double(hit) / double(total), hit);
    };
    auto [bp, bc] = eval(seed);
    const int rad = static_cast<int>(params.radius);
    for (int a = -rad; a <= rad; ++a)
      for (int b = -rad; b <= rad; ++b)
        for (int c = -rad; c <= rad; ++c)
          for (int d = -rad; d <= rad; ++d) {
            const Rect r{seed.x1 + 0.5 * a, seed.x2 + 0.5 * b,
                         seed.y1 + 0.5 * c, seed.y2 + 0.5 * d};
            if (r.x1 > r.x2 || r.y1 > r.y2) continue;
            const auto [p, cov] = eval(r);
            if (p < 0) continue;
            const double q = std::min(p, params.purity_target);
            const double qb = std::min(bp, params.purity_target);
            if (q > qb || (q == qb && cov > bc)) {
              bp = p;
              bc = cov;
            }
          }
    // An empty neighbourhood reports purity 0.
    EXPECT_EQ(std::min(got.purity, params.purity_target),
              std::min(std::max(bp, 0.0), params.purity_target))
        << t;
    EXPECT_EQ(got.coverage, bc) << t;
    EXPECT_EQ(eval(got.rect).second, got.coverage) << t;
  }
}

TEST(DtgTest, PageBlockHierarchy) {
  const ClassHierarchy h = ClassHierarchy::Pbc();
  h.Validate();
  EXPECT_EQ(h.GroupOf(0, 0), 0);
  EXPECT_EQ(h.GroupOf(0, 3), 1);
  EXPECT_EQ(h.GroupOf(1, 0), -1);
  EXPECT_EQ(h.GroupOf(1, 1), 0);
  EXPECT_EQ(h.GroupOf(2, 3), 0);
  EXPECT_EQ(h.GroupOf(2, 4), 1);
  EXPECT_EQ(h.GroupOf(2, 2), 2);
  auto cls = h.ClassesOf(2);
  std::sort(cls.begin(), cls.end());
  EXPECT_EQ(cls, (std::vector<int>{2, 3, 4}));
  const ClassHierarchy back = ClassHierarchy::FromJson(ToJson(h));
  EXPECT_EQ(ToJson(back), ToJson(h));
  ClassHierarchy bad = h;
  bad.nodes[2].groups.pop_back();
  EXPECT_THROW(bad.Validate(), Error);
}

TEST(DtgTest, DivideAndConquerSeparatesClusters) {
  Rng rng(23);
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  const double centers[3][4] = {{1, 1, 1, 1}, {5, 1, 5, 1}, {1, 5, 1, 5}};
  for (int c = 0; c < 3; ++c) {
    for (int i = 0; i < 40; ++i) {
      std::vector<double> v(4);
      for (int a = 0; a < 4; ++a) v[a] = centers[c][a] + rng.Uniform(-0.8, 0.8);
      rows.push_back(v);
      labels.push_back(c);
    }
  }
  const Dataset d = testing::MakeDataset(rows, labels, 3);
  DcConfig cfg;
  cfg.nodes[0].refine_step = 0.1;
  cfg.nodes[0].tree = {3, 2};
  const HierarchicalModel m = DcFit(d, ClassHierarchy::Flat(3), cfg);
  std::size_t correct = 0, classified = 0;
  for (const auto& c : d.cases) {
    const int p = ClassifyHierarchical(m, c.values).predicted;
    if (p == kRefuse) continue;
    ++classified;
    if (p == c.label) ++correct;
  }
  EXPECT_GE(classified, 114u);
  EXPECT_EQ(correct, classified);
  const HierarchicalModel back = HierarchicalModelFromJson(ToJson(m));
  for (const auto& c : d.cases) {
    ASSERT_EQ(ClassifyHierarchical(back, c.values).predicted,
              ClassifyHierarchical(m, c.values).predicted);
  }
}

}  // namespace
}  // namespace ilcml
