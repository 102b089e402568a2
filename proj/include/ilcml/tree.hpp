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

#ifndef ILCML_TREE_HPP_
#define ILCML_TREE_HPP_

#include <cstddef>
#include <vector>

#include "ilcml/dataset.hpp"
#include "json.hpp"

namespace ilcml {

struct TreeConfig {
  std::size_t max_depth = 8;
  std::size_t min_leaf_cases = 5;

  // Shallow preset used for the reference tree in baseline reports.
  static TreeConfig Baseline() { return {3, 5}; }
};

struct TreeNode {
  // -1 at a leaf.
  int attribute = -1;
  // Cases with value <= threshold go left.
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  std::vector<std::size_t> counts;
  std::size_t depth = 0;
  bool leaf() const { return attribute < 0; }
};

struct DecisionTree {
  std::vector<TreeNode> nodes;
  TreeConfig config;
  std::size_t class_count = 0;

  std::size_t LeafOf(const std::vector<double>& values) const;
  // Majority class of the leaf, smaller index on ties.
  int Predict(const std::vector<double>& values) const;
  std::size_t leaf_count() const;
};

// Binary numeric splits by information gain at midpoints between adjacent
// distinct values. Deterministic for a fixed input order.
DecisionTree InduceTree(const std::vector<std::vector<double>>& x,
                        const std::vector<int>& y, std::size_t class_count,
                        const TreeConfig& config);
DecisionTree InduceTree(const Dataset& train, const TreeConfig& config);

enum class Relation { kLe, kGt };

struct Condition {
  std::size_t attribute = 0;
  Relation relation = Relation::kLe;
  double threshold = 0.0;
  // Depth of the tree node that tests it (root = 0).
  std::size_t depth = 0;
};

struct Branch {
  std::vector<Condition> conditions;
  std::vector<std::size_t> counts;
  double purity = 0.0;
  int dominant = -1;
  std::size_t leaf = 0;
  std::size_t covered() const {
    return dominant < 0 ? 0 : counts[dominant];
  }
};

std::vector<Branch> AllBranches(const DecisionTree& tree);
// Leaves with purity >= purity_min, by covered cases descending.
std::vector<Branch> SelectBranches(const DecisionTree& tree, double purity_min);

nlohmann::json ToJson(const DecisionTree& tree);
DecisionTree DecisionTreeFromJson(const nlohmann::json& j);
nlohmann::json ToJson(const Branch& branch);

}  // namespace ilcml

#endif  // ILCML_TREE_HPP_
