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

#ifndef ILCML_DTG_HPP_
#define ILCML_DTG_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ilcml/box.hpp"
#include "ilcml/dataset.hpp"
#include "ilcml/projection.hpp"
#include "ilcml/tree.hpp"
#include "json.hpp"

namespace ilcml {

struct AttributeRange {
  double lo = 0.0;
  double hi = 0.0;
};

std::vector<AttributeRange> ObservedBounds(const Dataset& dataset);

struct SeedBox {
  Rect rect;
  // Pair (node index of the polyline) the box lives on.
  std::size_t pair = 0;
  // Smallest tree depth among the conditions placed on this pair.
  std::size_t depth = 0;
  int target = -1;
};

// Conditions go to the first pair holding their attribute; each pair that
// receives one becomes a box built from the branch's intervals on both of
// its attributes, clamped to `bounds`. Dynamic modes give the smallest box
// holding every node the branch allows. Ordered root-nearest first. A branch
// without conditions gives the full box of the first pair.
std::vector<SeedBox> BranchToBoxes(const Branch& branch,
                                   const ProjectionSpec& spec,
                                   const std::vector<AttributeRange>& bounds);

struct RefineParams {
  double step_x = 0.0;
  double step_y = 0.0;
  std::size_t radius = 5;
  Membership membership = Membership::kNodeIn;
  // Purity above this value does not rank higher, so coverage decides among
  // boxes that reach it. 1.0 gives the plain (purity, coverage) order.
  double purity_target = 1.0;
  // Lattice evaluations allowed before switching to hill-climbing.
  std::size_t budget = 4'000'000;
};

struct RefineResult {
  Rect rect;
  BoxStats stats;
  // Share of members in the target class and their count.
  double purity = 0.0;
  std::size_t coverage = 0;
  bool exhaustive = false;
};

// Local search over per-side moves of k*step, |k| <= radius, for the target
// class. Exhaustive over the lattice when it fits the budget.
RefineResult RefineBox(const Rect& seed, int target,
                       const std::vector<Polyline2D>& polylines,
                       const std::vector<int>& labels, std::size_t class_count,
                       const std::vector<char>& subset,
                       const RefineParams& params);

// Ranking used by RefineBox; true when (pa, ca, ra) ranks strictly first.
bool RefineRanksBefore(double pa, std::size_t ca, const Rect& ra, double pb,
                       std::size_t cb, const Rect& rb, double purity_target);

struct HierarchyNode {
  // Each group is a set of class ids; groups partition the node's classes.
  std::vector<std::vector<int>> groups;
  // Child node per group, -1 for a single-class group.
  std::vector<int> children;
};

struct ClassHierarchy {
  std::vector<HierarchyNode> nodes;
  std::size_t class_count = 0;

  void Validate() const;
  std::vector<int> ClassesOf(std::size_t node) const;
  // Group of `cls` at `node`, -1 when the class does not reach the node.
  int GroupOf(std::size_t node, int cls) const;

  static ClassHierarchy Flat(std::size_t class_count);
  // {1 | 2345}, {2 | 345}, {4, 5, 3} over 0-based class ids.
  static ClassHierarchy Pbc();
  static ClassHierarchy FromJson(const nlohmann::json& j);
};

nlohmann::json ToJson(const ClassHierarchy& h);

struct DcNodeConfig {
  TreeConfig tree;
  // Leaves at least this pure seed boxes.
  double branch_purity = 0.9;
  // Rules are emitted only for boxes at least this pure on remaining cases.
  double rule_purity = 0.97;
  // Minimum target cases a rule must fire on, absolute and as a share of
  // the node's remaining cases.
  std::size_t min_cases = 3;
  double coverage_fraction = 0.0;
  std::size_t max_rules = 200;
  // Refinement step in normalized units; 0 uses each attribute's quantum.
  double refine_step = 0.0;
  std::size_t refine_radius = 5;
  Membership membership = Membership::kNodeIn;
  // Rebuild the guiding tree on the remaining cases after each rule.
  bool regrow_tree = true;
};

struct DcConfig {
  // One per hierarchy node; a single entry applies to every node.
  std::vector<DcNodeConfig> nodes{DcNodeConfig{}};
  const DcNodeConfig& For(std::size_t node) const;
};

nlohmann::json ToJson(const DcNodeConfig& c);
DcNodeConfig DcNodeConfigFromJson(const nlohmann::json& j);

struct GuideSummary {
  DecisionTree tree;
  std::vector<Branch> branches;
  std::vector<SeedBox> seeds;
};

struct HierarchicalModel {
  ClassHierarchy hierarchy;
  // Rule set per hierarchy node; rule classes are group indices there.
  std::vector<RuleSet> node_rules;
  std::vector<std::string> class_names;
  // Initial guiding tree of each node, for audit.
  std::vector<GuideSummary> guides;
  // Training case counts per node and group.
  std::vector<std::vector<std::size_t>> node_sizes;
};

struct HierarchicalDecision {
  int predicted = kRefuse;
  // (node, rule index) of every rule that fired along the path.
  std::vector<std::pair<std::size_t, int>> path;
};

HierarchicalDecision ClassifyHierarchical(const HierarchicalModel& model,
                                          const std::vector<double>& values);

HierarchicalModel DcFit(const Dataset& train, const ClassHierarchy& hierarchy,
                        const DcConfig& config);

// Static sequential pairing of attributes ordered by first use in the tree
// (breadth first), unused attributes last.
ProjectionSpec GuidedProjection(const DecisionTree& tree,
                                const std::vector<AttributeRange>& bounds);

nlohmann::json ToJson(const HierarchicalModel& model);
HierarchicalModel HierarchicalModelFromJson(const nlohmann::json& j);
std::string RenderHierarchical(const HierarchicalModel& model);

}  // namespace ilcml

#endif  // ILCML_DTG_HPP_
