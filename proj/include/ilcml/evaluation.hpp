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

#ifndef ILCML_EVALUATION_HPP_
#define ILCML_EVALUATION_HPP_

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ilcml/box.hpp"
#include "ilcml/dataset.hpp"
#include "ilcml/dtg.hpp"
#include "ilcml/tree.hpp"
#include "json.hpp"

namespace ilcml {

enum class SplitRole { kTrain, kValidation, kTest };

std::string SplitRoleName(SplitRole role);

struct RuleOutcome {
  std::size_t node = 0;
  // Top-level rule index within the node, or the predicted class for
  // models without rules.
  int rule = -1;
  int else_depth = 0;
  std::string name;
  // Original class id; kRefuse for intermediate and refusing rules.
  int predicted_class = kRefuse;
  // Intermediate and refusing rules are excluded from weighted precision.
  bool terminal = true;
  std::size_t classified = 0;
  std::size_t correct = 0;
  // -1 when nothing was classified.
  double precision = -1.0;
  // correct / class total in the split; -1 without a class.
  double recall = -1.0;
  SplitRole split = SplitRole::kTrain;
};

struct ClassOutcome {
  int cls = 0;
  std::string name;
  std::size_t total = 0;
  std::size_t classified = 0;
  std::size_t correct = 0;
  double precision = 0.0;
  double weight = 0.0;
};

struct SplitReport {
  SplitRole split = SplitRole::kTrain;
  std::vector<RuleOutcome> rules;
  std::vector<ClassOutcome> classes;
  std::size_t cases = 0;
  std::size_t classified = 0;
  std::size_t refused = 0;
  // -1 when no terminal rule classified anything.
  double weighted_precision = -1.0;
};

struct EvaluationReport {
  std::vector<SplitReport> splits;
  int fold = -1;
  nlohmann::json config;
  // Comparison rows copied verbatim, never recomputed.
  std::vector<std::pair<std::string, double>> reference_rows;

  const SplitReport* Find(SplitRole role) const;
};

std::vector<RuleOutcome> RuleMetrics(const RuleSet& ruleset,
                                     const Dataset& data, SplitRole split);
std::vector<RuleOutcome> RuleMetrics(const HierarchicalModel& model,
                                     const Dataset& data, SplitRole split);

using OutcomeFilter = std::function<bool(const RuleOutcome&)>;

// P = sum(p_i c_i) / sum(c_i) over the included outcomes (terminal rules by
// default). Throws when every included c_i is zero.
double WeightedPrecision(const std::vector<RuleOutcome>& outcomes,
                         const OutcomeFilter& include = {});

enum class PipelineKind { kDtgBc, kBc, kTree, kMajority };

std::string PipelineKindName(PipelineKind kind);
PipelineKind ParsePipelineKind(const std::string& name);

struct PipelineConfig {
  PipelineKind kind = PipelineKind::kDtgBc;
  // DTG-BC. Empty hierarchy means one flat node.
  std::optional<ClassHierarchy> hierarchy;
  DcConfig dc;
  // Plain BC.
  ProjectionSpec projection;
  GridParams grid;
  StopConfig stop;
  std::optional<std::size_t> prune_min_cases;
  PruneMode prune_mode = PruneMode::kRefuse;
  bool join = false;
  // Tree baseline.
  TreeConfig tree;

  // Divide and conquer over the page-block classes with tuned node settings.
  static PipelineConfig PbcDtgBc();
};

nlohmann::json ToJson(const PipelineConfig& config);
PipelineConfig PipelineConfigFromJson(const nlohmann::json& j);

struct FittedModel {
  PipelineKind kind = PipelineKind::kMajority;
  HierarchicalModel hierarchical;
  RuleSet rules;
  DecisionTree tree;
  int majority = 0;
  std::vector<std::string> class_names;
};

FittedModel FitPipeline(const Dataset& train, const PipelineConfig& config);
SplitReport EvaluateModel(const FittedModel& model, const Dataset& data,
                          SplitRole split);
// Predicted class or kRefuse.
int PredictModel(const FittedModel& model, const std::vector<double>& values);

struct CvReport {
  std::vector<EvaluationReport> folds;
  double average_test_precision = 0.0;
  // Folds in which each class got at least one correct test prediction.
  std::vector<std::size_t> class_hit_folds;
  nlohmann::json config;
};

// Fits on each fold's training part only; validation and test parts are
// scored with the fitted model.
CvReport CrossValidate(const Dataset& dataset, const PipelineConfig& config,
                       const SplitPlan& plan);

EvaluationReport BaselineTreeReport(const Dataset& dataset,
                                    const SplitPlan& plan,
                                    const TreeConfig& config);

constexpr const char* kModelFormat = "ilcml.model/1";

nlohmann::json ToJson(const FittedModel& m);
FittedModel FittedModelFromJson(const nlohmann::json& j);

nlohmann::json ToJson(const RuleOutcome& o);
nlohmann::json ToJson(const SplitReport& r);
nlohmann::json ToJson(const EvaluationReport& r);
nlohmann::json ToJson(const CvReport& r);

// Aligned text tables with two-decimal percentages.
std::string RenderRuleTable(const EvaluationReport& report);
std::string RenderClassTable(const EvaluationReport& report);
std::string RenderCvTable(const CvReport& report);

std::string Percent(double fraction);

}  // namespace ilcml

#endif  // ILCML_EVALUATION_HPP_
