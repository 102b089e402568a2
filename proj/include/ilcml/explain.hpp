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

#ifndef ILCML_EXPLAIN_HPP_
#define ILCML_EXPLAIN_HPP_

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ilcml/box.hpp"
#include "ilcml/dataset.hpp"
#include "ilcml/projection.hpp"
#include "json.hpp"

namespace ilcml {

using Predictor = std::function<int(const std::vector<double>&)>;

Predictor RuleSetPredictor(const RuleSet& ruleset);

struct ExplainRequest {
  std::vector<double> point;
  Predictor predictor;
  double purity = 1.0;
  double resolution = 2.0;
  double decrement = 0.25;
  // Smallest resolution tried; 0 uses the smallest attribute quantum.
  double floor = 0.0;
  // Candidate boxes are unions of up to max_span x max_span cells.
  std::size_t max_span = 2;
  std::size_t max_boxes = 10;
  // Minimum training cases in a qualifying box.
  std::size_t min_support = 1;

  void Validate() const;
};

// Predictor is left empty.
ExplainRequest ExplainRequestFromJson(const nlohmann::json& j);

struct Sandwich {
  std::vector<double> low;
  std::vector<double> high;
  // Training case indices for real sandwiches.
  std::optional<std::size_t> low_case;
  std::optional<std::size_t> high_case;
};

struct ExplainedBox {
  Rect rect;
  BoxStats stats;
  std::optional<Sandwich> training;
  Sandwich artificial;
};

enum class Verdict { kExplained, kNoBoxFound };

struct Explanation {
  Verdict verdict = Verdict::kNoBoxFound;
  std::vector<double> point;
  int predicted = kRefuse;
  double resolution = 0.0;
  std::vector<double> resolutions_tried;
  Membership membership = Membership::kEdgeCross;
  Membership classifier_membership = Membership::kNodeIn;
  // Purity desc, then area asc.
  std::vector<ExplainedBox> boxes;
};

Explanation ExplainLocal(const ExplainRequest& request, const Dataset& train,
                         const ProjectionSpec& spec);

// d <= c <= e componentwise with d and e members of the box.
Sandwich ArtificialSandwich(const std::vector<double>& point, const Rect& box,
                            const ProjectionSpec& spec,
                            const std::vector<AttributeMeta>& attributes);

struct ChainCondition {
  // "x" or "y" in projection space.
  char axis = 'x';
  enum class Op { kLe, kGe, kEq } op = Op::kLe;
  double value = 0.0;
};

struct TreeChain {
  std::size_t box = 0;
  std::vector<ChainCondition> conditions;
  // Original attributes behind the plot axes for each pair whose node can
  // reach the box: (pair, horizontal attribute, vertical attribute, offset).
  std::vector<std::tuple<std::size_t, std::size_t, std::size_t, double>>
      pairs;
  std::string text;
};

// One single-branch chain per positive box of a static-mode rule.
std::vector<TreeChain> BoxesToTreeForm(const RuleSet& ruleset,
                                       const Rule& rule);
bool ChainHolds(const TreeChain& chain, const Polyline2D& polyline);

nlohmann::json ToJson(const Explanation& e, const ProjectionSpec& spec);
nlohmann::json ToJson(const TreeChain& c);

std::string ExplanationSvg(const Explanation& e,
                           const std::vector<Polyline2D>& training,
                           const std::vector<int>& labels,
                           const ProjectionSpec& spec);

}  // namespace ilcml

#endif  // ILCML_EXPLAIN_HPP_
