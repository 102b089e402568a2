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

#ifndef ILCML_REPRODUCE_HPP_
#define ILCML_REPRODUCE_HPP_

#include <string>
#include <vector>

#include "ilcml/box.hpp"
#include "ilcml/dataset.hpp"
#include "ilcml/projection.hpp"
#include "json.hpp"

namespace ilcml {

struct ReproCheck {
  std::string name;
  double expected = 0.0;
  double actual = 0.0;
  double tolerance = 0.0;
  // true: actual >= expected - tolerance is enough.
  bool at_least = false;
  bool pass = false;
};

struct ReproReport {
  std::string target;
  std::vector<ReproCheck> checks;
  nlohmann::json details;
  bool pass() const;
};

std::vector<std::string> ReproductionTargets();

// wbc-table2, wbc-table4, pbc-table12, pbc-table14.
ReproReport Reproduce(const std::string& target, const std::string& data_dir);

ReproCheck MakeCheck(std::string name, double expected, double actual,
                     double tolerance, bool at_least = false);

// Static link layout over the nine WBC attributes, axis spacing 10.
ProjectionSpec WbcLinkProjection();
// Reference WBC boxes B1..B13, corners as listed.
std::vector<Rect> WbcReferenceBoxes();
// Rules from injecting the first `count` reference boxes in order.
RuleSet WbcReferenceRules(const Dataset& wbc, std::size_t count = 7);

std::string RenderRepro(const ReproReport& report);
nlohmann::json ToJson(const ReproReport& report);

}  // namespace ilcml

#endif  // ILCML_REPRODUCE_HPP_
