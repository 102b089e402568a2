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

#ifndef ILCML_LINEAR_HPP_
#define ILCML_LINEAR_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ilcml/common.hpp"
#include "ilcml/dataset.hpp"
#include "ilcml/projection.hpp"
#include "json.hpp"

namespace ilcml {

struct ProjectionLine {
  Point2 p0;
  Point2 p1;
  // Polyline node to project; -1 is the last node.
  int node = -1;
};

enum class LinearForm { kOneSided, kTwoSided, kConjunction };

std::string LinearFormName(LinearForm f);
LinearForm ParseLinearForm(const std::string& name);

struct LinearTerm {
  ProjectionLine line;
  double threshold = 0.0;
};

struct LinearModel {
  LinearForm form = LinearForm::kOneSided;
  // One term, two for the conjunction form.
  std::vector<LinearTerm> terms;
  int positive_class = 0;
  int negative_class = 1;
};

// Position of the orthogonal projection of the selected node on the line,
// scaled so that p0 maps to 0 and p1 to 1.
double Score(const std::vector<double>& values, const ProjectionSpec& spec,
             const ProjectionLine& line);
double ScorePoint(Point2 node, const ProjectionLine& line);

int ClassifyLinear(const LinearModel& model, const std::vector<double>& values,
                   const ProjectionSpec& spec);

struct LinearSearch {
  std::size_t angles = 36;
  std::size_t offsets = 20;
  // One-sided forms: the threshold maximizes precision among thresholds
  // reaching this recall.
  double min_recall = 0.5;
  std::size_t refine_rounds = 12;
  // Nodes used by the conjunction terms; -1 is the last node.
  int first_node = -1;
  int second_node = -1;
};

struct LinearFit {
  LinearModel model;
  double precision = 0.0;
  double recall = 0.0;
  double accuracy = 0.0;
  std::size_t predicted_positive = 0;
};

// Thrown when no line reaches the recall floor; carries the best model.
class LinearFitError : public Error {
 public:
  LinearFitError(const std::string& message, LinearFit best)
      : Error(ErrorCode::kFailedPrecondition, message), best_(std::move(best)) {}
  const LinearFit& best() const { return best_; }

 private:
  LinearFit best_;
};

// Uses only cases of the two designated classes.
LinearFit FitLinear(const Dataset& data, const ProjectionSpec& spec,
                    LinearForm form, int positive_class, int negative_class,
                    const LinearSearch& search = {});

// Precision, recall and accuracy of a model recounted over the two classes.
LinearFit MeasureLinear(const LinearModel& model, const Dataset& data,
                        const ProjectionSpec& spec);

nlohmann::json ToJson(const LinearModel& m);
LinearModel LinearModelFromJson(const nlohmann::json& j);
nlohmann::json ToJson(const LinearSearch& s);

}  // namespace ilcml

#endif  // ILCML_LINEAR_HPP_
