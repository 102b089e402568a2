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

#ifndef ILCML_PROJECTION_HPP_
#define ILCML_PROJECTION_HPP_

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "ilcml/common.hpp"
#include "ilcml/dataset.hpp"
#include "json.hpp"

namespace ilcml {

enum class ProjectionMode {
  kStaticSequential,
  kStaticCollocated,
  kStaticGeneric,
  kIlc2Static,
  kIlc2PartialDynamic,
  kIlc2FullyDynamic,
  kIlc2WeightedDynamic,
};

std::string ModeName(ProjectionMode mode);
ProjectionMode ParseMode(const std::string& name);
bool IsStatic(ProjectionMode mode);

// One node of an ILC2 polyline: horizontal and vertical attribute indices in
// the extended index space (originals followed by duplicates).
struct AxisPair {
  std::size_t horizontal = 0;
  std::size_t vertical = 0;
  bool operator==(const AxisPair&) const = default;
};

struct AxisAssignment {
  std::size_t dimension = 0;
  // duplicates[i] is the source attribute of extended index dimension + i.
  std::vector<std::size_t> duplicates;
  std::vector<AxisPair> pairing;

  std::size_t extended_dimension() const {
    return dimension + duplicates.size();
  }
  std::size_t Source(std::size_t extended) const;
  // Horizontal attributes in order of first use, without repeats.
  std::vector<std::size_t> horizontal() const;
  std::vector<std::size_t> vertical() const;
  // Distinct horizontal coordinate of each pair; consecutive pairs sharing a
  // horizontal attribute share a coordinate.
  std::vector<std::size_t> CoordinateIndex() const;
  std::size_t coordinate_count() const;
  void Validate() const;

  // (x1,x2)(x3,x4)...; an odd dimension duplicates the last attribute.
  static AxisAssignment Zip(std::size_t n);
  // Link layout: horizontals x1,x4,x7,... each carrying the vertical before
  // and after it; for n = 9 this is x1,x4,x7,x10 with x10 a copy of x9.
  static AxisAssignment Links(std::size_t n);
  // Arbitrary pairs over original attributes; an attribute used in more than
  // one non-adjacent pair or in both roles gets a duplicate.
  static AxisAssignment FromPairs(std::size_t n,
                                  const std::vector<AxisPair>& pairs);
};

struct ProjectionSpec {
  ProjectionMode mode = ProjectionMode::kIlc2Static;
  AxisAssignment assignment;
  // One per original attribute, weighted mode only.
  std::vector<double> weights;
  // Baseline per horizontal coordinate, generic mode only.
  std::vector<double> coordinate_offsets;
  // Distance between consecutive coordinates in sequential modes.
  double axis_spacing = 10.0;

  void Validate() const;
  double CoordinateOffset(std::size_t coordinate) const;
  double Weight(std::size_t extended) const;
};

struct Polyline2D {
  std::vector<Point2> nodes;
  std::size_t case_index = std::numeric_limits<std::size_t>::max();
  std::vector<AxisPair> provenance;
};

Polyline2D Project(const std::vector<double>& values,
                   const ProjectionSpec& spec);
std::vector<double> Invert(const Polyline2D& polyline,
                           const ProjectionSpec& spec);

enum class Mirror { kNone, kByClass };

struct RenderedPolyline {
  Polyline2D polyline;
  int label = 0;
  // Render below the baseline; stored coordinates are unchanged.
  bool mirrored = false;
};

std::vector<RenderedPolyline> ProjectAll(const Dataset& dataset,
                                         const ProjectionSpec& spec,
                                         Mirror mirror = Mirror::kNone);
std::vector<Polyline2D> ProjectCases(const Dataset& dataset,
                                     const ProjectionSpec& spec);

nlohmann::json ToJson(const ProjectionSpec& spec);
ProjectionSpec ProjectionSpecFromJson(const nlohmann::json& j);
nlohmann::json ToJson(const Polyline2D& p);

}  // namespace ilcml

#endif  // ILCML_PROJECTION_HPP_
