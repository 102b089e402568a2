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

#include "ilcml/projection.hpp"

#include <algorithm>
#include <map>

namespace ilcml {
namespace {

struct ModeEntry {
  ProjectionMode mode;
  const char* name;
};

constexpr ModeEntry kModes[] = {
    {ProjectionMode::kStaticSequential, "static_sequential"},
    {ProjectionMode::kStaticCollocated, "static_collocated"},
    {ProjectionMode::kStaticGeneric, "static_generic"},
    {ProjectionMode::kIlc2Static, "ilc2_static"},
    {ProjectionMode::kIlc2PartialDynamic, "ilc2_partial_dynamic"},
    {ProjectionMode::kIlc2FullyDynamic, "ilc2_fully_dynamic"},
    {ProjectionMode::kIlc2WeightedDynamic, "ilc2_weighted_dynamic"},
};

enum class Role { kNone, kHorizontal, kVertical };

}  // namespace

std::string ModeName(ProjectionMode mode) {
  for (const auto& e : kModes) {
    if (e.mode == mode) return e.name;
  }
  return "unknown";
}

ProjectionMode ParseMode(const std::string& name) {
  std::string n = name;
  std::replace(n.begin(), n.end(), '-', '_');
  for (const auto& e : kModes) {
    if (n == e.name) return e.mode;
  }
  throw InvalidArgument("unknown projection mode '" + name + "'");
}

bool IsStatic(ProjectionMode mode) {
  return mode == ProjectionMode::kStaticSequential ||
         mode == ProjectionMode::kStaticCollocated ||
         mode == ProjectionMode::kStaticGeneric ||
         mode == ProjectionMode::kIlc2Static;
}

std::size_t AxisAssignment::Source(std::size_t extended) const {
  if (extended < dimension) return extended;
  const std::size_t i = extended - dimension;
  if (i >= duplicates.size()) {
    throw InvalidArgument("extended index " + std::to_string(extended) +
                          " out of range");
  }
  return duplicates[i];
}

std::vector<std::size_t> AxisAssignment::horizontal() const {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < pairing.size(); ++k) {
    if (k == 0 || pairing[k].horizontal != pairing[k - 1].horizontal) {
      out.push_back(pairing[k].horizontal);
    }
  }
  return out;
}

std::vector<std::size_t> AxisAssignment::vertical() const {
  std::vector<std::size_t> out;
  for (const auto& p : pairing) out.push_back(p.vertical);
  return out;
}

std::vector<std::size_t> AxisAssignment::CoordinateIndex() const {
  std::vector<std::size_t> out(pairing.size());
  std::size_t r = 0;
  for (std::size_t k = 0; k < pairing.size(); ++k) {
    if (k > 0 && pairing[k].horizontal != pairing[k - 1].horizontal) ++r;
    out[k] = r;
  }
  return out;
}

std::size_t AxisAssignment::coordinate_count() const {
  return pairing.empty() ? 0 : CoordinateIndex().back() + 1;
}

void AxisAssignment::Validate() const {
  if (pairing.empty()) throw InvalidArgument("assignment has no pairs");
  const std::size_t ext = extended_dimension();
  for (std::size_t d : duplicates) {
    if (d >= dimension) throw InvalidArgument("duplicate of unknown attribute");
  }
  std::vector<Role> role(ext, Role::kNone);
  for (std::size_t k = 0; k < pairing.size(); ++k) {
    const auto& p = pairing[k];
    if (p.horizontal >= ext || p.vertical >= ext) {
      throw InvalidArgument("pair references unknown attribute index");
    }
    if (p.horizontal == p.vertical) {
      throw InvalidArgument("pair uses one attribute in both roles");
    }
    if (role[p.horizontal] == Role::kVertical ||
        role[p.vertical] != Role::kNone) {
      throw InvalidArgument("attribute index used in more than one role");
    }
    if (role[p.horizontal] == Role::kHorizontal &&
        !(k > 0 && pairing[k - 1].horizontal == p.horizontal)) {
      throw InvalidArgument(
          "horizontal attribute repeats only in consecutive pairs");
    }
    role[p.horizontal] = Role::kHorizontal;
    role[p.vertical] = Role::kVertical;
  }
  std::vector<bool> covered(dimension, false);
  for (std::size_t e = 0; e < ext; ++e) {
    if (role[e] != Role::kNone) covered[Source(e)] = true;
  }
  for (std::size_t a = 0; a < dimension; ++a) {
    if (!covered[a]) {
      throw InvalidArgument("attribute " + std::to_string(a) +
                            " is not encoded; projection would be lossy");
    }
  }
}

AxisAssignment AxisAssignment::Zip(std::size_t n) {
  AxisAssignment a;
  a.dimension = n;
  if (n == 0) return a;
  if (n % 2 == 1) a.duplicates.push_back(n - 1);
  for (std::size_t k = 0; k + 1 < a.extended_dimension(); k += 2) {
    a.pairing.push_back({k, k + 1});
  }
  if (n == 1) a.pairing.push_back({0, 1});
  return a;
}

AxisAssignment AxisAssignment::Links(std::size_t n) {
  AxisAssignment a;
  a.dimension = n;
  if (n < 2) return Zip(n);
  a.pairing.push_back({0, 1});
  for (std::size_t j = 1; 3 * j - 1 < n; ++j) {
    std::size_t h = 3 * j;
    if (h >= n) {
      a.duplicates.push_back(n - 1);
      h = n;
    }
    a.pairing.push_back({h, 3 * j - 1});
    if (3 * j + 1 < n) a.pairing.push_back({h, 3 * j + 1});
  }
  return a;
}

AxisAssignment AxisAssignment::FromPairs(std::size_t n,
                                         const std::vector<AxisPair>& pairs) {
  AxisAssignment a;
  a.dimension = n;
  std::vector<Role> role(n, Role::kNone);
  std::vector<bool> used(n, false);
  auto fresh = [&](std::size_t attr) {
    a.duplicates.push_back(attr);
    return n + a.duplicates.size() - 1;
  };
  auto place = [&](const AxisPair& p) {
    if (p.horizontal >= n || p.vertical >= n || p.horizontal == p.vertical) {
      throw InvalidArgument("invalid attribute pair");
    }
    std::size_t h = p.horizontal;
    if (!a.pairing.empty() && a.Source(a.pairing.back().horizontal) == h &&
        role[h] == Role::kHorizontal) {
      h = a.pairing.back().horizontal;
    } else if (role[h] != Role::kNone) {
      h = fresh(h);
    } else {
      role[h] = Role::kHorizontal;
    }
    std::size_t v = p.vertical;
    if (role[v] != Role::kNone) {
      v = fresh(v);
    } else {
      role[v] = Role::kVertical;
    }
    used[p.horizontal] = used[p.vertical] = true;
    a.pairing.push_back({h, v});
  };
  for (const auto& p : pairs) place(p);
  std::vector<std::size_t> rest;
  for (std::size_t i = 0; i < n; ++i) {
    if (!used[i]) rest.push_back(i);
  }
  for (std::size_t k = 0; k + 1 < rest.size(); k += 2) {
    place({rest[k], rest[k + 1]});
  }
  if (rest.size() % 2 == 1) {
    const std::size_t last = rest.back();
    const std::size_t partner = last == 0 ? (n > 1 ? 1 : 0) : 0;
    if (partner == last) {
      a.duplicates.push_back(last);
      a.pairing.push_back({last, n + a.duplicates.size() - 1});
    } else {
      place({last, partner});
    }
  }
  a.Validate();
  return a;
}

void ProjectionSpec::Validate() const {
  assignment.Validate();
  if (mode == ProjectionMode::kIlc2WeightedDynamic &&
      weights.size() != assignment.dimension) {
    throw InvalidArgument("weighted mode needs one weight per attribute");
  }
  if (mode == ProjectionMode::kStaticGeneric) {
    if (coordinate_offsets.size() < assignment.coordinate_count()) {
      throw InvalidArgument("generic mode needs one offset per coordinate");
    }
  }
  if ((mode == ProjectionMode::kStaticSequential ||
       mode == ProjectionMode::kIlc2Static) &&
      axis_spacing < 0) {
    throw InvalidArgument("sequential offsets must be non-decreasing");
  }
}

double ProjectionSpec::CoordinateOffset(std::size_t coordinate) const {
  switch (mode) {
    case ProjectionMode::kStaticSequential:
    case ProjectionMode::kIlc2Static:
      return axis_spacing * static_cast<double>(coordinate);
    case ProjectionMode::kStaticGeneric:
      return coordinate_offsets.at(coordinate);
    default:
      return 0.0;
  }
}

double ProjectionSpec::Weight(std::size_t extended) const {
  if (mode != ProjectionMode::kIlc2WeightedDynamic) return 1.0;
  return weights.at(assignment.Source(extended));
}

Polyline2D Project(const std::vector<double>& values,
                   const ProjectionSpec& spec) {
  const auto& as = spec.assignment;
  if (values.size() != as.dimension) {
    throw InvalidArgument("case has " + std::to_string(values.size()) +
                          " values, projection expects " +
                          std::to_string(as.dimension));
  }
  if (spec.mode == ProjectionMode::kIlc2WeightedDynamic &&
      spec.weights.size() != as.dimension) {
    throw InvalidArgument("weighted mode needs one weight per attribute");
  }
  auto value = [&](std::size_t e) { return values[as.Source(e)]; };
  Polyline2D out;
  out.provenance = as.pairing;
  out.nodes.reserve(as.pairing.size());
  if (IsStatic(spec.mode)) {
    const auto coord = as.CoordinateIndex();
    for (std::size_t k = 0; k < as.pairing.size(); ++k) {
      const auto& p = as.pairing[k];
      out.nodes.push_back({spec.CoordinateOffset(coord[k]) + value(p.horizontal),
                           value(p.vertical)});
    }
    return out;
  }
  const bool sum_y = spec.mode != ProjectionMode::kIlc2PartialDynamic;
  double x = 0.0, y = 0.0;
  for (std::size_t k = 0; k < as.pairing.size(); ++k) {
    const auto& p = as.pairing[k];
    if (k == 0 || p.horizontal != as.pairing[k - 1].horizontal) {
      x += spec.Weight(p.horizontal) * value(p.horizontal);
    }
    const double vy = spec.Weight(p.vertical) * value(p.vertical);
    y = sum_y ? y + vy : value(p.vertical);
    out.nodes.push_back({x, y});
  }
  return out;
}

std::vector<double> Invert(const Polyline2D& polyline,
                           const ProjectionSpec& spec) {
  const auto& as = spec.assignment;
  if (polyline.nodes.size() != as.pairing.size()) {
    throw InvalidArgument("polyline node count does not match the pairing");
  }
  if (spec.mode == ProjectionMode::kIlc2WeightedDynamic) {
    if (spec.weights.size() != as.dimension) {
      throw InvalidArgument("weighted mode needs one weight per attribute");
    }
    for (double w : spec.weights) {
      if (w == 0.0) {
        throw InvalidArgument("zero weight makes the projection non-invertible");
      }
    }
  }
  std::vector<double> ext(as.extended_dimension(), 0.0);
  std::vector<bool> known(as.extended_dimension(), false);
  const auto& n = polyline.nodes;
  if (IsStatic(spec.mode)) {
    const auto coord = as.CoordinateIndex();
    for (std::size_t k = 0; k < n.size(); ++k) {
      const auto& p = as.pairing[k];
      ext[p.horizontal] = n[k].x - spec.CoordinateOffset(coord[k]);
      ext[p.vertical] = n[k].y;
      known[p.horizontal] = known[p.vertical] = true;
    }
  } else {
    const bool sum_y = spec.mode != ProjectionMode::kIlc2PartialDynamic;
    for (std::size_t k = 0; k < n.size(); ++k) {
      const auto& p = as.pairing[k];
      const double px = k == 0 ? 0.0 : n[k - 1].x;
      const double py = k == 0 ? 0.0 : n[k - 1].y;
      if (k == 0 || p.horizontal != as.pairing[k - 1].horizontal) {
        ext[p.horizontal] = (n[k].x - px) / spec.Weight(p.horizontal);
        known[p.horizontal] = true;
      }
      ext[p.vertical] =
          sum_y ? (n[k].y - py) / spec.Weight(p.vertical) : n[k].y;
      known[p.vertical] = true;
    }
  }
  std::vector<double> out(as.dimension, 0.0);
  std::vector<bool> filled(as.dimension, false);
  for (std::size_t e = 0; e < ext.size(); ++e) {
    const std::size_t a = as.Source(e);
    if (known[e] && (!filled[a] || e < as.dimension)) {
      out[a] = ext[e];
      filled[a] = true;
    }
  }
  return out;
}

std::vector<RenderedPolyline> ProjectAll(const Dataset& dataset,
                                         const ProjectionSpec& spec,
                                         Mirror mirror) {
  if (mirror == Mirror::kByClass && dataset.class_count() != 2) {
    throw InvalidArgument("mirroring by class needs exactly two classes");
  }
  std::vector<RenderedPolyline> out;
  out.reserve(dataset.size());
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    RenderedPolyline r;
    r.polyline = Project(dataset.cases[i].values, spec);
    r.polyline.case_index = i;
    r.label = dataset.cases[i].label;
    r.mirrored = mirror == Mirror::kByClass && r.label == 1;
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<Polyline2D> ProjectCases(const Dataset& dataset,
                                     const ProjectionSpec& spec) {
  std::vector<Polyline2D> out;
  out.reserve(dataset.size());
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    out.push_back(Project(dataset.cases[i].values, spec));
    out.back().case_index = i;
  }
  return out;
}

nlohmann::json ToJson(const ProjectionSpec& spec) {
  nlohmann::json pairs = nlohmann::json::array();
  for (const auto& p : spec.assignment.pairing) {
    pairs.push_back({p.horizontal, p.vertical});
  }
  return {{"mode", ModeName(spec.mode)},
          {"dimension", spec.assignment.dimension},
          {"duplicates", spec.assignment.duplicates},
          {"pairing", pairs},
          {"weights", spec.weights},
          {"coordinate_offsets", spec.coordinate_offsets},
          {"axis_spacing", spec.axis_spacing}};
}

ProjectionSpec ProjectionSpecFromJson(const nlohmann::json& j) {
  ProjectionSpec s;
  s.mode = ParseMode(j.at("mode"));
  s.assignment.dimension = j.at("dimension");
  s.assignment.duplicates = j.at("duplicates").get<std::vector<std::size_t>>();
  for (const auto& p : j.at("pairing")) {
    s.assignment.pairing.push_back({p.at(0), p.at(1)});
  }
  s.weights = j.value("weights", std::vector<double>{});
  s.coordinate_offsets = j.value("coordinate_offsets", std::vector<double>{});
  s.axis_spacing = j.value("axis_spacing", 10.0);
  s.Validate();
  return s;
}

nlohmann::json ToJson(const Polyline2D& p) {
  nlohmann::json nodes = nlohmann::json::array();
  for (const auto& n : p.nodes) nodes.push_back({n.x, n.y});
  return {{"nodes", nodes}, {"case", p.case_index}};
}

}  // namespace ilcml
