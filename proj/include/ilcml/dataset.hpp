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

#ifndef ILCML_DATASET_HPP_
#define ILCML_DATASET_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace ilcml {

struct AttributeMeta {
  std::string name;
  std::size_t index = 0;
  double observed_min = 0.0;
  double observed_max = 0.0;
  // Number of distinct observed values.
  std::size_t resolution = 1;
  // Smallest positive gap between sorted distinct values (0 if constant).
  double quantum = 0.0;
  // Original-scale bounds used by min_max_unit; Denormalize maps back with
  // them. Equal to observed_min/max while the dataset is raw.
  double scale_min = 0.0;
  double scale_max = 0.0;
};

struct LabeledCase {
  std::vector<double> values;
  int label = 0;
  // 1-based line number in the source file.
  std::size_t source_row = 0;
};

struct ClassInfo {
  std::string name;
  std::size_t count = 0;
};

enum class Normalization { kRaw, kMinMaxUnit };

struct Dataset {
  std::vector<AttributeMeta> attributes;
  std::vector<LabeledCase> cases;
  std::vector<ClassInfo> classes;
  Normalization normalization = Normalization::kRaw;

  std::size_t dimension() const { return attributes.size(); }
  std::size_t size() const { return cases.size(); }
  std::size_t class_count() const { return classes.size(); }
  std::vector<int> labels() const;
  // Copy restricted to the given case indices; class table keeps all classes.
  Dataset Subset(const std::vector<std::size_t>& indices) const;
  // Recompute class counts and observed statistics; scale bounds untouched.
  void RefreshStatistics();
};

enum class MissingPolicy { kDropRow, kError };

struct CsvSchema {
  // Delimiter; ' ' means any run of whitespace.
  char delimiter = ',';
  bool has_header = false;
  // Column holding the label; negative counts from the end.
  int label_column = -1;
  std::vector<int> skip_columns;
  std::string missing_marker = "?";
  // Raw label strings in class-id order. Empty: labels sorted naturally.
  std::vector<std::string> class_order;
  // Display names parallel to class_order (optional).
  std::vector<std::string> class_names;
  std::vector<std::string> attribute_names;

  static CsvSchema Wbc();
  static CsvSchema Pbc();
};

Dataset IngestCsv(const std::string& path, const CsvSchema& schema,
                  MissingPolicy policy = MissingPolicy::kDropRow);
Dataset IngestCsvText(const std::string& text, const CsvSchema& schema,
                      MissingPolicy policy = MissingPolicy::kDropRow);

// v' = (v - min) / (max - min); constant attributes map to 0. Attribute
// metadata keeps the original bounds so Denormalize can invert.
Dataset Normalize(const Dataset& dataset, Normalization mode);
Dataset Denormalize(const Dataset& dataset);

enum class SplitKind { kHoldout, kStratifiedKFold };

struct SplitPlan {
  SplitKind kind = SplitKind::kStratifiedKFold;
  // Holdout: proportions of each class. KFold: `validation` is the share of
  // each non-test remainder held out for validation; train/test are derived.
  double train = 0.9;
  double validation = 0.0;
  double test = 0.1;
  std::size_t fold_count = 10;
  std::uint64_t seed = 1;
};

struct Partition {
  std::vector<std::size_t> train;
  std::vector<std::size_t> validation;
  std::vector<std::size_t> test;
};

std::vector<Partition> StratifiedSplit(const Dataset& dataset,
                                       const SplitPlan& plan);

nlohmann::json ToJson(const Dataset& dataset);
Dataset DatasetFromJson(const nlohmann::json& j);
nlohmann::json ToJson(const Partition& p);
nlohmann::json ToJson(const SplitPlan& p);
SplitPlan SplitPlanFromJson(const nlohmann::json& j);
CsvSchema CsvSchemaFromJson(const nlohmann::json& j);

}  // namespace ilcml

#endif  // ILCML_DATASET_HPP_
