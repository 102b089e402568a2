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

#include "ilcml/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "ilcml/common.hpp"

namespace ilcml {
namespace {

std::string Trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> SplitLine(const std::string& line, char delimiter) {
  std::vector<std::string> out;
  if (delimiter == ' ') {
    std::istringstream in(line);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
  }
  std::string cur;
  for (char ch : line) {
    if (ch == delimiter) {
      out.push_back(Trim(cur));
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(Trim(cur));
  return out;
}

bool ParseDouble(const std::string& s, double* out) {
  if (s.empty()) return false;
  const char* b = s.data();
  const char* e = s.data() + s.size();
  if (*b == '+') ++b;
  auto [ptr, ec] = std::from_chars(b, e, *out);
  return ec == std::errc() && ptr == e && std::isfinite(*out);
}

// Numeric labels sort by value, the rest lexicographically after them.
bool NaturalLess(const std::string& a, const std::string& b) {
  double x, y;
  const bool na = ParseDouble(a, &x), nb = ParseDouble(b, &y);
  if (na && nb) return x < y || (x == y && a < b);
  if (na != nb) return na;
  return a < b;
}

}  // namespace

std::vector<int> Dataset::labels() const {
  std::vector<int> out;
  out.reserve(cases.size());
  for (const auto& c : cases) out.push_back(c.label);
  return out;
}

Dataset Dataset::Subset(const std::vector<std::size_t>& indices) const {
  Dataset d;
  d.attributes = attributes;
  d.classes = classes;
  d.normalization = normalization;
  d.cases.reserve(indices.size());
  for (std::size_t i : indices) d.cases.push_back(cases.at(i));
  d.RefreshStatistics();
  return d;
}

void Dataset::RefreshStatistics() {
  for (auto& c : classes) c.count = 0;
  for (const auto& c : cases) classes.at(c.label).count++;
  for (std::size_t a = 0; a < attributes.size(); ++a) {
    std::vector<double> v;
    v.reserve(cases.size());
    for (const auto& c : cases) v.push_back(c.values[a]);
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    auto& m = attributes[a];
    m.index = a;
    m.resolution = std::max<std::size_t>(1, v.size());
    m.observed_min = v.empty() ? 0.0 : v.front();
    m.observed_max = v.empty() ? 0.0 : v.back();
    m.quantum = 0.0;
    for (std::size_t i = 1; i < v.size(); ++i) {
      const double gap = v[i] - v[i - 1];
      if (m.quantum == 0.0 || gap < m.quantum) m.quantum = gap;
    }
  }
}

CsvSchema CsvSchema::Wbc() {
  CsvSchema s;
  s.delimiter = ',';
  s.label_column = 10;
  s.skip_columns = {0};
  s.class_order = {"2", "4"};
  s.class_names = {"benign", "malignant"};
  s.attribute_names = {"clump_thickness", "cell_size_uniformity",
                       "cell_shape_uniformity", "marginal_adhesion",
                       "epithelial_cell_size", "bare_nuclei",
                       "bland_chromatin", "normal_nucleoli", "mitoses"};
  return s;
}

CsvSchema CsvSchema::Pbc() {
  CsvSchema s;
  s.delimiter = ' ';
  s.label_column = 10;
  s.class_order = {"1", "2", "3", "4", "5"};
  s.class_names = {"text", "horiz_line", "graphic", "vert_line", "picture"};
  s.attribute_names = {"height", "length",  "area",    "eccen",    "p_black",
                       "p_and",  "mean_tr", "blackpix", "blackand", "wb_trans"};
  return s;
}

Dataset IngestCsv(const std::string& path, const CsvSchema& schema,
                  MissingPolicy policy) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return IngestCsvText(buf.str(), schema, policy);
}

Dataset IngestCsvText(const std::string& text, const CsvSchema& schema,
                      MissingPolicy policy) {
  struct Row {
    std::vector<double> values;
    std::string label;
    std::size_t line;
  };
  std::vector<Row> rows;
  std::vector<std::string> header;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (Trim(line).empty()) continue;
    auto cells = SplitLine(line, schema.delimiter);
    if (schema.has_header && header.empty()) {
      header = cells;
      continue;
    }
    if (width == 0) width = cells.size();
    if (cells.size() != width) {
      throw ParseError(line_no, "expected " + std::to_string(width) +
                                    " columns, found " +
                                    std::to_string(cells.size()));
    }
    const int label_col = schema.label_column < 0
                              ? static_cast<int>(width) + schema.label_column
                              : schema.label_column;
    if (label_col < 0 || label_col >= static_cast<int>(width)) {
      throw ParseError(line_no, "label column out of range");
    }
    Row row;
    row.line = line_no;
    bool missing = false;
    for (int c = 0; c < static_cast<int>(width); ++c) {
      if (c == label_col) {
        row.label = cells[c];
        continue;
      }
      if (std::find(schema.skip_columns.begin(), schema.skip_columns.end(),
                    c) != schema.skip_columns.end()) {
        continue;
      }
      if (cells[c] == schema.missing_marker) {
        missing = true;
        row.values.push_back(0.0);
        continue;
      }
      double v;
      if (!ParseDouble(cells[c], &v)) {
        throw ParseError(line_no, "column " + std::to_string(c) +
                                      ": not a number '" + cells[c] + "'");
      }
      row.values.push_back(v);
    }
    if (row.label.empty() || row.label == schema.missing_marker) {
      throw ParseError(line_no, "missing label");
    }
    if (missing) {
      if (policy == MissingPolicy::kError) {
        throw ParseError(line_no, "missing value");
      }
      continue;
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorCode::kParse, "no data rows");

  std::vector<std::string> order = schema.class_order;
  if (order.empty()) {
    std::set<std::string> seen;
    for (const auto& r : rows) seen.insert(r.label);
    order.assign(seen.begin(), seen.end());
    std::sort(order.begin(), order.end(), NaturalLess);
  }
  std::map<std::string, int> label_id;
  for (std::size_t i = 0; i < order.size(); ++i) {
    label_id[order[i]] = static_cast<int>(i);
  }

  Dataset d;
  const std::size_t dim = rows.front().values.size();
  std::vector<std::string> header_names;
  if (!header.empty()) {
    const int label_col = schema.label_column < 0
                              ? static_cast<int>(width) + schema.label_column
                              : schema.label_column;
    for (int c = 0; c < static_cast<int>(header.size()); ++c) {
      if (c == label_col ||
          std::find(schema.skip_columns.begin(), schema.skip_columns.end(),
                    c) != schema.skip_columns.end()) {
        continue;
      }
      header_names.push_back(header[c]);
    }
  }
  for (std::size_t i = 0; i < order.size(); ++i) {
    ClassInfo ci;
    ci.name = i < schema.class_names.size() ? schema.class_names[i] : order[i];
    d.classes.push_back(ci);
  }
  for (std::size_t a = 0; a < dim; ++a) {
    AttributeMeta m;
    m.index = a;
    if (a < schema.attribute_names.size()) {
      m.name = schema.attribute_names[a];
    } else if (a < header_names.size()) {
      m.name = header_names[a];
    } else {
      m.name = "x" + std::to_string(a + 1);
    }
    d.attributes.push_back(m);
  }
  for (auto& r : rows) {
    auto it = label_id.find(r.label);
    if (it == label_id.end()) {
      throw ParseError(r.line, "unknown label '" + r.label + "'");
    }
    d.cases.push_back({std::move(r.values), it->second, r.line});
  }
  d.RefreshStatistics();
  for (auto& m : d.attributes) {
    m.scale_min = m.observed_min;
    m.scale_max = m.observed_max;
  }
  return d;
}

Dataset Normalize(const Dataset& dataset, Normalization mode) {
  if (mode == Normalization::kRaw ||
      dataset.normalization == Normalization::kMinMaxUnit) {
    return dataset;
  }
  Dataset d = dataset;
  for (auto& m : d.attributes) {
    m.scale_min = m.observed_min;
    m.scale_max = m.observed_max;
  }
  for (auto& c : d.cases) {
    for (std::size_t a = 0; a < c.values.size(); ++a) {
      const auto& m = d.attributes[a];
      const double span = m.scale_max - m.scale_min;
      c.values[a] = span > 0.0 ? (c.values[a] - m.scale_min) / span : 0.0;
    }
  }
  d.normalization = Normalization::kMinMaxUnit;
  d.RefreshStatistics();
  return d;
}

Dataset Denormalize(const Dataset& dataset) {
  if (dataset.normalization == Normalization::kRaw) return dataset;
  Dataset d = dataset;
  for (auto& c : d.cases) {
    for (std::size_t a = 0; a < c.values.size(); ++a) {
      const auto& m = d.attributes[a];
      const double span = m.scale_max - m.scale_min;
      c.values[a] = span > 0.0 ? m.scale_min + c.values[a] * span
                               : m.scale_min;
    }
  }
  d.normalization = Normalization::kRaw;
  d.RefreshStatistics();
  return d;
}

std::vector<Partition> StratifiedSplit(const Dataset& dataset,
                                       const SplitPlan& plan) {
  const std::size_t k = dataset.class_count();
  std::vector<std::vector<std::size_t>> by_class(k);
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    by_class[dataset.cases[i].label].push_back(i);
  }
  Rng rng(plan.seed);
  for (auto& v : by_class) rng.Shuffle(v);

  auto sort_all = [](Partition& p) {
    std::sort(p.train.begin(), p.train.end());
    std::sort(p.validation.begin(), p.validation.end());
    std::sort(p.test.begin(), p.test.end());
  };

  if (plan.kind == SplitKind::kHoldout) {
    const double sum = plan.train + plan.validation + plan.test;
    if (std::abs(sum - 1.0) > 1e-9 || plan.train < 0 || plan.validation < 0 ||
        plan.test < 0) {
      throw InvalidArgument("split proportions must be non-negative and sum to 1");
    }
    Partition p;
    for (const auto& v : by_class) {
      const std::size_t n = v.size();
      std::size_t n_test = static_cast<std::size_t>(std::llround(n * plan.test));
      std::size_t n_val =
          static_cast<std::size_t>(std::llround(n * plan.validation));
      n_test = std::min(n_test, n);
      n_val = std::min(n_val, n - n_test);
      for (std::size_t j = 0; j < n; ++j) {
        if (j < n_test) {
          p.test.push_back(v[j]);
        } else if (j < n_test + n_val) {
          p.validation.push_back(v[j]);
        } else {
          p.train.push_back(v[j]);
        }
      }
    }
    sort_all(p);
    return {p};
  }

  const std::size_t folds = plan.fold_count;
  if (folds < 2) throw InvalidArgument("fold_count must be at least 2");
  if (plan.validation < 0 || plan.validation >= 1) {
    throw InvalidArgument("validation share must lie in [0,1)");
  }
  for (std::size_t c = 0; c < k; ++c) {
    if (by_class[c].size() < folds) {
      throw InvalidArgument("class '" + dataset.classes[c].name + "' has " +
                            std::to_string(by_class[c].size()) +
                            " cases, fewer than " + std::to_string(folds) +
                            " folds");
    }
  }
  // Round-robin per class with a running start so fold totals stay level.
  std::vector<std::vector<std::vector<std::size_t>>> fold_class(
      folds, std::vector<std::vector<std::size_t>>(k));
  std::size_t start = 0;
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t j = 0; j < by_class[c].size(); ++j) {
      fold_class[(start + j) % folds][c].push_back(by_class[c][j]);
    }
    start = (start + by_class[c].size()) % folds;
  }
  std::vector<Partition> out(folds);
  for (std::size_t f = 0; f < folds; ++f) {
    Partition& p = out[f];
    for (std::size_t c = 0; c < k; ++c) {
      for (std::size_t i : fold_class[f][c]) p.test.push_back(i);
      std::vector<std::size_t> rest;
      for (std::size_t g = 1; g < folds; ++g) {
        const auto& src = fold_class[(f + g) % folds][c];
        rest.insert(rest.end(), src.begin(), src.end());
      }
      const std::size_t n_val = std::min(
          rest.size(),
          static_cast<std::size_t>(std::llround(rest.size() * plan.validation)));
      for (std::size_t j = 0; j < rest.size(); ++j) {
        (j < n_val ? p.validation : p.train).push_back(rest[j]);
      }
    }
    sort_all(p);
  }
  return out;
}

nlohmann::json ToJson(const Dataset& d) {
  nlohmann::json j;
  j["normalization"] =
      d.normalization == Normalization::kRaw ? "raw" : "min_max_unit";
  for (const auto& m : d.attributes) {
    j["attributes"].push_back({{"name", m.name},
                               {"index", m.index},
                               {"observed_min", m.observed_min},
                               {"observed_max", m.observed_max},
                               {"resolution", m.resolution},
                               {"quantum", m.quantum},
                               {"scale_min", m.scale_min},
                               {"scale_max", m.scale_max}});
  }
  for (const auto& c : d.classes) {
    j["classes"].push_back({{"name", c.name}, {"count", c.count}});
  }
  j["cases"] = nlohmann::json::array();
  for (const auto& c : d.cases) {
    j["cases"].push_back(
        {{"values", c.values}, {"label", c.label}, {"source_row", c.source_row}});
  }
  return j;
}

Dataset DatasetFromJson(const nlohmann::json& j) {
  Dataset d;
  d.normalization = j.at("normalization") == "raw" ? Normalization::kRaw
                                                   : Normalization::kMinMaxUnit;
  for (const auto& a : j.at("attributes")) {
    AttributeMeta m;
    m.name = a.at("name");
    m.index = a.at("index");
    m.scale_min = a.at("scale_min");
    m.scale_max = a.at("scale_max");
    d.attributes.push_back(m);
  }
  for (const auto& c : j.at("classes")) {
    d.classes.push_back({c.at("name").get<std::string>(), 0});
  }
  for (const auto& c : j.at("cases")) {
    LabeledCase lc;
    lc.values = c.at("values").get<std::vector<double>>();
    lc.label = c.at("label");
    lc.source_row = c.at("source_row");
    if (lc.values.size() != d.attributes.size() || lc.label < 0 ||
        lc.label >= static_cast<int>(d.classes.size())) {
      throw InvalidArgument("malformed case in dataset snapshot");
    }
    d.cases.push_back(std::move(lc));
  }
  d.RefreshStatistics();
  return d;
}

nlohmann::json ToJson(const Partition& p) {
  return {{"train", p.train}, {"validation", p.validation}, {"test", p.test}};
}

nlohmann::json ToJson(const SplitPlan& p) {
  return {{"kind", p.kind == SplitKind::kHoldout ? "holdout" : "stratified_kfold"},
          {"train", p.train},
          {"validation", p.validation},
          {"test", p.test},
          {"fold_count", p.fold_count},
          {"seed", p.seed}};
}

SplitPlan SplitPlanFromJson(const nlohmann::json& j) {
  SplitPlan p;
  const std::string kind = j.value("kind", std::string("stratified_kfold"));
  if (kind == "holdout") {
    p.kind = SplitKind::kHoldout;
  } else if (kind != "stratified_kfold") {
    throw InvalidArgument("unknown split kind '" + kind + "'");
  }
  p.train = j.value("train", p.train);
  p.validation = j.value("validation", p.validation);
  p.test = j.value("test", p.test);
  p.fold_count = j.value("fold_count", p.fold_count);
  p.seed = j.value("seed", p.seed);
  return p;
}

CsvSchema CsvSchemaFromJson(const nlohmann::json& j) {
  CsvSchema s;
  const std::string d = j.value("delimiter", std::string(","));
  if (d.size() != 1) throw InvalidArgument("delimiter must be one character");
  s.delimiter = d[0];
  s.has_header = j.value("has_header", s.has_header);
  s.label_column = j.value("label_column", s.label_column);
  s.skip_columns = j.value("skip_columns", s.skip_columns);
  s.missing_marker = j.value("missing_marker", s.missing_marker);
  s.class_order = j.value("class_order", s.class_order);
  s.class_names = j.value("class_names", s.class_names);
  s.attribute_names = j.value("attribute_names", s.attribute_names);
  return s;
}

}  // namespace ilcml
