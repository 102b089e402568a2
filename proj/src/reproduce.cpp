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

#include "ilcml/reproduce.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "ilcml/evaluation.hpp"
#include "ilcml/service.hpp"

namespace ilcml {
namespace {

double Pct(std::size_t a, std::size_t b) {
  return b ? 100.0 * static_cast<double>(a) / static_cast<double>(b) : 0.0;
}

ReproReport WbcTable2(const std::string& data_dir) {
  const Dataset wbc = LoadNamedDataset("wbc", data_dir);
  const RuleSet rs = WbcReferenceRules(wbc, 7);
  const auto outcomes = RuleMetrics(rs, wbc, SplitRole::kTrain);
  ReproReport r;
  r.target = "wbc-table2";
  const double expected[] = {382, 166, 28, 26, 14, 18, 13};
  std::size_t first4 = 0, first4_correct = 0;
  for (std::size_t i = 0; i < 7; ++i) {
    const auto& o = outcomes.at(i);
    r.checks.push_back(MakeCheck("R" + std::to_string(i + 1) + " cases",
                                 expected[i],
                                 static_cast<double>(o.classified), 2.0));
    r.checks.push_back(MakeCheck("R" + std::to_string(i + 1) + " precision %",
                                 100.0, o.precision * 100.0, 0.0));
    if (i < 4) {
      first4 += o.classified;
      first4_correct += o.correct;
    }
  }
  r.checks.push_back(
      MakeCheck("R1-R4 cases", 602, static_cast<double>(first4), 8.0));
  r.checks.push_back(
      MakeCheck("R1-R4 precision %", 100.0, Pct(first4_correct, first4), 0.0));
  r.checks.push_back(MakeCheck("R1-R4 share of all cases %", 88.14,
                               Pct(first4, wbc.size()), Pct(8, wbc.size())));
  r.details = {{"rules", RenderRules(rs)}, {"projection", ToJson(rs.projection)}};
  return r;
}

ReproReport WbcTable4(const std::string& data_dir) {
  const Dataset wbc = LoadNamedDataset("wbc", data_dir);
  const RuleSet base = WbcReferenceRules(wbc, 4);
  const auto polylines = ProjectCases(wbc, base.projection);
  const RuleSet joined = JoinRules(base, polylines);
  const auto outcomes = RuleMetrics(joined, wbc, SplitRole::kTrain);
  ReproReport r;
  r.target = "wbc-table4";
  const char* names[] = {"R1,3", "R2,4"};
  const double recall[] = {92.34, 80.33};
  for (std::size_t i = 0; i < 2; ++i) {
    if (i >= outcomes.size()) {
      r.checks.push_back(MakeCheck(std::string(names[i]) + " present", 1, 0, 0));
      continue;
    }
    const auto& o = outcomes[i];
    r.checks.push_back(MakeCheck(std::string(names[i]) + " precision %", 100.0,
                                 o.precision * 100.0, 0.0));
    r.checks.push_back(MakeCheck(std::string(names[i]) + " recall %",
                                 recall[i], o.recall * 100.0, 1.0));
  }
  r.checks.push_back(MakeCheck("joined rule count", 2,
                               static_cast<double>(joined.rules.size()), 0));
  r.details = {{"rules", RenderRules(joined)}};
  return r;
}

Dataset PbcUnit(const std::string& data_dir) {
  return Normalize(LoadNamedDataset("pbc", data_dir),
                   Normalization::kMinMaxUnit);
}

ReproReport PbcTable12(const std::string& data_dir) {
  const Dataset pbc = PbcUnit(data_dir);
  SplitPlan plan;
  plan.validation = 0.1;
  const CvReport cv = CrossValidate(pbc, PipelineConfig::PbcDtgBc(), plan);
  ReproReport r;
  r.target = "pbc-table12";
  r.checks.push_back(MakeCheck("average test weighted precision %", 97.30,
                               cv.average_test_precision * 100.0, 2.30, true));
  for (std::size_t c = 0; c < cv.class_hit_folds.size(); ++c) {
    r.checks.push_back(MakeCheck(
        "folds with a correct " + pbc.classes[c].name + " test case", 10,
        static_cast<double>(cv.class_hit_folds[c]), 2, true));
  }
  r.details = {{"table", RenderCvTable(cv)}, {"cv", ToJson(cv)}};
  return r;
}

ReproReport PbcTable14(const std::string& data_dir) {
  const Dataset pbc = PbcUnit(data_dir);
  SplitPlan plan;
  plan.kind = SplitKind::kHoldout;
  plan.train = 0.81;
  plan.validation = 0.09;
  plan.test = 0.10;
  const EvaluationReport rep =
      BaselineTreeReport(pbc, plan, TreeConfig::Baseline());
  ReproReport r;
  r.target = "pbc-table14";
  const SplitReport* test = rep.Find(SplitRole::kTest);
  std::size_t class3 = 0;
  for (const auto& c : test->classes) {
    if (c.cls == 2) class3 = c.classified;
  }
  r.checks.push_back(
      MakeCheck("test cases classified as graphic", 0,
                static_cast<double>(class3), 0));
  r.checks.push_back(MakeCheck("test weighted precision %", 95.26,
                               test->weighted_precision * 100.0, 1.5));
  r.details = {{"classes", RenderClassTable(rep)}, {"report", ToJson(rep)}};
  return r;
}

}  // namespace

bool ReproReport::pass() const {
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  return !checks.empty();
}

ReproCheck MakeCheck(std::string name, double expected, double actual,
                     double tolerance, bool at_least) {
  ReproCheck c{std::move(name), expected, actual, tolerance, at_least, false};
  const double slack = tolerance + 1e-9;
  c.pass = at_least ? actual >= expected - slack
                    : std::fabs(actual - expected) <= slack;
  return c;
}

std::vector<std::string> ReproductionTargets() {
  return {"wbc-table2", "wbc-table4", "pbc-table12", "pbc-table14"};
}

ReproReport Reproduce(const std::string& target, const std::string& data_dir) {
  if (target == "wbc-table2") return WbcTable2(data_dir);
  if (target == "wbc-table4") return WbcTable4(data_dir);
  if (target == "pbc-table12") return PbcTable12(data_dir);
  if (target == "pbc-table14") return PbcTable14(data_dir);
  throw Error(ErrorCode::kNotFound, "unknown target '" + target + "'");
}

ProjectionSpec WbcLinkProjection() {
  ProjectionSpec spec;
  spec.mode = ProjectionMode::kStaticSequential;
  spec.assignment = AxisAssignment::Links(9);
  spec.axis_spacing = 10.0;
  spec.Validate();
  return spec;
}

std::vector<Rect> WbcReferenceBoxes() {
  return {{15, 20.5, 1, 1.5},      {23.5, 39.5, 8.5, 10}, {1, 3.5, 0.5, 2},
          {20, 22.5, 6, 6.5},      {9.5, 10, 5, 6.5},     {16, 21, 0.5, 2},
          {17.5, 18.5, 3, 3.5},    {14.5, 17.2, 5, 3},    {28.5, 29.2, 5, 3.5},
          {17.5, 18.5, 3, 3.5},    {14.5, 15, 5, 5.6},    {26.5, 27, 7, 7.5},
          {28, 28.5, 0.5, 9.5}};
}

RuleSet WbcReferenceRules(const Dataset& wbc, std::size_t count) {
  const auto boxes = WbcReferenceBoxes();
  if (count > boxes.size()) throw InvalidArgument("only 13 reference boxes");
  // Reference classes: B1, B3, B6 benign; B2, B4, B5, B7 malignant.
  const int cls[] = {0, 1, 0, 1, 1, 0, 1, 0, 0, 1, 0, 0, 1};
  std::vector<StreamBox> stream;
  for (std::size_t i = 0; i < count; ++i) {
    Rect b = boxes[i];
    if (b.y1 > b.y2) std::swap(b.y1, b.y2);
    stream.push_back({b, cls[i]});
  }
  const ProjectionSpec spec = WbcLinkProjection();
  std::vector<std::string> names;
  for (const auto& c : wbc.classes) names.push_back(c.name);
  return BcFitStream(ProjectCases(wbc, spec), wbc.labels(), wbc.class_count(),
                     spec, stream, Membership::kEdgeCross, names);
}

std::string RenderRepro(const ReproReport& report) {
  std::string out = report.target + "\n";
  char line[256];
  for (const auto& c : report.checks) {
    std::snprintf(line, sizeof line, "  %-4s %-48s expected %s%.2f (tol %.2f) actual %.2f\n",
                  c.pass ? "PASS" : "FAIL", c.name.c_str(),
                  c.at_least ? ">= " : "", c.expected, c.tolerance, c.actual);
    out += line;
  }
  out += report.pass() ? "PASS\n" : "FAIL\n";
  return out;
}

nlohmann::json ToJson(const ReproReport& report) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : report.checks) {
    checks.push_back({{"name", c.name},
                      {"expected", c.expected},
                      {"actual", c.actual},
                      {"tolerance", c.tolerance},
                      {"at_least", c.at_least},
                      {"pass", c.pass}});
  }
  return {{"target", report.target},
          {"pass", report.pass()},
          {"checks", checks},
          {"details", report.details}};
}

}  // namespace ilcml
