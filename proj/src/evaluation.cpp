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

#include "ilcml/evaluation.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>
#include <tuple>

#include "ilcml/common.hpp"

namespace ilcml {
namespace {

// One case's decisive rule.
struct Firing {
  std::size_t node = 0;
  int rule = -1;
  int else_depth = 0;
  std::string name;
  int predicted = kRefuse;
  bool terminal = true;
  bool correct = false;
};

using Key = std::tuple<std::size_t, int, int>;

std::vector<RuleOutcome> Aggregate(
    const std::vector<std::vector<Firing>>& per_case, const Dataset& data,
    SplitRole split) {
  std::map<Key, RuleOutcome> acc;
  for (const auto& firings : per_case) {
    for (const auto& f : firings) {
      auto& o = acc[{f.node, f.rule, f.else_depth}];
      o.node = f.node;
      o.rule = f.rule;
      o.else_depth = f.else_depth;
      o.name = f.name;
      o.predicted_class = f.predicted;
      o.terminal = f.terminal;
      o.split = split;
      o.classified++;
      if (f.correct) o.correct++;
    }
  }
  std::vector<std::size_t> totals(data.class_count(), 0);
  for (const auto& c : data.cases) totals[c.label]++;
  std::vector<RuleOutcome> out;
  for (auto& [key, o] : acc) {
    o.precision = o.classified ? static_cast<double>(o.correct) /
                                     static_cast<double>(o.classified)
                               : -1.0;
    if (o.predicted_class >= 0 &&
        o.predicted_class < static_cast<int>(totals.size()) &&
        totals[o.predicted_class] > 0) {
      o.recall = static_cast<double>(o.correct) /
                 static_cast<double>(totals[o.predicted_class]);
    }
    out.push_back(o);
  }
  return out;
}

const Rule& RuleAt(const RuleSet& rs, int rule, int depth) {
  const Rule* r = &rs.rules.at(static_cast<std::size_t>(rule));
  for (int d = 0; d < depth; ++d) r = &r->else_branch.at(0);
  return *r;
}

std::string Label(const std::vector<std::string>& names, int cls) {
  if (cls >= 0 && cls < static_cast<int>(names.size())) return names[cls];
  return std::to_string(cls);
}

std::vector<std::vector<Firing>> FlatFirings(const RuleSet& rs,
                                             const Dataset& data) {
  const auto polylines = ProjectCases(data, rs.projection);
  RuleEvaluator ev(rs, polylines);
  std::vector<std::vector<Firing>> out(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const Decision d = ev.Decide(i);
    if (d.rule < 0) {
      if (d.predicted == kRefuse) continue;
      out[i].push_back({0, -1, 0, "fallback", d.predicted, true,
                        d.predicted == data.cases[i].label});
      continue;
    }
    const Rule& r = RuleAt(rs, d.rule, d.else_depth);
    Firing f;
    f.rule = d.rule;
    f.else_depth = d.else_depth;
    f.name = r.name.empty() ? "R" + std::to_string(d.rule + 1) : r.name;
    f.predicted = r.predicted_class;
    f.terminal = r.predicted_class != kRefuse;
    f.correct = f.terminal && r.predicted_class == data.cases[i].label;
    out[i].push_back(f);
  }
  return out;
}

std::vector<std::vector<Firing>> HierFirings(const HierarchicalModel& m,
                                             const Dataset& data) {
  std::vector<std::vector<Firing>> out(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto& values = data.cases[i].values;
    const int truth = data.cases[i].label;
    std::size_t node = 0;
    for (;;) {
      const RuleSet& rs = m.node_rules.at(node);
      const Decision d = ClassifyValues(rs, values);
      if (d.predicted == kRefuse) {
        if (d.rule >= 0) {
          const Rule& r = RuleAt(rs, d.rule, d.else_depth);
          out[i].push_back({node, d.rule, d.else_depth,
                            "n" + std::to_string(node) + "." + r.name, kRefuse,
                            false, false});
        }
        break;
      }
      const auto& hn = m.hierarchy.nodes.at(node);
      const auto& group = hn.groups.at(d.predicted);
      const bool in_group =
          std::find(group.begin(), group.end(), truth) != group.end();
      std::string name = d.rule >= 0 ? RuleAt(rs, d.rule, d.else_depth).name
                                     : std::string("fallback");
      name = "n" + std::to_string(node) + "." + name;
      const int child = hn.children.at(d.predicted);
      if (child < 0) {
        out[i].push_back({node, d.rule, d.else_depth, name, group.front(),
                          true, in_group});
        break;
      }
      out[i].push_back(
          {node, d.rule, d.else_depth, name, kRefuse, false, in_group});
      node = static_cast<std::size_t>(child);
    }
  }
  return out;
}

SplitReport Summarize(std::vector<RuleOutcome> rules, const Dataset& data,
                      SplitRole split, const std::vector<std::string>& names) {
  SplitReport r;
  r.split = split;
  r.cases = data.size();
  r.rules = std::move(rules);
  const std::size_t k = data.class_count();
  r.classes.resize(k);
  for (std::size_t c = 0; c < k; ++c) {
    r.classes[c].cls = static_cast<int>(c);
    r.classes[c].name = Label(names, static_cast<int>(c));
  }
  for (const auto& c : data.cases) r.classes[c.label].total++;
  for (const auto& o : r.rules) {
    if (!o.terminal || o.predicted_class < 0) continue;
    r.classified += o.classified;
    auto& co = r.classes.at(o.predicted_class);
    co.classified += o.classified;
    co.correct += o.correct;
  }
  r.refused = r.cases - r.classified;
  for (auto& co : r.classes) {
    co.precision = co.classified ? static_cast<double>(co.correct) /
                                       static_cast<double>(co.classified)
                                 : 0.0;
    co.weight = r.classified ? static_cast<double>(co.classified) /
                                   static_cast<double>(r.classified)
                             : 0.0;
  }
  try {
    r.weighted_precision = WeightedPrecision(r.rules);
  } catch (const Error&) {
    r.weighted_precision = -1.0;
  }
  return r;
}

std::string Pad(const std::string& s, std::size_t w) {
  // Width in code points so that symbols like ∈ align.
  std::size_t n = 0;
  for (unsigned char ch : s) {
    if ((ch & 0xC0) != 0x80) ++n;
  }
  return s + std::string(n < w ? w - n : 1, ' ');
}

}  // namespace

std::string SplitRoleName(SplitRole role) {
  switch (role) {
    case SplitRole::kTrain:
      return "training";
    case SplitRole::kValidation:
      return "validation";
    case SplitRole::kTest:
      return "testing";
  }
  return "?";
}

const SplitReport* EvaluationReport::Find(SplitRole role) const {
  for (const auto& s : splits) {
    if (s.split == role) return &s;
  }
  return nullptr;
}

std::vector<RuleOutcome> RuleMetrics(const RuleSet& ruleset,
                                     const Dataset& data, SplitRole split) {
  return Aggregate(FlatFirings(ruleset, data), data, split);
}

std::vector<RuleOutcome> RuleMetrics(const HierarchicalModel& model,
                                     const Dataset& data, SplitRole split) {
  return Aggregate(HierFirings(model, data), data, split);
}

double WeightedPrecision(const std::vector<RuleOutcome>& outcomes,
                         const OutcomeFilter& include) {
  double num = 0.0;
  std::size_t den = 0;
  for (const auto& o : outcomes) {
    const bool keep = include ? include(o) : o.terminal;
    if (!keep || o.classified == 0) continue;
    const double p = o.precision >= 0
                         ? o.precision
                         : static_cast<double>(o.correct) /
                               static_cast<double>(o.classified);
    num += p * static_cast<double>(o.classified);
    den += o.classified;
  }
  if (den == 0) {
    throw FailedPrecondition(
        "weighted precision needs a rule that classified at least one case");
  }
  return num / static_cast<double>(den);
}

std::string PipelineKindName(PipelineKind kind) {
  switch (kind) {
    case PipelineKind::kDtgBc:
      return "dtg-bc";
    case PipelineKind::kBc:
      return "bc";
    case PipelineKind::kTree:
      return "tree";
    case PipelineKind::kMajority:
      return "majority";
  }
  return "?";
}

PipelineKind ParsePipelineKind(const std::string& name) {
  if (name == "dtg-bc" || name == "dtg" || name == "dt") {
    return PipelineKind::kDtgBc;
  }
  if (name == "bc" || name == "grid") return PipelineKind::kBc;
  if (name == "tree") return PipelineKind::kTree;
  if (name == "majority") return PipelineKind::kMajority;
  throw InvalidArgument("unknown pipeline '" + name + "'");
}

PipelineConfig PipelineConfig::PbcDtgBc() {
  PipelineConfig c;
  c.kind = PipelineKind::kDtgBc;
  c.hierarchy = ClassHierarchy::Pbc();
  DcNodeConfig n;
  n.branch_purity = 0.9;
  n.rule_purity = 0.97;
  n.min_cases = 3;
  n.refine_step = 0.01;
  n.refine_radius = 5;
  c.dc.nodes = {n};
  return c;
}

nlohmann::json ToJson(const PipelineConfig& c) {
  nlohmann::json nodes = nlohmann::json::array();
  for (const auto& n : c.dc.nodes) nodes.push_back(ToJson(n));
  nlohmann::json j{{"kind", PipelineKindName(c.kind)},
                   {"dc_nodes", nodes},
                   {"grid", ToJson(c.grid)},
                   {"stop",
                    {{"max_rules", c.stop.max_rules},
                     {"min_cases", c.stop.min_cases}}},
                   {"prune_mode", c.prune_mode == PruneMode::kRefuse
                                      ? "refuse"
                                      : "associate"},
                   {"join", c.join},
                   {"tree",
                    {{"max_depth", c.tree.max_depth},
                     {"min_leaf_cases", c.tree.min_leaf_cases}}}};
  if (c.projection.assignment.dimension > 0) {
    j["projection"] = ToJson(c.projection);
  }
  if (c.hierarchy) j["hierarchy"] = ToJson(*c.hierarchy);
  if (c.prune_min_cases) j["prune_min_cases"] = *c.prune_min_cases;
  return j;
}

PipelineConfig PipelineConfigFromJson(const nlohmann::json& j) {
  PipelineConfig c;
  try {
    c.kind = ParsePipelineKind(j.value("kind", std::string("dtg-bc")));
    if (j.contains("hierarchy")) {
      c.hierarchy = ClassHierarchy::FromJson(j.at("hierarchy"));
    }
    if (j.contains("dc_nodes")) {
      c.dc.nodes.clear();
      for (const auto& n : j.at("dc_nodes")) {
        c.dc.nodes.push_back(DcNodeConfigFromJson(n));
      }
    }
    if (j.contains("projection")) {
      c.projection = ProjectionSpecFromJson(j.at("projection"));
    }
    if (j.contains("grid")) c.grid = GridParamsFromJson(j.at("grid"));
    if (j.contains("stop")) {
      c.stop.max_rules = j["stop"].value("max_rules", c.stop.max_rules);
      c.stop.min_cases = j["stop"].value("min_cases", c.stop.min_cases);
    }
    if (j.contains("prune_min_cases")) {
      c.prune_min_cases = j.at("prune_min_cases").get<std::size_t>();
    }
    c.prune_mode = j.value("prune_mode", std::string("refuse")) == "associate"
                       ? PruneMode::kAssociate
                       : PruneMode::kRefuse;
    c.join = j.value("join", false);
    if (j.contains("tree")) {
      c.tree.max_depth = j["tree"].value("max_depth", c.tree.max_depth);
      c.tree.min_leaf_cases =
          j["tree"].value("min_leaf_cases", c.tree.min_leaf_cases);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("pipeline config: ") + e.what());
  }
  return c;
}

FittedModel FitPipeline(const Dataset& train, const PipelineConfig& config) {
  if (train.size() == 0) throw InvalidArgument("empty training set");
  FittedModel m;
  m.kind = config.kind;
  for (const auto& c : train.classes) m.class_names.push_back(c.name);
  switch (config.kind) {
    case PipelineKind::kDtgBc: {
      const ClassHierarchy h = config.hierarchy
                                   ? *config.hierarchy
                                   : ClassHierarchy::Flat(train.class_count());
      m.hierarchical = DcFit(train, h, config.dc);
      break;
    }
    case PipelineKind::kBc: {
      const auto polylines = ProjectCases(train, config.projection);
      const auto labels = train.labels();
      m.rules = BcFit(polylines, labels, train.class_count(),
                      config.projection, config.grid, config.stop,
                      m.class_names);
      if (config.prune_min_cases) {
        m.rules = Prune(m.rules, polylines, labels, *config.prune_min_cases,
                        config.prune_mode)
                      .ruleset;
      }
      if (config.join) m.rules = JoinRules(m.rules, polylines);
      break;
    }
    case PipelineKind::kTree:
      m.tree = InduceTree(train, config.tree);
      break;
    case PipelineKind::kMajority: {
      std::vector<std::size_t> counts(train.class_count(), 0);
      for (const auto& c : train.cases) counts[c.label]++;
      m.majority = static_cast<int>(
          std::max_element(counts.begin(), counts.end()) - counts.begin());
      break;
    }
  }
  return m;
}

int PredictModel(const FittedModel& m, const std::vector<double>& values) {
  switch (m.kind) {
    case PipelineKind::kDtgBc:
      return ClassifyHierarchical(m.hierarchical, values).predicted;
    case PipelineKind::kBc:
      return ClassifyValues(m.rules, values).predicted;
    case PipelineKind::kTree:
      return m.tree.Predict(values);
    case PipelineKind::kMajority:
      return m.majority;
  }
  return kRefuse;
}

SplitReport EvaluateModel(const FittedModel& m, const Dataset& data,
                          SplitRole split) {
  std::vector<RuleOutcome> rules;
  switch (m.kind) {
    case PipelineKind::kDtgBc:
      rules = RuleMetrics(m.hierarchical, data, split);
      break;
    case PipelineKind::kBc:
      rules = RuleMetrics(m.rules, data, split);
      break;
    case PipelineKind::kTree:
    case PipelineKind::kMajority: {
      std::vector<std::vector<Firing>> per_case(data.size());
      for (std::size_t i = 0; i < data.size(); ++i) {
        const int p = PredictModel(m, data.cases[i].values);
        per_case[i].push_back({0, p, 0, "Class " + Label(m.class_names, p), p,
                               true, p == data.cases[i].label});
      }
      rules = Aggregate(per_case, data, split);
      break;
    }
  }
  return Summarize(std::move(rules), data, split, m.class_names);
}

CvReport CrossValidate(const Dataset& dataset, const PipelineConfig& config,
                       const SplitPlan& plan) {
  const auto parts = StratifiedSplit(dataset, plan);
  CvReport out;
  out.config = {{"pipeline", ToJson(config)}, {"plan", ToJson(plan)}};
  out.class_hit_folds.assign(dataset.class_count(), 0);
  double sum = 0.0;
  std::size_t counted = 0;
  for (std::size_t f = 0; f < parts.size(); ++f) {
    const Dataset train = dataset.Subset(parts[f].train);
    const FittedModel model = FitPipeline(train, config);
    EvaluationReport rep;
    rep.fold = static_cast<int>(f);
    rep.splits.push_back(EvaluateModel(model, train, SplitRole::kTrain));
    if (!parts[f].validation.empty()) {
      rep.splits.push_back(EvaluateModel(
          model, dataset.Subset(parts[f].validation), SplitRole::kValidation));
    }
    rep.splits.push_back(EvaluateModel(model, dataset.Subset(parts[f].test),
                                       SplitRole::kTest));
    const SplitReport& test = rep.splits.back();
    if (test.weighted_precision >= 0) {
      sum += test.weighted_precision;
      ++counted;
    }
    for (const auto& c : test.classes) {
      if (c.correct > 0) out.class_hit_folds[c.cls]++;
    }
    out.folds.push_back(std::move(rep));
  }
  out.average_test_precision = counted ? sum / static_cast<double>(counted) : -1;
  return out;
}

EvaluationReport BaselineTreeReport(const Dataset& dataset,
                                    const SplitPlan& plan,
                                    const TreeConfig& config) {
  SplitPlan p = plan;
  p.kind = SplitKind::kHoldout;
  const auto parts = StratifiedSplit(dataset, p);
  const Partition& part = parts.front();
  PipelineConfig pc;
  pc.kind = PipelineKind::kTree;
  pc.tree = config;
  const Dataset train = dataset.Subset(part.train);
  const FittedModel model = FitPipeline(train, pc);
  EvaluationReport rep;
  rep.config = {{"pipeline", ToJson(pc)},
                {"plan", ToJson(p)},
                {"tree_family", "binary information-gain tree, midpoint "
                                "thresholds"},
                {"leaves", model.tree.leaf_count()}};
  rep.splits.push_back(EvaluateModel(model, train, SplitRole::kTrain));
  if (!part.validation.empty()) {
    rep.splits.push_back(EvaluateModel(model, dataset.Subset(part.validation),
                                       SplitRole::kValidation));
  }
  rep.splits.push_back(
      EvaluateModel(model, dataset.Subset(part.test), SplitRole::kTest));
  rep.reference_rows = {
      {"K-nearest neighbor, single 80:20 split (validation)", 0.9351},
      {"C4.5 tree, 10-fold 90:10 (validation)", 0.9695}};
  return rep;
}

std::string Percent(double fraction) {
  if (fraction < 0) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f%%", 100.0 * fraction);
  return buf;
}

nlohmann::json ToJson(const FittedModel& m) {
  nlohmann::json j{{"format", kModelFormat},
                   {"kind", PipelineKindName(m.kind)},
                   {"class_names", m.class_names}};
  switch (m.kind) {
    case PipelineKind::kDtgBc:
      j["hierarchical"] = ToJson(m.hierarchical);
      break;
    case PipelineKind::kBc:
      j["rules"] = ToJson(m.rules);
      break;
    case PipelineKind::kTree:
      j["tree"] = ToJson(m.tree);
      break;
    case PipelineKind::kMajority:
      j["majority"] = m.majority;
      break;
  }
  return j;
}

FittedModel FittedModelFromJson(const nlohmann::json& j) {
  // A bare rule file is accepted as a BC model.
  if (j.value("format", std::string()) == kRuleFormat) {
    FittedModel m;
    m.kind = PipelineKind::kBc;
    m.rules = RuleSetFromJson(j);
    m.class_names = m.rules.class_names;
    return m;
  }
  if (j.value("format", std::string()) != kModelFormat) {
    throw Error(ErrorCode::kParse, "not an ilcml model file");
  }
  FittedModel m;
  m.kind = ParsePipelineKind(j.at("kind").get<std::string>());
  m.class_names = j.at("class_names").get<std::vector<std::string>>();
  switch (m.kind) {
    case PipelineKind::kDtgBc:
      m.hierarchical = HierarchicalModelFromJson(j.at("hierarchical"));
      break;
    case PipelineKind::kBc:
      m.rules = RuleSetFromJson(j.at("rules"));
      break;
    case PipelineKind::kTree:
      m.tree = DecisionTreeFromJson(j.at("tree"));
      break;
    case PipelineKind::kMajority:
      m.majority = j.at("majority").get<int>();
      break;
  }
  return m;
}

nlohmann::json ToJson(const RuleOutcome& o) {
  return {{"node", o.node},
          {"rule", o.rule},
          {"else_depth", o.else_depth},
          {"name", o.name},
          {"predicted_class", o.predicted_class},
          {"terminal", o.terminal},
          {"classified", o.classified},
          {"correct", o.correct},
          {"precision", o.precision},
          {"recall", o.recall},
          {"split", SplitRoleName(o.split)}};
}

nlohmann::json ToJson(const SplitReport& r) {
  nlohmann::json rules = nlohmann::json::array();
  for (const auto& o : r.rules) rules.push_back(ToJson(o));
  nlohmann::json classes = nlohmann::json::array();
  for (const auto& c : r.classes) {
    classes.push_back({{"class", c.cls},
                       {"name", c.name},
                       {"total", c.total},
                       {"classified", c.classified},
                       {"correct", c.correct},
                       {"precision", c.precision},
                       {"weight", c.weight}});
  }
  return {{"split", SplitRoleName(r.split)},
          {"cases", r.cases},
          {"classified", r.classified},
          {"refused", r.refused},
          {"weighted_precision", r.weighted_precision},
          {"rules", rules},
          {"classes", classes}};
}

nlohmann::json ToJson(const EvaluationReport& r) {
  nlohmann::json splits = nlohmann::json::array();
  for (const auto& s : r.splits) splits.push_back(ToJson(s));
  nlohmann::json refs = nlohmann::json::array();
  for (const auto& [name, v] : r.reference_rows) {
    refs.push_back({{"name", name}, {"precision", v}});
  }
  return {{"fold", r.fold},
          {"splits", splits},
          {"reference_rows", refs},
          {"config", r.config}};
}

nlohmann::json ToJson(const CvReport& r) {
  nlohmann::json folds = nlohmann::json::array();
  for (const auto& f : r.folds) folds.push_back(ToJson(f));
  return {{"folds", folds},
          {"average_test_precision", r.average_test_precision},
          {"class_hit_folds", r.class_hit_folds},
          {"config", r.config}};
}

std::string RenderRuleTable(const EvaluationReport& report) {
  std::ostringstream out;
  out << Pad("Rule", 14) << Pad("Weight", 10) << Pad("Precision", 11)
      << Pad("Recall", 10) << Pad("Classified", 12) << "Weighted precision\n";
  for (const auto& s : report.splits) {
    out << SplitRoleName(s.split) << "\n";
    for (const auto& o : s.rules) {
      if (!o.terminal) continue;
      const double w = s.classified ? static_cast<double>(o.classified) /
                                          static_cast<double>(s.classified)
                                    : 0.0;
      out << Pad(o.name, 14) << Pad(Percent(w), 10)
          << Pad(Percent(o.precision), 11) << Pad(Percent(o.recall), 10)
          << Pad(std::to_string(o.classified), 12)
          << Percent(w * std::max(0.0, o.precision)) << "\n";
    }
    out << Pad("All", 14) << Pad("100.00%", 10) << Pad("", 11) << Pad("", 10)
        << Pad(std::to_string(s.classified), 12)
        << Percent(s.weighted_precision) << "\n";
  }
  return out.str();
}

std::string RenderClassTable(const EvaluationReport& report) {
  std::ostringstream out;
  out << Pad("Class", 14) << Pad("Weight", 10) << Pad("Precision", 11)
      << Pad("Classified", 12) << "Weighted precision\n";
  for (const auto& s : report.splits) {
    out << SplitRoleName(s.split) << "\n";
    for (const auto& c : s.classes) {
      out << Pad(c.name, 14) << Pad(Percent(c.weight), 10)
          << Pad(Percent(c.precision), 11)
          << Pad(std::to_string(c.classified), 12)
          << Percent(c.weight * c.precision) << "\n";
    }
    out << Pad("All", 14) << Pad("100.00%", 10) << Pad("", 11)
        << Pad(std::to_string(s.classified), 12)
        << Percent(s.weighted_precision) << "\n";
  }
  if (!report.reference_rows.empty()) {
    out << "reference results (recorded, not recomputed)\n";
    for (const auto& [name, v] : report.reference_rows) {
      out << "  " << Pad(name, 54) << Percent(v) << "\n";
    }
  }
  return out.str();
}

std::string RenderCvTable(const CvReport& report) {
  std::ostringstream out;
  out << Pad("Fold", 8) << Pad("Training", 11) << Pad("Validation", 12)
      << Pad("Testing", 10) << "Refused (test)\n";
  for (const auto& f : report.folds) {
    const auto* tr = f.Find(SplitRole::kTrain);
    const auto* va = f.Find(SplitRole::kValidation);
    const auto* te = f.Find(SplitRole::kTest);
    out << Pad(std::to_string(f.fold + 1), 8)
        << Pad(tr ? Percent(tr->weighted_precision) : "-", 11)
        << Pad(va ? Percent(va->weighted_precision) : "-", 12)
        << Pad(te ? Percent(te->weighted_precision) : "-", 10)
        << (te ? std::to_string(te->refused) : "-") << "\n";
  }
  out << Pad("Average", 8) << Pad("", 11) << Pad("", 12)
      << Percent(report.average_test_precision) << "\n";
  out << "folds with a correct test case per class:";
  for (std::size_t c = 0; c < report.class_hit_folds.size(); ++c) {
    out << " " << report.class_hit_folds[c];
  }
  out << "\n";
  return out.str();
}

}  // namespace ilcml
