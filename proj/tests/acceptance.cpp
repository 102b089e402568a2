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

// Acceptance suite: runs criteria 1-12 and prints PASS/FAIL for each.
// Exit status is nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "ilcml/evaluation.hpp"
#include "ilcml/explain.hpp"
#include "ilcml/reproduce.hpp"
#include "ilcml/session.hpp"
#include "ilcml/tree.hpp"
#include "test_util.hpp"

namespace ilcml {
namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Criterion = std::function<Outcome()>;

Outcome FromReport(const ReproReport& r) {
  std::ostringstream out;
  for (const auto& c : r.checks) {
    out << "\n      " << (c.pass ? "ok   " : "FAIL ") << c.name << ": "
        << c.actual;
    if (c.at_least) {
      out << " (need >= " << c.expected - c.tolerance << ", reference "
          << c.expected << ")";
    } else {
      out << " (expected " << c.expected << " +/- " << c.tolerance << ")";
    }
  }
  return {r.pass(), out.str()};
}

Outcome Ingestion() {
  const Dataset wbc = testing::Wbc();
  const std::size_t benign = wbc.classes[0].count;
  const std::size_t malignant = wbc.classes[1].count;
  std::ostringstream d;
  d << wbc.size() << " cases, " << benign << " benign / " << malignant
    << " malignant";
  return {wbc.size() == 683 && benign == 444 && malignant == 239, d.str()};
}

Outcome MappingFidelity() {
  ProjectionSpec s;
  s.mode = ProjectionMode::kIlc2FullyDynamic;
  s.assignment = AxisAssignment::Zip(10);
  const std::vector<double> truth{5, 1, 1, 1, 2, 1, 3, 1, 1, 1};
  const std::vector<double> drawn{5, 1, 6, 2, 8, 3, 11, 4, 12, 5};
  const Polyline2D p = Project(truth, s);
  bool forward = p.nodes.size() == 5;
  for (std::size_t k = 0; forward && k < 5; ++k) {
    forward = p.nodes[k].x == drawn[2 * k] && p.nodes[k].y == drawn[2 * k + 1];
  }
  Polyline2D q;
  for (std::size_t k = 0; k < 5; ++k) {
    q.nodes.push_back({drawn[2 * k], drawn[2 * k + 1]});
  }
  const bool backward = Invert(q, s) == truth;
  return {forward && backward, std::string("forward ") +
                                   (forward ? "exact" : "differs") +
                                   ", inverse " + (backward ? "exact" : "differs")};
}

Outcome Losslessness() {
  const ProjectionMode modes[] = {
      ProjectionMode::kStaticSequential,   ProjectionMode::kStaticCollocated,
      ProjectionMode::kStaticGeneric,      ProjectionMode::kIlc2Static,
      ProjectionMode::kIlc2PartialDynamic, ProjectionMode::kIlc2FullyDynamic,
      ProjectionMode::kIlc2WeightedDynamic};
  Rng rng(20261019);
  double worst = 0.0;
  for (auto mode : modes) {
    ProjectionSpec s;
    s.mode = mode;
    s.assignment = AxisAssignment::Zip(10);
    if (mode == ProjectionMode::kIlc2WeightedDynamic) {
      for (int i = 0; i < 10; ++i) s.weights.push_back(rng.Uniform(0.2, 3.0));
    }
    if (mode == ProjectionMode::kStaticGeneric) {
      for (std::size_t c = 0; c < s.assignment.coordinate_count(); ++c) {
        s.coordinate_offsets.push_back(rng.Uniform(-50, 50));
      }
    }
    s.Validate();
    for (int t = 0; t < 1000; ++t) {
      std::vector<double> v(10);
      for (auto& x : v) x = rng.Uniform(-100, 100);
      const auto back = Invert(Project(v, s), s);
      for (std::size_t i = 0; i < 10; ++i) {
        worst = std::max(worst, std::fabs(back[i] - v[i]));
      }
    }
  }
  std::ostringstream d;
  d << "7 modes x 1000 cases, worst error " << worst;
  return {worst <= 1e-9, d.str()};
}

Outcome WeightedPrecisionValue() {
  RuleOutcome a, b;
  a.precision = 0.9;
  a.classified = 100;
  a.correct = 90;
  b.precision = 0.8;
  b.classified = 200;
  b.correct = 160;
  const double p = 100.0 * WeightedPrecision({a, b});
  std::ostringstream d;
  d << p << "%";
  return {std::fabs(p - 83.33) <= 0.01, d.str()};
}

Outcome JoinEquivalence() {
  std::size_t discrepancies = 0, cases = 0;
  const Dataset wbc = testing::Wbc();
  for (std::size_t count : {4u, 7u, 13u}) {
    const RuleSet rs = WbcReferenceRules(wbc, count);
    const auto polylines = ProjectCases(wbc, rs.projection);
    const RuleSet joined = JoinRules(rs, polylines);
    RuleEvaluator a(rs, polylines), b(joined, polylines);
    for (std::size_t i = 0; i < polylines.size(); ++i, ++cases) {
      if (a.Decide(i).predicted != b.Decide(i).predicted) ++discrepancies;
    }
  }
  Rng rng(7);
  ProjectionSpec two;
  two.assignment = AxisAssignment::Zip(2);
  for (int t = 0; t < 200; ++t) {
    auto g = testing::RandomGridInstance(rng);
    g.grid.coverage_fraction = 0.01;
    const RuleSet rs = BcFit(g.polylines, g.labels, g.classes, two, g.grid, {});
    const RuleSet joined = JoinRules(rs, g.polylines);
    RuleEvaluator a(rs, g.polylines), b(joined, g.polylines);
    for (std::size_t i = 0; i < g.polylines.size(); ++i, ++cases) {
      if (a.Decide(i).predicted != b.Decide(i).predicted) ++discrepancies;
    }
  }
  std::ostringstream d;
  d << discrepancies << " discrepancies over " << cases << " training decisions";
  return {discrepancies == 0, d.str()};
}

Outcome GridOracle() {
  Rng rng(8);
  int agree = 0;
  for (int t = 0; t < 50; ++t) {
    const auto g = testing::RandomGridInstance(rng);
    const auto brute = testing::BruteForceGrid(g);
    const auto got =
        GridSearch(g.polylines, g.labels, g.classes, g.grid, g.remaining);
    if (brute.empty() ? got.empty()
                      : (!got.empty() && got[0].rect == brute[0].rect &&
                         got[0].stats.counts == brute[0].counts)) {
      ++agree;
    }
  }
  return {agree == 50, std::to_string(agree) + "/50 instances agree"};
}

Outcome Sandwiches() {
  const Dataset wbc = testing::Wbc();
  const ProjectionSpec spec = WbcLinkProjection();
  const DecisionTree tree = InduceTree(wbc, TreeConfig{});
  const Predictor black_box = [&tree](const std::vector<double>& v) {
    return tree.Predict(v);
  };
  std::size_t explained = 0, violations = 0, boxes = 0;
  for (std::size_t i = 0; i < wbc.size() && explained < 100; i += 3) {
    ExplainRequest req;
    req.point = wbc.cases[i].values;
    req.predictor = black_box;
    req.max_boxes = 3;
    const Explanation e = ExplainLocal(req, wbc, spec);
    if (e.verdict != Verdict::kExplained) continue;
    ++explained;
    for (const auto& b : e.boxes) {
      ++boxes;
      std::vector<const Sandwich*> all{&b.artificial};
      if (b.training) all.push_back(&*b.training);
      for (const Sandwich* s : all) {
        bool ok = true;
        for (std::size_t a = 0; a < req.point.size(); ++a) {
          ok = ok && s->low[a] <= req.point[a] && req.point[a] <= s->high[a];
        }
        ok = ok &&
             testing::OracleMember(Project(s->low, spec), b.rect,
                                   Membership::kEdgeCross) &&
             testing::OracleMember(Project(s->high, spec), b.rect,
                                   Membership::kEdgeCross);
        if (!ok) ++violations;
      }
    }
  }
  // Checkerboard: no pure box exists at any tried resolution.
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (int i = 0; i <= 100; ++i) {
    for (int j = 0; j <= 100; ++j) {
      rows.push_back({0.1 * i, 0.1 * j});
      labels.push_back((i + j) % 2);
    }
  }
  const Dataset board = testing::MakeDataset(rows, labels, 2);
  ProjectionSpec two;
  two.assignment = AxisAssignment::Zip(2);
  ExplainRequest req;
  req.point = {5.03, 4.96};
  req.predictor = [](const std::vector<double>& v) {
    return static_cast<int>(std::llround(v[0] * 10) + std::llround(v[1] * 10)) %
           2;
  };
  req.floor = 0.25;
  const Explanation adversarial = ExplainLocal(req, board, two);
  const bool refused =
      adversarial.verdict == Verdict::kNoBoxFound && adversarial.boxes.empty();
  std::ostringstream d;
  d << explained << " points explained, " << boxes << " boxes, " << violations
    << " sandwich violations; checkerboard "
    << (refused ? "no_box_found" : "returned a box");
  return {explained >= 100 && violations == 0 && refused, d.str()};
}

Outcome Replay() {
  GridParams grid;
  grid.membership = Membership::kEdgeCross;
  Session s("acceptance", testing::Wbc(), WbcLinkProjection(), grid);
  const auto boxes = WbcReferenceBoxes();
  const int cls[] = {0, 1, 0, 1, 1, 0, 1};
  std::size_t actions = 0;
  for (std::size_t i = 0; i < 7; ++i) {
    Rect b = boxes[i];
    if (b.y1 > b.y2) std::swap(b.y1, b.y2);
    s.Accept(b, Membership::kEdgeCross, cls[i]);
    ++actions;
    if (i == 3) {
      s.Undo();
      s.Accept(b, Membership::kEdgeCross, cls[i]);
      actions += 2;
    }
  }
  const auto top = s.Candidates(1);
  if (!top.empty()) {
    s.Accept(top[0].rect, s.grid().membership);
    ++actions;
  }
  s.Prune(17, PruneMode::kRefuse);
  ++actions;
  const std::string original = RuleFileText(s.rules());
  const auto replayed = Session::Replay(s.LogText());
  const bool same = RuleFileText(replayed->rules()) == original;
  std::ostringstream d;
  d << actions << " actions replayed, rule file "
    << (same ? "byte-identical" : "differs") << " (" << original.size()
    << " bytes)";
  return {same && actions >= 5, d.str()};
}

}  // namespace
}  // namespace ilcml

int main() {
  using ilcml::Outcome;
  const std::string data = ILCML_DATA_DIR;
  struct Item {
    int number;
    const char* title;
    ilcml::Criterion run;
  };
  const std::vector<Item> items = {
      {1, "WBC ingestion", ilcml::Ingestion},
      {2, "mapping fidelity of the worked example", ilcml::MappingFidelity},
      {3, "lossless round trip in every mode", ilcml::Losslessness},
      {4, "weighted precision unit value", ilcml::WeightedPrecisionValue},
      {5, "WBC rules from reference boxes",
       [&] { return ilcml::FromReport(ilcml::Reproduce("wbc-table2", data)); }},
      {6, "joined WBC rules",
       [&] { return ilcml::FromReport(ilcml::Reproduce("wbc-table4", data)); }},
      {7, "join equivalence", ilcml::JoinEquivalence},
      {8, "grid search equals brute force", ilcml::GridOracle},
      {9, "PBC divide and conquer 10-fold",
       [&] { return ilcml::FromReport(ilcml::Reproduce("pbc-table12", data)); }},
      {10, "PBC baseline tree",
       [&] { return ilcml::FromReport(ilcml::Reproduce("pbc-table14", data)); }},
      {11, "explanation sandwiches", ilcml::Sandwiches},
      {12, "session replay", ilcml::Replay},
  };
  int failed = 0;
  for (const auto& item : items) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = item.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - start)
                            .count();
    if (!o.pass) ++failed;
    std::printf("criterion %2d %s  %s (%.1f s): %s\n", item.number,
                o.pass ? "PASS" : "FAIL", item.title, secs, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n",
              static_cast<int>(items.size()) - failed, items.size());
  return failed == 0 ? 0 : 1;
}
