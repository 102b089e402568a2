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

#include "ilcml/linear.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "ilcml/box.hpp"

namespace ilcml {
namespace {

Point2 SelectNode(const Polyline2D& p, int node) {
  if (p.nodes.empty()) throw InvalidArgument("empty polyline");
  if (node < 0) return p.nodes.back();
  if (node >= static_cast<int>(p.nodes.size())) {
    throw InvalidArgument("node selector " + std::to_string(node) +
                          " beyond the polyline's " +
                          std::to_string(p.nodes.size()) + " nodes");
  }
  return p.nodes[static_cast<std::size_t>(node)];
}

struct Quality {
  bool feasible = false;
  double precision = -1.0;
  double recall = 0.0;
  double accuracy = 0.0;
  std::size_t predicted = 0;
};

bool Better(const Quality& a, const Quality& b, LinearForm form) {
  if (form == LinearForm::kTwoSided) return a.accuracy > b.accuracy;
  if (a.feasible != b.feasible) return a.feasible;
  if (a.precision != b.precision) return a.precision > b.precision;
  return a.recall > b.recall;
}

struct TermFit {
  double angle = 0.0;
  double threshold = 0.0;
  Quality q;
};

class TermSearch {
 public:
  TermSearch(const std::vector<Point2>& pts, const std::vector<char>& pos,
             const std::vector<char>& active, std::size_t positives_total,
             LinearForm form, double min_recall)
      : pts_(pts), pos_(pos), active_(active), p_total_(positives_total),
        form_(form), min_recall_(min_recall) {
    Rect b{kInf, -kInf, kInf, -kInf};
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (!active[i]) continue;
      b.x1 = std::min(b.x1, pts[i].x);
      b.x2 = std::max(b.x2, pts[i].x);
      b.y1 = std::min(b.y1, pts[i].y);
      b.y2 = std::max(b.y2, pts[i].y);
    }
    if (!std::isfinite(b.x1)) b = {0, 1, 0, 1};
    center_ = {(b.x1 + b.x2) / 2, (b.y1 + b.y2) / 2};
    length_ = std::hypot(b.x2 - b.x1, b.y2 - b.y1);
    if (!(length_ > 0)) length_ = 1.0;
  }

  ProjectionLine Line(double angle, int node) const {
    const Point2 u{std::cos(angle), std::sin(angle)};
    const double h = length_ / 2;
    return {{center_.x - h * u.x, center_.y - h * u.y},
            {center_.x + h * u.x, center_.y + h * u.y},
            node};
  }

  Quality At(double angle, double t) const {
    const auto line = Line(angle, -1);
    std::size_t tp = 0, fp = 0, tn = 0, n = 0;
    for (std::size_t i = 0; i < pts_.size(); ++i) {
      if (!active_[i]) continue;
      ++n;
      const bool up = ScorePoint(pts_[i], line) > t;
      if (up && pos_[i]) ++tp;
      if (up && !pos_[i]) ++fp;
      if (!up && !pos_[i]) ++tn;
    }
    return Make(tp, fp, tn, n);
  }

  // Best threshold for a fixed angle over midpoints of sorted scores.
  TermFit Exact(double angle) const {
    const auto line = Line(angle, -1);
    std::vector<std::pair<double, char>> s;
    for (std::size_t i = 0; i < pts_.size(); ++i) {
      if (active_[i]) s.push_back({ScorePoint(pts_[i], line), pos_[i]});
    }
    std::sort(s.begin(), s.end());
    const std::size_t n = s.size();
    std::size_t tp = 0, fp = 0;
    for (const auto& [v, p] : s) (p ? tp : fp)++;
    const std::size_t neg = fp;
    TermFit best{angle, s.empty() ? 0.0 : s.front().first - 1.0,
                 Make(tp, fp, 0, n)};
    // Threshold after position j: cases j+1.. are above.
    for (std::size_t j = 0; j < n; ++j) {
      (s[j].second ? tp : fp)--;
      if (j + 1 < n && s[j + 1].first == s[j].first) continue;
      const double t =
          j + 1 < n ? s[j].first + (s[j + 1].first - s[j].first) / 2
                    : s[j].first + 1.0;
      const Quality q = Make(tp, fp, neg - fp, n);
      if (Better(q, best.q, form_)) best = {angle, t, q};
    }
    return best;
  }

  TermFit Run(const LinearSearch& search) const {
    const double two_pi = 2.0 * std::numbers::pi;
    TermFit best;
    bool have = false;
    for (std::size_t a = 0; a < search.angles; ++a) {
      const double angle = two_pi * static_cast<double>(a) /
                           static_cast<double>(search.angles);
      for (std::size_t o = 0; o < search.offsets; ++o) {
        const double t = (static_cast<double>(o) + 0.5) /
                         static_cast<double>(search.offsets);
        const Quality q = At(angle, t);
        if (!have || Better(q, best.q, form_)) {
          best = {angle, t, q};
          have = true;
        }
      }
    }
    const TermFit exact = Exact(best.angle);
    if (Better(exact.q, best.q, form_)) best = exact;
    double step = two_pi / static_cast<double>(search.angles);
    for (std::size_t r = 0; r < search.refine_rounds; ++r) {
      step /= 2;
      for (double angle : {best.angle - step, best.angle + step}) {
        const TermFit f = Exact(angle);
        if (Better(f.q, best.q, form_)) best = f;
      }
    }
    return best;
  }

 private:
  Quality Make(std::size_t tp, std::size_t fp, std::size_t tn,
               std::size_t n) const {
    Quality q;
    q.predicted = tp + fp;
    q.precision = q.predicted ? static_cast<double>(tp) /
                                    static_cast<double>(q.predicted)
                              : -1.0;
    q.recall = p_total_ ? static_cast<double>(tp) /
                              static_cast<double>(p_total_)
                        : 0.0;
    q.accuracy = n ? static_cast<double>(tp + tn) / static_cast<double>(n) : 0;
    q.feasible = q.predicted > 0 && q.recall + 1e-12 >= min_recall_;
    return q;
  }

  const std::vector<Point2>& pts_;
  const std::vector<char>& pos_;
  const std::vector<char>& active_;
  std::size_t p_total_;
  LinearForm form_;
  double min_recall_;
  Point2 center_;
  double length_ = 1.0;
};

}  // namespace

std::string LinearFormName(LinearForm f) {
  switch (f) {
    case LinearForm::kOneSided:
      return "one_sided";
    case LinearForm::kTwoSided:
      return "two_sided";
    case LinearForm::kConjunction:
      return "conjunction";
  }
  return "?";
}

LinearForm ParseLinearForm(const std::string& name) {
  if (name == "one_sided" || name == "one-sided") return LinearForm::kOneSided;
  if (name == "two_sided" || name == "two-sided") return LinearForm::kTwoSided;
  if (name == "conjunction") return LinearForm::kConjunction;
  throw InvalidArgument("unknown linear form '" + name + "'");
}

double ScorePoint(Point2 n, const ProjectionLine& line) {
  const double dx = line.p1.x - line.p0.x, dy = line.p1.y - line.p0.y;
  const double len2 = dx * dx + dy * dy;
  if (!(len2 > 0)) throw InvalidArgument("projection line has equal endpoints");
  return ((n.x - line.p0.x) * dx + (n.y - line.p0.y) * dy) / len2;
}

double Score(const std::vector<double>& values, const ProjectionSpec& spec,
             const ProjectionLine& line) {
  return ScorePoint(SelectNode(Project(values, spec), line.node), line);
}

int ClassifyLinear(const LinearModel& m, const std::vector<double>& values,
                   const ProjectionSpec& spec) {
  if (m.terms.empty()) throw InvalidArgument("linear model has no terms");
  const Polyline2D p = Project(values, spec);
  auto above = [&](const LinearTerm& t) {
    return ScorePoint(SelectNode(p, t.line.node), t.line) > t.threshold;
  };
  switch (m.form) {
    case LinearForm::kOneSided:
      return above(m.terms[0]) ? m.positive_class : kRefuse;
    case LinearForm::kTwoSided:
      return above(m.terms[0]) ? m.positive_class : m.negative_class;
    case LinearForm::kConjunction:
      if (m.terms.size() != 2) {
        throw InvalidArgument("conjunction needs two terms");
      }
      return above(m.terms[0]) && above(m.terms[1]) ? m.positive_class
                                                    : kRefuse;
  }
  return kRefuse;
}

LinearFit MeasureLinear(const LinearModel& m, const Dataset& data,
                        const ProjectionSpec& spec) {
  LinearFit f;
  f.model = m;
  std::size_t tp = 0, positives = 0, correct = 0, n = 0;
  for (const auto& c : data.cases) {
    if (c.label != m.positive_class && c.label != m.negative_class) continue;
    ++n;
    const int p = ClassifyLinear(m, c.values, spec);
    if (c.label == m.positive_class) ++positives;
    if (p == m.positive_class) {
      ++f.predicted_positive;
      if (c.label == m.positive_class) ++tp;
    }
    if (p == c.label) ++correct;
  }
  f.precision = f.predicted_positive ? static_cast<double>(tp) /
                                           static_cast<double>(f.predicted_positive)
                                     : 0.0;
  f.recall = positives ? static_cast<double>(tp) /
                             static_cast<double>(positives)
                       : 0.0;
  f.accuracy = n ? static_cast<double>(correct) / static_cast<double>(n) : 0.0;
  return f;
}

LinearFit FitLinear(const Dataset& data, const ProjectionSpec& spec,
                    LinearForm form, int positive_class, int negative_class,
                    const LinearSearch& search) {
  if (positive_class == negative_class) {
    throw InvalidArgument("positive and negative classes must differ");
  }
  if (search.angles == 0 || search.offsets == 0) {
    throw InvalidArgument("search grid must be non-empty");
  }
  std::vector<const LabeledCase*> cases;
  for (const auto& c : data.cases) {
    if (c.label == positive_class || c.label == negative_class) {
      cases.push_back(&c);
    }
  }
  std::size_t positives = 0;
  std::vector<char> pos(cases.size());
  std::vector<Polyline2D> polylines;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    pos[i] = cases[i]->label == positive_class;
    positives += pos[i];
    polylines.push_back(Project(cases[i]->values, spec));
  }
  if (positives == 0) throw InvalidArgument("no case of the positive class");

  auto nodes_for = [&](int node) {
    std::vector<Point2> pts;
    for (const auto& p : polylines) pts.push_back(SelectNode(p, node));
    return pts;
  };
  LinearModel model;
  model.form = form;
  model.positive_class = positive_class;
  model.negative_class = negative_class;
  std::vector<char> active(cases.size(), 1);

  const LinearForm term_form =
      form == LinearForm::kTwoSided ? LinearForm::kTwoSided
                                    : LinearForm::kOneSided;
  const int first = form == LinearForm::kConjunction ? search.first_node : -1;
  const auto pts1 = nodes_for(first);
  TermSearch s1(pts1, pos, active, positives, term_form, search.min_recall);
  const TermFit t1 = s1.Run(search);
  model.terms.push_back({s1.Line(t1.angle, first), t1.threshold});
  bool feasible = t1.q.feasible;

  if (form == LinearForm::kConjunction) {
    for (std::size_t i = 0; i < cases.size(); ++i) {
      active[i] = ScorePoint(pts1[i], model.terms[0].line) > t1.threshold;
    }
    const auto pts2 = nodes_for(search.second_node);
    TermSearch s2(pts2, pos, active, positives, LinearForm::kOneSided,
                  search.min_recall);
    const TermFit t2 = s2.Run(search);
    model.terms.push_back(
        {s2.Line(t2.angle, search.second_node), t2.threshold});
    feasible = t2.q.feasible;
  }
  LinearFit fit = MeasureLinear(model, data, spec);
  if (form != LinearForm::kTwoSided && !feasible) {
    throw LinearFitError("no line reaches recall " +
                             std::to_string(search.min_recall),
                         fit);
  }
  return fit;
}

nlohmann::json ToJson(const LinearSearch& s) {
  return {{"angles", s.angles},
          {"offsets", s.offsets},
          {"min_recall", s.min_recall},
          {"refine_rounds", s.refine_rounds},
          {"first_node", s.first_node},
          {"second_node", s.second_node},
          {"projection", "orthogonal"}};
}

nlohmann::json ToJson(const LinearModel& m) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : m.terms) {
    terms.push_back({{"p0", {t.line.p0.x, t.line.p0.y}},
                     {"p1", {t.line.p1.x, t.line.p1.y}},
                     {"node", t.line.node},
                     {"threshold", t.threshold}});
  }
  return {{"format", "ilcml.linear/1"},
          {"form", LinearFormName(m.form)},
          {"terms", terms},
          {"positive_class", m.positive_class},
          {"negative_class", m.negative_class}};
}

LinearModel LinearModelFromJson(const nlohmann::json& j) {
  LinearModel m;
  try {
    m.form = ParseLinearForm(j.at("form").get<std::string>());
    for (const auto& t : j.at("terms")) {
      LinearTerm term;
      term.line.p0 = {t.at("p0").at(0).get<double>(),
                      t.at("p0").at(1).get<double>()};
      term.line.p1 = {t.at("p1").at(0).get<double>(),
                      t.at("p1").at(1).get<double>()};
      term.line.node = t.value("node", -1);
      term.threshold = t.at("threshold").get<double>();
      m.terms.push_back(term);
    }
    m.positive_class = j.at("positive_class").get<int>();
    m.negative_class = j.at("negative_class").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("linear model: ") + e.what());
  }
  return m;
}

}  // namespace ilcml
