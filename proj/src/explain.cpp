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

#include "ilcml/explain.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <tuple>

#include "ilcml/common.hpp"

namespace ilcml {
namespace {

Rect Bounds(const Polyline2D& p) {
  Rect r{kInf, -kInf, kInf, -kInf};
  for (const auto& n : p.nodes) {
    r.x1 = std::min(r.x1, n.x);
    r.x2 = std::max(r.x2, n.x);
    r.y1 = std::min(r.y1, n.y);
    r.y2 = std::max(r.y2, n.y);
  }
  return r;
}

bool Overlaps(const Rect& a, const Rect& b) {
  return a.x1 <= b.x2 && b.x1 <= a.x2 && a.y1 <= b.y2 && b.y1 <= a.y2;
}

bool InBox(const std::vector<double>& v, const Rect& box,
           const ProjectionSpec& spec) {
  return IsMember(Project(v, spec), box, Membership::kEdgeCross);
}

// Largest t in [0,1] found by bisection with c + t(target - c) in the box.
std::vector<double> Toward(const std::vector<double>& c,
                           const std::vector<double>& target, const Rect& box,
                           const ProjectionSpec& spec) {
  auto at = [&](double t) {
    std::vector<double> v(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
      v[i] = c[i] + t * (target[i] - c[i]);
    }
    return v;
  };
  if (InBox(target, box, spec)) return target;
  double ok = 0.0, bad = 1.0;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (ok + bad);
    if (InBox(at(mid), box, spec)) {
      ok = mid;
    } else {
      bad = mid;
    }
  }
  auto v = at(ok);
  return InBox(v, box, spec) ? v : c;
}

std::string Num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

bool CheckCondition(const ChainCondition& c, Point2 p) {
  const double v = c.axis == 'x' ? p.x : p.y;
  switch (c.op) {
    case ChainCondition::Op::kLe:
      return v <= c.value;
    case ChainCondition::Op::kGe:
      return v >= c.value;
    case ChainCondition::Op::kEq:
      return v == c.value;
  }
  return false;
}

}  // namespace

Predictor RuleSetPredictor(const RuleSet& ruleset) {
  return [&ruleset](const std::vector<double>& v) {
    return ClassifyValues(ruleset, v).predicted;
  };
}

void ExplainRequest::Validate() const {
  if (!predictor) throw InvalidArgument("explanation needs a predictor");
  if (!(purity > 0) || purity > 1) {
    throw InvalidArgument("purity threshold must lie in (0,1]");
  }
  if (!(resolution > 0)) throw InvalidArgument("resolution must be positive");
  if (!(decrement > 0) || !(decrement < resolution)) {
    throw InvalidArgument("decrement must lie in (0, resolution)");
  }
  if (floor < 0) throw InvalidArgument("resolution floor must be >= 0");
  if (max_span < 1) throw InvalidArgument("max_span must be >= 1");
}

Sandwich ArtificialSandwich(const std::vector<double>& c, const Rect& box,
                            const ProjectionSpec& spec,
                            const std::vector<AttributeMeta>& attributes) {
  const auto& as = spec.assignment;
  const std::size_t n = as.dimension;
  const Polyline2D pc = Project(c, spec);
  std::vector<double> lo(n), hi(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double mn = i < attributes.size() ? attributes[i].observed_min : c[i];
    const double mx = i < attributes.size() ? attributes[i].observed_max : c[i];
    lo[i] = std::min(mn, c[i]);
    hi[i] = std::max(mx, c[i]);
  }
  std::vector<bool> constrained(n, false);
  Sandwich s{c, c, std::nullopt, std::nullopt};
  if (IsStatic(spec.mode)) {
    const auto coord = as.CoordinateIndex();
    for (std::size_t k = 0; k < pc.nodes.size(); ++k) {
      if (!box.Contains(pc.nodes[k])) continue;
      const std::size_t h = as.Source(as.pairing[k].horizontal);
      const std::size_t v = as.Source(as.pairing[k].vertical);
      const double off = spec.CoordinateOffset(coord[k]);
      lo[h] = std::max(lo[h], box.x1 - off);
      hi[h] = std::min(hi[h], box.x2 - off);
      lo[v] = std::max(lo[v], box.y1);
      hi[v] = std::min(hi[v], box.y2);
      constrained[h] = constrained[v] = true;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (!constrained[i]) continue;
      s.low[i] = std::min(c[i], lo[i]);
      s.high[i] = std::max(c[i], hi[i]);
    }
    s.low = Toward(c, s.low, box, spec);
    s.high = Toward(c, s.high, box, spec);
    return s;
  }
  // Dynamic modes: attributes feeding a node inside the box, pushed one at a
  // time as far as membership allows.
  const bool sum_y = spec.mode != ProjectionMode::kIlc2PartialDynamic;
  for (std::size_t k = 0; k < pc.nodes.size(); ++k) {
    if (!box.Contains(pc.nodes[k])) continue;
    for (std::size_t j = 0; j <= k; ++j) {
      constrained[as.Source(as.pairing[j].horizontal)] = true;
      if (sum_y || j == k) constrained[as.Source(as.pairing[j].vertical)] = true;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!constrained[i]) continue;
    auto down = s.low;
    down[i] = lo[i];
    s.low = Toward(s.low, down, box, spec);
    auto up = s.high;
    up[i] = hi[i];
    s.high = Toward(s.high, up, box, spec);
  }
  return s;
}

Explanation ExplainLocal(const ExplainRequest& req, const Dataset& train,
                         const ProjectionSpec& spec) {
  req.Validate();
  if (req.point.size() != spec.assignment.dimension) {
    throw InvalidArgument("point dimension does not match the projection");
  }
  Explanation out;
  out.point = req.point;
  out.predicted = req.predictor(req.point);

  const auto polylines = ProjectCases(train, spec);
  const auto labels = train.labels();
  const std::size_t k = train.class_count();
  const Polyline2D pc = Project(req.point, spec);
  std::vector<Rect> bbox(polylines.size());
  Rect area = Bounds(pc);
  for (std::size_t i = 0; i < polylines.size(); ++i) {
    bbox[i] = Bounds(polylines[i]);
    area.x1 = std::min(area.x1, bbox[i].x1);
    area.y1 = std::min(area.y1, bbox[i].y1);
  }
  double floor = req.floor;
  if (floor <= 0) {
    floor = kInf;
    for (const auto& a : train.attributes) {
      if (a.quantum > 0) floor = std::min(floor, a.quantum);
    }
    if (!std::isfinite(floor)) floor = 1e-3;
  }

  for (double r = req.resolution; r >= floor - 1e-12; r -= req.decrement) {
    out.resolutions_tried.push_back(r);
    const double x0 = area.x1, y0 = area.y1;
    auto cell = [&](long i, long j) {
      return Rect{x0 + i * r, x0 + (i + 1) * r, y0 + j * r, y0 + (j + 1) * r};
    };
    std::set<std::pair<long, long>> touched;
    auto scan = [&](Point2 p, Point2 q) {
      const long i1 = static_cast<long>(std::floor((std::min(p.x, q.x) - x0) / r)) - 1;
      const long i2 = static_cast<long>(std::floor((std::max(p.x, q.x) - x0) / r)) + 1;
      const long j1 = static_cast<long>(std::floor((std::min(p.y, q.y) - y0) / r)) - 1;
      const long j2 = static_cast<long>(std::floor((std::max(p.y, q.y) - y0) / r)) + 1;
      for (long i = i1; i <= i2; ++i) {
        for (long j = j1; j <= j2; ++j) {
          if (cell(i, j).IntersectsSegment(p, q)) touched.insert({i, j});
        }
      }
    };
    for (std::size_t m = 0; m < pc.nodes.size(); ++m) {
      scan(pc.nodes[m], m + 1 < pc.nodes.size() ? pc.nodes[m + 1] : pc.nodes[m]);
    }
    std::set<std::tuple<long, long, long, long>> rects;
    const long span = static_cast<long>(req.max_span);
    for (const auto& [ci, cj] : touched) {
      for (long w = 1; w <= span; ++w)
        for (long h = 1; h <= span; ++h)
          for (long a = 0; a < w; ++a)
            for (long b = 0; b < h; ++b) {
              rects.insert({ci - a, cj - b, w, h});
            }
    }
    std::vector<ExplainedBox> found;
    for (const auto& [i, j, w, h] : rects) {
      const Rect rect{x0 + i * r, x0 + (i + w) * r, y0 + j * r,
                      y0 + (j + h) * r};
      if (!IsMember(pc, rect, Membership::kEdgeCross)) continue;
      std::vector<std::size_t> counts(k, 0);
      for (std::size_t t = 0; t < polylines.size(); ++t) {
        if (!Overlaps(bbox[t], rect)) continue;
        if (IsMember(polylines[t], rect, Membership::kEdgeCross)) {
          counts[labels[t]]++;
        }
      }
      BoxStats st = MakeStats(std::move(counts));
      if (st.total < req.min_support || st.dominant != out.predicted ||
          st.purity_fraction + 1e-12 < req.purity) {
        continue;
      }
      found.push_back({rect, std::move(st), std::nullopt, {}});
    }
    if (found.empty()) continue;
    std::sort(found.begin(), found.end(),
              [](const ExplainedBox& a, const ExplainedBox& b) {
                if (a.stats.purity_fraction != b.stats.purity_fraction) {
                  return a.stats.purity_fraction > b.stats.purity_fraction;
                }
                if (a.rect.area() != b.rect.area()) {
                  return a.rect.area() < b.rect.area();
                }
                return std::tie(a.rect.x1, a.rect.y1) <
                       std::tie(b.rect.x1, b.rect.y1);
              });
    if (found.size() > req.max_boxes) found.resize(req.max_boxes);
    const auto& c = req.point;
    for (auto& fb : found) {
      std::optional<std::size_t> low, high;
      double low_sum = -kInf, high_sum = kInf;
      for (std::size_t t = 0; t < polylines.size(); ++t) {
        if (labels[t] != out.predicted || !Overlaps(bbox[t], fb.rect) ||
            !IsMember(polylines[t], fb.rect, Membership::kEdgeCross)) {
          continue;
        }
        const auto& v = train.cases[t].values;
        bool le = true, ge = true;
        double sum = 0.0;
        for (std::size_t a = 0; a < c.size(); ++a) {
          le = le && v[a] <= c[a];
          ge = ge && v[a] >= c[a];
          sum += v[a];
        }
        if (le && sum > low_sum) {
          low_sum = sum;
          low = t;
        }
        if (ge && sum < high_sum) {
          high_sum = sum;
          high = t;
        }
      }
      if (low && high) {
        fb.training = Sandwich{train.cases[*low].values,
                               train.cases[*high].values, low, high};
      }
      fb.artificial = ArtificialSandwich(c, fb.rect, spec, train.attributes);
    }
    out.boxes = std::move(found);
    out.resolution = r;
    out.verdict = Verdict::kExplained;
    return out;
  }
  return out;
}

std::vector<TreeChain> BoxesToTreeForm(const RuleSet& rs, const Rule& rule) {
  const auto& spec = rs.projection;
  if (!IsStatic(spec.mode)) {
    throw InvalidArgument(
        "rule uses dynamic mode " + ModeName(spec.mode) +
        ": box coordinates are functions of several original attributes, so "
        "a box is not an interval condition on attributes");
  }
  const auto& as = spec.assignment;
  const auto coord = as.CoordinateIndex();
  std::vector<TreeChain> out;
  for (std::size_t id : rule.positive) {
    const Rect& b = rs.box(id).rect;
    TreeChain ch;
    ch.box = id;
    using Op = ChainCondition::Op;
    auto add_axis = [&](char axis, double lo, double hi) {
      if (lo == hi) {
        ch.conditions.push_back({axis, Op::kEq, lo});
      } else {
        ch.conditions.push_back({axis, Op::kGe, lo});
        ch.conditions.push_back({axis, Op::kLe, hi});
      }
    };
    add_axis('x', b.x1, b.x2);
    add_axis('y', b.y1, b.y2);
    std::ostringstream text;
    for (std::size_t i = 0; i < ch.conditions.size(); ++i) {
      const auto& c = ch.conditions[i];
      if (i) text << " & ";
      switch (c.op) {
        case Op::kGe:
          text << Num(c.value) << " ≤ " << c.axis;
          break;
        case Op::kLe:
          text << c.axis << " ≤ " << Num(c.value);
          break;
        case Op::kEq:
          text << c.axis << " = " << Num(c.value);
          break;
      }
    }
    ch.text = text.str();
    for (std::size_t k = 0; k < as.pairing.size(); ++k) {
      const double off = spec.CoordinateOffset(coord[k]);
      double next = kInf;
      for (std::size_t m = k + 1; m < as.pairing.size(); ++m) {
        if (coord[m] != coord[k]) {
          next = spec.CoordinateOffset(coord[m]);
          break;
        }
      }
      if (off <= b.x2 && (next > b.x1 || next <= off)) {
        ch.pairs.emplace_back(k, as.Source(as.pairing[k].horizontal),
                              as.Source(as.pairing[k].vertical), off);
      }
    }
    out.push_back(std::move(ch));
  }
  return out;
}

bool ChainHolds(const TreeChain& chain, const Polyline2D& polyline) {
  for (const auto& p : polyline.nodes) {
    bool all = true;
    for (const auto& c : chain.conditions) {
      if (!CheckCondition(c, p)) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

nlohmann::json ToJson(const TreeChain& c) {
  nlohmann::json conds = nlohmann::json::array();
  for (const auto& k : c.conditions) {
    const char* op = k.op == ChainCondition::Op::kLe   ? "<="
                     : k.op == ChainCondition::Op::kGe ? ">="
                                                       : "==";
    conds.push_back({{"axis", std::string(1, k.axis)},
                     {"op", op},
                     {"value", k.value}});
  }
  nlohmann::json pairs = nlohmann::json::array();
  for (const auto& [k, h, v, off] : c.pairs) {
    pairs.push_back(
        {{"pair", k}, {"horizontal", h}, {"vertical", v}, {"offset", off}});
  }
  return {{"box", c.box}, {"conditions", conds}, {"pairs", pairs},
          {"text", c.text}};
}

nlohmann::json ToJson(const Explanation& e, const ProjectionSpec& spec) {
  auto poly = [&](const std::vector<double>& v) {
    return ToJson(Project(v, spec));
  };
  auto sandwich = [&](const Sandwich& s) {
    nlohmann::json j{{"low", s.low},
                     {"high", s.high},
                     {"low_polyline", poly(s.low)},
                     {"high_polyline", poly(s.high)}};
    if (s.low_case) j["low_case"] = *s.low_case;
    if (s.high_case) j["high_case"] = *s.high_case;
    return j;
  };
  nlohmann::json boxes = nlohmann::json::array();
  for (const auto& b : e.boxes) {
    nlohmann::json jb{{"rect", ToJson(b.rect)},
                      {"counts", b.stats.counts},
                      {"purity", b.stats.purity_fraction},
                      {"artificial", sandwich(b.artificial)}};
    jb["training"] = b.training ? sandwich(*b.training) : nlohmann::json();
    boxes.push_back(std::move(jb));
  }
  return {{"verdict",
           e.verdict == Verdict::kExplained ? "explained" : "no_box_found"},
          {"point", e.point},
          {"point_polyline", poly(e.point)},
          {"predicted", e.predicted},
          {"resolution", e.resolution},
          {"resolutions_tried", e.resolutions_tried},
          {"membership", MembershipName(e.membership)},
          {"classifier_membership", MembershipName(e.classifier_membership)},
          {"boxes", boxes}};
}

std::string ExplanationSvg(const Explanation& e,
                           const std::vector<Polyline2D>& training,
                           const std::vector<int>& labels,
                           const ProjectionSpec& spec) {
  Rect view{kInf, -kInf, kInf, -kInf};
  auto grow = [&](const Polyline2D& p) {
    const Rect b = Bounds(p);
    view = {std::min(view.x1, b.x1), std::max(view.x2, b.x2),
            std::min(view.y1, b.y1), std::max(view.y2, b.y2)};
  };
  for (const auto& p : training) grow(p);
  const Polyline2D pc = Project(e.point, spec);
  grow(pc);
  if (!std::isfinite(view.x1)) view = {0, 1, 0, 1};
  const double w = 900, h = 500, pad = 20;
  const double sx = (w - 2 * pad) / std::max(1e-9, view.x2 - view.x1);
  const double sy = (h - 2 * pad) / std::max(1e-9, view.y2 - view.y1);
  auto X = [&](double x) { return pad + (x - view.x1) * sx; };
  auto Y = [&](double y) { return h - pad - (y - view.y1) * sy; };
  static const char* kPalette[] = {"#2e8b57", "#c0392b", "#2c7fb8", "#8e44ad",
                                   "#d35400"};
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
      << "\" height=\"" << h << "\">\n";
  auto path = [&](const Polyline2D& p, const std::string& style) {
    out << "<polyline fill=\"none\" " << style << " points=\"";
    for (const auto& n : p.nodes) out << X(n.x) << "," << Y(n.y) << " ";
    out << "\"/>\n";
  };
  for (std::size_t i = 0; i < training.size(); ++i) {
    const int c = i < labels.size() ? labels[i] : 0;
    path(training[i], std::string("stroke=\"") + kPalette[c % 5] +
                          "\" stroke-opacity=\"0.15\" stroke-width=\"1\"");
  }
  for (const auto& b : e.boxes) {
    out << "<rect x=\"" << X(b.rect.x1) << "\" y=\"" << Y(b.rect.y2)
        << "\" width=\"" << (b.rect.x2 - b.rect.x1) * sx << "\" height=\""
        << (b.rect.y2 - b.rect.y1) * sy
        << "\" fill=\"none\" stroke=\"#000\" stroke-dasharray=\"4 2\"/>\n";
  }
  if (!e.boxes.empty()) {
    const auto& b = e.boxes.front();
    if (b.training) {
      path(Project(b.training->low, spec),
           "stroke=\"#1f4e79\" stroke-width=\"2\"");
      path(Project(b.training->high, spec),
           "stroke=\"#1f4e79\" stroke-width=\"2\"");
    }
    path(Project(b.artificial.low, spec),
         "stroke=\"#e67e22\" stroke-width=\"2\" stroke-dasharray=\"6 3\"");
    path(Project(b.artificial.high, spec),
         "stroke=\"#e67e22\" stroke-width=\"2\" stroke-dasharray=\"6 3\"");
  }
  path(pc, "stroke=\"#000\" stroke-width=\"3\"");
  out << "</svg>\n";
  return out.str();
}

ExplainRequest ExplainRequestFromJson(const nlohmann::json& j) {
  ExplainRequest req;
  req.point = j.at("point").get<std::vector<double>>();
  req.purity = j.value("purity", req.purity);
  req.resolution = j.value("resolution", req.resolution);
  req.decrement = j.value("decrement", req.decrement);
  req.floor = j.value("floor", req.floor);
  req.max_span = j.value("max_span", req.max_span);
  req.max_boxes = j.value("max_boxes", req.max_boxes);
  req.min_support = j.value("min_support", req.min_support);
  return req;
}

}  // namespace ilcml
