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

#ifndef ILCML_TESTS_TEST_UTIL_HPP_
#define ILCML_TESTS_TEST_UTIL_HPP_

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "ilcml/box.hpp"
#include "ilcml/common.hpp"
#include "ilcml/dataset.hpp"
#include "ilcml/projection.hpp"

namespace ilcml::testing {

inline std::string DataPath(const std::string& file) {
  return std::string(ILCML_DATA_DIR) + "/" + file;
}

inline Dataset Wbc() {
  return IngestCsv(DataPath("breast-cancer-wisconsin.data"), CsvSchema::Wbc());
}

inline Dataset Pbc() {
  return IngestCsv(DataPath("page-blocks.data"), CsvSchema::Pbc());
}

// Dataset from raw rows; attribute statistics filled by RefreshStatistics.
inline Dataset MakeDataset(const std::vector<std::vector<double>>& rows,
                           const std::vector<int>& labels,
                           std::size_t class_count) {
  Dataset d;
  const std::size_t n = rows.empty() ? 0 : rows[0].size();
  for (std::size_t a = 0; a < n; ++a) {
    AttributeMeta m;
    m.name = "a" + std::to_string(a + 1);
    m.index = a;
    d.attributes.push_back(m);
  }
  for (std::size_t c = 0; c < class_count; ++c) {
    d.classes.push_back({"c" + std::to_string(c + 1), 0});
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    d.cases.push_back({rows[i], labels[i], i + 1});
  }
  d.RefreshStatistics();
  for (auto& a : d.attributes) {
    a.scale_min = a.observed_min;
    a.scale_max = a.observed_max;
  }
  return d;
}

// Independent closed segment/rectangle test by parametric clipping.
inline bool SegmentHitsRect(Point2 p, Point2 q, const Rect& r) {
  double t0 = 0.0, t1 = 1.0;
  const double dx = q.x - p.x, dy = q.y - p.y;
  const double ps[4] = {-dx, dx, -dy, dy};
  const double qs[4] = {p.x - r.x1, r.x2 - p.x, p.y - r.y1, r.y2 - p.y};
  for (int i = 0; i < 4; ++i) {
    if (ps[i] == 0) {
      if (qs[i] < 0) return false;
      continue;
    }
    const double t = qs[i] / ps[i];
    if (ps[i] < 0) {
      t0 = std::max(t0, t);
    } else {
      t1 = std::min(t1, t);
    }
    if (t0 > t1) return false;
  }
  return true;
}

inline bool OracleMember(const Polyline2D& pl, const Rect& r, Membership m) {
  for (const auto& p : pl.nodes) {
    if (p.x >= r.x1 && p.x <= r.x2 && p.y >= r.y1 && p.y <= r.y2) return true;
  }
  if (m == Membership::kEdgeCross) {
    for (std::size_t k = 1; k < pl.nodes.size(); ++k) {
      if (SegmentHitsRect(pl.nodes[k - 1], pl.nodes[k], r)) return true;
    }
  }
  return false;
}

// Random grid-search instance: polylines with nodes on a quarter lattice.
struct GridInstance {
  std::vector<Polyline2D> polylines;
  std::vector<int> labels;
  std::size_t classes = 2;
  GridParams grid;
  std::vector<char> remaining;
};

inline GridInstance RandomGridInstance(Rng& rng) {
  GridInstance g;
  g.classes = 2 + rng.Below(2);
  const std::size_t n = 1 + rng.Below(30);
  const std::size_t nodes = 1 + rng.Below(3);
  const std::size_t cols = 1 + rng.Below(6), rows = 1 + rng.Below(6);
  g.grid.cell_width = 0.5 * static_cast<double>(1 + rng.Below(3));
  g.grid.cell_height = 0.5 * static_cast<double>(1 + rng.Below(3));
  const double w = g.grid.cell_width * static_cast<double>(cols);
  const double h = g.grid.cell_height * static_cast<double>(rows);
  g.grid.area = Rect{0.0, w, 0.0, h};
  g.grid.max_span_w = 1 + rng.Below(6);
  g.grid.max_span_h = 1 + rng.Below(6);
  const double fractions[] = {0.01, 0.1, 0.3};
  g.grid.coverage_fraction = fractions[rng.Below(3)];
  const double purities[] = {1.0, 0.8, 0.6};
  g.grid.purity_threshold = purities[rng.Below(3)];
  g.grid.membership = rng.Below(2) ? Membership::kEdgeCross : Membership::kNodeIn;
  g.grid.basis = rng.Below(2) ? CoverageBasis::kRemainingTotal
                              : CoverageBasis::kClassRemaining;
  g.grid.top_k = 1;
  for (std::size_t i = 0; i < n; ++i) {
    Polyline2D p;
    for (std::size_t k = 0; k < nodes; ++k) {
      // Quarter steps, sometimes just outside the area.
      const double x = 0.25 * static_cast<double>(rng.Below(
                                  static_cast<std::uint64_t>(4 * w + 3))) -
                       0.25;
      const double y = 0.25 * static_cast<double>(rng.Below(
                                  static_cast<std::uint64_t>(4 * h + 3))) -
                       0.25;
      p.nodes.push_back({x, y});
    }
    g.polylines.push_back(p);
    g.labels.push_back(static_cast<int>(rng.Below(g.classes)));
    g.remaining.push_back(rng.Below(5) != 0);
  }
  g.remaining[0] = 1;
  return g;
}

struct BruteBox {
  Rect rect;
  std::vector<std::size_t> counts;
  std::size_t total = 0;
  std::size_t dominant_count = 0;
};

// Brute-force enumeration of every cell-aligned rectangle within the spans,
// ranked by purity desc, coverage desc, area asc, corners asc. Empty when
// no rectangle qualifies.
inline std::vector<BruteBox> BruteForceGrid(const GridInstance& g) {
  const Rect area = *g.grid.area;
  const auto cols = static_cast<std::size_t>(
      std::llround((area.x2 - area.x1) / g.grid.cell_width));
  const auto rows = static_cast<std::size_t>(
      std::llround((area.y2 - area.y1) / g.grid.cell_height));
  std::size_t rem_total = 0;
  std::vector<std::size_t> rem_class(g.classes, 0);
  for (std::size_t i = 0; i < g.labels.size(); ++i) {
    if (g.remaining[i]) {
      ++rem_total;
      rem_class[g.labels[i]]++;
    }
  }
  std::vector<BruteBox> out;
  for (std::size_t i1 = 0; i1 < cols; ++i1)
    for (std::size_t i2 = i1; i2 < cols && i2 - i1 < g.grid.max_span_w; ++i2)
      for (std::size_t j1 = 0; j1 < rows; ++j1)
        for (std::size_t j2 = j1; j2 < rows && j2 - j1 < g.grid.max_span_h;
             ++j2) {
          BruteBox b;
          b.rect = {area.x1 + g.grid.cell_width * static_cast<double>(i1),
                    area.x1 + g.grid.cell_width * static_cast<double>(i2 + 1),
                    area.y1 + g.grid.cell_height * static_cast<double>(j1),
                    area.y1 + g.grid.cell_height * static_cast<double>(j2 + 1)};
          b.counts.assign(g.classes, 0);
          for (std::size_t t = 0; t < g.polylines.size(); ++t) {
            if (g.remaining[t] &&
                OracleMember(g.polylines[t], b.rect, g.grid.membership)) {
              b.counts[g.labels[t]]++;
              b.total++;
            }
          }
          if (b.total == 0) continue;
          std::size_t dom = 0;
          for (std::size_t c = 1; c < g.classes; ++c) {
            if (b.counts[c] > b.counts[dom]) dom = c;
          }
          b.dominant_count = b.counts[dom];
          const double context =
              g.grid.basis == CoverageBasis::kRemainingTotal
                  ? static_cast<double>(rem_total)
                  : static_cast<double>(rem_class[dom]);
          if (b.dominant_count < g.grid.min_coverage ||
              static_cast<double>(b.dominant_count) <
                  g.grid.coverage_fraction * context) {
            continue;
          }
          if (static_cast<double>(b.dominant_count) <
              g.grid.purity_threshold * static_cast<double>(b.total) - 1e-9) {
            continue;
          }
          out.push_back(b);
        }
  std::sort(out.begin(), out.end(), [](const BruteBox& a, const BruteBox& b) {
    const double pa = static_cast<double>(a.dominant_count) /
                      static_cast<double>(a.total);
    const double pb = static_cast<double>(b.dominant_count) /
                      static_cast<double>(b.total);
    if (a.dominant_count * b.total != b.dominant_count * a.total) {
      return pa > pb;
    }
    if (a.dominant_count != b.dominant_count) {
      return a.dominant_count > b.dominant_count;
    }
    const double aa = (a.rect.x2 - a.rect.x1) * (a.rect.y2 - a.rect.y1);
    const double ab = (b.rect.x2 - b.rect.x1) * (b.rect.y2 - b.rect.y1);
    if (aa != ab) return aa < ab;
    if (a.rect.x1 != b.rect.x1) return a.rect.x1 < b.rect.x1;
    if (a.rect.x2 != b.rect.x2) return a.rect.x2 < b.rect.x2;
    if (a.rect.y1 != b.rect.y1) return a.rect.y1 < b.rect.y1;
    return a.rect.y2 < b.rect.y2;
  });
  return out;
}

}  // namespace ilcml::testing

#endif  // ILCML_TESTS_TEST_UTIL_HPP_
