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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <tuple>

#include "ilcml/box.hpp"

namespace ilcml {
namespace {

// Cell boundaries computed once so that rasterization and the candidate
// rectangles use bit-identical coordinates.
struct GridFrame {
  std::vector<double> xb;
  std::vector<double> yb;
  std::size_t cols() const { return xb.size() - 1; }
  std::size_t rows() const { return yb.size() - 1; }
};

std::vector<double> Boundaries(double lo, double hi, double step) {
  std::size_t n = static_cast<std::size_t>(
      std::max(1.0, std::ceil((hi - lo) / step)));
  while (lo + step * static_cast<double>(n) < hi) ++n;
  if (n > 200000) throw InvalidArgument("grid too fine for the search area");
  std::vector<double> b(n + 1);
  for (std::size_t i = 0; i <= n; ++i) b[i] = lo + step * static_cast<double>(i);
  return b;
}

// Closed cells [b[c], b[c+1]] containing v.
void CellsContaining(const std::vector<double>& b, double v,
                     std::vector<std::size_t>& out) {
  out.clear();
  const std::size_t n = b.size() - 1;
  const double step = b[1] - b[0];
  const long guess = static_cast<long>(std::floor((v - b[0]) / step));
  for (long c = guess - 1; c <= guess + 1; ++c) {
    if (c < 0 || c >= static_cast<long>(n)) continue;
    if (b[c] <= v && v <= b[c + 1]) out.push_back(static_cast<std::size_t>(c));
  }
}

std::pair<std::size_t, std::size_t> CellRange(const std::vector<double>& b,
                                              double lo, double hi) {
  const long n = static_cast<long>(b.size()) - 1;
  const double step = b[1] - b[0];
  long a = static_cast<long>(std::floor((lo - b[0]) / step)) - 1;
  long z = static_cast<long>(std::floor((hi - b[0]) / step)) + 1;
  a = std::clamp(a, 0L, n - 1);
  z = std::clamp(z, 0L, n - 1);
  return {static_cast<std::size_t>(a), static_cast<std::size_t>(z)};
}

int Dominant(const std::vector<std::size_t>& counts) {
  int best = -1;
  std::size_t bv = 0;
  for (std::size_t c = 0; c < counts.size(); ++c) {
    if (counts[c] > bv) {
      bv = counts[c];
      best = static_cast<int>(c);
    }
  }
  return best;
}

}  // namespace

std::string MembershipName(Membership m) {
  return m == Membership::kNodeIn ? "node_in" : "edge_cross";
}

Membership ParseMembership(const std::string& name) {
  if (name == "node_in" || name == "node-in") return Membership::kNodeIn;
  if (name == "edge_cross" || name == "edge-cross") return Membership::kEdgeCross;
  throw InvalidArgument("unknown membership mode '" + name + "'");
}

bool Rect::IntersectsSegment(Point2 p, Point2 q) const {
  if (std::max(p.x, q.x) < x1 || std::min(p.x, q.x) > x2 ||
      std::max(p.y, q.y) < y1 || std::min(p.y, q.y) > y2) {
    return false;
  }
  const double dx = q.x - p.x, dy = q.y - p.y;
  const Point2 corners[4] = {{x1, y1}, {x2, y1}, {x2, y2}, {x1, y2}};
  bool pos = false, neg = false;
  for (const auto& c : corners) {
    const double s = dx * (c.y - p.y) - dy * (c.x - p.x);
    if (s > 0) pos = true;
    if (s < 0) neg = true;
    if (s == 0) return true;
  }
  return pos && neg;
}

bool IsMember(const Polyline2D& polyline, const Rect& rect, Membership mode) {
  const auto& n = polyline.nodes;
  for (const auto& p : n) {
    if (rect.Contains(p)) return true;
  }
  if (mode == Membership::kEdgeCross) {
    for (std::size_t k = 1; k < n.size(); ++k) {
      if (rect.IntersectsSegment(n[k - 1], n[k])) return true;
    }
  }
  return false;
}

BoxStats MakeStats(std::vector<std::size_t> counts) {
  BoxStats s;
  s.counts = std::move(counts);
  for (std::size_t c : s.counts) s.total += c;
  if (s.total == 0) return s;
  s.dominant = Dominant(s.counts);
  const double dom = static_cast<double>(s.counts[s.dominant]);
  const double others = static_cast<double>(s.total) - dom;
  s.purity_fraction = dom / static_cast<double>(s.total);
  s.purity_ratio = others == 0 ? kInf : dom / others;
  return s;
}

BoxStats ComputeBoxStats(const Rect& rect, Membership mode,
                         const std::vector<Polyline2D>& polylines,
                         const std::vector<int>& labels,
                         std::size_t class_count,
                         const std::vector<char>& subset) {
  std::vector<std::size_t> counts(class_count, 0);
  for (std::size_t i = 0; i < polylines.size(); ++i) {
    if (!subset.empty() && !subset[i]) continue;
    if (IsMember(polylines[i], rect, mode)) counts.at(labels[i])++;
  }
  return MakeStats(std::move(counts));
}

bool RanksBefore(const Rect& ra, const BoxStats& a, const Rect& rb,
                 const BoxStats& b) {
  if (a.empty() != b.empty()) return !a.empty();
  if (!a.empty()) {
    const unsigned __int128 lhs =
        static_cast<unsigned __int128>(a.coverage()) * b.total;
    const unsigned __int128 rhs =
        static_cast<unsigned __int128>(b.coverage()) * a.total;
    if (lhs != rhs) return lhs > rhs;
    if (a.coverage() != b.coverage()) return a.coverage() > b.coverage();
  }
  if (ra.area() != rb.area()) return ra.area() < rb.area();
  return std::tie(ra.x1, ra.x2, ra.y1, ra.y2) <
         std::tie(rb.x1, rb.x2, rb.y1, rb.y2);
}

void GridParams::Validate() const {
  if (!(cell_width > 0) || !(cell_height > 0)) {
    throw InvalidArgument("grid cell sizes must be positive");
  }
  if (max_span_w < 1 || max_span_h < 1) {
    throw InvalidArgument("grid spans must be at least one cell");
  }
  if (!(coverage_fraction > 0) || coverage_fraction > 1) {
    throw InvalidArgument("coverage_fraction must lie in (0,1]");
  }
  if (!(purity_threshold > 0) || purity_threshold > 1) {
    throw InvalidArgument("purity_threshold must lie in (0,1]");
  }
  if (area && !area->valid()) throw InvalidArgument("invalid search area");
}

std::vector<Candidate> GridSearch(const std::vector<Polyline2D>& polylines,
                                  const std::vector<int>& labels,
                                  std::size_t class_count,
                                  const GridParams& grid,
                                  const std::vector<char>& remaining) {
  grid.Validate();
  const std::size_t n = polylines.size();
  if (labels.size() != n) throw InvalidArgument("labels and polylines differ");
  auto is_rem = [&](std::size_t i) { return remaining.empty() || remaining[i]; };
  std::size_t rem_total = 0;
  std::vector<std::size_t> rem_class(class_count, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (is_rem(i)) {
      ++rem_total;
      rem_class.at(labels[i])++;
    }
  }
  if (rem_total == 0) throw InvalidArgument("remaining case set is empty");

  Rect area;
  if (grid.area) {
    area = *grid.area;
  } else {
    bool first = true;
    for (const auto& p : polylines) {
      for (const auto& q : p.nodes) {
        if (first) {
          area = {q.x, q.x, q.y, q.y};
          first = false;
        }
        area.x1 = std::min(area.x1, q.x);
        area.x2 = std::max(area.x2, q.x);
        area.y1 = std::min(area.y1, q.y);
        area.y2 = std::max(area.y2, q.y);
      }
    }
    if (first) throw InvalidArgument("grid produces zero cells");
    area.x1 = std::floor(area.x1 / grid.cell_width) * grid.cell_width;
    area.y1 = std::floor(area.y1 / grid.cell_height) * grid.cell_height;
  }
  GridFrame f{Boundaries(area.x1, area.x2, grid.cell_width),
              Boundaries(area.y1, area.y2, grid.cell_height)};
  const std::size_t cols = f.cols(), rows = f.rows();
  if (cols == 0 || rows == 0) throw InvalidArgument("grid produces zero cells");
  const std::size_t words = (rows + 63) / 64;

  // Per column: (case, row bitmask) of the closed cells each case touches.
  struct Entry {
    std::size_t case_index;
    std::size_t offset;
  };
  std::vector<std::vector<Entry>> column(cols);
  std::vector<std::uint64_t> store;
  {
    std::vector<std::vector<std::uint64_t>> local;
    std::vector<char> col_used(cols, 0);
    std::vector<std::size_t> used_cols, xs, ys;
    std::vector<std::vector<std::uint64_t>> masks(
        cols, std::vector<std::uint64_t>(words, 0));
    auto mark = [&](std::size_t c, std::size_t r) {
      if (!col_used[c]) {
        col_used[c] = 1;
        used_cols.push_back(c);
      }
      masks[c][r / 64] |= std::uint64_t{1} << (r % 64);
    };
    for (std::size_t i = 0; i < n; ++i) {
      if (!is_rem(i)) continue;
      const auto& nodes = polylines[i].nodes;
      for (const auto& p : nodes) {
        CellsContaining(f.xb, p.x, xs);
        if (xs.empty()) continue;
        CellsContaining(f.yb, p.y, ys);
        for (std::size_t c : xs) {
          for (std::size_t r : ys) mark(c, r);
        }
      }
      if (grid.membership == Membership::kEdgeCross) {
        for (std::size_t k = 1; k < nodes.size(); ++k) {
          const Point2 p = nodes[k - 1], q = nodes[k];
          const Rect bb{std::min(p.x, q.x), std::max(p.x, q.x),
                        std::min(p.y, q.y), std::max(p.y, q.y)};
          if (bb.x2 < f.xb.front() || bb.x1 > f.xb.back() ||
              bb.y2 < f.yb.front() || bb.y1 > f.yb.back()) {
            continue;
          }
          auto [c0, c1] = CellRange(f.xb, bb.x1, bb.x2);
          auto [r0, r1] = CellRange(f.yb, bb.y1, bb.y2);
          for (std::size_t c = c0; c <= c1; ++c) {
            for (std::size_t r = r0; r <= r1; ++r) {
              const Rect cell{f.xb[c], f.xb[c + 1], f.yb[r], f.yb[r + 1]};
              if (cell.IntersectsSegment(p, q)) mark(c, r);
            }
          }
        }
      }
      for (std::size_t c : used_cols) {
        column[c].push_back({i, store.size()});
        store.insert(store.end(), masks[c].begin(), masks[c].end());
        std::fill(masks[c].begin(), masks[c].end(), 0);
        col_used[c] = 0;
      }
      used_cols.clear();
    }
  }

  const std::size_t span_w = std::min(grid.max_span_w, cols);
  const std::size_t span_h = std::min(grid.max_span_h, rows);
  const std::size_t keep = std::max<std::size_t>(1, grid.top_k);
  std::vector<Candidate> best;
  auto prune_best = [&]() {
    auto cmp = [](const Candidate& a, const Candidate& b) {
      return RanksBefore(a.rect, a.stats, b.rect, b.stats);
    };
    if (best.size() > keep) {
      std::nth_element(best.begin(), best.begin() + keep, best.end(), cmp);
      best.resize(keep);
    }
    std::sort(best.begin(), best.end(), cmp);
  };

  std::vector<std::uint64_t> mask(n * words, 0);
  std::vector<long> stamp(n, -1);
  std::vector<std::size_t> active;
  std::vector<std::uint32_t> hist(rows * span_h * class_count, 0);
  std::vector<std::size_t> counts(class_count);
  for (std::size_t i1 = 0; i1 < cols; ++i1) {
    active.clear();
    for (std::size_t i2 = i1; i2 < cols && i2 - i1 < span_w; ++i2) {
      for (const auto& e : column[i2]) {
        std::uint64_t* m = &mask[e.case_index * words];
        if (stamp[e.case_index] != static_cast<long>(i1)) {
          stamp[e.case_index] = static_cast<long>(i1);
          std::fill(m, m + words, 0);
          active.push_back(e.case_index);
        }
        for (std::size_t w = 0; w < words; ++w) m[w] |= store[e.offset + w];
      }
      if (active.empty()) continue;
      std::fill(hist.begin(), hist.end(), 0);
      for (std::size_t ci : active) {
        const std::uint64_t* m = &mask[ci * words];
        const std::size_t label = static_cast<std::size_t>(labels[ci]);
        long prev = -1;
        for (std::size_t w = 0; w < words; ++w) {
          std::uint64_t bits = m[w];
          while (bits) {
            const std::size_t r = w * 64 + static_cast<std::size_t>(
                                               __builtin_ctzll(bits));
            bits &= bits - 1;
            const long lo = std::max<long>(prev + 1,
                                           static_cast<long>(r) -
                                               static_cast<long>(span_h) + 1);
            for (long j1 = lo; j1 <= static_cast<long>(r); ++j1) {
              hist[(static_cast<std::size_t>(j1) * span_h +
                    (r - static_cast<std::size_t>(j1))) *
                       class_count +
                   label]++;
            }
            prev = static_cast<long>(r);
          }
        }
      }
      for (std::size_t j1 = 0; j1 < rows; ++j1) {
        std::fill(counts.begin(), counts.end(), 0);
        std::size_t total = 0;
        for (std::size_t h = 0; h < span_h && j1 + h < rows; ++h) {
          const std::uint32_t* src = &hist[(j1 * span_h + h) * class_count];
          for (std::size_t c = 0; c < class_count; ++c) {
            counts[c] += src[c];
            total += src[c];
          }
          if (total == 0) continue;
          const int dom = Dominant(counts);
          const std::size_t cov = counts[dom];
          const double context = grid.basis == CoverageBasis::kRemainingTotal
                                     ? static_cast<double>(rem_total)
                                     : static_cast<double>(rem_class[dom]);
          if (cov < grid.min_coverage ||
              static_cast<double>(cov) < grid.coverage_fraction * context) {
            continue;
          }
          if (static_cast<double>(cov) <
              grid.purity_threshold * static_cast<double>(total) - 1e-9) {
            continue;
          }
          Candidate cand;
          cand.rect = {f.xb[i1], f.xb[i2 + 1], f.yb[j1], f.yb[j1 + h + 1]};
          cand.stats = MakeStats(counts);
          best.push_back(std::move(cand));
          if (best.size() >= 4 * keep + 64) prune_best();
        }
      }
    }
  }
  prune_best();
  return best;
}

nlohmann::json ToJson(const GridParams& g) {
  nlohmann::json j{{"cell_width", g.cell_width},
                   {"cell_height", g.cell_height},
                   {"max_span_w", g.max_span_w},
                   {"max_span_h", g.max_span_h},
                   {"coverage_fraction", g.coverage_fraction},
                   {"purity_threshold", g.purity_threshold},
                   {"basis", g.basis == CoverageBasis::kRemainingTotal
                                 ? "remaining_total"
                                 : "class_remaining"},
                   {"min_coverage", g.min_coverage},
                   {"membership", MembershipName(g.membership)},
                   {"top_k", g.top_k}};
  if (g.area) j["area"] = ToJson(*g.area);
  return j;
}

GridParams GridParamsFromJson(const nlohmann::json& j) {
  GridParams g;
  g.cell_width = j.value("cell_width", g.cell_width);
  g.cell_height = j.value("cell_height", g.cell_height);
  g.max_span_w = j.value("max_span_w", g.max_span_w);
  g.max_span_h = j.value("max_span_h", g.max_span_h);
  g.coverage_fraction = j.value("coverage_fraction", g.coverage_fraction);
  g.purity_threshold = j.value("purity_threshold", g.purity_threshold);
  if (j.value("basis", std::string("remaining_total")) == "class_remaining") {
    g.basis = CoverageBasis::kClassRemaining;
  }
  g.min_coverage = j.value("min_coverage", g.min_coverage);
  if (j.contains("membership")) {
    g.membership = ParseMembership(j.at("membership").get<std::string>());
  }
  g.top_k = j.value("top_k", g.top_k);
  if (j.contains("area")) g.area = RectFromJson(j.at("area"));
  return g;
}

}  // namespace ilcml
