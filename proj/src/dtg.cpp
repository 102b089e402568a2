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

#include "ilcml/dtg.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

#include "ilcml/common.hpp"

namespace ilcml {
namespace {

struct Interval {
  double lo;
  double hi;
};

std::vector<Interval> BranchIntervals(const Branch& branch,
                                      const std::vector<AttributeRange>& b) {
  std::vector<Interval> iv(b.size());
  for (std::size_t a = 0; a < b.size(); ++a) iv[a] = {b[a].lo, b[a].hi};
  for (const auto& c : branch.conditions) {
    if (c.attribute >= b.size()) {
      throw InvalidArgument("condition on attribute " +
                            std::to_string(c.attribute) +
                            " outside the assignment");
    }
    auto& v = iv[c.attribute];
    if (c.relation == Relation::kLe) {
      v.hi = std::min(v.hi, c.threshold);
    } else {
      v.lo = std::max(v.lo, c.threshold);
    }
  }
  for (std::size_t a = 0; a < iv.size(); ++a) {
    if (iv[a].lo > iv[a].hi) {
      throw InvalidArgument("branch leaves attribute " + std::to_string(a) +
                            " an empty interval");
    }
  }
  return iv;
}

Interval Scaled(const Interval& v, double w) {
  const double a = w * v.lo, b = w * v.hi;
  return {std::min(a, b), std::max(a, b)};
}

std::string GroupName(const std::vector<std::string>& names,
                      const std::vector<int>& group) {
  std::string s;
  for (std::size_t i = 0; i < group.size(); ++i) {
    if (i) s += "+";
    const int c = group[i];
    s += c < static_cast<int>(names.size()) ? names[c] : std::to_string(c);
  }
  return s;
}

// Cases of the window with the nodes that can matter to a lattice rect.
struct LocalCases {
  std::vector<std::size_t> cases;
  std::vector<std::vector<Point2>> nodes;
};

LocalCases Gather(const Rect& window, const std::vector<Polyline2D>& pl,
                  const std::vector<char>& subset, Membership m) {
  LocalCases out;
  for (std::size_t i = 0; i < pl.size(); ++i) {
    if (!subset.empty() && !subset[i]) continue;
    if (m == Membership::kNodeIn) {
      std::vector<Point2> inside;
      for (const auto& p : pl[i].nodes) {
        if (window.Contains(p)) inside.push_back(p);
      }
      if (inside.empty()) continue;
      out.cases.push_back(i);
      out.nodes.push_back(std::move(inside));
    } else if (IsMember(pl[i], window, m)) {
      out.cases.push_back(i);
      out.nodes.emplace_back();
    }
  }
  return out;
}

}  // namespace

std::vector<AttributeRange> ObservedBounds(const Dataset& dataset) {
  std::vector<AttributeRange> out(dataset.dimension());
  for (std::size_t a = 0; a < out.size(); ++a) {
    out[a] = {dataset.attributes[a].observed_min,
              dataset.attributes[a].observed_max};
  }
  return out;
}

std::vector<SeedBox> BranchToBoxes(const Branch& branch,
                                   const ProjectionSpec& spec,
                                   const std::vector<AttributeRange>& bounds) {
  const auto& as = spec.assignment;
  if (bounds.size() != as.dimension) {
    throw InvalidArgument("bounds do not match the projection dimension");
  }
  const auto iv = BranchIntervals(branch, bounds);
  // First pair holding each attribute.
  std::vector<int> home(as.dimension, -1);
  for (std::size_t k = 0; k < as.pairing.size(); ++k) {
    for (std::size_t e : {as.pairing[k].horizontal, as.pairing[k].vertical}) {
      const std::size_t a = as.Source(e);
      if (home[a] < 0) home[a] = static_cast<int>(k);
    }
  }
  const std::size_t none = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> depth(as.pairing.size(), none);
  for (const auto& c : branch.conditions) {
    if (home[c.attribute] < 0) {
      throw InvalidArgument("attribute " + std::to_string(c.attribute) +
                            " is not in the assignment");
    }
    auto& d = depth[static_cast<std::size_t>(home[c.attribute])];
    d = std::min(d, c.depth);
  }

  std::vector<Rect> rects(as.pairing.size());
  if (IsStatic(spec.mode)) {
    const auto coord = as.CoordinateIndex();
    for (std::size_t k = 0; k < as.pairing.size(); ++k) {
      const auto& h = iv[as.Source(as.pairing[k].horizontal)];
      const auto& v = iv[as.Source(as.pairing[k].vertical)];
      const double off = spec.CoordinateOffset(coord[k]);
      rects[k] = {off + h.lo, off + h.hi, v.lo, v.hi};
    }
  } else {
    const bool sum_y = spec.mode != ProjectionMode::kIlc2PartialDynamic;
    Interval x{0, 0}, y{0, 0};
    for (std::size_t k = 0; k < as.pairing.size(); ++k) {
      const auto& p = as.pairing[k];
      if (k == 0 || p.horizontal != as.pairing[k - 1].horizontal) {
        const auto s = Scaled(iv[as.Source(p.horizontal)],
                              spec.Weight(p.horizontal));
        x = {x.lo + s.lo, x.hi + s.hi};
      }
      const auto& vv = iv[as.Source(p.vertical)];
      if (sum_y) {
        const auto s = Scaled(vv, spec.Weight(p.vertical));
        y = {y.lo + s.lo, y.hi + s.hi};
      } else {
        y = vv;
      }
      rects[k] = {x.lo, x.hi, y.lo, y.hi};
    }
  }

  // A root leaf has no conditions; its box is the whole first pair.
  if (branch.conditions.empty() && !rects.empty()) depth[0] = 0;
  std::vector<SeedBox> out;
  for (std::size_t k = 0; k < as.pairing.size(); ++k) {
    if (depth[k] == none) continue;
    out.push_back({rects[k], k, depth[k], branch.dominant});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const SeedBox& a, const SeedBox& b) {
                     return a.depth < b.depth;
                   });
  return out;
}

bool RefineRanksBefore(double pa, std::size_t ca, const Rect& ra, double pb,
                       std::size_t cb, const Rect& rb, double purity_target) {
  const double qa = std::min(pa, purity_target);
  const double qb = std::min(pb, purity_target);
  if (qa != qb) return qa > qb;
  if (ca != cb) return ca > cb;
  if (ra.area() != rb.area()) return ra.area() < rb.area();
  return std::tie(ra.x1, ra.x2, ra.y1, ra.y2) <
         std::tie(rb.x1, rb.x2, rb.y1, rb.y2);
}

RefineResult RefineBox(const Rect& seed, int target,
                       const std::vector<Polyline2D>& polylines,
                       const std::vector<int>& labels, std::size_t class_count,
                       const std::vector<char>& subset,
                       const RefineParams& params) {
  if (!(params.step_x > 0) || !(params.step_y > 0)) {
    throw InvalidArgument("refinement step must be positive");
  }
  if (!seed.valid()) throw InvalidArgument("seed box corners out of order");
  if (target < 0 || target >= static_cast<int>(class_count)) {
    throw InvalidArgument("target class out of range");
  }
  const int r = static_cast<int>(params.radius);
  const double sx = params.step_x, sy = params.step_y;
  const Rect window{seed.x1 - r * sx, seed.x2 + r * sx, seed.y1 - r * sy,
                    seed.y2 + r * sy};
  const LocalCases local = Gather(window, polylines, subset, params.membership);

  auto rect_at = [&](int a, int b, int c, int d) {
    return Rect{seed.x1 + a * sx, seed.x2 + b * sx, seed.y1 + c * sy,
                seed.y2 + d * sy};
  };
  std::vector<std::size_t> counts(class_count);
  auto evaluate = [&](const Rect& rect) {
    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t j = 0; j < local.cases.size(); ++j) {
      const std::size_t i = local.cases[j];
      bool in = false;
      if (params.membership == Membership::kNodeIn) {
        for (const auto& p : local.nodes[j]) {
          if (rect.Contains(p)) {
            in = true;
            break;
          }
        }
      } else {
        in = IsMember(polylines[i], rect, params.membership);
      }
      if (in) counts[labels[i]]++;
    }
    std::size_t total = 0;
    for (std::size_t c : counts) total += c;
    const double purity =
        total == 0 ? -1.0
                   : static_cast<double>(counts[target]) /
                         static_cast<double>(total);
    return std::make_pair(purity, counts[target]);
  };

  RefineResult best;
  best.rect = seed;
  std::tie(best.purity, best.coverage) = evaluate(seed);
  auto consider = [&](const Rect& rect) {
    if (!rect.valid()) return false;
    const auto [p, c] = evaluate(rect);
    if (p < 0) return false;
    if (RefineRanksBefore(p, c, rect, best.purity, best.coverage, best.rect,
                          params.purity_target)) {
      best.rect = rect;
      best.purity = p;
      best.coverage = c;
      return true;
    }
    return false;
  };

  const std::size_t side = 2 * params.radius + 1;
  const std::size_t lattice = side * side * side * side;
  if (lattice * std::max<std::size_t>(1, local.cases.size()) <=
      params.budget) {
    best.exhaustive = true;
    for (int a = -r; a <= r; ++a)
      for (int b = -r; b <= r; ++b)
        for (int c = -r; c <= r; ++c)
          for (int d = -r; d <= r; ++d) consider(rect_at(a, b, c, d));
  } else {
    int pos[4] = {0, 0, 0, 0};
    for (int iter = 0; iter < 4 * static_cast<int>(side) * 8; ++iter) {
      int best_side = -1, best_k = 0;
      for (int s = 0; s < 4; ++s) {
        for (int k = -r; k <= r; ++k) {
          if (k == pos[s]) continue;
          int q[4] = {pos[0], pos[1], pos[2], pos[3]};
          q[s] = k;
          if (consider(rect_at(q[0], q[1], q[2], q[3]))) {
            best_side = s;
            best_k = k;
          }
        }
      }
      if (best_side < 0) break;
      pos[best_side] = best_k;
    }
  }
  // Full stats over the subset for the chosen box.
  std::vector<std::size_t> full(class_count, 0);
  for (std::size_t j = 0; j < local.cases.size(); ++j) {
    const std::size_t i = local.cases[j];
    if (IsMember(polylines[i], best.rect, params.membership)) {
      full[labels[i]]++;
    }
  }
  best.stats = MakeStats(std::move(full));
  if (best.purity < 0) best.purity = 0.0;
  return best;
}

void ClassHierarchy::Validate() const {
  if (nodes.empty()) throw InvalidArgument("hierarchy has no nodes");
  if (class_count == 0) throw InvalidArgument("hierarchy has no classes");
  std::vector<int> reached(nodes.size(), 0);
  reached[0] = 1;
  for (std::size_t n = 0; n < nodes.size(); ++n) {
    const auto& node = nodes[n];
    if (node.groups.size() < 2) {
      if (!(nodes.size() == 1 && node.groups.size() == 1)) {
        throw InvalidArgument("hierarchy node " + std::to_string(n) +
                              " needs at least two groups");
      }
    }
    if (node.children.size() != node.groups.size()) {
      throw InvalidArgument("hierarchy node children do not match groups");
    }
    for (std::size_t g = 0; g < node.groups.size(); ++g) {
      const auto& grp = node.groups[g];
      if (grp.empty()) throw InvalidArgument("empty class group");
      for (int c : grp) {
        if (c < 0 || c >= static_cast<int>(class_count)) {
          throw InvalidArgument("class id out of range in hierarchy");
        }
      }
      const int child = node.children[g];
      if (child < 0) {
        if (grp.size() != 1) {
          throw InvalidArgument("multi-class group without a child node");
        }
        continue;
      }
      if (child >= static_cast<int>(nodes.size()) ||
          child <= static_cast<int>(n)) {
        throw InvalidArgument("child node index must follow its parent");
      }
      reached[child]++;
      auto want = grp;
      std::sort(want.begin(), want.end());
      if (ClassesOf(static_cast<std::size_t>(child)) != want) {
        throw InvalidArgument("child node classes differ from its group");
      }
    }
  }
  for (std::size_t n = 0; n < nodes.size(); ++n) {
    if (reached[n] != 1) {
      throw InvalidArgument("hierarchy node " + std::to_string(n) +
                            " is not reached exactly once");
    }
  }
  std::vector<int> all(class_count);
  for (std::size_t c = 0; c < class_count; ++c) all[c] = static_cast<int>(c);
  if (ClassesOf(0) != all) {
    throw InvalidArgument("hierarchy leaves do not partition the classes");
  }
}

std::vector<int> ClassHierarchy::ClassesOf(std::size_t node) const {
  std::vector<int> out;
  for (const auto& g : nodes.at(node).groups) {
    out.insert(out.end(), g.begin(), g.end());
  }
  std::sort(out.begin(), out.end());
  const auto before = out.size();
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (out.size() != before) {
    throw InvalidArgument("class listed twice in one hierarchy node");
  }
  return out;
}

int ClassHierarchy::GroupOf(std::size_t node, int cls) const {
  const auto& groups = nodes.at(node).groups;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (std::find(groups[g].begin(), groups[g].end(), cls) !=
        groups[g].end()) {
      return static_cast<int>(g);
    }
  }
  return -1;
}

ClassHierarchy ClassHierarchy::Flat(std::size_t class_count) {
  ClassHierarchy h;
  h.class_count = class_count;
  HierarchyNode n;
  for (std::size_t c = 0; c < class_count; ++c) {
    n.groups.push_back({static_cast<int>(c)});
    n.children.push_back(-1);
  }
  h.nodes.push_back(std::move(n));
  return h;
}

ClassHierarchy ClassHierarchy::Pbc() {
  ClassHierarchy h;
  h.class_count = 5;
  h.nodes.push_back({{{0}, {1, 2, 3, 4}}, {-1, 1}});
  h.nodes.push_back({{{1}, {2, 3, 4}}, {-1, 2}});
  h.nodes.push_back({{{3}, {4}, {2}}, {-1, -1, -1}});
  return h;
}

nlohmann::json ToJson(const ClassHierarchy& h) {
  nlohmann::json nodes = nlohmann::json::array();
  for (const auto& n : h.nodes) {
    nodes.push_back({{"groups", n.groups}, {"children", n.children}});
  }
  return {{"class_count", h.class_count}, {"nodes", nodes}};
}

ClassHierarchy ClassHierarchy::FromJson(const nlohmann::json& j) {
  ClassHierarchy h;
  try {
    h.class_count = j.at("class_count").get<std::size_t>();
    for (const auto& n : j.at("nodes")) {
      h.nodes.push_back({n.at("groups").get<std::vector<std::vector<int>>>(),
                         n.at("children").get<std::vector<int>>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("hierarchy: ") + e.what());
  }
  h.Validate();
  return h;
}

const DcNodeConfig& DcConfig::For(std::size_t node) const {
  if (nodes.empty()) throw InvalidArgument("empty divide-and-conquer config");
  return nodes.size() == 1 ? nodes[0] : nodes.at(node);
}

nlohmann::json ToJson(const DcNodeConfig& c) {
  return {{"max_depth", c.tree.max_depth},
          {"min_leaf_cases", c.tree.min_leaf_cases},
          {"branch_purity", c.branch_purity},
          {"rule_purity", c.rule_purity},
          {"min_cases", c.min_cases},
          {"coverage_fraction", c.coverage_fraction},
          {"max_rules", c.max_rules},
          {"refine_step", c.refine_step},
          {"refine_radius", c.refine_radius},
          {"membership", MembershipName(c.membership)},
          {"regrow_tree", c.regrow_tree}};
}

DcNodeConfig DcNodeConfigFromJson(const nlohmann::json& j) {
  DcNodeConfig c;
  c.tree.max_depth = j.value("max_depth", c.tree.max_depth);
  c.tree.min_leaf_cases = j.value("min_leaf_cases", c.tree.min_leaf_cases);
  c.branch_purity = j.value("branch_purity", c.branch_purity);
  c.rule_purity = j.value("rule_purity", c.rule_purity);
  c.min_cases = j.value("min_cases", c.min_cases);
  c.coverage_fraction = j.value("coverage_fraction", c.coverage_fraction);
  c.max_rules = j.value("max_rules", c.max_rules);
  c.refine_step = j.value("refine_step", c.refine_step);
  c.refine_radius = j.value("refine_radius", c.refine_radius);
  if (j.contains("membership")) {
    c.membership = ParseMembership(j.at("membership").get<std::string>());
  }
  c.regrow_tree = j.value("regrow_tree", c.regrow_tree);
  return c;
}

ProjectionSpec GuidedProjection(const DecisionTree& tree,
                                const std::vector<AttributeRange>& bounds) {
  const std::size_t n = bounds.size();
  if (n < 2) throw InvalidArgument("guided projection needs two attributes");
  std::vector<std::size_t> order;
  std::vector<bool> seen(n, false);
  std::deque<int> queue;
  if (!tree.nodes.empty()) queue.push_back(0);
  while (!queue.empty()) {
    const auto& node = tree.nodes[queue.front()];
    queue.pop_front();
    if (node.leaf()) continue;
    const auto a = static_cast<std::size_t>(node.attribute);
    if (a < n && !seen[a]) {
      seen[a] = true;
      order.push_back(a);
    }
    queue.push_back(node.left);
    queue.push_back(node.right);
  }
  for (std::size_t a = 0; a < n; ++a) {
    if (!seen[a]) order.push_back(a);
  }
  std::vector<AxisPair> pairs;
  for (std::size_t i = 0; i + 1 < n; i += 2) {
    pairs.push_back({order[i], order[i + 1]});
  }
  if (n % 2) pairs.push_back({order[n - 1], order[0]});

  double lo = kInf, hi = -kInf;
  for (const auto& b : bounds) {
    lo = std::min(lo, b.lo);
    hi = std::max(hi, b.hi);
  }
  ProjectionSpec spec;
  spec.mode = ProjectionMode::kStaticSequential;
  spec.assignment = AxisAssignment::FromPairs(n, pairs);
  spec.axis_spacing = std::floor(hi - lo) + 1.0;
  spec.Validate();
  return spec;
}

namespace {

struct NodeData {
  std::vector<std::vector<double>> x;
  std::vector<int> y;
};

NodeData Rows(const Dataset& d, const std::vector<std::size_t>& idx,
              const std::vector<int>& group) {
  NodeData out;
  for (std::size_t i : idx) {
    out.x.push_back(d.cases[i].values);
    out.y.push_back(group[i]);
  }
  return out;
}

}  // namespace

HierarchicalModel DcFit(const Dataset& train, const ClassHierarchy& hierarchy,
                        const DcConfig& config) {
  hierarchy.Validate();
  if (train.size() == 0) throw InvalidArgument("empty training set");
  if (hierarchy.class_count != train.class_count()) {
    throw InvalidArgument("hierarchy leaves do not match the dataset classes");
  }
  const auto bounds = ObservedBounds(train);
  HierarchicalModel model;
  model.hierarchy = hierarchy;
  for (const auto& c : train.classes) model.class_names.push_back(c.name);

  for (std::size_t n = 0; n < hierarchy.nodes.size(); ++n) {
    const auto& node = hierarchy.nodes[n];
    const auto& cfg = config.For(n);
    const std::size_t k = node.groups.size();
    std::vector<std::size_t> idx;
    std::vector<int> group_of_case(train.size(), -1);
    std::vector<std::size_t> sizes(k, 0);
    for (std::size_t i = 0; i < train.size(); ++i) {
      const int g = hierarchy.GroupOf(n, train.cases[i].label);
      if (g < 0) continue;
      group_of_case[i] = g;
      idx.push_back(i);
      sizes[g]++;
    }
    for (std::size_t g = 0; g < k; ++g) {
      if (sizes[g] == 0) {
        throw FailedPrecondition("hierarchy node " + std::to_string(n) +
                                 " has an empty group");
      }
    }
    std::vector<std::string> names;
    for (const auto& g : node.groups) {
      names.push_back(GroupName(model.class_names, g));
    }
    const NodeData data = Rows(train, idx, group_of_case);
    const DecisionTree guide = InduceTree(data.x, data.y, k, cfg.tree);
    const ProjectionSpec spec = GuidedProjection(guide, bounds);

    std::vector<Polyline2D> polylines;
    polylines.reserve(idx.size());
    for (std::size_t j = 0; j < idx.size(); ++j) {
      polylines.push_back(Project(data.x[j], spec));
      polylines.back().case_index = idx[j];
    }
    // Refinement steps per pair from the attribute quanta.
    const auto& as = spec.assignment;
    auto step_of = [&](std::size_t extended) {
      if (cfg.refine_step > 0) return cfg.refine_step;
      const double q = train.attributes[as.Source(extended)].quantum;
      return q > 0 ? q : 1e-6;
    };

    GuideSummary summary;
    summary.tree = guide;
    summary.branches = SelectBranches(guide, cfg.branch_purity);
    for (const auto& b : summary.branches) {
      for (auto& s : BranchToBoxes(b, spec, bounds)) summary.seeds.push_back(s);
    }

    BcBuilder builder(polylines, data.y, k, spec, names);
    for (std::size_t round = 0; round < cfg.max_rules; ++round) {
      const auto& remaining = builder.remaining();
      const std::size_t left = builder.remaining_count();
      if (left == 0) break;
      std::vector<Branch> branches;
      if (round == 0 || !cfg.regrow_tree) {
        branches = summary.branches;
      } else {
        NodeData rem;
        for (std::size_t j = 0; j < idx.size(); ++j) {
          if (!remaining[j]) continue;
          rem.x.push_back(data.x[j]);
          rem.y.push_back(data.y[j]);
        }
        branches = SelectBranches(InduceTree(rem.x, rem.y, k, cfg.tree),
                                  cfg.branch_purity);
      }
      const std::size_t floor = std::max<std::size_t>(
          cfg.min_cases,
          static_cast<std::size_t>(
              std::ceil(cfg.coverage_fraction * static_cast<double>(left))));
      bool have = false;
      RefineResult best;
      int best_target = -1;
      for (const auto& b : branches) {
        for (const auto& seed : BranchToBoxes(b, spec, bounds)) {
          RefineParams rp;
          rp.step_x = step_of(as.pairing[seed.pair].horizontal);
          rp.step_y = step_of(as.pairing[seed.pair].vertical);
          rp.radius = cfg.refine_radius;
          rp.membership = cfg.membership;
          rp.purity_target = cfg.rule_purity;
          RefineResult res = RefineBox(seed.rect, seed.target, polylines,
                                       data.y, k, remaining, rp);
          if (res.purity + 1e-12 < cfg.rule_purity || res.coverage < floor) {
            continue;
          }
          if (!have || RefineRanksBefore(res.purity, res.coverage, res.rect,
                                         best.purity, best.coverage, best.rect,
                                         cfg.rule_purity)) {
            best = res;
            best_target = seed.target;
            have = true;
          }
        }
      }
      if (!have) break;
      try {
        builder.Accept(best.rect, cfg.membership, best_target);
      } catch (const Error&) {
        break;
      }
    }
    RuleSet rs = builder.Build();
    rs.class_names = names;
    model.node_rules.push_back(std::move(rs));
    model.guides.push_back(std::move(summary));
    model.node_sizes.push_back(sizes);
  }
  return model;
}

HierarchicalDecision ClassifyHierarchical(const HierarchicalModel& model,
                                          const std::vector<double>& values) {
  HierarchicalDecision out;
  std::size_t node = 0;
  for (;;) {
    const Decision d = ClassifyValues(model.node_rules.at(node), values);
    if (d.predicted == kRefuse) return out;
    out.path.emplace_back(node, d.rule);
    const auto& hn = model.hierarchy.nodes.at(node);
    const int child = hn.children.at(d.predicted);
    if (child < 0) {
      out.predicted = hn.groups[d.predicted].front();
      return out;
    }
    node = static_cast<std::size_t>(child);
  }
}

nlohmann::json ToJson(const HierarchicalModel& m) {
  nlohmann::json nodes = nlohmann::json::array();
  for (std::size_t n = 0; n < m.node_rules.size(); ++n) {
    nlohmann::json node{{"rules", ToJson(m.node_rules[n])}};
    if (n < m.node_sizes.size()) node["sizes"] = m.node_sizes[n];
    if (n < m.guides.size()) {
      const auto& g = m.guides[n];
      nlohmann::json branches = nlohmann::json::array();
      for (const auto& b : g.branches) branches.push_back(ToJson(b));
      nlohmann::json seeds = nlohmann::json::array();
      for (const auto& s : g.seeds) {
        seeds.push_back({{"rect", ToJson(s.rect)},
                         {"pair", s.pair},
                         {"depth", s.depth},
                         {"target", s.target}});
      }
      node["guide"] = {{"tree", ToJson(g.tree)},
                       {"branches", branches},
                       {"seeds", seeds}};
    }
    nodes.push_back(std::move(node));
  }
  return {{"format", "ilcml.hierarchy/1"},
          {"hierarchy", ToJson(m.hierarchy)},
          {"class_names", m.class_names},
          {"nodes", nodes}};
}

HierarchicalModel HierarchicalModelFromJson(const nlohmann::json& j) {
  HierarchicalModel m;
  try {
    if (j.at("format").get<std::string>() != "ilcml.hierarchy/1") {
      throw Error(ErrorCode::kParse, "unknown hierarchical model format");
    }
    m.hierarchy = ClassHierarchy::FromJson(j.at("hierarchy"));
    m.class_names = j.at("class_names").get<std::vector<std::string>>();
    for (const auto& n : j.at("nodes")) {
      m.node_rules.push_back(RuleSetFromJson(n.at("rules")));
      if (n.contains("sizes")) {
        m.node_sizes.push_back(n.at("sizes").get<std::vector<std::size_t>>());
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("hierarchical model: ") +
                                       e.what());
  }
  if (m.node_rules.size() != m.hierarchy.nodes.size()) {
    throw Error(ErrorCode::kParse, "one rule set per hierarchy node expected");
  }
  return m;
}

std::string RenderHierarchical(const HierarchicalModel& m) {
  std::ostringstream out;
  for (std::size_t n = 0; n < m.node_rules.size(); ++n) {
    const auto& rs = m.node_rules[n];
    out << "node " << n << ":";
    for (std::size_t g = 0; g < rs.class_names.size(); ++g) {
      out << (g ? " | " : " ") << rs.class_names[g];
    }
    out << "\n" << RenderRules(rs);
  }
  return out.str();
}

}  // namespace ilcml
