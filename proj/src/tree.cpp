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

#include "ilcml/tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ilcml/common.hpp"

namespace ilcml {
namespace {

double Entropy(const std::vector<std::size_t>& counts, std::size_t total) {
  if (total == 0) return 0.0;
  double h = 0.0;
  for (std::size_t c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / static_cast<double>(total);
    h -= p * std::log2(p);
  }
  return h;
}

int Majority(const std::vector<std::size_t>& counts) {
  int best = 0;
  for (std::size_t c = 1; c < counts.size(); ++c) {
    if (counts[c] > counts[best]) best = static_cast<int>(c);
  }
  return best;
}

class Builder {
 public:
  Builder(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
          std::size_t k, const TreeConfig& cfg)
      : x_(x), y_(y), k_(k), cfg_(cfg) {}

  DecisionTree Run() {
    DecisionTree t;
    t.config = cfg_;
    t.class_count = k_;
    std::vector<std::size_t> idx(x_.size());
    std::iota(idx.begin(), idx.end(), 0);
    Grow(t, idx, 0);
    return t;
  }

 private:
  int Grow(DecisionTree& t, const std::vector<std::size_t>& idx,
           std::size_t depth) {
    const int id = static_cast<int>(t.nodes.size());
    t.nodes.emplace_back();
    std::vector<std::size_t> counts(k_, 0);
    for (std::size_t i : idx) counts[y_[i]]++;
    t.nodes[id].counts = counts;
    t.nodes[id].depth = depth;
    const std::size_t n = idx.size();
    const bool pure =
        std::count_if(counts.begin(), counts.end(),
                      [](std::size_t c) { return c > 0; }) <= 1;
    if (pure || depth >= cfg_.max_depth || n < 2 * cfg_.min_leaf_cases) {
      return id;
    }
    const double parent_h = Entropy(counts, n);
    const std::size_t dim = x_.empty() ? 0 : x_[idx.front()].size();
    double best_gain = 1e-12;
    int best_attr = -1;
    double best_thr = 0.0;
    std::vector<std::size_t> order(idx);
    std::vector<std::size_t> left(k_);
    for (std::size_t a = 0; a < dim; ++a) {
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t p, std::size_t q) {
                         return x_[p][a] < x_[q][a];
                       });
      std::fill(left.begin(), left.end(), 0);
      for (std::size_t j = 0; j + 1 < n; ++j) {
        left[y_[order[j]]]++;
        const double v = x_[order[j]][a], w = x_[order[j + 1]][a];
        if (v == w) continue;
        const std::size_t nl = j + 1, nr = n - nl;
        if (nl < cfg_.min_leaf_cases || nr < cfg_.min_leaf_cases) continue;
        std::vector<std::size_t> right(k_);
        for (std::size_t c = 0; c < k_; ++c) right[c] = counts[c] - left[c];
        const double h = (static_cast<double>(nl) * Entropy(left, nl) +
                          static_cast<double>(nr) * Entropy(right, nr)) /
                         static_cast<double>(n);
        const double gain = parent_h - h;
        if (gain > best_gain + 1e-12) {
          best_gain = gain;
          best_attr = static_cast<int>(a);
          best_thr = v + (w - v) / 2.0;
        }
      }
    }
    if (best_attr < 0) return id;
    std::vector<std::size_t> li, ri;
    for (std::size_t i : idx) {
      (x_[i][best_attr] <= best_thr ? li : ri).push_back(i);
    }
    t.nodes[id].attribute = best_attr;
    t.nodes[id].threshold = best_thr;
    const int l = Grow(t, li, depth + 1);
    const int r = Grow(t, ri, depth + 1);
    t.nodes[id].left = l;
    t.nodes[id].right = r;
    return id;
  }

  const std::vector<std::vector<double>>& x_;
  const std::vector<int>& y_;
  std::size_t k_;
  TreeConfig cfg_;
};

void Collect(const DecisionTree& t, int node, std::vector<Condition>& path,
             std::vector<Branch>& out) {
  const TreeNode& n = t.nodes[node];
  if (n.leaf()) {
    Branch b;
    b.conditions = path;
    b.counts = n.counts;
    b.leaf = static_cast<std::size_t>(node);
    const std::size_t total =
        std::accumulate(n.counts.begin(), n.counts.end(), std::size_t{0});
    if (total > 0) {
      b.dominant = Majority(n.counts);
      b.purity = static_cast<double>(n.counts[b.dominant]) /
                 static_cast<double>(total);
    }
    out.push_back(std::move(b));
    return;
  }
  const std::size_t a = static_cast<std::size_t>(n.attribute);
  path.push_back({a, Relation::kLe, n.threshold, n.depth});
  Collect(t, n.left, path, out);
  path.back().relation = Relation::kGt;
  Collect(t, n.right, path, out);
  path.pop_back();
}

}  // namespace

std::size_t DecisionTree::LeafOf(const std::vector<double>& values) const {
  if (nodes.empty()) throw FailedPrecondition("empty tree");
  std::size_t i = 0;
  while (!nodes[i].leaf()) {
    const auto& n = nodes[i];
    const auto a = static_cast<std::size_t>(n.attribute);
    if (a >= values.size()) {
      throw InvalidArgument("case has " + std::to_string(values.size()) +
                            " values, tree tests attribute " +
                            std::to_string(a + 1));
    }
    i = static_cast<std::size_t>(
        values[a] <= n.threshold
            ? n.left
            : n.right);
  }
  return i;
}

int DecisionTree::Predict(const std::vector<double>& values) const {
  return Majority(nodes[LeafOf(values)].counts);
}

std::size_t DecisionTree::leaf_count() const {
  return static_cast<std::size_t>(std::count_if(
      nodes.begin(), nodes.end(), [](const TreeNode& n) { return n.leaf(); }));
}

DecisionTree InduceTree(const std::vector<std::vector<double>>& x,
                        const std::vector<int>& y, std::size_t class_count,
                        const TreeConfig& config) {
  if (x.empty()) throw InvalidArgument("cannot induce a tree on no cases");
  if (x.size() != y.size()) throw InvalidArgument("x and y differ in length");
  if (config.min_leaf_cases < 1) throw InvalidArgument("min_leaf_cases < 1");
  return Builder(x, y, class_count, config).Run();
}

DecisionTree InduceTree(const Dataset& train, const TreeConfig& config) {
  std::vector<std::vector<double>> x;
  x.reserve(train.size());
  for (const auto& c : train.cases) x.push_back(c.values);
  return InduceTree(x, train.labels(), train.class_count(), config);
}

std::vector<Branch> AllBranches(const DecisionTree& tree) {
  std::vector<Branch> out;
  std::vector<Condition> path;
  if (!tree.nodes.empty()) Collect(tree, 0, path, out);
  return out;
}

std::vector<Branch> SelectBranches(const DecisionTree& tree,
                                   double purity_min) {
  if (!(purity_min > 0) || purity_min > 1) {
    throw InvalidArgument("purity_min must lie in (0,1]");
  }
  std::vector<Branch> out;
  for (auto& b : AllBranches(tree)) {
    if (b.dominant >= 0 && b.purity >= purity_min - 1e-12) {
      out.push_back(std::move(b));
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const Branch& a, const Branch& b) {
    return a.covered() > b.covered();
  });
  return out;
}

nlohmann::json ToJson(const Branch& b) {
  nlohmann::json conds = nlohmann::json::array();
  for (const auto& c : b.conditions) {
    conds.push_back({{"attribute", c.attribute},
                     {"relation", c.relation == Relation::kLe ? "<=" : ">"},
                     {"threshold", c.threshold},
                     {"depth", c.depth}});
  }
  return {{"conditions", conds},
          {"counts", b.counts},
          {"purity", b.purity},
          {"dominant", b.dominant},
          {"leaf", b.leaf}};
}

nlohmann::json ToJson(const DecisionTree& t) {
  nlohmann::json nodes = nlohmann::json::array();
  for (const auto& n : t.nodes) {
    nodes.push_back({{"attribute", n.attribute},
                     {"threshold", n.threshold},
                     {"left", n.left},
                     {"right", n.right},
                     {"counts", n.counts},
                     {"depth", n.depth}});
  }
  return {{"family", "binary information-gain tree, midpoint thresholds"},
          {"max_depth", t.config.max_depth},
          {"min_leaf_cases", t.config.min_leaf_cases},
          {"nodes", nodes}};
}

DecisionTree DecisionTreeFromJson(const nlohmann::json& j) {
  DecisionTree t;
  t.config.max_depth = j.at("max_depth").get<std::size_t>();
  t.config.min_leaf_cases = j.at("min_leaf_cases").get<std::size_t>();
  for (const auto& n : j.at("nodes")) {
    TreeNode node;
    node.attribute = n.at("attribute").get<int>();
    node.threshold = n.at("threshold").get<double>();
    node.left = n.at("left").get<int>();
    node.right = n.at("right").get<int>();
    node.counts = n.at("counts").get<std::vector<std::size_t>>();
    node.depth = n.at("depth").get<std::size_t>();
    t.nodes.push_back(std::move(node));
  }
  if (t.nodes.empty()) throw InvalidArgument("tree has no nodes");
  t.class_count = t.nodes.front().counts.size();
  for (const auto& n : t.nodes) {
    const int size = static_cast<int>(t.nodes.size());
    if (!n.leaf() && (n.left < 0 || n.left >= size || n.right < 0 ||
                      n.right >= size)) {
      throw InvalidArgument("tree node child out of range");
    }
  }
  return t;
}

}  // namespace ilcml
