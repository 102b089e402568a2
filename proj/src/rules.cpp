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
#include <functional>
#include <optional>
#include <set>
#include <sstream>

#include "ilcml/box.hpp"

namespace ilcml {
namespace {

bool FiresOn(const Rule& r, const std::vector<char>& member_of_box) {
  bool pos = false;
  for (std::size_t b : r.positive) {
    if (member_of_box[b]) {
      pos = true;
      break;
    }
  }
  if (!pos) return false;
  for (std::size_t b : r.negative) {
    if (member_of_box[b]) return false;
  }
  return true;
}

Decision DecideWith(const RuleSet& rs, const std::vector<Rule>& rules,
                    const std::vector<char>& member_of_box) {
  for (std::size_t k = 0; k < rules.size(); ++k) {
    const Rule* r = &rules[k];
    int depth = 0;
    while (r != nullptr) {
      if (FiresOn(*r, member_of_box)) {
        return {r->predicted_class, static_cast<int>(k), depth};
      }
      r = r->else_branch.empty() ? nullptr : &r->else_branch.front();
      ++depth;
    }
  }
  if (rs.refuse_policy == RefusePolicy::kFallbackClass) {
    return {rs.fallback_class, -1, 0};
  }
  return {kRefuse, -1, 0};
}

Rule* ElseAt(Rule& r, int depth) {
  Rule* cur = &r;
  for (int d = 0; d < depth; ++d) cur = &cur->else_branch.front();
  return cur;
}

void ZeroCoverage(Rule& r) {
  r.covered_count = 0;
  for (auto& e : r.else_branch) ZeroCoverage(e);
}

std::string ClassName(const RuleSet& rs, int cls) {
  if (cls == kRefuse) return "REFUSE";
  if (cls >= 0 && static_cast<std::size_t>(cls) < rs.class_names.size()) {
    return rs.class_names[cls];
  }
  return "C" + std::to_string(cls);
}

std::size_t TotalCovered(const Rule& r) {
  std::size_t t = r.covered_count;
  for (const auto& e : r.else_branch) t += TotalCovered(e);
  return t;
}

// Union of two rectangles is itself a rectangle.
std::optional<Rect> Fuse(const Rect& a, const Rect& b) {
  const Rect bound{std::min(a.x1, b.x1), std::max(a.x2, b.x2),
                   std::min(a.y1, b.y1), std::max(a.y2, b.y2)};
  if (bound == a) return a;
  if (bound == b) return b;
  if (a.y1 == b.y1 && a.y2 == b.y2 && a.x2 >= b.x1 && b.x2 >= a.x1) {
    return bound;
  }
  if (a.x1 == b.x1 && a.x2 == b.x2 && a.y2 >= b.y1 && b.y2 >= a.y1) {
    return bound;
  }
  return std::nullopt;
}

}  // namespace

const Box& RuleSet::box(std::size_t id) const {
  if (id >= boxes.size()) {
    throw InvalidArgument("unknown box id " + std::to_string(id));
  }
  return boxes[id];
}

std::size_t RuleSet::AddBox(const Rect& rect, Membership m,
                            std::vector<std::size_t> counts) {
  if (!rect.valid()) throw InvalidArgument("box corners out of order");
  Box b;
  b.id = boxes.size();
  b.rect = rect;
  b.membership = m;
  b.counts = std::move(counts);
  boxes.push_back(std::move(b));
  return boxes.back().id;
}

void RuleSet::Validate() const {
  std::function<void(const Rule&)> check = [&](const Rule& r) {
    if (r.positive.empty()) throw InvalidArgument("rule without positive boxes");
    for (std::size_t b : r.positive) {
      box(b);
      if (std::find(r.negative.begin(), r.negative.end(), b) !=
          r.negative.end()) {
        throw InvalidArgument("box both positive and negated in one rule");
      }
    }
    for (std::size_t b : r.negative) box(b);
    if (r.else_branch.size() > 1) throw InvalidArgument("more than one else");
    for (const auto& e : r.else_branch) check(e);
  };
  for (const auto& r : rules) check(r);
}

Decision Classify(const RuleSet& ruleset, const Polyline2D& polyline) {
  std::vector<char> member(ruleset.boxes.size());
  for (std::size_t b = 0; b < ruleset.boxes.size(); ++b) {
    member[b] = IsMember(polyline, ruleset.boxes[b].rect,
                         ruleset.boxes[b].membership);
  }
  return DecideWith(ruleset, ruleset.rules, member);
}

Decision ClassifyValues(const RuleSet& ruleset,
                        const std::vector<double>& values) {
  return Classify(ruleset, Project(values, ruleset.projection));
}

RuleEvaluator::RuleEvaluator(const RuleSet& ruleset,
                             const std::vector<Polyline2D>& polylines)
    : ruleset_(&ruleset), polylines_(&polylines) {
  Sync();
}

void RuleEvaluator::Sync() {
  const auto& boxes = ruleset_->boxes;
  for (std::size_t b = member_.size(); b < boxes.size(); ++b) {
    std::vector<char> m(polylines_->size());
    for (std::size_t i = 0; i < m.size(); ++i) {
      m[i] = IsMember((*polylines_)[i], boxes[b].rect, boxes[b].membership);
    }
    member_.push_back(std::move(m));
  }
}

bool RuleEvaluator::Fires(const Rule& rule, std::size_t i) const {
  bool pos = false;
  for (std::size_t b : rule.positive) {
    if (member_[b][i]) {
      pos = true;
      break;
    }
  }
  if (!pos) return false;
  for (std::size_t b : rule.negative) {
    if (member_[b][i]) return false;
  }
  return true;
}

Decision RuleEvaluator::DecideFrom(const std::vector<Rule>& rules,
                                   std::size_t i) const {
  for (std::size_t k = 0; k < rules.size(); ++k) {
    const Rule* r = &rules[k];
    int depth = 0;
    while (r != nullptr) {
      if (Fires(*r, i)) return {r->predicted_class, static_cast<int>(k), depth};
      r = r->else_branch.empty() ? nullptr : &r->else_branch.front();
      ++depth;
    }
  }
  if (ruleset_->refuse_policy == RefusePolicy::kFallbackClass) {
    return {ruleset_->fallback_class, -1, 0};
  }
  return {kRefuse, -1, 0};
}

Decision RuleEvaluator::Decide(std::size_t i) const {
  return DecideFrom(ruleset_->rules, i);
}

std::vector<Decision> RuleEvaluator::DecideAll() const {
  std::vector<Decision> out(polylines_->size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = Decide(i);
  return out;
}

void RecountCoverage(RuleSet& ruleset,
                     const std::vector<Polyline2D>& polylines) {
  for (auto& r : ruleset.rules) ZeroCoverage(r);
  RuleEvaluator ev(ruleset, polylines);
  for (std::size_t i = 0; i < polylines.size(); ++i) {
    const Decision d = ev.Decide(i);
    if (d.rule < 0) continue;
    ElseAt(ruleset.rules[d.rule], d.else_depth)->covered_count++;
  }
}

BcBuilder::BcBuilder(const std::vector<Polyline2D>& polylines,
                     std::vector<int> labels, std::size_t class_count,
                     ProjectionSpec spec, std::vector<std::string> class_names)
    : polylines_(&polylines),
      labels_(std::move(labels)),
      class_count_(class_count),
      remaining_(polylines.size(), 1),
      fired_by_(polylines.size(), -1) {
  if (labels_.size() != polylines.size()) {
    throw InvalidArgument("labels and polylines differ in length");
  }
  ruleset_.projection = std::move(spec);
  ruleset_.class_names = std::move(class_names);
}

std::size_t BcBuilder::remaining_count() const {
  return static_cast<std::size_t>(
      std::count(remaining_.begin(), remaining_.end(), 1));
}

std::vector<std::size_t> BcBuilder::RemainingPerClass() const {
  std::vector<std::size_t> out(class_count_, 0);
  for (std::size_t i = 0; i < remaining_.size(); ++i) {
    if (remaining_[i]) out[labels_[i]]++;
  }
  return out;
}

const Rule& BcBuilder::Accept(const Rect& rect, Membership m, int cls) {
  if (!rect.valid()) throw InvalidArgument("box corners out of order");
  const auto& pl = *polylines_;
  std::vector<char> member(pl.size());
  std::vector<std::size_t> counts(class_count_, 0), rem_counts(class_count_, 0);
  for (std::size_t i = 0; i < pl.size(); ++i) {
    member[i] = IsMember(pl[i], rect, m);
    if (member[i]) {
      counts[labels_[i]]++;
      if (remaining_[i]) rem_counts[labels_[i]]++;
    }
  }
  if (cls < 0) {
    const BoxStats s = MakeStats(rem_counts);
    if (s.empty()) throw InvalidArgument("box contains no remaining case");
    cls = s.dominant;
  }
  if (cls >= static_cast<int>(class_count_)) {
    throw InvalidArgument("class id out of range");
  }
  // Negate the earlier opposite-class boxes that captured opposite-class
  // cases lying in this box.
  std::set<std::size_t> negative;
  for (std::size_t i = 0; i < pl.size(); ++i) {
    if (!member[i] || labels_[i] == cls || fired_by_[i] < 0) continue;
    const Rule& prior = ruleset_.rules[fired_by_[i]];
    if (prior.predicted_class == cls) continue;
    for (std::size_t b : prior.positive) {
      if (member_[b][i]) negative.insert(b);
    }
  }
  std::vector<std::size_t> fired;
  for (std::size_t i = 0; i < pl.size(); ++i) {
    if (!remaining_[i] || !member[i]) continue;
    bool blocked = false;
    for (std::size_t b : negative) {
      if (member_[b][i]) {
        blocked = true;
        break;
      }
    }
    if (!blocked) fired.push_back(i);
  }
  if (fired.empty()) throw InvalidArgument("box fires on no remaining case");

  const std::size_t box_id = ruleset_.AddBox(rect, m, counts);
  member_.push_back(std::move(member));
  Rule r;
  r.id = ruleset_.rules.size();
  r.order = r.id;
  r.name = "R" + std::to_string(r.id + 1);
  r.positive = {box_id};
  r.negative.assign(negative.begin(), negative.end());
  r.predicted_class = cls;
  r.covered_count = fired.size();
  for (std::size_t i : fired) {
    remaining_[i] = 0;
    fired_by_[i] = static_cast<int>(r.id);
  }
  ruleset_.rules.push_back(std::move(r));
  return ruleset_.rules.back();
}

RuleSet BcFit(const std::vector<Polyline2D>& polylines,
              const std::vector<int>& labels, std::size_t class_count,
              const ProjectionSpec& spec, const GridParams& grid,
              const StopConfig& stop, std::vector<std::string> class_names) {
  BcBuilder b(polylines, labels, class_count, spec, std::move(class_names));
  while (b.remaining_count() > 0 && b.ruleset().rules.size() < stop.max_rules) {
    const auto cands = GridSearch(polylines, labels, class_count, grid,
                                  b.remaining());
    bool accepted = false;
    for (const auto& c : cands) {
      if (c.stats.coverage() < stop.min_cases) break;
      try {
        b.Accept(c.rect, grid.membership, c.stats.dominant);
        accepted = true;
        break;
      } catch (const Error&) {
        // Every remaining member sits in a negated box; try the next one.
      }
    }
    if (!accepted) break;
  }
  RuleSet rs = b.Build();
  rs.refuse_policy = RefusePolicy::kRefuse;
  return rs;
}

RuleSet BcFitStream(const std::vector<Polyline2D>& polylines,
                    const std::vector<int>& labels, std::size_t class_count,
                    const ProjectionSpec& spec,
                    const std::vector<StreamBox>& stream, Membership m,
                    std::vector<std::string> class_names) {
  BcBuilder b(polylines, labels, class_count, spec, std::move(class_names));
  for (const auto& s : stream) {
    if (b.remaining_count() == 0) break;
    try {
      b.Accept(s.rect, m, s.cls.value_or(-1));
    } catch (const Error&) {
      // A box that captures nothing new does not become a rule.
    }
  }
  RuleSet rs = b.Build();
  rs.refuse_policy = RefusePolicy::kRefuse;
  return rs;
}

PruneResult Prune(const RuleSet& ruleset,
                  const std::vector<Polyline2D>& polylines,
                  const std::vector<int>& labels, std::size_t min_cases,
                  PruneMode mode, const std::vector<std::size_t>& only) {
  if (min_cases < 1) throw InvalidArgument("min_cases must be at least 1");
  PruneResult out;
  out.ruleset = ruleset;
  RuleSet& rs = out.ruleset;
  RecountCoverage(rs, polylines);
  const std::size_t k = rs.class_names.empty()
                            ? static_cast<std::size_t>(
                                  *std::max_element(labels.begin(), labels.end()) + 1)
                            : rs.class_names.size();
  auto is_mini = [&](const Rule& r) {
    return r.predicted_class != kRefuse && r.covered_count < min_cases &&
           (only.empty() || std::find(only.begin(), only.end(), r.id) != only.end());
  };
  std::vector<std::size_t> minis;
  for (std::size_t i = 0; i < rs.rules.size(); ++i) {
    if (is_mini(rs.rules[i])) minis.push_back(rs.rules[i].id);
  }
  auto find_rule = [&](std::size_t id) -> int {
    for (std::size_t i = 0; i < rs.rules.size(); ++i) {
      if (rs.rules[i].id == id) return static_cast<int>(i);
    }
    return -1;
  };
  for (std::size_t id : minis) {
    const int idx = find_rule(id);
    if (idx < 0) continue;
    Rule& mini = rs.rules[idx];
    PruneAction act;
    act.rule_id = id;
    if (mode == PruneMode::kRefuse) {
      mini.predicted_class = kRefuse;
      act.action = "refused";
      out.actions.push_back(act);
      continue;
    }
    // Region counts of the mini rule's boxes over every training case.
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < polylines.size(); ++i) {
      for (std::size_t b : mini.positive) {
        if (IsMember(polylines[i], rs.boxes[b].rect, rs.boxes[b].membership)) {
          counts[labels[i]]++;
          break;
        }
      }
    }
    const BoxStats st = MakeStats(counts);
    const int target = st.empty() ? mini.predicted_class : st.dominant;
    int host = -1;
    for (std::size_t j = 0; j < rs.rules.size(); ++j) {
      const Rule& r = rs.rules[j];
      if (static_cast<int>(j) == idx || r.predicted_class != target) continue;
      if (r.covered_count < min_cases) continue;
      if (host < 0 || r.covered_count > rs.rules[host].covered_count) {
        host = static_cast<int>(j);
      }
    }
    act.new_class = target;
    act.correct = st.empty() ? 0 : counts[target];
    act.wrong = st.total - act.correct;
    if (host < 0) {
      mini.predicted_class = kRefuse;
      act.action = "associate_fallback_refused";
      act.new_class = kRefuse;
      out.actions.push_back(act);
      continue;
    }
    Rule moved = mini;
    Rule& h = rs.rules[host];
    act.target_rule = static_cast<int>(h.id);
    for (std::size_t b : moved.positive) {
      std::optional<Rect> fused;
      if (h.positive.size() == 1 &&
          rs.boxes[h.positive[0]].membership == rs.boxes[b].membership) {
        fused = Fuse(rs.boxes[h.positive[0]].rect, rs.boxes[b].rect);
      }
      if (fused) {
        const Membership m = rs.boxes[b].membership;
        h.positive[0] = rs.AddBox(*fused, m, {});
      } else if (std::find(h.positive.begin(), h.positive.end(), b) ==
                 h.positive.end()) {
        h.positive.push_back(b);
      }
      h.negative.erase(std::remove(h.negative.begin(), h.negative.end(), b),
                       h.negative.end());
    }
    h.name += "+" + moved.name + "M";
    rs.rules.erase(rs.rules.begin() + idx);
    act.action = "associated";
    out.actions.push_back(act);
  }
  // Fill counts of fused boxes.
  for (auto& b : rs.boxes) {
    if (b.counts.empty()) {
      b.counts = ComputeBoxStats(b.rect, b.membership, polylines, labels, k).counts;
    }
  }
  RecountCoverage(rs, polylines);
  return out;
}

RuleSet JoinRules(const RuleSet& ruleset,
                  const std::vector<Polyline2D>& polylines) {
  RuleSet cur = ruleset;
  if (cur.rules.size() < 2) return cur;
  RuleEvaluator base_ev(cur, polylines);
  std::vector<std::vector<char>> member_by_case(
      polylines.size(), std::vector<char>(cur.boxes.size()));
  for (std::size_t i = 0; i < polylines.size(); ++i) {
    for (std::size_t b = 0; b < cur.boxes.size(); ++b) {
      member_by_case[i][b] = base_ev.Member(b, i);
    }
  }
  std::vector<int> baseline(polylines.size());
  for (std::size_t i = 0; i < polylines.size(); ++i) {
    baseline[i] = DecideWith(cur, cur.rules, member_by_case[i]).predicted;
  }
  auto equivalent = [&](const std::vector<Rule>& rules) {
    for (std::size_t i = 0; i < polylines.size(); ++i) {
      if (DecideWith(cur, rules, member_by_case[i]).predicted != baseline[i]) {
        return false;
      }
    }
    return true;
  };
  auto same_set = [](std::vector<std::size_t> a, std::vector<std::size_t> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return a == b;
  };
  auto suffix = [](const std::string& name) {
    return name.size() > 1 && name[0] == 'R' ? name.substr(1) : name;
  };

  // Step 1: unions of same-class rules.
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < cur.rules.size() && !changed; ++i) {
      const Rule& a = cur.rules[i];
      if (a.predicted_class == kRefuse || !a.else_branch.empty()) continue;
      for (std::size_t j = i + 1; j < cur.rules.size() && !changed; ++j) {
        const Rule& b = cur.rules[j];
        if (b.predicted_class != a.predicted_class || !b.else_branch.empty() ||
            !same_set(a.negative, b.negative)) {
          continue;
        }
        std::vector<Rule> trial = cur.rules;
        Rule& t = trial[i];
        for (std::size_t p : b.positive) {
          if (std::find(t.positive.begin(), t.positive.end(), p) ==
              t.positive.end()) {
            t.positive.push_back(p);
          }
        }
        t.name += "," + suffix(b.name);
        trial.erase(trial.begin() + j);
        if (equivalent(trial)) {
          cur.rules = std::move(trial);
          changed = true;
        }
      }
    }
  }

  // Steps 2-3: opposite-class rules conditioned on a joined rule's boxes
  // become its else branch.
  changed = true;
  while (changed) {
    changed = false;
    for (std::size_t j = 1; j < cur.rules.size() && !changed; ++j) {
      const Rule& r = cur.rules[j];
      if (r.predicted_class == kRefuse) continue;
      for (std::size_t i = 0; i < j && !changed; ++i) {
        const Rule& host = cur.rules[i];
        if (host.predicted_class == kRefuse ||
            host.predicted_class == r.predicted_class) {
          continue;
        }
        const bool conditioned = std::all_of(
            host.positive.begin(), host.positive.end(), [&](std::size_t b) {
              return std::find(r.negative.begin(), r.negative.end(), b) !=
                     r.negative.end();
            });
        if (!conditioned) continue;
        for (int simplify = 1; simplify >= 0 && !changed; --simplify) {
          if (simplify && !host.negative.empty()) continue;
          std::vector<Rule> trial = cur.rules;
          Rule moved = trial[j];
          if (simplify) {
            std::vector<std::size_t> neg;
            for (std::size_t b : moved.negative) {
              if (std::find(host.positive.begin(), host.positive.end(), b) ==
                  host.positive.end()) {
                neg.push_back(b);
              }
            }
            moved.negative = neg;
          }
          Rule* tail = &trial[i];
          while (!tail->else_branch.empty()) tail = &tail->else_branch.front();
          tail->else_branch.push_back(moved);
          trial[i].name += "," + suffix(moved.name);
          trial.erase(trial.begin() + j);
          if (equivalent(trial)) {
            cur.rules = std::move(trial);
            changed = true;
          }
        }
      }
    }
  }
  for (std::size_t i = 0; i < cur.rules.size(); ++i) cur.rules[i].order = i;
  RecountCoverage(cur, polylines);
  return cur;
}

nlohmann::json ToJson(const Rect& r) { return {r.x1, r.x2, r.y1, r.y2}; }

Rect RectFromJson(const nlohmann::json& j) {
  Rect r{j.at(0), j.at(1), j.at(2), j.at(3)};
  if (!r.valid()) throw InvalidArgument("box corners out of order");
  return r;
}

namespace {

nlohmann::json RuleJson(const Rule& r) {
  nlohmann::json j = {{"id", r.id},
                      {"name", r.name},
                      {"positive", r.positive},
                      {"negative", r.negative},
                      {"predicted_class", r.predicted_class},
                      {"covered_count", r.covered_count},
                      {"order", r.order}};
  if (!r.else_branch.empty()) j["else"] = RuleJson(r.else_branch.front());
  return j;
}

Rule RuleFromJson(const nlohmann::json& j) {
  Rule r;
  r.id = j.at("id");
  r.name = j.at("name");
  r.positive = j.at("positive").get<std::vector<std::size_t>>();
  r.negative = j.at("negative").get<std::vector<std::size_t>>();
  r.predicted_class = j.at("predicted_class");
  r.covered_count = j.at("covered_count");
  r.order = j.at("order");
  if (j.contains("else")) r.else_branch.push_back(RuleFromJson(j.at("else")));
  return r;
}

void RenderRule(const RuleSet& rs, const Rule& r, std::ostringstream& out) {
  auto boxes = [](const std::vector<std::size_t>& ids) {
    std::string s;
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (i) s += " ∪ ";
      s += "B" + std::to_string(ids[i] + 1);
    }
    return s;
  };
  out << "x ∈ " << boxes(r.positive);
  if (!r.negative.empty()) out << " & x ∉ " << boxes(r.negative);
  out << " ⇒ ";
  if (r.predicted_class == kRefuse) {
    out << "REFUSE";
  } else {
    out << "x ∈ " << ClassName(rs, r.predicted_class);
  }
  if (!r.else_branch.empty()) {
    out << " (else ";
    RenderRule(rs, r.else_branch.front(), out);
    out << ")";
  }
}

}  // namespace

nlohmann::json ToJson(const RuleSet& rs) {
  nlohmann::json boxes = nlohmann::json::array();
  for (const auto& b : rs.boxes) {
    boxes.push_back({{"id", b.id},
                     {"rect", ToJson(b.rect)},
                     {"counts", b.counts},
                     {"membership", MembershipName(b.membership)}});
  }
  nlohmann::json rules = nlohmann::json::array();
  for (const auto& r : rs.rules) rules.push_back(RuleJson(r));
  return {{"format", kRuleFormat},
          {"projection", ToJson(rs.projection)},
          {"refuse_policy",
           rs.refuse_policy == RefusePolicy::kRefuse ? "refuse" : "fallback_class"},
          {"fallback_class", rs.fallback_class},
          {"class_names", rs.class_names},
          {"boxes", boxes},
          {"rules", rules}};
}

RuleSet RuleSetFromJson(const nlohmann::json& j) {
  if (j.value("format", "") != kRuleFormat) {
    throw InvalidArgument("unsupported rule file format");
  }
  RuleSet rs;
  rs.projection = ProjectionSpecFromJson(j.at("projection"));
  rs.refuse_policy = j.at("refuse_policy") == "refuse"
                         ? RefusePolicy::kRefuse
                         : RefusePolicy::kFallbackClass;
  rs.fallback_class = j.at("fallback_class");
  rs.class_names = j.at("class_names").get<std::vector<std::string>>();
  for (const auto& b : j.at("boxes")) {
    Box box;
    box.id = b.at("id");
    box.rect = RectFromJson(b.at("rect"));
    box.counts = b.at("counts").get<std::vector<std::size_t>>();
    box.membership = ParseMembership(b.at("membership"));
    if (box.id != rs.boxes.size()) throw InvalidArgument("box ids not dense");
    rs.boxes.push_back(box);
  }
  for (const auto& r : j.at("rules")) rs.rules.push_back(RuleFromJson(r));
  rs.Validate();
  return rs;
}

std::string RenderRules(const RuleSet& rs) {
  std::ostringstream out;
  for (const auto& r : rs.rules) {
    out << r.name << ": ";
    RenderRule(rs, r, out);
    const std::size_t total = TotalCovered(r);
    out << " (" << total << (total == 1 ? " case" : " cases") << ")\n";
  }
  return out.str();
}

}  // namespace ilcml
