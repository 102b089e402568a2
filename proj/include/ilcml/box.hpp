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

#ifndef ILCML_BOX_HPP_
#define ILCML_BOX_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ilcml/common.hpp"
#include "ilcml/projection.hpp"
#include "json.hpp"

namespace ilcml {

enum class Membership { kNodeIn, kEdgeCross };

std::string MembershipName(Membership m);
Membership ParseMembership(const std::string& name);

// Closed axis-aligned rectangle: left, right, bottom, top.
struct Rect {
  double x1 = 0.0;
  double x2 = 0.0;
  double y1 = 0.0;
  double y2 = 0.0;

  bool Contains(Point2 p) const {
    return p.x >= x1 && p.x <= x2 && p.y >= y1 && p.y <= y2;
  }
  bool IntersectsSegment(Point2 p, Point2 q) const;
  double area() const { return (x2 - x1) * (y2 - y1); }
  bool valid() const { return x1 <= x2 && y1 <= y2; }
  bool operator==(const Rect&) const = default;
};

bool IsMember(const Polyline2D& polyline, const Rect& rect, Membership mode);

struct Box {
  std::size_t id = 0;
  Rect rect;
  std::vector<std::size_t> counts;
  Membership membership = Membership::kNodeIn;
};

struct BoxStats {
  std::vector<std::size_t> counts;
  std::size_t total = 0;
  int dominant = -1;
  // dominant / total; -1 for an empty box.
  double purity_fraction = -1.0;
  // dominant / others, +inf when others is zero; -1 for an empty box.
  double purity_ratio = -1.0;
  std::size_t coverage() const {
    return dominant < 0 ? 0 : counts[dominant];
  }
  bool empty() const { return total == 0; }
};

BoxStats MakeStats(std::vector<std::size_t> counts);

// `subset` restricts the count to cases flagged non-zero (all when empty).
BoxStats ComputeBoxStats(const Rect& rect, Membership mode,
                         const std::vector<Polyline2D>& polylines,
                         const std::vector<int>& labels,
                         std::size_t class_count,
                         const std::vector<char>& subset = {});

// Ranking key: purity fraction desc, coverage desc, area asc, corners asc.
// Returns true when `a` ranks strictly before `b`.
bool RanksBefore(const Rect& ra, const BoxStats& a, const Rect& rb,
                 const BoxStats& b);

enum class CoverageBasis { kRemainingTotal, kClassRemaining };

struct GridParams {
  double cell_width = 0.5;
  double cell_height = 0.5;
  std::size_t max_span_w = 1000;
  std::size_t max_span_h = 1000;
  double coverage_fraction = 0.1;
  double purity_threshold = 1.0;
  CoverageBasis basis = CoverageBasis::kRemainingTotal;
  std::size_t min_coverage = 1;
  Membership membership = Membership::kNodeIn;
  // Search area; the polylines' bounding rectangle when absent.
  std::optional<Rect> area;
  // Number of ranked candidates returned.
  std::size_t top_k = 16;

  void Validate() const;
};

struct Candidate {
  Rect rect;
  BoxStats stats;
};

// Unions of contiguous closed grid cells, grown from every anchor cell up to
// the maximum spans, that meet the coverage and purity thresholds over the
// remaining cases. Ranked by RanksBefore.
std::vector<Candidate> GridSearch(const std::vector<Polyline2D>& polylines,
                                  const std::vector<int>& labels,
                                  std::size_t class_count,
                                  const GridParams& grid,
                                  const std::vector<char>& remaining);

struct Rule {
  std::size_t id = 0;
  std::vector<std::size_t> positive;
  std::vector<std::size_t> negative;
  // kRefuse marks a region whose cases are deliberately not classified.
  int predicted_class = 0;
  // Zero or one nested rule, tried when this rule does not fire.
  std::vector<Rule> else_branch;
  std::size_t covered_count = 0;
  std::size_t order = 0;
  std::string name;
};

enum class RefusePolicy { kRefuse, kFallbackClass };

struct RuleSet {
  std::vector<Rule> rules;
  std::vector<Box> boxes;
  ProjectionSpec projection;
  RefusePolicy refuse_policy = RefusePolicy::kRefuse;
  int fallback_class = 0;
  std::vector<std::string> class_names;

  const Box& box(std::size_t id) const;
  std::size_t AddBox(const Rect& rect, Membership m,
                     std::vector<std::size_t> counts);
  void Validate() const;
};

struct Decision {
  int predicted = kRefuse;
  // Index of the top-level rule that decided, -1 when none fired.
  int rule = -1;
  // Depth of the else chain that fired (0 = the rule itself).
  int else_depth = 0;
  bool operator==(const Decision&) const = default;
};

Decision Classify(const RuleSet& ruleset, const Polyline2D& polyline);
Decision ClassifyValues(const RuleSet& ruleset,
                        const std::vector<double>& values);

// Box membership cache for repeated classification of a fixed case list.
class RuleEvaluator {
 public:
  RuleEvaluator(const RuleSet& ruleset,
                const std::vector<Polyline2D>& polylines);
  Decision Decide(std::size_t case_index) const;
  std::vector<Decision> DecideAll() const;
  bool Fires(const Rule& rule, std::size_t case_index) const;
  // Refresh after boxes were appended to the rule set.
  void Sync();
  bool Member(std::size_t box, std::size_t case_index) const {
    return member_[box][case_index] != 0;
  }

 private:
  Decision DecideFrom(const std::vector<Rule>& rules, std::size_t i) const;
  const RuleSet* ruleset_;
  const std::vector<Polyline2D>* polylines_;
  std::vector<std::vector<char>> member_;
};

// Recompute covered counts: cases each rule (and else rule) fires on in
// hierarchical order.
void RecountCoverage(RuleSet& ruleset, const std::vector<Polyline2D>& polylines);

// Sequential hierarchical rule construction shared by the automatic fit,
// the injected-candidate fit and interactive sessions.
class BcBuilder {
 public:
  BcBuilder(const std::vector<Polyline2D>& polylines, std::vector<int> labels,
            std::size_t class_count, ProjectionSpec spec,
            std::vector<std::string> class_names = {});
  const std::vector<char>& remaining() const { return remaining_; }
  std::size_t remaining_count() const;
  std::vector<std::size_t> RemainingPerClass() const;
  // Emits a rule for `rect`. cls < 0 picks the dominant class among the
  // remaining members. Throws when the box fires on no remaining case.
  const Rule& Accept(const Rect& rect, Membership m, int cls = -1);
  const RuleSet& ruleset() const { return ruleset_; }
  RuleSet Build() const { return ruleset_; }

 private:
  const std::vector<Polyline2D>* polylines_;
  std::vector<int> labels_;
  std::size_t class_count_;
  RuleSet ruleset_;
  std::vector<char> remaining_;
  std::vector<int> fired_by_;
  std::vector<std::vector<char>> member_;
};

struct StopConfig {
  std::size_t max_rules = 1000;
  // Stop when the best candidate would fire on fewer cases.
  std::size_t min_cases = 1;
};

RuleSet BcFit(const std::vector<Polyline2D>& polylines,
              const std::vector<int>& labels, std::size_t class_count,
              const ProjectionSpec& spec, const GridParams& grid,
              const StopConfig& stop,
              std::vector<std::string> class_names = {});

struct StreamBox {
  Rect rect;
  // Dominant class among remaining members when absent.
  std::optional<int> cls;
};

RuleSet BcFitStream(const std::vector<Polyline2D>& polylines,
                    const std::vector<int>& labels, std::size_t class_count,
                    const ProjectionSpec& spec,
                    const std::vector<StreamBox>& stream, Membership m,
                    std::vector<std::string> class_names = {});

enum class PruneMode { kAssociate, kRefuse };

struct PruneAction {
  std::size_t rule_id = 0;
  std::string action;  // "refused", "associated", "associate_fallback_refused"
  int target_rule = -1;
  int new_class = kRefuse;
  std::size_t correct = 0;
  std::size_t wrong = 0;
};

struct PruneResult {
  RuleSet ruleset;
  std::vector<PruneAction> actions;
};

// Rules firing on fewer than `min_cases` training cases are either turned
// into REFUSE regions in place or associated with a larger rule of the class
// that dominates the mini box over all training cases.
PruneResult Prune(const RuleSet& ruleset,
                  const std::vector<Polyline2D>& polylines,
                  const std::vector<int>& labels, std::size_t min_cases,
                  PruneMode mode, const std::vector<std::size_t>& only = {});

// Same-class rules with equal negative sets merge into unions, and
// opposite-class rules conditioned on a merged rule become its else branch.
// Each step is kept only if every training decision is unchanged.
RuleSet JoinRules(const RuleSet& ruleset,
                  const std::vector<Polyline2D>& polylines);

constexpr const char* kRuleFormat = "ilcml.rules/1";

nlohmann::json ToJson(const Rect& r);
Rect RectFromJson(const nlohmann::json& j);
nlohmann::json ToJson(const RuleSet& ruleset);
nlohmann::json ToJson(const GridParams& g);
GridParams GridParamsFromJson(const nlohmann::json& j);
RuleSet RuleSetFromJson(const nlohmann::json& j);
// Plain notation, one rule per line: "R1: x ∈ B1 ⇒ x ∈ benign (382 cases)".
std::string RenderRules(const RuleSet& ruleset);

}  // namespace ilcml

#endif  // ILCML_BOX_HPP_
