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

#ifndef ILCML_SESSION_HPP_
#define ILCML_SESSION_HPP_

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ilcml/box.hpp"
#include "ilcml/dataset.hpp"
#include "ilcml/projection.hpp"
#include "json.hpp"

namespace ilcml {

enum class SessionStatus { kIdle, kCandidatesReady, kComplete };

std::string SessionStatusName(SessionStatus s);

// Interactive box discovery over one dataset and projection. Every mutation
// is appended to the action log; replaying the log from the create record
// rebuilds the same state.
class Session {
 public:
  Session(std::string id, Dataset data, ProjectionSpec spec, GridParams grid);

  const std::string& id() const { return id_; }
  const Dataset& dataset() const { return *data_; }
  const ProjectionSpec& spec() const { return spec_; }
  const GridParams& grid() const { return grid_; }
  const std::vector<Polyline2D>& polylines() const { return *polylines_; }
  SessionStatus status() const;
  // FNV-1a over the rule file and the remaining set.
  std::string Digest() const;
  std::size_t remaining_count() const;
  std::vector<std::size_t> RemainingPerClass() const;
  const std::vector<char>& remaining() const;
  std::size_t undo_depth() const { return undo_.size(); }
  // Accepted rules, or the pruned/joined rule set once finalized.
  const RuleSet& rules() const;
  bool finalized() const { return state_.final_rules.has_value(); }

  std::vector<Candidate> Candidates(std::size_t top_k);
  const Rule& Accept(const Rect& rect, Membership m, int cls = -1);
  void Undo();
  PruneResult Prune(std::size_t min_cases, PruneMode mode,
                    const std::vector<std::size_t>& only = {});
  void Join();

  // One JSON object per line, create record first.
  const std::vector<nlohmann::json>& log() const { return log_; }
  std::string LogText() const;
  // Mirrors every log record to `path` (append-only). Existing records are
  // written first.
  void AttachLogFile(const std::string& path);

  static std::unique_ptr<Session> Replay(const std::string& log_text);

 private:
  struct State {
    BcBuilder builder;
    std::optional<RuleSet> final_rules;
  };
  void Record(nlohmann::json entry);

  std::string id_;
  std::shared_ptr<const Dataset> data_;
  ProjectionSpec spec_;
  GridParams grid_;
  std::shared_ptr<const std::vector<Polyline2D>> polylines_;
  State state_;
  std::vector<State> undo_;
  bool candidates_ready_ = false;
  std::vector<nlohmann::json> log_;
  std::string log_path_;
};

std::string RuleFileText(const RuleSet& ruleset);

}  // namespace ilcml

#endif  // ILCML_SESSION_HPP_
