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

#include "ilcml/session.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <utility>

namespace ilcml {

std::string SessionStatusName(SessionStatus s) {
  switch (s) {
    case SessionStatus::kIdle:
      return "idle";
    case SessionStatus::kCandidatesReady:
      return "candidates_ready";
    case SessionStatus::kComplete:
      return "complete";
  }
  return "idle";
}

std::string RuleFileText(const RuleSet& ruleset) {
  return ToJson(ruleset).dump(2) + "\n";
}

Session::Session(std::string id, Dataset data, ProjectionSpec spec,
                 GridParams grid)
    : id_(std::move(id)),
      data_(std::make_shared<const Dataset>(std::move(data))),
      spec_(std::move(spec)),
      grid_(std::move(grid)),
      polylines_(std::make_shared<const std::vector<Polyline2D>>(
          ProjectCases(*data_, spec_))),
      state_{BcBuilder(*polylines_, data_->labels(), data_->class_count(),
                       spec_, [&] {
                         std::vector<std::string> names;
                         for (const auto& c : data_->classes) {
                           names.push_back(c.name);
                         }
                         return names;
                       }()),
             std::nullopt} {
  grid_.Validate();
  Record({{"op", "create"},
          {"id", id_},
          {"dataset", ToJson(*data_)},
          {"projection", ToJson(spec_)},
          {"grid", ToJson(grid_)}});
}

SessionStatus Session::status() const {
  if (finalized() || remaining_count() == 0) return SessionStatus::kComplete;
  return candidates_ready_ ? SessionStatus::kCandidatesReady
                           : SessionStatus::kIdle;
}

std::string Session::Digest() const {
  std::uint64_t h = 14695981039346656037ull;
  auto mix = [&h](unsigned char c) {
    h ^= c;
    h *= 1099511628211ull;
  };
  for (unsigned char c : RuleFileText(rules())) mix(c);
  mix(0xff);
  for (char c : remaining()) mix(c ? '1' : '0');
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

std::size_t Session::remaining_count() const {
  return state_.builder.remaining_count();
}

std::vector<std::size_t> Session::RemainingPerClass() const {
  return state_.builder.RemainingPerClass();
}

const std::vector<char>& Session::remaining() const {
  return state_.builder.remaining();
}

const RuleSet& Session::rules() const {
  return state_.final_rules ? *state_.final_rules : state_.builder.ruleset();
}

std::vector<Candidate> Session::Candidates(std::size_t top_k) {
  GridParams g = grid_;
  if (top_k > 0) g.top_k = top_k;
  auto out = GridSearch(*polylines_, data_->labels(), data_->class_count(), g,
                        remaining());
  candidates_ready_ = !finalized();
  return out;
}

const Rule& Session::Accept(const Rect& rect, Membership m, int cls) {
  if (finalized()) {
    throw FailedPrecondition(
        "rules were pruned or joined; undo before accepting more boxes");
  }
  if (!rect.valid()) throw InvalidArgument("box corners out of order");
  if (cls >= static_cast<int>(data_->class_count())) {
    throw InvalidArgument("class out of range");
  }
  State before = state_;
  state_.builder.Accept(rect, m, cls);
  undo_.push_back(std::move(before));
  candidates_ready_ = false;
  Record({{"op", "accept"},
          {"rect", ToJson(rect)},
          {"membership", MembershipName(m)},
          {"class", cls}});
  return state_.builder.ruleset().rules.back();
}

void Session::Undo() {
  if (undo_.empty()) throw FailedPrecondition("nothing to undo");
  state_ = std::move(undo_.back());
  undo_.pop_back();
  candidates_ready_ = false;
  Record({{"op", "undo"}});
}

PruneResult Session::Prune(std::size_t min_cases, PruneMode mode,
                           const std::vector<std::size_t>& only) {
  PruneResult r = ilcml::Prune(rules(), *polylines_, data_->labels(),
                               min_cases, mode, only);
  undo_.push_back(state_);
  state_.final_rules = r.ruleset;
  candidates_ready_ = false;
  Record({{"op", "prune"},
          {"min_cases", min_cases},
          {"mode", mode == PruneMode::kRefuse ? "refuse" : "associate"},
          {"only", only}});
  return r;
}

void Session::Join() {
  RuleSet joined = JoinRules(rules(), *polylines_);
  undo_.push_back(state_);
  state_.final_rules = std::move(joined);
  candidates_ready_ = false;
  Record({{"op", "join"}});
}

void Session::Record(nlohmann::json entry) {
  entry["seq"] = log_.size();
  if (!log_path_.empty()) {
    std::ofstream f(log_path_, std::ios::app);
    f << entry.dump() << "\n";
    if (!f) throw Error(ErrorCode::kIo, "cannot append to " + log_path_);
  }
  log_.push_back(std::move(entry));
}

std::string Session::LogText() const {
  std::string out;
  for (const auto& e : log_) out += e.dump() + "\n";
  return out;
}

void Session::AttachLogFile(const std::string& path) {
  std::ofstream f(path, std::ios::app);
  if (!f) throw Error(ErrorCode::kIo, "cannot open " + path);
  for (const auto& e : log_) f << e.dump() << "\n";
  log_path_ = path;
}

std::unique_ptr<Session> Session::Replay(const std::string& log_text) {
  std::istringstream in(log_text);
  std::string line;
  std::unique_ptr<Session> s;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    nlohmann::json e;
    try {
      e = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& ex) {
      throw ParseError(lineno, ex.what());
    }
    const std::string op = e.value("op", "");
    if (!s) {
      if (op != "create") throw ParseError(lineno, "log must start with create");
      s = std::make_unique<Session>(
          e.at("id").get<std::string>(), DatasetFromJson(e.at("dataset")),
          ProjectionSpecFromJson(e.at("projection")),
          GridParamsFromJson(e.at("grid")));
      continue;
    }
    if (op == "accept") {
      s->Accept(RectFromJson(e.at("rect")),
                ParseMembership(e.at("membership").get<std::string>()),
                e.at("class").get<int>());
    } else if (op == "undo") {
      s->Undo();
    } else if (op == "prune") {
      s->Prune(e.at("min_cases").get<std::size_t>(),
               e.at("mode").get<std::string>() == "refuse"
                   ? PruneMode::kRefuse
                   : PruneMode::kAssociate,
               e.value("only", std::vector<std::size_t>{}));
    } else if (op == "join") {
      s->Join();
    } else {
      throw ParseError(lineno, "unknown action '" + op + "'");
    }
  }
  if (!s) throw InvalidArgument("empty action log");
  return s;
}

}  // namespace ilcml
