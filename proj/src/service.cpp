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

#include "ilcml/service.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <vector>

#include "httplib.h"
#include "ilcml/evaluation.hpp"
#include "ilcml/explain.hpp"

namespace ilcml {
namespace {

const char* kPrefix = "/api/v1/sessions";

std::string CodeName(ErrorCode c) {
  switch (c) {
    case ErrorCode::kOk:
      return "ok";
    case ErrorCode::kInvalidArgument:
      return "invalid_argument";
    case ErrorCode::kIo:
      return "io";
    case ErrorCode::kParse:
      return "parse";
    case ErrorCode::kNotFound:
      return "not_found";
    case ErrorCode::kConflict:
      return "conflict";
    case ErrorCode::kFailedPrecondition:
      return "failed_precondition";
    case ErrorCode::kInternal:
      return "internal";
  }
  return "internal";
}

int HttpStatus(ErrorCode c) {
  switch (c) {
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kParse:
      return 400;
    case ErrorCode::kNotFound:
      return 404;
    case ErrorCode::kConflict:
      return 409;
    case ErrorCode::kFailedPrecondition:
      return 422;
    default:
      return 500;
  }
}

HttpResponse Json(int status, const nlohmann::json& j) {
  return {status, j.dump(), "application/json"};
}

HttpResponse Fail(ErrorCode c, const std::string& message) {
  return Json(HttpStatus(c),
              {{"error", {{"code", CodeName(c)}, {"message", message}}}});
}

nlohmann::json StatsJson(const BoxStats& s) {
  return {{"counts", s.counts},
          {"total", s.total},
          {"dominant", s.dominant},
          {"purity", s.purity_fraction},
          {"coverage", s.coverage()}};
}

nlohmann::json Summary(const Session& s) {
  nlohmann::json classes = nlohmann::json::array();
  for (const auto& c : s.dataset().classes) {
    classes.push_back({{"name", c.name}, {"count", c.count}});
  }
  return {{"id", s.id()},
          {"status", SessionStatusName(s.status())},
          {"digest", s.Digest()},
          {"cases", s.dataset().size()},
          {"dimension", s.dataset().dimension()},
          {"classes", classes},
          {"remaining", s.remaining_count()},
          {"remaining_per_class", s.RemainingPerClass()},
          {"rule_count", s.rules().rules.size()},
          {"undo_depth", s.undo_depth()},
          {"finalized", s.finalized()},
          {"projection", ToJson(s.spec())},
          {"grid", ToJson(s.grid())}};
}

std::size_t QueryCount(const std::map<std::string, std::string>& q,
                       const std::string& key, std::size_t fallback) {
  auto it = q.find(key);
  if (it == q.end() || it->second.empty()) return fallback;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(it->second.c_str(), &end, 10);
  if (*end != '\0' || it->second[0] == '-') {
    throw InvalidArgument(key + " must be a non-negative integer");
  }
  return static_cast<std::size_t>(v);
}

void CheckDigest(const Session& s, const nlohmann::json& body) {
  if (!body.contains("digest")) {
    throw InvalidArgument("mutations must carry the session digest");
  }
  if (body.at("digest").get<std::string>() != s.Digest()) {
    throw Error(ErrorCode::kConflict, "stale session digest; refresh");
  }
}

double Round3(double v) { return std::round(v * 1000.0) / 1000.0; }

}  // namespace

Dataset LoadNamedDataset(const std::string& name, const std::string& data_dir) {
  namespace fs = std::filesystem;
  if (name == "wbc") {
    return IngestCsv((fs::path(data_dir) / "breast-cancer-wisconsin.data")
                         .string(),
                     CsvSchema::Wbc());
  }
  if (name == "pbc") {
    return IngestCsv((fs::path(data_dir) / "page-blocks.data").string(),
                     CsvSchema::Pbc());
  }
  throw Error(ErrorCode::kNotFound, "unknown dataset '" + name + "'");
}

ProjectionSpec ProjectionFromRequest(const nlohmann::json& j,
                                     std::size_t dimension) {
  if (j.contains("pairing")) {
    ProjectionSpec spec = ProjectionSpecFromJson(j);
    spec.Validate();
    return spec;
  }
  ProjectionSpec spec;
  spec.mode = ParseMode(j.value("mode", std::string("static_sequential")));
  const std::string layout = j.value("layout", std::string("zip"));
  if (layout == "zip") {
    spec.assignment = AxisAssignment::Zip(dimension);
  } else if (layout == "links") {
    spec.assignment = AxisAssignment::Links(dimension);
  } else {
    throw InvalidArgument("unknown layout '" + layout + "'");
  }
  spec.axis_spacing = j.value("spacing", spec.axis_spacing);
  if (j.contains("weights")) {
    spec.weights = j.at("weights").get<std::vector<double>>();
  }
  spec.Validate();
  return spec;
}

std::pair<std::string, int> BindAddressFromEnv() {
  std::string host = "127.0.0.1";
  int port = 8750;
  if (const char* v = std::getenv("ILCML_BIND"); v && *v) {
    std::string s = v;
    const auto colon = s.rfind(':');
    if (colon == std::string::npos) {
      port = std::atoi(s.c_str());
    } else {
      if (colon > 0) host = s.substr(0, colon);
      port = std::atoi(s.c_str() + colon + 1);
    }
    if (port <= 0 || port > 65535) {
      throw InvalidArgument("ILCML_BIND has no valid port");
    }
  }
  return {host, port};
}

Service::Service(ServiceOptions options) : options_(std::move(options)) {}

std::shared_ptr<Service::Entry> Service::Find(const std::string& id) {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) {
    throw Error(ErrorCode::kNotFound, "no session '" + id + "'");
  }
  return it->second;
}

HttpResponse Service::Create(const nlohmann::json& body) {
  Dataset data;
  const auto& ds = body.contains("dataset") ? body.at("dataset")
                                            : nlohmann::json("wbc");
  if (ds.is_string()) {
    data = LoadNamedDataset(ds.get<std::string>(), options_.data_dir);
  } else if (ds.is_object()) {
    data = DatasetFromJson(ds);
  } else {
    throw InvalidArgument("dataset must be a name or a dataset object");
  }
  const std::string norm = body.value("normalize", std::string("raw"));
  if (norm == "min_max_unit") {
    data = Normalize(data, Normalization::kMinMaxUnit);
  } else if (norm != "raw") {
    throw InvalidArgument("normalize must be raw or min_max_unit");
  }
  ProjectionSpec spec = ProjectionFromRequest(
      body.value("projection", nlohmann::json::object()), data.dimension());
  GridParams grid = GridParamsFromJson(body.value("grid",
                                                  nlohmann::json::object()));
  grid.Validate();

  auto entry = std::make_shared<Entry>();
  std::string id;
  {
    std::lock_guard<std::mutex> lock(mu_);
    id = "s" + std::to_string(next_id_++);
  }
  entry->session = std::make_unique<Session>(id, std::move(data),
                                             std::move(spec), grid);
  if (!options_.log_dir.empty()) {
    std::filesystem::create_directories(options_.log_dir);
    entry->session->AttachLogFile(
        (std::filesystem::path(options_.log_dir) / (id + ".jsonl")).string());
  }
  nlohmann::json out = Summary(*entry->session);
  {
    std::lock_guard<std::mutex> lock(mu_);
    sessions_[id] = entry;
  }
  return Json(201, out);
}

HttpResponse Service::Handle(const std::string& method,
                             const std::string& path,
                             const std::map<std::string, std::string>& query,
                             const std::string& body,
                             const std::string& token) {
  try {
    if (!options_.token.empty() && token != options_.token) {
      return Json(401, {{"error",
                         {{"code", "unauthorized"},
                          {"message", "missing or wrong token"}}}});
    }
    nlohmann::json request = nlohmann::json::object();
    if (!body.empty()) {
      try {
        request = nlohmann::json::parse(body);
      } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("body is not JSON: ") + e.what());
      }
    }
    const std::string prefix = kPrefix;
    if (path.compare(0, prefix.size(), prefix) != 0) {
      throw Error(ErrorCode::kNotFound, "no route " + path);
    }
    std::string rest = path.substr(prefix.size());
    if (rest.empty() || rest == "/") {
      if (method == "POST") return Create(request);
      if (method == "GET") {
        nlohmann::json list = nlohmann::json::array();
        std::vector<std::shared_ptr<Entry>> entries;
        {
          std::lock_guard<std::mutex> lock(mu_);
          for (auto& [id, e] : sessions_) entries.push_back(e);
        }
        for (auto& e : entries) {
          std::lock_guard<std::mutex> lock(e->mu);
          list.push_back({{"id", e->session->id()},
                          {"status", SessionStatusName(e->session->status())},
                          {"digest", e->session->Digest()}});
        }
        return Json(200, {{"sessions", list}});
      }
      return Fail(ErrorCode::kInvalidArgument, "method not allowed");
    }
    if (rest[0] != '/') throw Error(ErrorCode::kNotFound, "no route " + path);
    rest = rest.substr(1);
    const auto slash = rest.find('/');
    const std::string id = rest.substr(0, slash);
    std::string action, tail;
    if (slash != std::string::npos) {
      action = rest.substr(slash + 1);
      const auto s2 = action.find('/');
      if (s2 != std::string::npos) {
        tail = action.substr(s2 + 1);
        action = action.substr(0, s2);
      }
    }
    if (action.empty() && method == "DELETE") {
      std::lock_guard<std::mutex> lock(mu_);
      if (sessions_.erase(id) == 0) {
        throw Error(ErrorCode::kNotFound, "no session '" + id + "'");
      }
      return Json(200, {{"deleted", id}});
    }
    auto entry = Find(id);
    std::lock_guard<std::mutex> lock(entry->mu);
    return Route(*entry, method, action, tail, query, request);
  } catch (const Error& e) {
    return Fail(e.code(), e.what());
  } catch (const nlohmann::json::exception& e) {
    return Fail(ErrorCode::kInvalidArgument, e.what());
  } catch (const std::exception& e) {
    return Fail(ErrorCode::kInternal, e.what());
  }
}

HttpResponse Service::Route(Entry& e, const std::string& method,
                            const std::string& action, const std::string& rest,
                            const std::map<std::string, std::string>& query,
                            const nlohmann::json& body) {
  Session& s = *e.session;
  auto want = [&](const char* m) {
    if (method != m) throw InvalidArgument("method not allowed");
  };
  if (action.empty()) {
    want("GET");
    return Json(200, Summary(s));
  }
  if (action == "projection") {
    want("GET");
    const std::size_t step = std::max<std::size_t>(1, QueryCount(query, "decimate", 1));
    const auto& labels = s.dataset().labels();
    nlohmann::json lines = nlohmann::json::array();
    for (std::size_t i = 0; i < s.polylines().size(); i += step) {
      nlohmann::json nodes = nlohmann::json::array();
      for (const auto& p : s.polylines()[i].nodes) {
        nodes.push_back(step > 1 ? nlohmann::json{Round3(p.x), Round3(p.y)}
                                 : nlohmann::json{p.x, p.y});
      }
      lines.push_back({{"case", i},
                       {"label", labels[i]},
                       {"remaining", s.remaining()[i] != 0},
                       {"nodes", nodes}});
    }
    return Json(200, {{"digest", s.Digest()},
                      {"total", s.polylines().size()},
                      {"decimate", step},
                      {"exact", step == 1},
                      {"polylines", lines}});
  }
  if (action == "polylines") {
    want("GET");
    char* end = nullptr;
    const unsigned long long i = std::strtoull(rest.c_str(), &end, 10);
    if (rest.empty() || *end != '\0') throw InvalidArgument("bad case index");
    if (i >= s.polylines().size()) {
      throw Error(ErrorCode::kNotFound, "no case " + rest);
    }
    nlohmann::json out = ToJson(s.polylines()[i]);
    out["case"] = i;
    out["label"] = s.dataset().cases[i].label;
    out["values"] = s.dataset().cases[i].values;
    return Json(200, out);
  }
  if (action == "candidates") {
    want("GET");
    const auto cands = s.Candidates(QueryCount(query, "top_k", 0));
    nlohmann::json list = nlohmann::json::array();
    for (const auto& c : cands) {
      nlohmann::json item = StatsJson(c.stats);
      item["rect"] = ToJson(c.rect);
      list.push_back(item);
    }
    return Json(200, {{"digest", s.Digest()},
                      {"status", SessionStatusName(s.status())},
                      {"candidates", list}});
  }
  if (action == "accept") {
    want("POST");
    CheckDigest(s, body);
    if (!body.contains("rect")) throw InvalidArgument("accept needs rect");
    const auto& r = body.at("rect");
    if (!r.is_array() || r.size() != 4) {
      throw InvalidArgument("rect must be [x1, x2, y1, y2]");
    }
    for (const auto& v : r) {
      if (!v.is_number() || !std::isfinite(v.get<double>())) {
        throw InvalidArgument("rect corners must be finite numbers");
      }
    }
    const Membership m =
        body.contains("membership")
            ? ParseMembership(body.at("membership").get<std::string>())
            : s.grid().membership;
    const Rule& rule = s.Accept(RectFromJson(r), m, body.value("class", -1));
    nlohmann::json out = Summary(s);
    out["rule"] = {{"id", rule.id},
                   {"name", rule.name},
                   {"class", rule.predicted_class},
                   {"positive", rule.positive},
                   {"negative", rule.negative},
                   {"covered", rule.covered_count}};
    return Json(200, out);
  }
  if (action == "undo") {
    want("POST");
    CheckDigest(s, body);
    s.Undo();
    return Json(200, Summary(s));
  }
  if (action == "prune") {
    want("POST");
    CheckDigest(s, body);
    const std::string mode = body.value("mode", std::string("refuse"));
    if (mode != "refuse" && mode != "associate") {
      throw InvalidArgument("mode must be refuse or associate");
    }
    const auto r = s.Prune(
        body.value("min_cases", std::size_t{17}),
        mode == "refuse" ? PruneMode::kRefuse : PruneMode::kAssociate,
        body.value("only", std::vector<std::size_t>{}));
    nlohmann::json actions = nlohmann::json::array();
    for (const auto& a : r.actions) {
      actions.push_back({{"rule", a.rule_id},
                         {"action", a.action},
                         {"target_rule", a.target_rule},
                         {"new_class", a.new_class},
                         {"correct", a.correct},
                         {"wrong", a.wrong}});
    }
    nlohmann::json out = Summary(s);
    out["actions"] = actions;
    return Json(200, out);
  }
  if (action == "join") {
    want("POST");
    CheckDigest(s, body);
    s.Join();
    return Json(200, Summary(s));
  }
  if (action == "rules") {
    want("GET");
    return {200, RuleFileText(s.rules()), "application/json"};
  }
  if (action == "rules.txt") {
    want("GET");
    return {200, RenderRules(s.rules()), "text/plain; charset=utf-8"};
  }
  if (action == "evaluate") {
    want("GET");
    nlohmann::json out;
    const auto outcomes = RuleMetrics(s.rules(), s.dataset(), SplitRole::kTrain);
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& o : outcomes) rows.push_back(ToJson(o));
    out["digest"] = s.Digest();
    out["rules"] = rows;
    try {
      out["weighted_precision"] = WeightedPrecision(outcomes);
    } catch (const Error&) {
      out["weighted_precision"] = nullptr;
    }
    return Json(200, out);
  }
  if (action == "explain") {
    want("POST");
    if (!body.contains("point")) throw InvalidArgument("explain needs point");
    ExplainRequest req = ExplainRequestFromJson(body);
    if (req.point.size() != s.dataset().dimension()) {
      throw InvalidArgument("point has wrong dimension");
    }
    req.predictor = RuleSetPredictor(s.rules());
    const Explanation ex = ExplainLocal(req, s.dataset(), s.spec());
    nlohmann::json out = ToJson(ex, s.spec());
    out["digest"] = s.Digest();
    return Json(200, out);
  }
  if (action == "log") {
    want("GET");
    return {200, s.LogText(), "application/x-ndjson"};
  }
  throw Error(ErrorCode::kNotFound, "no route for '" + action + "'");
}

void Service::Serve(const std::string& host, int port) {
  httplib::Server server;
  auto bridge = [this](const httplib::Request& req, httplib::Response& res) {
    std::map<std::string, std::string> query;
    for (const auto& [k, v] : req.params) query[k] = v;
    const HttpResponse r =
        Handle(req.method, req.path, query, req.body,
               req.get_header_value("X-Ilcml-Token"));
    res.status = r.status;
    res.set_content(r.body, r.content_type);
  };
  const std::string pattern = std::string(kPrefix) + "(/.*)?";
  server.Get(pattern, bridge);
  server.Post(pattern, bridge);
  server.Delete(pattern, bridge);
  {
    std::lock_guard<std::mutex> lock(mu_);
    server_ = &server;
  }
  const bool ok = server.listen(host, port);
  {
    std::lock_guard<std::mutex> lock(mu_);
    server_ = nullptr;
  }
  if (!ok) {
    throw Error(ErrorCode::kIo,
                "cannot listen on " + host + ":" + std::to_string(port));
  }
}

void Service::Stop() {
  std::lock_guard<std::mutex> lock(mu_);
  if (server_) server_->stop();
}

}  // namespace ilcml
