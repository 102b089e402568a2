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

#include "ilcml/ilcml.h"

#include <cstdlib>
#include <cstring>
#include <map>
#include <memory>
#include <string>

#include "ilcml/dataset.hpp"
#include "ilcml/evaluation.hpp"
#include "ilcml/explain.hpp"
#include "ilcml/reproduce.hpp"
#include "ilcml/service.hpp"
#include "ilcml/session.hpp"

struct ilcml_dataset {
  ilcml::Dataset data;
};

struct ilcml_session {
  std::unique_ptr<ilcml::Session> session;
};

struct ilcml_service {
  std::unique_ptr<ilcml::Service> service;
};

namespace {

thread_local std::string g_error;
thread_local int g_code = ILCML_OK;

int SetError(int code, const std::string& message) {
  g_error = message;
  g_code = code;
  return code;
}

// Runs `f`, translating exceptions into codes.
template <typename F>
int Guard(F&& f) {
  g_error.clear();
  g_code = ILCML_OK;
  try {
    f();
    return ILCML_OK;
  } catch (const ilcml::Error& e) {
    return SetError(static_cast<int>(e.code()), e.what());
  } catch (const nlohmann::json::exception& e) {
    return SetError(ILCML_PARSE, e.what());
  } catch (const std::bad_alloc&) {
    return SetError(ILCML_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return SetError(ILCML_INTERNAL, e.what());
  }
}

void Require(const void* p, const char* what) {
  if (p == nullptr) {
    throw ilcml::InvalidArgument(std::string(what) + " is null");
  }
}

char* Dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

nlohmann::json Parse(const char* text, const char* what) {
  if (text == nullptr || *text == '\0') return nlohmann::json::object();
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ilcml::Error(ilcml::ErrorCode::kParse,
                       std::string(what) + ": " + e.what());
  }
}

// A rule file, or a BC model wrapping one.
ilcml::RuleSet ParseRules(const char* text) {
  const auto j = Parse(text, "rules");
  if (j.value("format", "") == ilcml::kModelFormat) {
    if (j.value("kind", "") != "bc") {
      throw ilcml::InvalidArgument("model of kind '" + j.value("kind", "") +
                                   "' has no single rule file");
    }
    return ilcml::RuleSetFromJson(j.at("rules"));
  }
  return ilcml::RuleSetFromJson(j);
}

ilcml::PruneMode ParsePruneMode(const char* mode) {
  const std::string m = mode ? mode : "refuse";
  if (m == "refuse") return ilcml::PruneMode::kRefuse;
  if (m == "associate") return ilcml::PruneMode::kAssociate;
  throw ilcml::InvalidArgument("prune mode must be refuse or associate");
}

ilcml::TreeConfig TreeFromJson(const nlohmann::json& j) {
  ilcml::TreeConfig t = ilcml::TreeConfig::Baseline();
  t.max_depth = j.value("max_depth", t.max_depth);
  t.min_leaf_cases = j.value("min_leaf_cases", t.min_leaf_cases);
  return t;
}

// Expands the "preset" key and projection shorthand against the dataset.
ilcml::PipelineConfig ResolvePipeline(const nlohmann::json& j,
                                      std::size_t dimension) {
  nlohmann::json full = j;
  const std::string preset = j.value("preset", std::string());
  if (preset == "pbc") {
    nlohmann::json base = ilcml::ToJson(ilcml::PipelineConfig::PbcDtgBc());
    base.erase("projection");
    for (auto& [k, v] : j.items()) base[k] = v;
    full = base;
  } else if (!preset.empty()) {
    throw ilcml::InvalidArgument("unknown preset '" + preset + "'");
  }
  full.erase("preset");
  full["projection"] = ilcml::ToJson(ilcml::ProjectionFromRequest(
      full.value("projection", nlohmann::json::object()), dimension));
  return ilcml::PipelineConfigFromJson(full);
}

}  // namespace

extern "C" {

const char* ilcml_version(void) { return "1.0.0"; }

const char* ilcml_last_error(void) { return g_error.c_str(); }

int ilcml_last_error_code(void) { return g_code; }

void ilcml_string_free(char* s) { std::free(s); }

int ilcml_dataset_load_named(const char* name, const char* data_dir,
                             ilcml_dataset** out) {
  return Guard([&] {
    Require(name, "name");
    Require(data_dir, "data_dir");
    Require(out, "out");
    *out = new ilcml_dataset{ilcml::LoadNamedDataset(name, data_dir)};
  });
}

int ilcml_dataset_load_csv(const char* path, const char* schema_json,
                           ilcml_dataset** out) {
  return Guard([&] {
    Require(path, "path");
    Require(out, "out");
    const auto j = Parse(schema_json, "schema");
    *out = new ilcml_dataset{
        ilcml::IngestCsv(path, ilcml::CsvSchemaFromJson(j))};
  });
}

int ilcml_dataset_from_json(const char* json, ilcml_dataset** out) {
  return Guard([&] {
    Require(json, "json");
    Require(out, "out");
    *out = new ilcml_dataset{ilcml::DatasetFromJson(Parse(json, "dataset"))};
  });
}

int ilcml_dataset_normalize(ilcml_dataset* d, const char* mode) {
  return Guard([&] {
    Require(d, "dataset");
    const std::string m = mode ? mode : "min_max_unit";
    if (m == "raw") {
      d->data = ilcml::Denormalize(d->data);
    } else if (m == "min_max_unit") {
      d->data = ilcml::Normalize(d->data, ilcml::Normalization::kMinMaxUnit);
    } else {
      throw ilcml::InvalidArgument("unknown normalization '" + m + "'");
    }
  });
}

int ilcml_dataset_to_json(const ilcml_dataset* d, char** out) {
  return Guard([&] {
    Require(d, "dataset");
    Require(out, "out");
    *out = Dup(ilcml::ToJson(d->data).dump());
  });
}

int ilcml_dataset_summary(const ilcml_dataset* d, char** out) {
  return Guard([&] {
    Require(d, "dataset");
    Require(out, "out");
    nlohmann::json classes = nlohmann::json::array();
    for (const auto& c : d->data.classes) {
      classes.push_back({{"name", c.name}, {"count", c.count}});
    }
    nlohmann::json attrs = nlohmann::json::array();
    for (const auto& a : d->data.attributes) {
      attrs.push_back({{"name", a.name},
                       {"min", a.observed_min},
                       {"max", a.observed_max},
                       {"resolution", a.resolution},
                       {"quantum", a.quantum}});
    }
    *out = Dup(nlohmann::json{{"cases", d->data.size()},
                              {"classes", classes},
                              {"attributes", attrs},
                              {"normalization",
                               d->data.normalization ==
                                       ilcml::Normalization::kRaw
                                   ? "raw"
                                   : "min_max_unit"}}
                   .dump());
  });
}

size_t ilcml_dataset_size(const ilcml_dataset* d) {
  return d ? d->data.size() : 0;
}

void ilcml_dataset_free(ilcml_dataset* d) { delete d; }

int ilcml_project(const ilcml_dataset* d, const char* projection_json,
                  char** out) {
  return Guard([&] {
    Require(d, "dataset");
    Require(out, "out");
    const auto spec = ilcml::ProjectionFromRequest(
        Parse(projection_json, "projection"), d->data.dimension());
    const auto polylines = ilcml::ProjectCases(d->data, spec);
    nlohmann::json lines = nlohmann::json::array();
    for (std::size_t i = 0; i < polylines.size(); ++i) {
      nlohmann::json p = ilcml::ToJson(polylines[i]);
      p["label"] = d->data.cases[i].label;
      lines.push_back(std::move(p));
    }
    *out = Dup(nlohmann::json{{"projection", ilcml::ToJson(spec)},
                              {"polylines", lines}}
                   .dump());
  });
}

int ilcml_fit(const ilcml_dataset* d, const char* pipeline_json,
              char** model_out) {
  return Guard([&] {
    Require(d, "dataset");
    Require(model_out, "model_out");
    const auto config =
        ResolvePipeline(Parse(pipeline_json, "pipeline"), d->data.dimension());
    *model_out = Dup(ilcml::ToJson(ilcml::FitPipeline(d->data, config)).dump(2));
  });
}

int ilcml_evaluate(const ilcml_dataset* d, const char* model_json,
                   const char* split, char** report_out) {
  return Guard([&] {
    Require(d, "dataset");
    Require(model_json, "model_json");
    Require(report_out, "report_out");
    const auto model = ilcml::FittedModelFromJson(Parse(model_json, "model"));
    const std::string name = split ? split : "testing";
    ilcml::SplitRole role = ilcml::SplitRole::kTest;
    if (name == "training") {
      role = ilcml::SplitRole::kTrain;
    } else if (name == "validation") {
      role = ilcml::SplitRole::kValidation;
    } else if (name != "testing") {
      throw ilcml::InvalidArgument("unknown split '" + name + "'");
    }
    ilcml::EvaluationReport rep;
    rep.splits.push_back(ilcml::EvaluateModel(model, d->data, role));
    nlohmann::json j = ilcml::ToJson(rep);
    j["rule_table"] = ilcml::RenderRuleTable(rep);
    j["class_table"] = ilcml::RenderClassTable(rep);
    *report_out = Dup(j.dump(2));
  });
}

int ilcml_predict(const char* model_json, const double* values, size_t count,
                  int* predicted) {
  return Guard([&] {
    Require(model_json, "model_json");
    Require(values, "values");
    Require(predicted, "predicted");
    const auto model = ilcml::FittedModelFromJson(Parse(model_json, "model"));
    *predicted =
        ilcml::PredictModel(model, std::vector<double>(values, values + count));
  });
}

int ilcml_cross_validate(const ilcml_dataset* d, const char* pipeline_json,
                         const char* plan_json, char** report_out) {
  return Guard([&] {
    Require(d, "dataset");
    Require(report_out, "report_out");
    const auto config =
        ResolvePipeline(Parse(pipeline_json, "pipeline"), d->data.dimension());
    const auto plan = ilcml::SplitPlanFromJson(Parse(plan_json, "plan"));
    const auto cv = ilcml::CrossValidate(d->data, config, plan);
    nlohmann::json j = ilcml::ToJson(cv);
    j["table"] = ilcml::RenderCvTable(cv);
    *report_out = Dup(j.dump(2));
  });
}

int ilcml_baseline_tree(const ilcml_dataset* d, const char* plan_json,
                        const char* tree_json, char** report_out) {
  return Guard([&] {
    Require(d, "dataset");
    Require(report_out, "report_out");
    const auto plan = ilcml::SplitPlanFromJson(Parse(plan_json, "plan"));
    const auto rep = ilcml::BaselineTreeReport(
        d->data, plan, TreeFromJson(Parse(tree_json, "tree")));
    nlohmann::json j = ilcml::ToJson(rep);
    j["class_table"] = ilcml::RenderClassTable(rep);
    *report_out = Dup(j.dump(2));
  });
}

int ilcml_prune(const ilcml_dataset* d, const char* rules_json,
                size_t min_cases, const char* mode, char** out) {
  return Guard([&] {
    Require(d, "dataset");
    Require(rules_json, "rules_json");
    Require(out, "out");
    const auto rs = ParseRules(rules_json);
    const auto polylines = ilcml::ProjectCases(d->data, rs.projection);
    const auto r = ilcml::Prune(rs, polylines, d->data.labels(), min_cases,
                                ParsePruneMode(mode));
    nlohmann::json actions = nlohmann::json::array();
    for (const auto& a : r.actions) {
      actions.push_back({{"rule", a.rule_id},
                         {"action", a.action},
                         {"target_rule", a.target_rule},
                         {"new_class", a.new_class},
                         {"correct", a.correct},
                         {"wrong", a.wrong}});
    }
    *out = Dup(nlohmann::json{{"rules", ilcml::ToJson(r.ruleset)},
                              {"actions", actions}}
                   .dump(2));
  });
}

int ilcml_join(const ilcml_dataset* d, const char* rules_json, char** out) {
  return Guard([&] {
    Require(d, "dataset");
    Require(rules_json, "rules_json");
    Require(out, "out");
    const auto rs = ParseRules(rules_json);
    const auto polylines = ilcml::ProjectCases(d->data, rs.projection);
    *out = Dup(ilcml::RuleFileText(ilcml::JoinRules(rs, polylines)));
  });
}

int ilcml_render_rules(const char* rules_json, char** out) {
  return Guard([&] {
    Require(rules_json, "rules_json");
    Require(out, "out");
    *out = Dup(ilcml::RenderRules(
        ParseRules(rules_json)));
  });
}

int ilcml_explain(const ilcml_dataset* train, const char* rules_json,
                  const char* request_json, char** out) {
  return Guard([&] {
    Require(train, "train");
    Require(rules_json, "rules_json");
    Require(request_json, "request_json");
    Require(out, "out");
    const auto rs = ParseRules(rules_json);
    auto req = ilcml::ExplainRequestFromJson(Parse(request_json, "request"));
    req.predictor = ilcml::RuleSetPredictor(rs);
    const auto ex = ilcml::ExplainLocal(req, train->data, rs.projection);
    *out = Dup(ilcml::ToJson(ex, rs.projection).dump(2));
  });
}

int ilcml_reproduce(const char* target, const char* data_dir,
                    char** report_out, int* passed) {
  return Guard([&] {
    Require(target, "target");
    Require(data_dir, "data_dir");
    Require(report_out, "report_out");
    const auto r = ilcml::Reproduce(target, data_dir);
    nlohmann::json j = ilcml::ToJson(r);
    j["text"] = ilcml::RenderRepro(r);
    *report_out = Dup(j.dump(2));
    if (passed) *passed = r.pass() ? 1 : 0;
  });
}

int ilcml_session_create(const ilcml_dataset* d, const char* projection_json,
                         const char* grid_json, ilcml_session** out) {
  return Guard([&] {
    Require(d, "dataset");
    Require(out, "out");
    auto spec = ilcml::ProjectionFromRequest(
        Parse(projection_json, "projection"), d->data.dimension());
    auto grid = ilcml::GridParamsFromJson(Parse(grid_json, "grid"));
    *out = new ilcml_session{std::make_unique<ilcml::Session>(
        "local", d->data, std::move(spec), grid)};
  });
}

int ilcml_session_replay(const char* log_text, ilcml_session** out) {
  return Guard([&] {
    Require(log_text, "log_text");
    Require(out, "out");
    *out = new ilcml_session{ilcml::Session::Replay(log_text)};
  });
}

int ilcml_session_candidates(ilcml_session* s, size_t top_k, char** out) {
  return Guard([&] {
    Require(s, "session");
    Require(out, "out");
    nlohmann::json list = nlohmann::json::array();
    for (const auto& c : s->session->Candidates(top_k)) {
      list.push_back({{"rect", ilcml::ToJson(c.rect)},
                      {"counts", c.stats.counts},
                      {"dominant", c.stats.dominant},
                      {"purity", c.stats.purity_fraction},
                      {"coverage", c.stats.coverage()}});
    }
    *out = Dup(list.dump());
  });
}

int ilcml_session_accept(ilcml_session* s, const char* box_json) {
  return Guard([&] {
    Require(s, "session");
    const auto j = Parse(box_json, "box");
    const auto m = j.contains("membership")
                       ? ilcml::ParseMembership(j.at("membership"))
                       : s->session->grid().membership;
    s->session->Accept(ilcml::RectFromJson(j.at("rect")), m,
                       j.value("class", -1));
  });
}

int ilcml_session_undo(ilcml_session* s) {
  return Guard([&] {
    Require(s, "session");
    s->session->Undo();
  });
}

int ilcml_session_prune(ilcml_session* s, size_t min_cases, const char* mode) {
  return Guard([&] {
    Require(s, "session");
    s->session->Prune(min_cases, ParsePruneMode(mode));
  });
}

int ilcml_session_join(ilcml_session* s) {
  return Guard([&] {
    Require(s, "session");
    s->session->Join();
  });
}

int ilcml_session_rules(const ilcml_session* s, char** out) {
  return Guard([&] {
    Require(s, "session");
    Require(out, "out");
    *out = Dup(ilcml::RuleFileText(s->session->rules()));
  });
}

int ilcml_session_log(const ilcml_session* s, char** out) {
  return Guard([&] {
    Require(s, "session");
    Require(out, "out");
    *out = Dup(s->session->LogText());
  });
}

int ilcml_session_digest(const ilcml_session* s, char** out) {
  return Guard([&] {
    Require(s, "session");
    Require(out, "out");
    *out = Dup(s->session->Digest());
  });
}

void ilcml_session_free(ilcml_session* s) { delete s; }

int ilcml_service_create(const char* options_json, ilcml_service** out) {
  return Guard([&] {
    Require(out, "out");
    const auto j = Parse(options_json, "options");
    ilcml::ServiceOptions o;
    o.data_dir = j.value("data_dir", std::string());
    o.log_dir = j.value("log_dir", std::string());
    o.token = j.value("token", std::string());
    *out = new ilcml_service{std::make_unique<ilcml::Service>(o)};
  });
}

int ilcml_service_handle(ilcml_service* s, const char* method,
                         const char* path, const char* query_json,
                         const char* body, int* status, char** response) {
  return Guard([&] {
    Require(s, "service");
    Require(method, "method");
    Require(path, "path");
    Require(status, "status");
    Require(response, "response");
    std::map<std::string, std::string> query;
    for (const auto& [k, v] : Parse(query_json, "query").items()) {
      query[k] = v.is_string() ? v.get<std::string>() : v.dump();
    }
    const auto r = s->service->Handle(method, path, query, body ? body : "",
                                      s->service->options().token);
    *status = r.status;
    *response = Dup(r.body);
  });
}

int ilcml_service_serve(ilcml_service* s, const char* host, int port) {
  return Guard([&] {
    Require(s, "service");
    auto bind = ilcml::BindAddressFromEnv();
    if (host && *host) bind.first = host;
    if (port > 0) bind.second = port;
    s->service->Serve(bind.first, bind.second);
  });
}

void ilcml_service_stop(ilcml_service* s) {
  if (s) s->service->Stop();
}

void ilcml_service_free(ilcml_service* s) { delete s; }

}  // extern "C"
