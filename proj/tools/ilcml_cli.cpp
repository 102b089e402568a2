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

// Command-line front end over the ilcml C API.

#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ilcml/ilcml.h"
#include "json.hpp"

#ifndef ILCML_DEFAULT_DATA_DIR
#define ILCML_DEFAULT_DATA_DIR "data"
#endif

namespace {

using nlohmann::json;

struct CliError {
  int code;
  std::string message;
};

void Check(int rc) {
  if (rc != ILCML_OK) throw CliError{rc, ilcml_last_error()};
}

std::string Take(char* s) {
  std::string out = s ? s : "";
  ilcml_string_free(s);
  return out;
}

std::string ReadFile(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw CliError{ILCML_IO, "cannot read " + path};
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void WriteFile(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  f << text;
  if (!f) throw CliError{ILCML_IO, "cannot write " + path};
}

void Emit(const std::string& out, const std::string& text) {
  if (out.empty() || out == "-") {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << "\n";
  } else {
    WriteFile(out, text);
  }
}

class DatasetHandle {
 public:
  DatasetHandle() = default;
  DatasetHandle(const DatasetHandle&) = delete;
  DatasetHandle& operator=(const DatasetHandle&) = delete;
  ~DatasetHandle() { ilcml_dataset_free(d_); }
  ilcml_dataset** out() { return &d_; }
  ilcml_dataset* get() const { return d_; }

 private:
  ilcml_dataset* d_ = nullptr;
};

struct DataOptions {
  std::string dataset = "wbc";
  std::string data_dir;
  std::string schema;
  std::string normalize = "auto";
};

void AddDataOptions(CLI::App* app, DataOptions& o) {
  app->add_option("--dataset", o.dataset,
                  "wbc, pbc, a CSV file or a dataset JSON file")
      ->capture_default_str();
  app->add_option("--data-dir", o.data_dir, "Directory of bundled data files");
  app->add_option("--schema", o.schema, "CSV schema JSON file");
  app->add_option("--normalize", o.normalize, "auto, raw or min_max_unit")
      ->check(CLI::IsMember({"auto", "raw", "min_max_unit"}))
      ->capture_default_str();
}

std::string DataDir(const DataOptions& o) {
  if (!o.data_dir.empty()) return o.data_dir;
  if (const char* v = std::getenv("ILCML_DATA_DIR"); v && *v) return v;
  return ILCML_DEFAULT_DATA_DIR;
}

void Load(const DataOptions& o, DatasetHandle& h) {
  const std::string& d = o.dataset;
  if (d == "wbc" || d == "pbc") {
    Check(ilcml_dataset_load_named(d.c_str(), DataDir(o).c_str(), h.out()));
  } else if (d.size() > 5 && d.substr(d.size() - 5) == ".json") {
    Check(ilcml_dataset_from_json(ReadFile(d).c_str(), h.out()));
  } else {
    const std::string schema = o.schema.empty() ? "" : ReadFile(o.schema);
    Check(ilcml_dataset_load_csv(d.c_str(), schema.c_str(), h.out()));
  }
  std::string mode = o.normalize;
  if (mode == "auto") mode = d == "pbc" ? "min_max_unit" : "";
  if (!mode.empty()) Check(ilcml_dataset_normalize(h.get(), mode.c_str()));
}

json DataJson(const DataOptions& o) {
  return {{"dataset", o.dataset},
          {"data_dir", DataDir(o)},
          {"schema", o.schema},
          {"normalize", o.normalize}};
}

struct ProjectionOptions {
  std::string mode = "static_sequential";
  std::string layout = "zip";
  double spacing = 10.0;
  std::string file;
};

void AddProjectionOptions(CLI::App* app, ProjectionOptions& o) {
  app->add_option("--mode", o.mode, "Projection mode")->capture_default_str();
  app->add_option("--layout", o.layout, "zip or links")
      ->check(CLI::IsMember({"zip", "links"}))
      ->capture_default_str();
  app->add_option("--spacing", o.spacing, "Axis spacing")
      ->capture_default_str();
  app->add_option("--projection", o.file, "Projection spec JSON file");
}

json ProjectionJson(const ProjectionOptions& o) {
  if (!o.file.empty()) return json::parse(ReadFile(o.file));
  return {{"mode", o.mode}, {"layout", o.layout}, {"spacing", o.spacing}};
}

// Every run leaves a record of its resolved configuration.
void Snapshot(const std::string& dir, const std::string& command,
              const json& config, const std::vector<std::string>& argv) {
  json j{{"tool", "ilcml"},
         {"version", ilcml_version()},
         {"command", command},
         {"argv", argv},
         {"config", config}};
  const std::string path =
      (dir.empty() ? std::string(".") : dir) + "/ilcml-" + command +
      ".config.json";
  WriteFile(path, j.dump(2) + "\n");
}

std::vector<double> ParsePoint(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw CliError{ILCML_INVALID_ARGUMENT, "bad point value '" + item + "'"};
    }
  }
  return out;
}

ilcml_service* g_service = nullptr;

void OnSignal(int) {
  if (g_service) ilcml_service_stop(g_service);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ilcml: lossless in-line coordinate machine learning"};
  app.require_subcommand(1);
  std::string snapshot_dir = ".";
  app.add_option("--snapshot-dir", snapshot_dir,
                 "Where the run's config snapshot is written")
      ->capture_default_str();
  std::vector<std::string> args(argv, argv + argc);

  DataOptions data;
  ProjectionOptions proj;
  std::string out, rules_file, model_file, pipeline_file, prune_mode = "refuse";
  std::string kind = "bc", guide, preset, membership = "node_in", point;
  std::string target, log_file, log_dir, token, host, split = "testing";
  double grid = 0.5, coverage = 0.1, purity = 1.0, validation = 0.1;
  double explain_purity = 1.0, resolution = 2.0, decrement = 0.25;
  std::size_t min_cases = 17, folds = 10, seed = 1, max_span = 2;
  std::size_t depth = 3, min_leaf = 5;
  int port = 0;
  bool join_after = false;

  auto* ingest = app.add_subcommand("ingest", "Load a dataset and summarize it");
  AddDataOptions(ingest, data);
  ingest->add_option("--out", out, "Write the dataset snapshot JSON here");

  auto* project = app.add_subcommand("project", "Emit projected polylines");
  AddDataOptions(project, data);
  AddProjectionOptions(project, proj);
  project->add_option("--out", out, "Polyline file");

  auto* fit = app.add_subcommand("fit", "Fit a BC, DTG-BC or tree model");
  AddDataOptions(fit, data);
  AddProjectionOptions(fit, proj);
  fit->add_option("--kind", kind, "bc, dtg-bc, tree or majority")
      ->capture_default_str();
  fit->add_option("--guide", guide, "dt selects the tree-guided search");
  fit->add_option("--preset", preset, "Named pipeline preset (pbc)");
  fit->add_option("--pipeline", pipeline_file, "Pipeline config JSON file");
  fit->add_option("--grid", grid, "Grid cell size")->capture_default_str();
  fit->add_option("--coverage", coverage, "Coverage fraction")
      ->capture_default_str();
  fit->add_option("--purity", purity, "Purity threshold")
      ->capture_default_str();
  fit->add_option("--membership", membership, "node_in or edge_cross")
      ->capture_default_str();
  fit->add_option("--out", out, "Model file")->required();

  auto* prune = app.add_subcommand("prune", "Prune mini rules");
  AddDataOptions(prune, data);
  prune->add_option("--rules", rules_file, "Rule file")->required();
  prune->add_option("--min-cases", min_cases, "Mini-box threshold")
      ->capture_default_str();
  prune->add_option("--mode", prune_mode, "refuse or associate")
      ->check(CLI::IsMember({"refuse", "associate"}))
      ->capture_default_str();
  prune->add_option("--out", out, "Pruned rule file");

  auto* join = app.add_subcommand("join", "Join rules without changing decisions");
  AddDataOptions(join, data);
  join->add_option("--rules", rules_file, "Rule file")->required();
  join->add_option("--out", out, "Joined rule file");

  auto* eval = app.add_subcommand("eval", "Evaluate a model on a dataset");
  AddDataOptions(eval, data);
  eval->add_option("--model", model_file, "Model or rule file")->required();
  eval->add_option("--split", split, "Split label for the report")
      ->check(CLI::IsMember({"training", "validation", "testing"}))
      ->capture_default_str();
  eval->add_option("--out", out, "Report JSON file");

  auto* cv = app.add_subcommand("cv", "Stratified k-fold cross-validation");
  AddDataOptions(cv, data);
  AddProjectionOptions(cv, proj);
  cv->add_option("--folds", folds, "Fold count")->capture_default_str();
  cv->add_option("--validation", validation, "Validation share per fold")
      ->capture_default_str();
  cv->add_option("--seed", seed, "Split seed")->capture_default_str();
  cv->add_option("--guide", guide, "dt selects the tree-guided search");
  cv->add_option("--kind", kind, "bc, dtg-bc, tree or majority");
  cv->add_option("--preset", preset, "Named pipeline preset (pbc)");
  cv->add_option("--pipeline", pipeline_file, "Pipeline config JSON file");
  cv->add_option("--out", out, "Report JSON file");

  auto* baseline = app.add_subcommand("baseline", "Holdout decision-tree baseline");
  AddDataOptions(baseline, data);
  baseline->add_option("--depth", depth, "Maximum depth")->capture_default_str();
  baseline->add_option("--min-leaf", min_leaf, "Minimum leaf cases")
      ->capture_default_str();
  baseline->add_option("--seed", seed, "Split seed")->capture_default_str();
  baseline->add_option("--out", out, "Report JSON file");

  auto* explain = app.add_subcommand("explain", "Explain one prediction");
  AddDataOptions(explain, data);
  explain->add_option("--rules", rules_file, "Rule file")->required();
  explain->add_option("--point", point, "Comma-separated attribute values")
      ->required();
  explain->add_option("--purity", explain_purity, "Box purity")
      ->capture_default_str();
  explain->add_option("--resolution", resolution, "Initial cell size")
      ->capture_default_str();
  explain->add_option("--decrement", decrement, "Cell size step")
      ->capture_default_str();
  explain->add_option("--max-span", max_span, "Cells per box side")
      ->capture_default_str();
  explain->add_option("--out", out, "Explanation JSON file");

  auto* reproduce = app.add_subcommand("reproduce", "Check a reference result");
  reproduce->add_option("target", target,
                        "wbc-table2, wbc-table4, pbc-table12 or pbc-table14")
      ->required();
  reproduce->add_option("--data-dir", data.data_dir, "Data directory");
  reproduce->add_option("--out", out, "Report JSON file");

  auto* serve = app.add_subcommand("serve", "Run the /api/v1 session service");
  serve->add_option("--data-dir", data.data_dir, "Data directory");
  serve->add_option("--log-dir", log_dir, "Session action log directory");
  serve->add_option("--token", token, "Required X-Ilcml-Token value");
  serve->add_option("--host", host, "Bind host (default from ILCML_BIND)");
  serve->add_option("--port", port, "Bind port (default from ILCML_BIND)");

  auto* replay = app.add_subcommand("replay", "Rebuild rules from a session log");
  replay->add_option("--log", log_file, "Action log (JSON lines)")->required();
  replay->add_option("--out", out, "Rule file");

  CLI11_PARSE(app, argc, argv);

  try {
    DatasetHandle ds;
    if (ingest->parsed()) {
      Load(data, ds);
      Snapshot(snapshot_dir, "ingest", DataJson(data), args);
      if (!out.empty()) {
        WriteFile(out, Take([&] {
                    char* s = nullptr;
                    Check(ilcml_dataset_to_json(ds.get(), &s));
                    return s;
                  }()));
      }
      char* s = nullptr;
      Check(ilcml_dataset_summary(ds.get(), &s));
      std::cout << json::parse(Take(s)).dump(2) << "\n";
    } else if (project->parsed()) {
      Load(data, ds);
      const json pj = ProjectionJson(proj);
      Snapshot(snapshot_dir, "project",
               {{"data", DataJson(data)}, {"projection", pj}}, args);
      char* s = nullptr;
      Check(ilcml_project(ds.get(), pj.dump().c_str(), &s));
      Emit(out, Take(s));
    } else if (fit->parsed() || cv->parsed()) {
      Load(data, ds);
      json pipeline;
      if (!pipeline_file.empty()) {
        pipeline = json::parse(ReadFile(pipeline_file));
      } else {
        if (guide == "dt") kind = "dtg-bc";
        if (!preset.empty()) {
          pipeline["preset"] = preset;
        } else if (data.dataset == "pbc" && kind == "dtg-bc") {
          pipeline["preset"] = "pbc";
        }
        pipeline["kind"] = kind;
        pipeline["projection"] = ProjectionJson(proj);
        pipeline["grid"] = {{"cell_width", grid},
                            {"cell_height", grid},
                            {"coverage_fraction", coverage},
                            {"purity_threshold", purity},
                            {"membership", membership}};
      }
      if (fit->parsed()) {
        Snapshot(snapshot_dir, "fit",
                 {{"data", DataJson(data)}, {"pipeline", pipeline}}, args);
        char* model = nullptr;
        Check(ilcml_fit(ds.get(), pipeline.dump().c_str(), &model));
        const std::string text = Take(model);
        WriteFile(out, text + "\n");
        char* report = nullptr;
        Check(ilcml_evaluate(ds.get(), text.c_str(), "training", &report));
        const json r = json::parse(Take(report));
        std::cout << r.at("rule_table").get<std::string>()
                  << r.at("class_table").get<std::string>();
      } else {
        const json plan{{"kind", "stratified_kfold"},
                        {"fold_count", folds},
                        {"validation", validation},
                        {"seed", seed}};
        Snapshot(snapshot_dir, "cv",
                 {{"data", DataJson(data)}, {"pipeline", pipeline},
                  {"plan", plan}},
                 args);
        char* report = nullptr;
        Check(ilcml_cross_validate(ds.get(), pipeline.dump().c_str(),
                                   plan.dump().c_str(), &report));
        const json r = json::parse(Take(report));
        if (!out.empty()) WriteFile(out, r.dump(2) + "\n");
        std::cout << r.at("table").get<std::string>();
      }
    } else if (baseline->parsed()) {
      Load(data, ds);
      const json plan{{"kind", "holdout"}, {"train", 0.81},
                      {"validation", 0.09}, {"test", 0.10}, {"seed", seed}};
      const json tree{{"max_depth", depth}, {"min_leaf_cases", min_leaf}};
      Snapshot(snapshot_dir, "baseline",
               {{"data", DataJson(data)}, {"plan", plan}, {"tree", tree}},
               args);
      char* report = nullptr;
      Check(ilcml_baseline_tree(ds.get(), plan.dump().c_str(),
                                tree.dump().c_str(), &report));
      const json r = json::parse(Take(report));
      if (!out.empty()) WriteFile(out, r.dump(2) + "\n");
      std::cout << r.at("class_table").get<std::string>();
    } else if (prune->parsed() || join->parsed()) {
      Load(data, ds);
      const std::string rules = ReadFile(rules_file);
      char* s = nullptr;
      if (prune->parsed()) {
        Snapshot(snapshot_dir, "prune",
                 {{"data", DataJson(data)}, {"rules", rules_file},
                  {"min_cases", min_cases}, {"mode", prune_mode}},
                 args);
        Check(ilcml_prune(ds.get(), rules.c_str(), min_cases,
                          prune_mode.c_str(), &s));
        const json r = json::parse(Take(s));
        for (const auto& a : r.at("actions")) std::cerr << a.dump() << "\n";
        Emit(out, r.at("rules").dump(2) + "\n");
      } else {
        Snapshot(snapshot_dir, "join",
                 {{"data", DataJson(data)}, {"rules", rules_file}}, args);
        Check(ilcml_join(ds.get(), rules.c_str(), &s));
        Emit(out, Take(s));
      }
    } else if (eval->parsed()) {
      Load(data, ds);
      Snapshot(snapshot_dir, "eval",
               {{"data", DataJson(data)}, {"model", model_file}}, args);
      char* s = nullptr;
      Check(ilcml_evaluate(ds.get(), ReadFile(model_file).c_str(), split.c_str(),
                           &s));
      const json r = json::parse(Take(s));
      if (!out.empty()) WriteFile(out, r.dump(2) + "\n");
      std::cout << r.at("rule_table").get<std::string>()
                << r.at("class_table").get<std::string>();
    } else if (explain->parsed()) {
      Load(data, ds);
      const json req{{"point", ParsePoint(point)},
                     {"purity", explain_purity},
                     {"resolution", resolution},
                     {"decrement", decrement},
                     {"max_span", max_span}};
      Snapshot(snapshot_dir, "explain",
               {{"data", DataJson(data)}, {"rules", rules_file},
                {"request", req}},
               args);
      char* s = nullptr;
      Check(ilcml_explain(ds.get(), ReadFile(rules_file).c_str(),
                          req.dump().c_str(), &s));
      Emit(out, Take(s));
    } else if (reproduce->parsed()) {
      Snapshot(snapshot_dir, "reproduce",
               {{"target", target}, {"data_dir", DataDir(data)}}, args);
      char* s = nullptr;
      int passed = 0;
      Check(ilcml_reproduce(target.c_str(), DataDir(data).c_str(), &s,
                            &passed));
      const json r = json::parse(Take(s));
      if (!out.empty()) WriteFile(out, r.dump(2) + "\n");
      std::cout << r.at("text").get<std::string>();
      return passed ? 0 : 1;
    } else if (serve->parsed()) {
      const json opts{{"data_dir", DataDir(data)},
                      {"log_dir", log_dir},
                      {"token", token}};
      Snapshot(snapshot_dir, "serve",
               {{"options", {{"data_dir", DataDir(data)}, {"log_dir", log_dir}}},
                {"host", host},
                {"port", port}},
               args);
      Check(ilcml_service_create(opts.dump().c_str(), &g_service));
      std::signal(SIGINT, OnSignal);
      std::signal(SIGTERM, OnSignal);
      const int rc = ilcml_service_serve(g_service,
                                         host.empty() ? nullptr : host.c_str(),
                                         port);
      const std::string msg = ilcml_last_error();
      ilcml_service_free(g_service);
      g_service = nullptr;
      if (rc != ILCML_OK) throw CliError{rc, msg};
    } else if (replay->parsed()) {
      Snapshot(snapshot_dir, "replay", {{"log", log_file}}, args);
      ilcml_session* session = nullptr;
      Check(ilcml_session_replay(ReadFile(log_file).c_str(), &session));
      char* s = nullptr;
      const int rc = ilcml_session_rules(session, &s);
      ilcml_session_free(session);
      Check(rc);
      Emit(out, Take(s));
    }
  } catch (const CliError& e) {
    std::cerr << json{{"error", {{"code", e.code}, {"message", e.message}}}}
                     .dump()
              << "\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << json{{"error",
                       {{"code", ILCML_PARSE}, {"message", e.what()}}}}
                     .dump()
              << "\n";
    return 2;
  }
  return 0;
}
