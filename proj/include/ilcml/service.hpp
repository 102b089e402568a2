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

#ifndef ILCML_SERVICE_HPP_
#define ILCML_SERVICE_HPP_

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>

#include "ilcml/dataset.hpp"
#include "ilcml/projection.hpp"
#include "ilcml/session.hpp"
#include "json.hpp"

namespace httplib {
class Server;
}

namespace ilcml {

struct ServiceOptions {
  // Directory holding the bundled benchmark files.
  std::string data_dir;
  // Per-session action logs go here when non-empty.
  std::string log_dir;
  // Required in the X-Ilcml-Token header when non-empty.
  std::string token;
};

struct HttpResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

// Named benchmark from `data_dir`: "wbc" or "pbc".
Dataset LoadNamedDataset(const std::string& name, const std::string& data_dir);

// {"mode", "layout": "zip" | "links", "spacing", "weights"} or a full
// projection spec.
ProjectionSpec ProjectionFromRequest(const nlohmann::json& j,
                                     std::size_t dimension);

// Routes /api/v1 requests. Mutations on one session are serialized by a
// per-session lock; reads take the same lock and observe a consistent state.
class Service {
 public:
  explicit Service(ServiceOptions options);

  HttpResponse Handle(const std::string& method, const std::string& path,
                      const std::map<std::string, std::string>& query,
                      const std::string& body, const std::string& token = "");

  const ServiceOptions& options() const { return options_; }

  // Blocks until Stop is called from another thread.
  void Serve(const std::string& host, int port);
  void Stop();

 private:
  struct Entry {
    std::mutex mu;
    std::unique_ptr<Session> session;
  };
  std::shared_ptr<Entry> Find(const std::string& id);
  HttpResponse Create(const nlohmann::json& body);
  HttpResponse Route(Entry& e, const std::string& method,
                     const std::string& action, const std::string& rest,
                     const std::map<std::string, std::string>& query,
                     const nlohmann::json& body);

  ServiceOptions options_;
  std::mutex mu_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
  std::size_t next_id_ = 1;
  httplib::Server* server_ = nullptr;
};

// ILCML_BIND as host:port, default 127.0.0.1:8750.
std::pair<std::string, int> BindAddressFromEnv();

}  // namespace ilcml

#endif  // ILCML_SERVICE_HPP_
