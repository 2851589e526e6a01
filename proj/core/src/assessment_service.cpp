// Copyright 2026 The synthdoc Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "synthdoc/assessment_service.hpp"

#include "httplib.h"

namespace synthdoc::experiment {

using nlohmann::json;

json to_json(const LoggedResponse& r) {
  json j = to_json(r.response);
  json reasons = json::array();
  for (auto f : r.validation.reasons) reasons.push_back(failure_name(f));
  j["valid"] = r.validation.valid;
  j["reasons"] = reasons;
  return j;
}

LoggedResponse logged_from_json(const json& j) {
  LoggedResponse r;
  r.response = response_from_json(j);
  r.validation.valid = j.at("valid").get<bool>();
  for (const auto& name : j.at("reasons")) {
    const auto s = name.get<std::string>();
    for (auto f : {Failure::kMalformedRanking, Failure::kSalientTerms, Failure::kUnderTime})
      if (failure_name(f) == s) r.validation.reasons.push_back(f);
  }
  return r;
}

std::vector<LoggedResponse> read_response_log(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open " + file.string());
  std::vector<LoggedResponse> out;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) out.push_back(logged_from_json(json::parse(line)));
  return out;
}

AssessmentService::AssessmentService(std::vector<AssessmentTask> tasks, ServiceConfig cfg,
                                     std::filesystem::path response_log)
    : tasks_(std::move(tasks)), cfg_(cfg), log_path_(std::move(response_log)) {
  for (std::size_t i = 0; i < tasks_.size(); ++i)
    if (!index_.emplace(tasks_[i].task_id, i).second)
      throw std::invalid_argument("duplicate task id " + tasks_[i].task_id);
  if (!log_path_.empty()) {
    if (std::filesystem::exists(log_path_)) {
      // Replay re-validates so the current thresholds decide validity.
      for (auto& entry : read_response_log(log_path_)) {
        const auto* task = find(entry.response.task_id);
        if (!task) continue;
        entry.validation = validate_response(*task, entry.response, {cfg_.min_seconds});
        record(entry, false);
      }
    }
    log_.open(log_path_, std::ios::app);
    if (!log_) throw std::runtime_error("cannot open response log " + log_path_.string());
  }
}

const AssessmentTask* AssessmentService::find(const std::string& task_id) const {
  auto it = index_.find(task_id);
  return it == index_.end() ? nullptr : &tasks_[it->second];
}

int AssessmentService::valid_count(const std::string& task_id) const {
  std::lock_guard lock(mu_);
  auto it = valid_.find(task_id);
  return it == valid_.end() ? 0 : it->second;
}

std::optional<AssessmentTask> AssessmentService::next_task(const std::string& user_id) {
  std::lock_guard lock(mu_);
  const AssessmentTask* best = nullptr;
  int best_count = 0;
  for (const auto& t : tasks_) {
    const auto key = std::make_pair(t.task_id, user_id);
    if (served_.contains(key) || answered_.contains(key)) continue;
    const int n = valid_.contains(t.task_id) ? valid_.at(t.task_id) : 0;
    if (n >= cfg_.target_responses) continue;
    if (!best || n < best_count) {
      best = &t;
      best_count = n;
    }
  }
  if (!best) return std::nullopt;
  served_.emplace(best->task_id, user_id);
  return *best;
}

SubmitOutcome AssessmentService::record(const LoggedResponse& logged, bool persist) {
  const auto& r = logged.response;
  const auto key = std::make_pair(r.task_id, r.user_id);
  if (answered_.contains(key)) return {SubmitStatus::kConflict, logged.validation};
  if (logged.validation.valid && valid_[r.task_id] >= cfg_.target_responses)
    return {SubmitStatus::kTaskComplete, logged.validation};
  if (persist && log_.is_open()) {
    log_ << to_json(logged).dump() << '\n';
    log_.flush();
    if (!log_) throw std::runtime_error("failed to append to response log");
  }
  answered_.insert(key);
  ++(logged.validation.valid ? valid_ : invalid_)[r.task_id];
  log_entries_.push_back(logged);
  return {SubmitStatus::kAccepted, logged.validation};
}

SubmitOutcome AssessmentService::submit(const UserResponse& response) {
  const auto* task = find(response.task_id);
  if (!task) return {SubmitStatus::kUnknownTask, {}};
  LoggedResponse logged{response, validate_response(*task, response, {cfg_.min_seconds})};
  std::lock_guard lock(mu_);
  return record(logged, true);
}

json AssessmentService::progress() const {
  std::lock_guard lock(mu_);
  json tasks = json::array();
  int complete = 0;
  for (const auto& t : tasks_) {
    const int v = valid_.contains(t.task_id) ? valid_.at(t.task_id) : 0;
    const int inv = invalid_.contains(t.task_id) ? invalid_.at(t.task_id) : 0;
    const bool done = v >= cfg_.target_responses;
    complete += done ? 1 : 0;
    tasks.push_back({{"task_id", t.task_id}, {"query_id", t.query_id}, {"valid", v}, {"invalid", inv},
                     {"target", cfg_.target_responses}, {"complete", done}});
  }
  return {{"total_tasks", tasks_.size()}, {"complete_tasks", complete}, {"responses", log_entries_.size()},
          {"tasks", tasks}};
}

std::vector<LoggedResponse> AssessmentService::responses() const {
  std::lock_guard lock(mu_);
  return log_entries_;
}

// ------------------------------------------------------------- HttpFrontend

struct HttpFrontend::Impl {
  AssessmentService& service;
  httplib::Server server;

  explicit Impl(AssessmentService& s) : service(s) {}
};

namespace {

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

}  // namespace

HttpFrontend::HttpFrontend(AssessmentService& service, std::filesystem::path static_dir)
    : impl_(std::make_unique<Impl>(service)) {
  auto& srv = impl_->server;
  auto& svc = impl_->service;

  srv.Get("/api/task", [&svc](const httplib::Request& req, httplib::Response& res) {
    const auto user = req.get_param_value("user");
    if (user.empty()) {
      send_json(res, 400, {{"error", "missing query parameter"}, {"fields", {"user: missing"}}});
      return;
    }
    auto task = svc.next_task(user);
    if (!task) {
      res.status = 204;
      return;
    }
    send_json(res, 200, task_payload(*task));
  });

  srv.Post("/api/response", [&svc](const httplib::Request& req, httplib::Response& res) {
    json body;
    try {
      body = json::parse(req.body);
    } catch (const json::parse_error& e) {
      send_json(res, 400, {{"error", "body is not valid JSON"}, {"fields", {std::string("body: ") + e.what()}}});
      return;
    }
    UserResponse r;
    try {
      r = response_from_json(body);
    } catch (const RequestError& e) {
      send_json(res, 400, {{"error", "malformed response"}, {"fields", e.fields()}});
      return;
    }
    const auto out = svc.submit(r);
    json reasons = json::array();
    for (auto f : out.validation.reasons) reasons.push_back(failure_name(f));
    switch (out.status) {
      case SubmitStatus::kUnknownTask:
        send_json(res, 404, {{"error", "unknown task_id"}, {"task_id", r.task_id}});
        return;
      case SubmitStatus::kConflict:
        send_json(res, 409, {{"error", "response already recorded for this task and user"}});
        return;
      case SubmitStatus::kTaskComplete:
        send_json(res, 409, {{"error", "task already has its target number of valid responses"}});
        return;
      case SubmitStatus::kAccepted:
        send_json(res, 200, {{"accepted", true}, {"valid", out.validation.valid}, {"reasons", reasons}});
        return;
    }
  });

  srv.Get("/api/progress",
          [&svc](const httplib::Request&, httplib::Response& res) { send_json(res, 200, svc.progress()); });

  if (!static_dir.empty()) srv.set_mount_point("/", static_dir.string());
}

HttpFrontend::~HttpFrontend() { stop(); }

int HttpFrontend::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool HttpFrontend::listen_after_bind() { return impl_->server.listen_after_bind(); }

void HttpFrontend::stop() {
  if (impl_) impl_->server.stop();
}

void HttpFrontend::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace synthdoc::experiment
