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

#ifndef SYNTHDOC_ASSESSMENT_SERVICE_HPP_
#define SYNTHDOC_ASSESSMENT_SERVICE_HPP_

#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "synthdoc/experiment.hpp"

namespace synthdoc::experiment {

struct ServiceConfig {
  double min_seconds = 20.0;
  int target_responses = 10;
};

/// A response as stored in the append-only log.
struct LoggedResponse {
  UserResponse response;
  ValidationResult validation;
};

nlohmann::json to_json(const LoggedResponse& r);
LoggedResponse logged_from_json(const nlohmann::json& j);
std::vector<LoggedResponse> read_response_log(const std::filesystem::path& file);

enum class SubmitStatus { kAccepted, kConflict, kUnknownTask, kTaskComplete };

struct SubmitOutcome {
  SubmitStatus status = SubmitStatus::kAccepted;
  ValidationResult validation;
};

/// Task assignment and response bookkeeping. Thread-safe; every submission
/// is validated, counted and persisted under one lock.
class AssessmentService {
public:
  /// Replays `response_log` when it exists and appends new responses to it.
  /// An empty path keeps responses in memory only.
  AssessmentService(std::vector<AssessmentTask> tasks, ServiceConfig cfg,
                    std::filesystem::path response_log = {});

  /// Next task for `user_id`: never one already served to or answered by
  /// this user, never one that reached its target; fewest valid responses
  /// first.
  std::optional<AssessmentTask> next_task(const std::string& user_id);

  SubmitOutcome submit(const UserResponse& response);

  nlohmann::json progress() const;

  int valid_count(const std::string& task_id) const;
  const AssessmentTask* find(const std::string& task_id) const;
  std::vector<LoggedResponse> responses() const;
  const ServiceConfig& config() const { return cfg_; }

private:
  SubmitOutcome record(const LoggedResponse& logged, bool persist);

  std::vector<AssessmentTask> tasks_;
  std::map<std::string, std::size_t, std::less<>> index_;
  ServiceConfig cfg_;
  std::filesystem::path log_path_;
  std::ofstream log_;

  mutable std::mutex mu_;
  std::map<std::string, int, std::less<>> valid_;
  std::map<std::string, int, std::less<>> invalid_;
  std::set<std::pair<std::string, std::string>> answered_;  // (task, user)
  std::set<std::pair<std::string, std::string>> served_;
  std::vector<LoggedResponse> log_entries_;
};

/// HTTP+JSON front end:
///   GET  /api/task?user=<id>   200 task payload | 204 nothing left | 400
///   POST /api/response         200 {accepted, valid, reasons} | 400 | 404 | 409
///   GET  /api/progress         200 progress summary
class HttpFrontend {
public:
  explicit HttpFrontend(AssessmentService& service, std::filesystem::path static_dir = {});
  ~HttpFrontend();
  HttpFrontend(const HttpFrontend&) = delete;
  HttpFrontend& operator=(const HttpFrontend&) = delete;

  /// Binds to `port` (0 picks a free port) and returns the bound port, or -1.
  int bind(const std::string& host, int port);
  /// Blocks serving requests until stop().
  bool listen_after_bind();
  void stop();
  void wait_until_ready() const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace synthdoc::experiment

#endif  // SYNTHDOC_ASSESSMENT_SERVICE_HPP_
