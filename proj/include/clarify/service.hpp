// Copyright 2026 The Clarify Authors
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


#pragma once

#include <chrono>
#include <memory>
#include <mutex>
#include <optional>
#include <regex>
#include <string>
#include <unordered_map>
#include <utility>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "clarify/faq.hpp"
#include "clarify/kb.hpp"
#include "clarify/nbmodel.hpp"
#include "clarify/session.hpp"

namespace clarify {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string model_path;
  std::string kb_path;
  std::string faq_path;  // empty: FAQ endpoint answers 503
  SessionConfig session;
  double faq_threshold = faq::kDefaultThreshold;

  void validate() const {
    session.validate();
    if (!(faq_threshold >= 0.0 && faq_threshold <= 1.0)) throw InvalidArgument("theta must be in [0, 1]");
  }
};

struct HttpResult {
  int status = 200;
  nlohmann::json body;
};

// JSON-over-HTTP facade for dialog sessions and FAQ lookups. Routing lives in
// dispatch() so it can be exercised without a socket; bind() wires it to
// cpp-httplib. Sessions are in memory only and evicted after an idle period.
class Service {
 public:
  using Clock = std::chrono::steady_clock;

  explicit Service(SessionConfig session = {}, double faq_threshold = faq::kDefaultThreshold)
      : session_config_(session), faq_threshold_(faq_threshold) {
    session_config_.validate();
  }

  void load_model(NaiveBayesModel model, KnowledgeBase kb) {
    auto loaded = std::make_shared<Loaded>(std::move(model), std::move(kb), session_config_);
    std::lock_guard lock(mutex_);
    loaded_ = std::move(loaded);
  }

  void load_faq(faq::FaqIndex index) {
    auto ptr = std::make_shared<const faq::FaqIndex>(std::move(index));
    std::lock_guard lock(mutex_);
    faq_ = std::move(ptr);
  }

  void set_idle_timeout(Clock::duration d) {
    std::lock_guard lock(mutex_);
    idle_timeout_ = d;
  }

  std::size_t session_count() const {
    std::lock_guard lock(mutex_);
    return sessions_.size();
  }

  // Drops sessions idle for longer than the timeout as of `now`.
  std::size_t evict_idle(Clock::time_point now) {
    std::lock_guard lock(mutex_);
    return std::erase_if(sessions_, [&](const auto& kv) {
      std::lock_guard slot_lock(kv.second->mutex);
      return now - kv.second->last_used > idle_timeout_;
    });
  }

  HttpResult dispatch(const std::string& method, const std::string& path, const std::string& body) {
    static const std::regex session_action(R"(/api/sessions/([^/]+)/(message|answer))");
    std::smatch m;
    if (method == "GET" && path == "/healthz") return healthz();
    if (method == "POST" && path == "/api/sessions") return create_session();
    if (method == "POST" && path == "/api/faq") return ask_faq(body);
    if (std::regex_match(path, m, session_action)) {
      if (method != "POST") return error(405, "method_not_allowed", "use POST");
      return m[2] == "message" ? post_message(m[1], body) : post_answer(m[1], body);
    }
    return error(404, "not_found", "no route for " + method + " " + path);
  }

  HttpResult healthz() const {
    std::lock_guard lock(mutex_);
    return {200, {{"status", "ok"}, {"model_loaded", loaded_ != nullptr}, {"faq_loaded", faq_ != nullptr}}};
  }

  HttpResult create_session() {
    evict_idle(Clock::now());
    std::lock_guard lock(mutex_);
    if (!loaded_) return error(503, "unavailable", "no model is loaded");
    auto slot = std::make_shared<Slot>();
    slot->loaded = loaded_;
    slot->state = loaded_->engine.start_session();
    slot->last_used = Clock::now();
    const std::string id = slot->state.session_id;
    sessions_.emplace(id, std::move(slot));
    return {201, {{"session_id", id}}};
  }

  HttpResult post_message(const std::string& id, const std::string& body) {
    auto parsed = parse_body(body, "text");
    if (!parsed.second.empty()) return error(400, "bad_request", parsed.second);
    return with_session(id, [&](Slot& slot) -> HttpResult {
      if (slot.state.status != SessionStatus::kAwaitingDescription)
        return error(409, "conflict", std::string("session is ") + to_string(slot.state.status));
      auto [next, action] = slot.loaded->engine.user_message(slot.state, parsed.first);
      slot.state = std::move(next);
      return {200, to_json(action)};
    });
  }

  HttpResult post_answer(const std::string& id, const std::string& body) {
    auto parsed = parse_body(body, "answer");
    if (!parsed.second.empty()) return error(400, "bad_request", parsed.second);
    return with_session(id, [&](Slot& slot) -> HttpResult {
      if (slot.state.status != SessionStatus::kAwaitingAnswer)
        return error(409, "conflict", std::string("session is ") + to_string(slot.state.status));
      const auto answer = parse_answer(parsed.first);
      if (!answer) return error(422, "unrecognized_answer", "Please answer yes or no.");
      auto [next, action] = slot.loaded->engine.answer_clarification(slot.state, *answer);
      slot.state = std::move(next);
      return {200, to_json(action)};
    });
  }

  HttpResult ask_faq(const std::string& body) {
    std::shared_ptr<const faq::FaqIndex> index;
    {
      std::lock_guard lock(mutex_);
      index = faq_;
    }
    if (!index) return error(503, "unavailable", "no FAQ index is configured");
    auto parsed = parse_body(body, "question");
    if (!parsed.second.empty()) return error(400, "bad_request", parsed.second);
    return {200, faq::to_json(faq::faq_pipeline(*index, parsed.first, faq_threshold_))};
  }

  // Registers every route on `server`, with permissive CORS for the browser client.
  void bind(httplib::Server& server) {
    server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                {"Access-Control-Allow-Headers", "Content-Type"},
                                {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
    auto forward = [this](const httplib::Request& req, httplib::Response& res) {
      HttpResult r;
      try {
        r = dispatch(req.method, req.path, req.body);
      } catch (const std::exception& e) {
        r = error(500, "internal", e.what());
      }
      res.status = r.status;
      res.set_content(r.body.dump(), "application/json");
    };
    server.Get(".*", forward);
    server.Post(".*", forward);
    server.Options(".*", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
  }

  static HttpResult error(int status, std::string code, std::string detail) {
    return {status, {{"error", std::move(code)}, {"detail", std::move(detail)}}};
  }

 private:
  struct Loaded {
    Loaded(NaiveBayesModel m, KnowledgeBase k, SessionConfig cfg)
        : model(std::move(m)), kb(std::move(k)), engine(model, kb, cfg) {}
    NaiveBayesModel model;
    KnowledgeBase kb;
    DialogEngine engine;
  };

  struct Slot {
    std::mutex mutex;
    std::shared_ptr<const Loaded> loaded;
    SessionState state;
    Clock::time_point last_used;
  };

  // Runs `fn` holding the session's own lock, so transitions on one session
  // are serialized while distinct sessions proceed in parallel.
  template <typename Fn>
  HttpResult with_session(const std::string& id, Fn&& fn) {
    std::shared_ptr<Slot> slot;
    {
      std::lock_guard lock(mutex_);
      auto it = sessions_.find(id);
      if (it == sessions_.end()) return error(404, "not_found", "unknown session '" + id + "'");
      slot = it->second;
    }
    std::lock_guard slot_lock(slot->mutex);
    slot->last_used = Clock::now();
    return fn(*slot);
  }

  // Extracts a string field from a JSON object body; second is an error
  // message, empty on success.
  static std::pair<std::string, std::string> parse_body(const std::string& body, const char* field) {
    try {
      const auto j = nlohmann::json::parse(body);
      if (!j.is_object() || !j.contains(field) || !j.at(field).is_string())
        return {{}, std::string("body must be a JSON object with a string '") + field + "'"};
      return {j.at(field).get<std::string>(), {}};
    } catch (const nlohmann::json::parse_error& e) {
      return {{}, std::string("invalid JSON: ") + e.what()};
    }
  }

  SessionConfig session_config_;
  double faq_threshold_;
  mutable std::mutex mutex_;
  std::shared_ptr<const Loaded> loaded_;
  std::shared_ptr<const faq::FaqIndex> faq_;
  std::unordered_map<std::string, std::shared_ptr<Slot>> sessions_;
  Clock::duration idle_timeout_ = std::chrono::minutes(30);
};

}  // namespace clarify
