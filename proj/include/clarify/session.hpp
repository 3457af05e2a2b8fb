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

#include <atomic>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "clarify/clarifier.hpp"
#include "clarify/error.hpp"
#include "clarify/kb.hpp"
#include "clarify/nbmodel.hpp"

namespace clarify {

struct SessionConfig {
  double confidence = 0.8;            // diagnose once the top posterior reaches this
  std::size_t max_clarifications = 3;  // questions asked before a forced diagnosis

  void validate() const {
    if (!(confidence > 0.0 && confidence <= 1.0)) throw InvalidArgument("confidence must be in (0, 1]");
    if (max_clarifications < 1) throw InvalidArgument("max clarifications must be at least 1");
  }
};

enum class SessionStatus { kAwaitingDescription, kAwaitingAnswer, kConcluded };

inline const char* to_string(SessionStatus s) {
  switch (s) {
    case SessionStatus::kAwaitingDescription: return "awaiting_description";
    case SessionStatus::kAwaitingAnswer: return "awaiting_answer";
    default: return "concluded";
  }
}

enum class Speaker { kUser, kSystem };

struct Turn {
  Speaker speaker;
  std::string text;
};

struct SessionState {
  std::string session_id;
  TermSet affirmed;
  TermSet denied;
  std::optional<TermId> pending_question;
  std::vector<Turn> turn_log;
  SessionStatus status = SessionStatus::kAwaitingDescription;
  std::size_t questions_asked = 0;
};

enum class ActionKind { kAsk, kDiagnose };

struct SystemAction {
  ActionKind kind = ActionKind::kDiagnose;
  std::optional<TermId> question_symptom;
  std::optional<std::string> question_text;
  std::optional<std::vector<std::pair<TermId, double>>> diagnosis_ranking;
};

enum class Answer { kYes, kNo };

// Accepts yes/y/no/n in any case, surrounding whitespace ignored.
inline std::optional<Answer> parse_answer(std::string_view raw) {
  const std::string a = text::to_lower(text::trim(raw));
  if (a == "yes" || a == "y") return Answer::kYes;
  if (a == "no" || a == "n") return Answer::kNo;
  return std::nullopt;
}

// Drives the ask/diagnose loop over a shared immutable model and KB. The
// engine holds no per-session data; every transition maps a state to a new
// state plus the action to show the user.
class DialogEngine {
 public:
  DialogEngine(const NaiveBayesModel& model, const KnowledgeBase& kb, SessionConfig config = {})
      : model_(&model), kb_(&kb), config_(config) {
    config_.validate();
    if (model.diseases().size() < 2) throw InvalidArgument("a dialog needs a model with at least two diseases");
  }

  const SessionConfig& config() const { return config_; }
  const NaiveBayesModel& model() const { return *model_; }

  SessionState start_session() const { return start_session(next_id()); }

  SessionState start_session(std::string id) const {
    SessionState s;
    s.session_id = std::move(id);
    return s;
  }

  std::pair<SessionState, SystemAction> user_message(const SessionState& state, std::string_view message) const {
    if (state.status != SessionStatus::kAwaitingDescription)
      throw StateError(std::string("expected a description but session is ") + to_string(state.status));
    SessionState next = state;
    next.turn_log.push_back({Speaker::kUser, std::string(message)});
    for (auto& id : kb_->extract_mentions(message, TermKind::kSymptom))
      if (model_->symptom_index(id)) next.affirmed.insert(std::move(id));
    return step(std::move(next));
  }

  std::pair<SessionState, SystemAction> answer_clarification(const SessionState& state, Answer answer) const {
    if (state.status != SessionStatus::kAwaitingAnswer || !state.pending_question)
      throw StateError(std::string("expected a yes/no answer but session is ") + to_string(state.status));
    SessionState next = state;
    next.turn_log.push_back({Speaker::kUser, answer == Answer::kYes ? "yes" : "no"});
    (answer == Answer::kYes ? next.affirmed : next.denied).insert(*next.pending_question);
    next.pending_question.reset();
    return step(std::move(next));
  }

  std::string question_text(const TermId& symptom) const {
    const Term* t = kb_->find(symptom);
    return "Do you also have " + (t ? t->canonical : symptom) + "?";
  }

  // Posterior over `affirmed`, descending with disease-id tie-break. Denied
  // symptoms are absent exactly like unmentioned ones.
  std::vector<std::pair<TermId, double>> diagnosis(const TermSet& affirmed) const {
    return model_->posterior(affirmed).ranked();
  }

 private:
  std::pair<SessionState, SystemAction> step(SessionState next) const {
    auto ranking = diagnosis(next.affirmed);
    const bool confident = ranking.front().second >= config_.confidence;
    const bool out_of_turns = next.questions_asked >= config_.max_clarifications;
    if (!confident && !out_of_turns) {
      const auto candidates = rank_candidates(*model_, next.affirmed, next.denied);
      if (!candidates.candidates.empty()) {
        SystemAction ask;
        ask.kind = ActionKind::kAsk;
        ask.question_symptom = candidates.candidates.front().symptom;
        ask.question_text = question_text(*ask.question_symptom);
        next.pending_question = ask.question_symptom;
        next.status = SessionStatus::kAwaitingAnswer;
        ++next.questions_asked;
        next.turn_log.push_back({Speaker::kSystem, *ask.question_text});
        return {std::move(next), std::move(ask)};
      }
    }
    SystemAction done;
    done.kind = ActionKind::kDiagnose;
    next.status = SessionStatus::kConcluded;
    next.turn_log.push_back({Speaker::kSystem, describe(ranking)});
    done.diagnosis_ranking = std::move(ranking);
    return {std::move(next), std::move(done)};
  }

  std::string describe(const std::vector<std::pair<TermId, double>>& ranking) const {
    std::string out = "Most likely:";
    char buf[32];
    for (std::size_t i = 0; i < ranking.size() && i < 3; ++i) {
      const Term* t = kb_->find(ranking[i].first);
      std::snprintf(buf, sizeof buf, " (%.1f%%)", 100.0 * ranking[i].second);
      out += (i ? ", " : " ") + (t ? t->canonical : ranking[i].first) + buf;
    }
    return out;
  }

  std::string next_id() const {
    static std::atomic<std::uint64_t> counter{0};
    thread_local std::mt19937_64 gen{std::random_device{}()};
    char buf[40];
    std::snprintf(buf, sizeof buf, "%016llx%04llx", static_cast<unsigned long long>(gen()),
                  static_cast<unsigned long long>(++counter & 0xffff));
    return buf;
  }

  const NaiveBayesModel* model_;
  const KnowledgeBase* kb_;
  SessionConfig config_;
};

inline nlohmann::json to_json(const SystemAction& a) {
  if (a.kind == ActionKind::kAsk)
    return {{"kind", "ask"}, {"symptom", *a.question_symptom}, {"question", *a.question_text}};
  nlohmann::json ranking = nlohmann::json::array();
  for (const auto& [d, p] : *a.diagnosis_ranking) ranking.push_back({{"disease", d}, {"probability", p}});
  return {{"kind", "diagnose"}, {"ranking", ranking}};
}

}  // namespace clarify
