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


#include <gtest/gtest.h>

#include "clarify/session.hpp"
#include "fixtures.hpp"

namespace {

using clarify::ActionKind;
using clarify::Answer;
using clarify::DialogEngine;
using clarify::SessionStatus;

class SessionF : public ::testing::Test {
 protected:
  clarify::KnowledgeBase kb = fixtures::kb_f();
  clarify::NaiveBayesModel model = fixtures::model_f();
  DialogEngine engine{model, kb};
};

TEST_F(SessionF, FreshState) {
  auto a = engine.start_session();
  auto b = engine.start_session();
  EXPECT_TRUE(a.affirmed.empty() && a.denied.empty());
  EXPECT_EQ(a.status, SessionStatus::kAwaitingDescription);
  EXPECT_NE(a.session_id, b.session_id);
}

TEST_F(SessionF, SingleDiseaseModelRejected) {
  clarify::KnowledgeBase one({fixtures::term("fever", clarify::TermKind::kSymptom)},
                             {fixtures::term("flu", clarify::TermKind::kDisease)});
  auto m = clarify::NaiveBayesModel::train({}, one);
  EXPECT_THROW(DialogEngine(m, one), clarify::InvalidArgument);
}

TEST_F(SessionF, FeverAsksAboutCough) {
  auto [s, a] = engine.user_message(engine.start_session(), "I have a fever");
  ASSERT_EQ(a.kind, ActionKind::kAsk);
  EXPECT_EQ(*a.question_symptom, "cough");
  EXPECT_EQ(*a.question_text, "Do you also have cough?");
  EXPECT_EQ(s.status, SessionStatus::kAwaitingAnswer);
  EXPECT_EQ(*s.pending_question, "cough");
  EXPECT_EQ(clarify::to_json(a).dump(), R"({"kind":"ask","question":"Do you also have cough?","symptom":"cough"})");
}

TEST_F(SessionF, EverySymptomDiagnosesImmediately) {
  auto [s, a] = engine.user_message(engine.start_session(), "cough, fever, headache and a rash");
  EXPECT_EQ(a.kind, ActionKind::kDiagnose);
  EXPECT_EQ(s.status, SessionStatus::kConcluded);
}

TEST_F(SessionF, WrongStatusErrors) {
  auto [s, a] = engine.user_message(engine.start_session(), "I have a fever");
  EXPECT_THROW(engine.user_message(s, "more"), clarify::StateError);
  EXPECT_THROW(engine.answer_clarification(engine.start_session(), Answer::kYes), clarify::StateError);
}

TEST_F(SessionF, NoThenAsksRash) {
  auto [s1, a1] = engine.user_message(engine.start_session(), "I have a fever");
  auto [s2, a2] = engine.answer_clarification(s1, Answer::kNo);
  ASSERT_EQ(a2.kind, ActionKind::kAsk);
  EXPECT_EQ(*a2.question_symptom, "rash");
  EXPECT_EQ(s2.denied, (clarify::TermSet{"cough"}));
}

// posterior({fever, cough}) puts flu at 0.865 >= 0.8.
TEST_F(SessionF, YesThenDiagnosesFlu) {
  auto [s1, a1] = engine.user_message(engine.start_session(), "I have a fever");
  auto [s2, a2] = engine.answer_clarification(s1, Answer::kYes);
  ASSERT_EQ(a2.kind, ActionKind::kDiagnose);
  EXPECT_EQ(a2.diagnosis_ranking->front().first, "flu");
  EXPECT_NEAR(a2.diagnosis_ranking->front().second, fixtures::kPosteriorFeverCoughFlu, 1e-12);
}

// "no" to cough, "yes" to rash: posterior({fever, rash}) has measles at 0.849.
TEST_F(SessionF, ScriptedNoYes) {
  auto [s1, a1] = engine.user_message(engine.start_session(), "I have a fever");
  auto [s2, a2] = engine.answer_clarification(s1, Answer::kNo);
  auto [s3, a3] = engine.answer_clarification(s2, Answer::kYes);
  ASSERT_EQ(a3.kind, ActionKind::kDiagnose);
  EXPECT_EQ(a3.diagnosis_ranking->front().first, "measles");
  EXPECT_NEAR(a3.diagnosis_ranking->front().second, fixtures::kPosteriorFeverRashMeasles, 1e-12);
  EXPECT_EQ(s3.turn_log.size(), 6u);
}

TEST_F(SessionF, TurnBudgetForcesDiagnosis) {
  DialogEngine strict(model, kb, {1.0, 3});
  auto [s, a] = strict.user_message(strict.start_session(), "nothing recognisable");
  int asks = 0;
  while (a.kind == ActionKind::kAsk) {
    ++asks;
    std::tie(s, a) = strict.answer_clarification(s, Answer::kNo);
  }
  EXPECT_EQ(asks, 3);
  EXPECT_EQ(s.status, SessionStatus::kConcluded);
}

TEST(ParseAnswer, Variants) {
  EXPECT_EQ(clarify::parse_answer(" Yes "), Answer::kYes);
  EXPECT_EQ(clarify::parse_answer("y"), Answer::kYes);
  EXPECT_EQ(clarify::parse_answer("N"), Answer::kNo);
  EXPECT_FALSE(clarify::parse_answer("maybe"));
}

TEST(SessionConfig, Validation) {
  EXPECT_THROW((clarify::SessionConfig{0.0, 3}.validate()), clarify::InvalidArgument);
  EXPECT_THROW((clarify::SessionConfig{0.5, 0}.validate()), clarify::InvalidArgument);
  EXPECT_NO_THROW((clarify::SessionConfig{1.0, 1}.validate()));
}

// Random models and answer scripts: liveness, no repeats, disjointness,
// final ranking equals the posterior over affirmed, replay determinism.
TEST(SessionProperties, RandomScripts) {
  clarify::ParkMillerLcg rng(777);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t ns = 3 + rng.index(6), nd = 2 + rng.index(3);
    std::vector<clarify::Term> syms, dis;
    for (std::size_t i = 0; i < ns; ++i) syms.push_back(fixtures::term("s" + std::to_string(i), clarify::TermKind::kSymptom));
    for (std::size_t i = 0; i < nd; ++i) dis.push_back(fixtures::term("d" + std::to_string(i), clarify::TermKind::kDisease));
    clarify::KnowledgeBase kb(syms, dis);
    std::vector<clarify::TrainingExample> ex;
    for (std::size_t i = 0, n = rng.index(30); i < n; ++i) {
      clarify::TermSet s;
      for (const auto& t : syms)
        if (rng.bernoulli(0.35)) s.insert(t.id);
      ex.push_back({s, dis[rng.index(nd)].id});
    }
    auto model = clarify::NaiveBayesModel::train(ex, kb);
    const clarify::SessionConfig cfg{0.5 + 0.5 * rng.uniform(), 1 + rng.index(4)};
    DialogEngine engine(model, kb, cfg);
    std::string description;
    for (const auto& t : syms)
      if (rng.bernoulli(0.3)) description += t.canonical + " ";
    std::vector<Answer> script;
    for (int i = 0; i < 10; ++i) script.push_back(rng.bernoulli(0.5) ? Answer::kYes : Answer::kNo);

    auto run = [&](std::vector<clarify::SystemAction>& actions) {
      auto [s, a] = engine.user_message(engine.start_session("fixed"), description);
      actions.push_back(a);
      std::size_t interactions = 1;
      std::set<std::string> asked;
      while (a.kind == ActionKind::kAsk) {
        EXPECT_TRUE(asked.insert(*a.question_symptom).second) << "asked twice";
        std::tie(s, a) = engine.answer_clarification(s, script[interactions - 1]);
        actions.push_back(a);
        ++interactions;
        for (const auto& x : s.affirmed) EXPECT_FALSE(s.denied.count(x));
      }
      EXPECT_LE(interactions, cfg.max_clarifications + 2);
      EXPECT_EQ(s.status, SessionStatus::kConcluded);
      EXPECT_EQ(*a.diagnosis_ranking, model.posterior(s.affirmed).ranked());
      double total = 0;
      for (const auto& [_, p] : *a.diagnosis_ranking) total += p;
      EXPECT_NEAR(total, 1.0, 1e-9);
    };
    std::vector<clarify::SystemAction> first, second;
    run(first);
    run(second);
    ASSERT_EQ(first.size(), second.size());
    for (std::size_t i = 0; i < first.size(); ++i)
      EXPECT_EQ(clarify::to_json(first[i]).dump(), clarify::to_json(second[i]).dump());
  }
}

}  // namespace
