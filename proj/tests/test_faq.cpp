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


#include <cmath>
#include <fstream>

#include <gtest/gtest.h>

#include "clarify/faq.hpp"
#include "fixtures.hpp"

namespace {

using namespace clarify::faq;

FaqIndex three_entries() {
  return build_index({{"e1", "How should I prepare for a glucose test?", "a1"},
                      {"e2", "How long does a glucose tolerance test take?", "a2"},
                      {"e3", "What does a cholesterol result mean?", "a3"}});
}

FaqIndex bundled() {
  std::ifstream in(fixtures::data_path("faq.jsonl"));
  return build_index(read_faq(in));
}

TEST(Index, BuildsVectors) {
  auto idx = three_entries();
  EXPECT_EQ(idx.vectors().size(), 3u);
  auto again = three_entries();
  EXPECT_EQ(idx.vectors(), again.vectors());
}

TEST(Index, Errors) {
  EXPECT_THROW(build_index({}), clarify::InvalidArgument);
  EXPECT_THROW(build_index({{"a", "q1", ""}, {"a", "q2", ""}}), clarify::InvariantError);
  EXPECT_THROW(build_index({{"a", "  ", ""}}), clarify::InvariantError);
}

TEST(Retrieve, ExactQuestionScoresOne) {
  auto idx = bundled();
  for (std::size_t i = 0; i < idx.entries().size(); ++i) {
    auto r = retrieve(idx, idx.entries()[i].question);
    ASSERT_TRUE(r.entry);
    EXPECT_EQ(*r.entry, i);
    EXPECT_EQ(r.score, 1.0);
  }
}

TEST(Retrieve, NoSharedTokensIsNoMatch) {
  auto r = retrieve(three_entries(), "zebra xylophone quantum");
  EXPECT_FALSE(r.entry);
  EXPECT_EQ(r.score, 0.0);
}

// Frozen from tests/oracles/faq_oracle.py, idf(t) = ln((N+1)/(df+1)) + 1 with
// N = 3: query "glucose tolerance" scores e2 = 0.616210, e1 = 0.313483, e3 = 0.
TEST(Retrieve, HighestOverlapWins) {
  auto idx = three_entries();
  auto r = retrieve(idx, "glucose tolerance");
  ASSERT_TRUE(r.entry);
  EXPECT_EQ(idx.entries()[*r.entry].id, "e2");
  EXPECT_NEAR(r.score, 0.616210, 1e-6);
  EXPECT_NEAR(cosine(idx.vectorize("glucose tolerance"), idx.vectors()[0]), 0.313483, 1e-6);
  EXPECT_EQ(cosine(idx.vectorize("glucose tolerance"), idx.vectors()[2]), 0.0);
}

TEST(Retrieve, TieBreaksById) {
  auto idx = build_index({{"b", "thyroid panel", ""}, {"a", "thyroid panel", ""}});
  auto r = retrieve(idx, "thyroid panel");
  ASSERT_TRUE(r.entry);
  EXPECT_EQ(idx.entries()[*r.entry].id, "a");
}

TEST(Split, LeadingCondition) {
  auto s = split_question("If I am pregnant, should I still get a TSH test?");
  EXPECT_EQ(s.kind, SplitKind::kConditional);
  EXPECT_EQ(*s.condition, "If I am pregnant");
  EXPECT_EQ(*s.core, "should I still get a TSH test?");
}

TEST(Split, Difference) {
  auto s = split_question("What is the difference between TSH and T4 tests?");
  EXPECT_EQ(s.kind, SplitKind::kDifference);
  EXPECT_EQ(*s.entities, (std::vector<std::string>{"TSH", "T4 tests"}));
  auto three = split_question("What is the difference between LDL, HDL and triglycerides?");
  EXPECT_EQ(*three.entities, (std::vector<std::string>{"LDL", "HDL", "triglycerides"}));
}

TEST(Split, Unsplit) {
  auto s = split_question("What is TSH?");
  EXPECT_EQ(s.kind, SplitKind::kUnsplit);
  EXPECT_FALSE(s.condition || s.core || s.entities);
  EXPECT_EQ(split_question("").kind, SplitKind::kUnsplit);
  EXPECT_EQ(split_question("When should I get tested?").kind, SplitKind::kUnsplit);
}

TEST(Split, TrailingCondition) {
  auto s = split_question("Is it normal for my INR to change while taking warfarin?");
  EXPECT_EQ(s.kind, SplitKind::kConditional);
  EXPECT_EQ(*s.condition, "while taking warfarin");
  EXPECT_EQ(*s.core, "Is it normal for my INR to change");
}

TEST(Split, RuleOrderPrefersConditionOverDifference) {
  auto s = split_question("If fasting, what is the difference between glucose and A1c?");
  EXPECT_EQ(s.kind, SplitKind::kConditional);
}

TEST(Generate, ConditionMissing) {
  auto s = split_question("If I am pregnant, should I still get a TSH test?");
  auto o = generate_clarification(s, "Should I still get a TSH test?");
  EXPECT_EQ(o.kind, OutcomeKind::kClarify);
  EXPECT_EQ(*o.clarification, "To answer that, I need one more detail — does this apply to you: \"i am pregnant\"?");
}

TEST(Generate, ConditionPresent) {
  auto s = split_question("If I am pregnant, should I still get a TSH test?");
  EXPECT_EQ(generate_clarification(s, "If I am pregnant should I get a TSH test?").kind, OutcomeKind::kAnswer);
}

TEST(Generate, DifferenceTemplate) {
  auto s = split_question("What is the difference between TSH and T4 tests?");
  auto o = generate_clarification(s, "Tell me about TSH");
  EXPECT_EQ(o.kind, OutcomeKind::kClarify);
  EXPECT_EQ(*o.clarification, "Are you asking about \"TSH\", \"T4 tests\", or the difference between them?");
  EXPECT_EQ(generate_clarification(s, "TSH versus T4 tests").kind, OutcomeKind::kAnswer);
}

TEST(Generate, UnsplitIsAnError) {
  EXPECT_THROW(generate_clarification(SplitQuestion{}, "x"), clarify::InvalidArgument);
}

TEST(Pipeline, Outcomes) {
  auto idx = bundled();
  auto clarify_outcome = faq_pipeline(idx, "Should I still get a TSH test?");
  EXPECT_EQ(clarify_outcome.kind, OutcomeKind::kClarify);
  EXPECT_EQ(*clarify_outcome.matched_entry, "f01");
  EXPECT_EQ(faq_pipeline(idx, "qwerty zxcv plugh").kind, OutcomeKind::kNoMatch);
  auto complete = faq_pipeline(idx, "If I am pregnant, should I still get a TSH test?");
  EXPECT_EQ(complete.kind, OutcomeKind::kAnswer);
  EXPECT_EQ(complete.score, 1.0);
  EXPECT_EQ(*complete.answer, idx.entries()[0].answer);
  auto unsplit = faq_pipeline(idx, "What is TSH?");
  EXPECT_EQ(unsplit.kind, OutcomeKind::kAnswer);
  EXPECT_EQ(to_json(faq_pipeline(idx, "qwerty zxcv plugh")).dump(), R"({"kind":"no_match"})");
}

// Every clarify outcome embeds the condition phrase or two entity strings,
// and unsplit matches never clarify.
TEST(Pipeline, ClarificationEmbedsSourceText) {
  auto idx = bundled();
  std::ifstream in(fixtures::data_path("faq_annotated.jsonl"));
  for (const auto& item : read_annotated(in)) {
    auto o = faq_pipeline(idx, item.incomplete_question);
    if (o.kind != OutcomeKind::kClarify) continue;
    const auto& entry = *std::find_if(idx.entries().begin(), idx.entries().end(),
                                      [&](const FaqEntry& e) { return e.id == *o.matched_entry; });
    auto split = split_question(entry.question);
    ASSERT_NE(split.kind, SplitKind::kUnsplit);
    const auto lower = clarify::text::to_lower(*o.clarification);
    if (split.kind == SplitKind::kConditional) {
      EXPECT_NE(lower.find(condition_phrase(*split.condition)), std::string::npos);
    } else {
      std::size_t found = 0;
      for (const auto& e : *split.entities) found += lower.find(clarify::text::to_lower(e)) != std::string::npos;
      EXPECT_GE(found, 2u);
    }
  }
}

TEST(Coverage, Arithmetic) {
  auto idx = bundled();
  std::vector<AnnotatedQuestion> items = {{"Should I still get a TSH test?", true, "f01"},
                                          {"How often should my creatinine be checked?", true, "f11"},
                                          {"Can a strep test still be done?", true, "f14"},
                                          {"qwerty zxcv plugh", true, ""}};
  EXPECT_DOUBLE_EQ(measure_coverage(idx, items), 0.75);
  EXPECT_THROW(measure_coverage(idx, {}), clarify::InvalidArgument);
  EXPECT_THROW(measure_coverage(idx, {{"What is TSH?", false, "f03"}}), clarify::InvalidArgument);
}

TEST(Coverage, BundledFixture) {
  auto idx = bundled();
  std::ifstream in(fixtures::data_path("faq_annotated.jsonl"));
  auto items = read_annotated(in);
  ASSERT_EQ(items.size(), 25u);
  EXPECT_GE(measure_coverage(idx, items), 0.60);
}

}  // namespace
