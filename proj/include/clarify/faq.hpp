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

#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <map>
#include <optional>
#include <regex>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <nlohmann/json.hpp>

#include "clarify/corpus.hpp"
#include "clarify/error.hpp"
#include "clarify/text.hpp"

namespace clarify::faq {

inline constexpr double kDefaultThreshold = 0.35;
// Fraction of a condition's content tokens that must appear in the user's
// question for the condition to count as already stated.
inline constexpr double kPresenceFraction = 0.6;

struct FaqEntry {
  std::string id;
  std::string question;
  std::string answer;
};

inline const std::unordered_set<std::string>& stopwords() {
  static const std::unordered_set<std::string> words = {
      "a",     "an",    "the",   "is",   "are",  "was",   "were",  "be",    "been",  "am",
      "i",     "me",    "my",    "you",  "your", "we",    "our",   "it",    "its",   "of",
      "in",    "on",    "at",    "to",   "for",  "with",  "by",    "from",  "as",    "and",
      "or",    "but",   "if",    "do",   "does", "did",   "can",   "could", "should", "would",
      "will",  "what",  "which", "who",  "how",  "when",  "why",   "this",  "that",  "these",
      "those", "there", "about", "have", "has",  "get",   "so",    "than",  "then",  "any"};
  return words;
}

inline const std::array<std::string_view, 6>& condition_markers() {
  static const std::array<std::string_view, 6> markers = {"if", "when", "while", "after", "before", "during"};
  return markers;
}

inline bool is_marker(std::string_view token) {
  const auto& m = condition_markers();
  return std::find(m.begin(), m.end(), token) != m.end();
}

// Lowercased tokens with stopwords removed.
inline std::vector<std::string> content_tokens(std::string_view s) {
  auto tokens = text::tokenize(s);
  std::erase_if(tokens, [](const std::string& t) { return stopwords().count(t) > 0; });
  return tokens;
}

// Inverse-document-frequency weighted term vectors over entry questions.
class FaqIndex {
 public:
  using Vector = std::map<std::string, double>;

  explicit FaqIndex(std::vector<FaqEntry> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) throw InvalidArgument("FAQ index needs at least one entry");
    std::unordered_set<std::string> ids;
    for (const auto& e : entries_) {
      if (!ids.insert(e.id).second) throw InvariantError("duplicate FAQ id '" + e.id + "'");
      if (text::trim(e.question).empty()) throw InvariantError("FAQ '" + e.id + "' has an empty question");
      std::set<std::string> uniq;
      for (auto& t : content_tokens(e.question)) uniq.insert(std::move(t));
      for (const auto& t : uniq) ++doc_freq_[t];
    }
    vectors_.reserve(entries_.size());
    for (const auto& e : entries_) vectors_.push_back(vectorize(e.question));
  }

  const std::vector<FaqEntry>& entries() const { return entries_; }
  const std::vector<Vector>& vectors() const { return vectors_; }

  // Smoothed IDF; tokens absent from the index get the largest weight.
  double idf(const std::string& token) const {
    auto it = doc_freq_.find(token);
    const double df = it == doc_freq_.end() ? 0.0 : static_cast<double>(it->second);
    return std::log((static_cast<double>(entries_.size()) + 1.0) / (df + 1.0)) + 1.0;
  }

  Vector vectorize(std::string_view question) const {
    Vector tf;
    for (const auto& t : content_tokens(question)) tf[t] += 1.0;
    for (auto& [token, w] : tf) w *= idf(token);
    return tf;
  }

 private:
  std::vector<FaqEntry> entries_;
  std::unordered_map<std::string, std::size_t> doc_freq_;
  std::vector<Vector> vectors_;
};

inline FaqIndex build_index(std::vector<FaqEntry> entries) { return FaqIndex(std::move(entries)); }

inline double squared_norm(const FaqIndex::Vector& v) {
  double n = 0.0;
  for (const auto& [_, w] : v) n += w * w;
  return n;
}

// Cosine similarity clamped to [0, 1]. Identical vectors score exactly 1.
inline double cosine(const FaqIndex::Vector& a, const FaqIndex::Vector& b) {
  const double na = squared_norm(a);
  const double nb = squared_norm(b);
  if (na == 0.0 || nb == 0.0) return 0.0;
  double dot = 0.0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (ia->first < ib->first) {
      ++ia;
    } else if (ib->first < ia->first) {
      ++ib;
    } else {
      dot += ia->second * ib->second;
      ++ia;
      ++ib;
    }
  }
  return std::clamp(dot / std::sqrt(na * nb), 0.0, 1.0);
}

struct Retrieval {
  std::optional<std::size_t> entry;  // set when score >= threshold
  double score = 0.0;                // best score seen, matched or not
};

inline Retrieval retrieve(const FaqIndex& index, std::string_view user_question,
                          double threshold = kDefaultThreshold) {
  const auto query = index.vectorize(user_question);
  std::optional<std::size_t> best;
  double best_score = 0.0;
  const auto& entries = index.entries();
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const double s = cosine(query, index.vectors()[i]);
    if (!best || s > best_score || (s == best_score && entries[i].id < entries[*best].id)) {
      best = i;
      best_score = s;
    }
  }
  Retrieval r;
  r.score = best_score;
  if (best_score > 0.0 && best_score >= threshold) r.entry = best;
  return r;
}

enum class SplitKind { kConditional, kDifference, kUnsplit };

inline const char* to_string(SplitKind k) {
  switch (k) {
    case SplitKind::kConditional: return "conditional";
    case SplitKind::kDifference: return "difference";
    default: return "unsplit";
  }
}

struct SplitQuestion {
  SplitKind kind = SplitKind::kUnsplit;
  std::optional<std::string> condition;
  std::optional<std::string> core;
  std::optional<std::vector<std::string>> entities;
};

namespace detail {

struct WordSpan {
  std::size_t begin;
  std::size_t end;
  std::string lower;
};

inline std::vector<WordSpan> words(std::string_view s) {
  std::vector<WordSpan> out;
  std::size_t i = 0;
  while (i < s.size()) {
    if (!text::is_word_byte(s[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < s.size() && text::is_word_byte(s[j])) ++j;
    out.push_back({i, j, text::to_lower(s.substr(i, j - i))});
    i = j;
  }
  return out;
}

inline std::string strip_trailing(std::string_view s, std::string_view chars) {
  s = text::trim(s);
  while (!s.empty() && chars.find(s.back()) != std::string_view::npos) s.remove_suffix(1);
  return std::string(text::trim(s));
}

// C1: "<marker> ..., <core>"
inline std::optional<SplitQuestion> leading_condition(std::string_view q, const std::vector<WordSpan>& w) {
  if (w.empty() || !is_marker(w[0].lower) || w[0].begin != 0) return std::nullopt;
  const auto comma = q.find(',');
  if (comma == std::string_view::npos) return std::nullopt;
  std::string condition(text::trim(q.substr(0, comma)));
  std::string core(text::trim(q.substr(comma + 1)));
  if (text::tokenize(condition).size() < 2 || text::tokenize(core).empty()) return std::nullopt;
  return SplitQuestion{SplitKind::kConditional, std::move(condition), std::move(core), std::nullopt};
}

// C2: "<core> <marker> <condition>"
inline std::optional<SplitQuestion> trailing_condition(std::string_view q, const std::vector<WordSpan>& w) {
  for (std::size_t i = 1; i + 1 < w.size(); ++i) {
    if (!is_marker(w[i].lower)) continue;
    std::string core = strip_trailing(q.substr(0, w[i].begin), ",;:");
    std::string condition = strip_trailing(q.substr(w[i].begin), "?.!");
    if (text::tokenize(core).empty()) continue;
    return SplitQuestion{SplitKind::kConditional, std::move(condition), std::move(core), std::nullopt};
  }
  return std::nullopt;
}

// D1: "difference(s) between X and Y[, Z ...]"
inline std::optional<SplitQuestion> difference(std::string_view q) {
  static const std::regex between(R"(\bdifferences?\s+between\s+(.+))", std::regex::icase);
  static const std::regex separators(R"(\s*,\s*(?:and\s+|or\s+)?|\s+and\s+|\s+or\s+)", std::regex::icase);
  std::match_results<std::string_view::const_iterator> m;
  if (!std::regex_search(q.begin(), q.end(), m, between)) return std::nullopt;
  const std::string list = strip_trailing(std::string_view(&*m[1].first, static_cast<std::size_t>(m[1].length())), "?.!");
  std::vector<std::string> entities;
  std::sregex_token_iterator it(list.begin(), list.end(), separators, -1), end;
  for (; it != end; ++it) {
    std::string e(text::trim(it->str()));
    if (!e.empty()) entities.push_back(std::move(e));
  }
  if (entities.size() < 2) return std::nullopt;
  return SplitQuestion{SplitKind::kDifference, std::nullopt, std::nullopt, std::move(entities)};
}

}  // namespace detail

// Applies C1, C2, D1 in order; the first rule that fires wins.
inline SplitQuestion split_question(std::string_view question) {
  const std::string_view q = text::trim(question);
  const auto w = detail::words(q);
  if (auto s = detail::leading_condition(q, w)) return *s;
  if (auto s = detail::trailing_condition(q, w)) return *s;
  if (auto s = detail::difference(q)) return *s;
  return {};
}

enum class OutcomeKind { kClarify, kAnswer, kNoMatch };

inline const char* to_string(OutcomeKind k) {
  switch (k) {
    case OutcomeKind::kClarify: return "clarify";
    case OutcomeKind::kAnswer: return "answer";
    default: return "no_match";
  }
}

struct FaqOutcome {
  OutcomeKind kind = OutcomeKind::kNoMatch;
  std::optional<std::string> clarification;
  std::optional<std::string> answer;
  std::optional<std::string> matched_entry;
  double score = 0.0;
};

// Condition text for the clarification: lowercased, leading marker removed.
inline std::string condition_phrase(std::string_view condition) {
  const std::string lower = text::to_lower(text::trim(condition));
  const auto w = detail::words(lower);
  if (!w.empty() && is_marker(w[0].lower)) return std::string(text::trim(std::string_view(lower).substr(w[0].end)));
  return lower;
}

// True when enough of `phrase`'s content tokens occur in `user_tokens`.
// A phrase with no content tokens counts as present.
inline bool phrase_present(std::string_view phrase, const std::unordered_set<std::string>& user_tokens) {
  auto tokens = content_tokens(phrase);
  std::erase_if(tokens, [](const std::string& t) { return is_marker(t); });
  if (tokens.empty()) return true;
  std::size_t hit = 0;
  for (const auto& t : tokens) hit += user_tokens.count(t);
  return static_cast<double>(hit) >= kPresenceFraction * static_cast<double>(tokens.size());
}

inline std::string clarification_for_condition(std::string_view condition) {
  return "To answer that, I need one more detail — does this apply to you: \"" + condition_phrase(condition) + "\"?";
}

inline std::string clarification_for_entities(const std::vector<std::string>& entities) {
  std::string out = "Are you asking about ";
  for (const auto& e : entities) out += "\"" + e + "\", ";
  return out + "or the difference between them?";
}

// Produces a clarify or answer outcome; matched_entry/score/answer are left
// for the caller to fill.
inline FaqOutcome generate_clarification(const SplitQuestion& split, std::string_view user_question) {
  if (split.kind == SplitKind::kUnsplit) throw InvalidArgument("cannot clarify an unsplit question");
  const auto user = text::tokenize(user_question);
  const std::unordered_set<std::string> user_tokens(user.begin(), user.end());
  FaqOutcome out;
  if (split.kind == SplitKind::kConditional) {
    if (phrase_present(*split.condition, user_tokens)) {
      out.kind = OutcomeKind::kAnswer;
    } else {
      out.kind = OutcomeKind::kClarify;
      out.clarification = clarification_for_condition(*split.condition);
    }
    return out;
  }
  std::size_t named = 0;
  for (const auto& e : *split.entities) {
    if (content_tokens(e).empty()) continue;
    named += phrase_present(e, user_tokens) ? 1 : 0;
  }
  if (named >= 2) {
    out.kind = OutcomeKind::kAnswer;
  } else {
    out.kind = OutcomeKind::kClarify;
    out.clarification = clarification_for_entities(*split.entities);
  }
  return out;
}

inline FaqOutcome faq_pipeline(const FaqIndex& index, std::string_view user_question,
                               double threshold = kDefaultThreshold) {
  const auto hit = retrieve(index, user_question, threshold);
  if (!hit.entry) {
    FaqOutcome none;
    none.score = hit.score;
    return none;
  }
  const FaqEntry& entry = index.entries()[*hit.entry];
  const auto split = split_question(entry.question);
  FaqOutcome out;
  if (split.kind == SplitKind::kUnsplit) {
    out.kind = OutcomeKind::kAnswer;
  } else {
    out = generate_clarification(split, user_question);
  }
  if (out.kind == OutcomeKind::kAnswer) out.answer = entry.answer;
  out.matched_entry = entry.id;
  out.score = hit.score;
  return out;
}

struct AnnotatedQuestion {
  std::string incomplete_question;
  bool should_clarify = false;
  std::string gold_entry;
};

// Fraction of should-clarify items for which the pipeline asks back.
inline double measure_coverage(const FaqIndex& index, const std::vector<AnnotatedQuestion>& annotated,
                               double threshold = kDefaultThreshold) {
  if (annotated.empty()) throw InvalidArgument("coverage needs at least one annotated question");
  std::size_t eligible = 0, clarified = 0;
  for (const auto& item : annotated) {
    if (!item.should_clarify) continue;
    ++eligible;
    if (faq_pipeline(index, item.incomplete_question, threshold).kind == OutcomeKind::kClarify) ++clarified;
  }
  if (eligible == 0) throw InvalidArgument("no annotated question is marked should_clarify");
  return static_cast<double>(clarified) / static_cast<double>(eligible);
}

inline std::vector<FaqEntry> read_faq(std::istream& in) {
  std::vector<FaqEntry> out;
  clarify::detail::for_each_jsonl(in, "faq", [&](const nlohmann::json& j) {
    out.push_back({j.at("id").get<std::string>(), j.at("question").get<std::string>(),
                   j.value("answer", std::string())});
  });
  return out;
}

inline std::vector<AnnotatedQuestion> read_annotated(std::istream& in) {
  std::vector<AnnotatedQuestion> out;
  clarify::detail::for_each_jsonl(in, "annotated", [&](const nlohmann::json& j) {
    out.push_back({j.at("incomplete_question").get<std::string>(), j.at("should_clarify").get<bool>(),
                   j.value("gold_entry", std::string())});
  });
  return out;
}

inline nlohmann::json to_json(const FaqOutcome& o) {
  nlohmann::json j = {{"kind", to_string(o.kind)}};
  if (o.kind == OutcomeKind::kNoMatch) return j;
  if (o.clarification) j["clarification"] = *o.clarification;
  if (o.answer) j["answer"] = *o.answer;
  if (o.matched_entry) j["matched_entry"] = *o.matched_entry;
  j["score"] = o.score;
  return j;
}

}  // namespace clarify::faq
