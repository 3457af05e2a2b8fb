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
#include <cmath>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "clarify/error.hpp"
#include "clarify/kb.hpp"
#include "clarify/nbmodel.hpp"

namespace clarify {

struct CandidateScore {
  TermId symptom;
  double ratio = 1.0;  // P(d1 | S + s) / P(d2 | S + s), always >= 1
  TermId top_disease;
  TermId runner_up;
};

struct CandidateRanking {
  TermSet query_symptoms;
  TermSet excluded;
  std::vector<CandidateScore> candidates;  // ratio descending, then symptom id
};

// How the top-two ratio is formed. The normalizer cancels in the quotient,
// so both routes must yield the same ranking.
enum class RatioRoute {
  kUnnormalized,  // exp(log score d1 - log score d2)
  kNormalized,    // P(d1|S) / P(d2|S) from the normalized posterior
};

// Ratios closer than this (relative) are ordered by symptom id, so rounding
// noise between algebraically equal ratios cannot reorder candidates.
inline constexpr double kRatioTieTolerance = 1e-12;

// Indices of the best and second-best entries: value descending, ties by id.
inline std::pair<std::size_t, std::size_t> top_two(std::span<const double> values, const std::vector<TermId>& ids) {
  if (values.size() < 2) throw InvalidArgument("need at least two diseases to compare");
  auto better = [&](std::size_t a, std::size_t b) {
    if (values[a] != values[b]) return values[a] > values[b];
    return ids[a] < ids[b];
  };
  std::size_t first = better(0, 1) ? 0 : 1;
  std::size_t second = first == 0 ? 1 : 0;
  for (std::size_t i = 2; i < values.size(); ++i) {
    if (better(i, first)) {
      second = first;
      first = i;
    } else if (better(i, second)) {
      second = i;
    }
  }
  return {first, second};
}

// Sorts by ratio descending; runs of ratios within kRatioTieTolerance of the
// run head are then ordered by symptom id.
inline void sort_candidates(std::vector<CandidateScore>& candidates) {
  std::sort(candidates.begin(), candidates.end(), [](const CandidateScore& a, const CandidateScore& b) {
    if (a.ratio != b.ratio) return a.ratio > b.ratio;
    return a.symptom < b.symptom;
  });
  std::size_t head = 0;
  while (head < candidates.size()) {
    std::size_t end = head + 1;
    const double floor = candidates[head].ratio * (1.0 - kRatioTieTolerance);
    while (end < candidates.size() && candidates[end].ratio >= floor) ++end;
    if (end - head > 1)
      std::sort(candidates.begin() + static_cast<std::ptrdiff_t>(head),
                candidates.begin() + static_cast<std::ptrdiff_t>(end),
                [](const CandidateScore& a, const CandidateScore& b) { return a.symptom < b.symptom; });
    head = end;
  }
}

// Scores every symptom not yet mentioned or excluded by assuming it present
// and measuring how far the leading diagnosis pulls ahead of the runner-up.
inline CandidateRanking rank_candidates(const NaiveBayesModel& model, const TermSet& mentioned, const TermSet& excluded,
                                        RatioRoute route = RatioRoute::kUnnormalized) {
  const auto& diseases = model.diseases();
  if (diseases.size() < 2) throw InvalidArgument("ranking needs a model with at least two diseases");
  for (const auto& s : mentioned)
    if (excluded.count(s)) throw InvalidArgument("symptom '" + s + "' is both mentioned and excluded");

  const auto present = model.mask(mentioned);
  const auto skip = model.mask(excluded);
  const auto base = model.log_scores(present);

  CandidateRanking out{mentioned, excluded, {}};
  std::vector<double> scores(diseases.size());
  for (std::size_t s = 0; s < model.symptoms().size(); ++s) {
    if (present[s] || skip[s]) continue;
    for (std::size_t d = 0; d < diseases.size(); ++d) scores[d] = base[d] + model.log_odds(s, d);
    double ratio;
    std::size_t d1, d2;
    if (route == RatioRoute::kNormalized) {
      const auto probs = normalize_log_scores(scores);
      std::tie(d1, d2) = top_two(probs, diseases);
      ratio = probs[d1] / probs[d2];
    } else {
      std::tie(d1, d2) = top_two(scores, diseases);
      ratio = std::exp(scores[d1] - scores[d2]);
    }
    out.candidates.push_back({model.symptoms()[s], ratio, diseases[d1], diseases[d2]});
  }
  sort_candidates(out.candidates);
  return out;
}

inline std::vector<TermId> top_clarification(const CandidateRanking& ranking, std::size_t k) {
  std::vector<TermId> out;
  for (std::size_t i = 0; i < ranking.candidates.size() && i < k; ++i) out.push_back(ranking.candidates[i].symptom);
  return out;
}

}  // namespace clarify
