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

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "clarify/corpus.hpp"
#include "clarify/kb.hpp"
#include "clarify/nbmodel.hpp"
#include "oracle.hpp"

namespace fixtures {

inline std::filesystem::path data_path(const std::string& name) { return std::filesystem::path(CLARIFY_DATA_DIR) / name; }

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline clarify::Term term(std::string id, clarify::TermKind kind, std::vector<std::string> synonyms = {}) {
  return clarify::Term{id, id, std::move(synonyms), kind};
}

// Symptoms {cough, fever, headache, rash}; diseases {flu, measles}.
inline clarify::KnowledgeBase kb_f() {
  using clarify::TermKind;
  return clarify::KnowledgeBase(
      {term("cough", TermKind::kSymptom), term("fever", TermKind::kSymptom), term("headache", TermKind::kSymptom),
       term("rash", TermKind::kSymptom)},
      {term("flu", TermKind::kDisease), term("measles", TermKind::kDisease)});
}

inline std::vector<clarify::TrainingExample> train_f() {
  return {{{"fever", "cough"}, "flu"}, {{"cough"}, "flu"}, {{"fever", "rash"}, "measles"}};
}

inline clarify::NaiveBayesModel model_f() { return clarify::NaiveBayesModel::train(train_f(), kb_f(), 1.0); }

inline oracle::Model oracle_f() {
  std::vector<oracle::Example> ex;
  for (const auto& e : train_f()) ex.push_back({{e.symptoms.begin(), e.symptoms.end()}, e.diagnosis});
  return oracle::Model::tally({"cough", "fever", "headache", "rash"}, {"flu", "measles"}, ex, 1.0);
}

// Oracle over a trained library model's raw counts.
inline oracle::Model oracle_from_counts(const clarify::NaiveBayesModel& m) {
  oracle::Model o{m.symptoms(), m.diseases(), m.alpha(), {}, {}, 0};
  for (std::size_t d = 0; d < m.diseases().size(); ++d) {
    o.n_d[m.diseases()[d]] = static_cast<double>(m.disease_count(d));
    o.n += static_cast<double>(m.disease_count(d));
    for (std::size_t s = 0; s < m.symptoms().size(); ++s)
      o.n_sd[{m.symptoms()[s], m.diseases()[d]}] = static_cast<double>(m.joint_count(s, d));
  }
  return o;
}

// Frozen from tests/oracles/fixture_oracle.py (exact rational arithmetic).
inline constexpr double kPosteriorFeverFlu = 2187.0 / 4235.0;
inline constexpr double kPosteriorFeverMeasles = 2048.0 / 4235.0;
inline constexpr double kRatioCough = 6.4072265625;
inline constexpr double kRatioRash = 5.618655692729766;
inline constexpr double kRatioHeadache = 1.4046639231824416;
inline constexpr double kPosteriorFeverCoughFlu = 0.8649967040210943;
inline constexpr double kPosteriorFeverRashMeasles = 0.8489119170984456;

}  // namespace fixtures
