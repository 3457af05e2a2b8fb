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
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <istream>
#include <ostream>
#include <string>
#include <unordered_set>
#include <vector>

#include <nlohmann/json.hpp>

#include "clarify/error.hpp"
#include "clarify/kb.hpp"
#include "clarify/lcg.hpp"

namespace clarify {

struct DialoguePair {
  std::string id;
  std::string patient_text;
  std::string doctor_text;
};

struct ProcessedDialogue {
  std::string id;
  TermSet patient_symptoms;
  TermSet doctor_symptoms;
  TermSet diagnoses;
};

struct TrainingExample {
  TermSet symptoms;
  TermId diagnosis;

  friend bool operator==(const TrainingExample&, const TrainingExample&) = default;
};

// One hidden-symptom evaluation unit derived from a single-turn dialogue.
struct ClarificationInstance {
  std::string id;
  TermSet reduced_symptoms;
  TermId hidden_symptom;
  TermId diagnosis;

  friend bool operator==(const ClarificationInstance&, const ClarificationInstance&) = default;
};

struct CorpusSplit {
  std::vector<TrainingExample> training;
  std::vector<ClarificationInstance> evaluation;
  std::int64_t seed = 0;
};

// Reads line-delimited {"id","patient","doctor"} records. Blank lines are
// skipped; line numbers in errors are 1-based.
inline std::vector<DialoguePair> ingest_corpus(std::istream& in) {
  std::vector<DialoguePair> out;
  std::unordered_set<std::string> ids;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    DialoguePair p;
    try {
      const auto j = nlohmann::json::parse(line);
      p.id = j.at("id").get<std::string>();
      p.patient_text = j.at("patient").get<std::string>();
      p.doctor_text = j.at("doctor").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw ParseError("corpus line " + std::to_string(lineno) + ": " + e.what());
    }
    if (!ids.insert(p.id).second)
      throw InvariantError("corpus line " + std::to_string(lineno) + ": duplicate id '" + p.id + "'");
    out.push_back(std::move(p));
  }
  return out;
}

inline ProcessedDialogue process_dialogue(const DialoguePair& pair, const KnowledgeBase& kb) {
  auto as_set = [](std::vector<TermId> ids) { return TermSet(ids.begin(), ids.end()); };
  return ProcessedDialogue{pair.id,
                           as_set(kb.extract_mentions(pair.patient_text, TermKind::kSymptom)),
                           as_set(kb.extract_mentions(pair.doctor_text, TermKind::kSymptom)),
                           as_set(kb.extract_mentions(pair.doctor_text, TermKind::kDisease))};
}

inline std::vector<ProcessedDialogue> filter_single_diagnosis(std::vector<ProcessedDialogue> dialogues) {
  std::erase_if(dialogues, [](const ProcessedDialogue& d) { return d.diagnoses.size() != 1; });
  return dialogues;
}

// Symptoms in both the patient description and the doctor's reply.
inline TermSet repeated_symptoms(const ProcessedDialogue& d) {
  TermSet out;
  std::set_intersection(d.patient_symptoms.begin(), d.patient_symptoms.end(), d.doctor_symptoms.begin(),
                        d.doctor_symptoms.end(), std::inserter(out, out.end()));
  return out;
}

// Dialogues whose doctor repeats a patient symptom become evaluation
// instances with one repeated symptom hidden; the rest become training
// examples. One generator draw is consumed per dialogue, in corpus order,
// whether or not it yields an instance.
inline CorpusSplit convert_to_clarification(const std::vector<ProcessedDialogue>& dialogues, std::int64_t seed) {
  CorpusSplit split;
  split.seed = seed;
  ParkMillerLcg rng(seed);
  for (const auto& d : dialogues) {
    if (d.diagnoses.size() != 1)
      throw InvalidArgument("dialogue '" + d.id + "' does not have exactly one diagnosis");
    const auto draw = rng.next();
    const TermSet repeated = repeated_symptoms(d);
    const TermId& dx = *d.diagnoses.begin();
    if (repeated.empty()) {
      split.training.push_back({d.patient_symptoms, dx});
      continue;
    }
    // TermSet iterates in lexicographic order.
    auto it = repeated.begin();
    std::advance(it, static_cast<std::ptrdiff_t>(draw % repeated.size()));
    ClarificationInstance inst{d.id, d.patient_symptoms, *it, dx};
    inst.reduced_symptoms.erase(inst.hidden_symptom);
    split.evaluation.push_back(std::move(inst));
  }
  return split;
}

inline nlohmann::json to_json(const TrainingExample& e) {
  return {{"symptoms", e.symptoms}, {"diagnosis", e.diagnosis}};
}

inline nlohmann::json to_json(const ClarificationInstance& c) {
  return {{"id", c.id},
          {"reduced_symptoms", c.reduced_symptoms},
          {"hidden_symptom", c.hidden_symptom},
          {"diagnosis", c.diagnosis}};
}

template <typename T>
void write_jsonl(std::ostream& out, const std::vector<T>& items) {
  for (const auto& item : items) out << to_json(item).dump() << '\n';
}

namespace detail {

template <typename Fn>
void for_each_jsonl(std::istream& in, const char* what, Fn&& fn) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    try {
      fn(nlohmann::json::parse(line));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string(what) + " line " + std::to_string(lineno) + ": " + e.what());
    }
  }
}

}  // namespace detail

inline std::vector<TrainingExample> read_training(std::istream& in) {
  std::vector<TrainingExample> out;
  detail::for_each_jsonl(in, "training", [&](const nlohmann::json& j) {
    out.push_back({j.at("symptoms").get<TermSet>(), j.at("diagnosis").get<std::string>()});
  });
  return out;
}

inline std::vector<ClarificationInstance> read_instances(std::istream& in) {
  std::vector<ClarificationInstance> out;
  detail::for_each_jsonl(in, "evaluation", [&](const nlohmann::json& j) {
    out.push_back({j.at("id").get<std::string>(), j.at("reduced_symptoms").get<TermSet>(),
                   j.at("hidden_symptom").get<std::string>(), j.at("diagnosis").get<std::string>()});
  });
  return out;
}

// Opens `path` for reading; errors name the path.
inline std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  return in;
}

inline std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  return out;
}

}  // namespace clarify
