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
#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "clarify/corpus.hpp"
#include "clarify/error.hpp"
#include "clarify/kb.hpp"
#include "clarify/lcg.hpp"

namespace clarify::synth {

// Characteristic symptoms per disease, indices into kb.symptoms().
struct DiseaseProfile {
  std::size_t disease;
  std::vector<std::size_t> symptoms;
};

// A generated dialogue together with the term sets its text was built from.
struct SyntheticDialogue {
  DialoguePair pair;
  TermSet patient_symptoms;
  TermSet doctor_symptoms;
  TermSet diagnoses;
};

struct GeneratorOptions {
  std::size_t profile_size = 5;
  double profile_rate = 0.65;      // chance each characteristic symptom is reported
  std::size_t background_draws = 2;
  double background_rate = 0.3;
  double no_diagnosis_rate = 0.08;
  double two_diagnoses_rate = 0.08;
  double repeat_rate = 0.45;       // doctor echoes one or two patient symptoms
  double new_symptom_rate = 0.10;  // doctor brings up a symptom the patient did not mention
  double synonym_rate = 0.3;
};

inline std::vector<DiseaseProfile> build_profiles(const KnowledgeBase& kb, ParkMillerLcg& rng,
                                                  std::size_t profile_size) {
  std::vector<DiseaseProfile> out;
  const std::size_t n = kb.symptoms().size();
  for (std::size_t d = 0; d < kb.diseases().size(); ++d) {
    DiseaseProfile p{d, {}};
    while (p.symptoms.size() < std::min(profile_size, n)) {
      const std::size_t s = rng.index(n);
      if (std::find(p.symptoms.begin(), p.symptoms.end(), s) == p.symptoms.end()) p.symptoms.push_back(s);
    }
    out.push_back(std::move(p));
  }
  return out;
}

namespace detail {

inline const std::string& pick(ParkMillerLcg& rng, const std::vector<std::string>& options) {
  return options[rng.index(options.size())];
}

inline std::string surface(const Term& t, ParkMillerLcg& rng, double synonym_rate) {
  if (!t.synonyms.empty() && rng.bernoulli(synonym_rate)) return pick(rng, t.synonyms);
  return t.canonical;
}

inline std::string list_phrase(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += i + 1 == items.size() ? " and " : ", ";
    out += items[i];
  }
  return out;
}

}  // namespace detail

// Template-English patient/doctor exchanges sampled from per-disease symptom
// profiles. Fully determined by (kb, n, seed).
inline std::vector<SyntheticDialogue> generate(const KnowledgeBase& kb, std::size_t n, std::int64_t seed,
                                               const GeneratorOptions& opt = {}) {
  if (kb.symptoms().empty() || kb.diseases().size() < 2)
    throw InvalidArgument("generator needs at least one symptom and two diseases");
  ParkMillerLcg rng(seed);
  const auto profiles = build_profiles(kb, rng, opt.profile_size);
  const auto& S = kb.symptoms();
  const auto& D = kb.diseases();

  static const std::vector<std::string> openers = {
      "Hello doctor, ", "Hi, ", "Dear doctor, ", "Good evening. ", ""};
  static const std::vector<std::string> reports = {
      "I have been dealing with {S} for {N} days.", "for {N} days now I have {S}.",
      "my main concerns are {S} which started {N} days ago.", "I noticed {S} over the last {N} days."};
  static const std::vector<std::string> closers = {
      " What could this be?", " Should I be worried?", " Please advise.", " Thanks in advance."};
  static const std::vector<std::string> verdicts = {
      "this is most likely {D}.", "I suspect {D}.", "the picture fits {D}.", "you probably have {D}."};
  static const std::vector<std::string> greetings = {
      "Thanks for your query. ", "Hello and welcome. ", "Thank you for writing in. ", ""};

  auto fill = [](std::string tpl, std::string_view key, const std::string& value) {
    tpl.replace(tpl.find(key), key.size(), value);
    return tpl;
  };

  std::vector<SyntheticDialogue> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    SyntheticDialogue g;
    const std::size_t d = rng.index(D.size());

    std::vector<std::size_t> patient;
    auto add = [&](std::size_t s) {
      if (std::find(patient.begin(), patient.end(), s) == patient.end()) patient.push_back(s);
    };
    for (std::size_t s : profiles[d].symptoms)
      if (rng.bernoulli(opt.profile_rate)) add(s);
    for (std::size_t b = 0; b < opt.background_draws; ++b) {
      const std::size_t s = rng.index(S.size());
      if (rng.bernoulli(opt.background_rate)) add(s);
    }
    if (patient.empty()) add(profiles[d].symptoms.front());

    std::vector<std::string> said;
    for (std::size_t s : patient) {
      said.push_back(detail::surface(S[s], rng, opt.synonym_rate));
      g.patient_symptoms.insert(S[s].id);
    }
    const std::string days = std::to_string(1 + rng.index(14));
    std::string report = fill(fill(detail::pick(rng, reports), "{S}", detail::list_phrase(said)), "{N}", days);
    std::string opener = detail::pick(rng, openers);
    if (opener.empty() || opener.ends_with(". ")) report[0] = static_cast<char>(std::toupper(report[0]));
    g.pair.patient_text = opener + report + detail::pick(rng, closers);

    // Doctor reply: echoed symptoms, optional new symptom, then the verdict.
    std::string doctor = detail::pick(rng, greetings);
    std::vector<std::string> echoed;
    if (rng.bernoulli(opt.repeat_rate)) {
      const std::size_t count = std::min<std::size_t>(patient.size(), 1 + rng.index(2));
      std::vector<std::size_t> pool = patient;
      for (std::size_t k = 0; k < count; ++k) {
        const std::size_t j = rng.index(pool.size());
        echoed.push_back(detail::surface(S[pool[j]], rng, opt.synonym_rate));
        g.doctor_symptoms.insert(S[pool[j]].id);
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(j));
      }
      doctor += "Given your " + detail::list_phrase(echoed) + ", ";
    } else {
      doctor += "From your description, ";
    }
    const double r = rng.uniform();
    std::vector<std::size_t> dx;
    if (r >= opt.no_diagnosis_rate) dx.push_back(d);
    if (r >= opt.no_diagnosis_rate && r < opt.no_diagnosis_rate + opt.two_diagnoses_rate) {
      std::size_t other = rng.index(D.size());
      if (other == d) other = (d + 1) % D.size();
      dx.push_back(other);
    }
    if (dx.empty()) {
      doctor += "it is hard to say without an examination.";
    } else {
      std::vector<std::string> names;
      for (std::size_t k : dx) {
        names.push_back(detail::surface(D[k], rng, opt.synonym_rate));
        g.diagnoses.insert(D[k].id);
      }
      std::string verdict = detail::pick(rng, verdicts);
      doctor += fill(verdict, "{D}", dx.size() == 1 ? names[0] : names[0] + " or possibly " + names[1]);
    }
    if (rng.bernoulli(opt.new_symptom_rate)) {
      const std::size_t s = rng.index(S.size());
      doctor += " Let me know if you also develop " + detail::surface(S[s], rng, opt.synonym_rate) + ".";
      g.doctor_symptoms.insert(S[s].id);
    }
    doctor += " Take care.";
    g.pair.doctor_text = std::move(doctor);
    g.pair.id = "synth-" + std::to_string(i + 1);
    out.push_back(std::move(g));
  }
  return out;
}

inline nlohmann::ordered_json to_json(const DialoguePair& p) {
  return {{"id", p.id}, {"patient", p.patient_text}, {"doctor", p.doctor_text}};
}

}  // namespace clarify::synth
