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
#include <cstdint>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "clarify/corpus.hpp"
#include "clarify/error.hpp"
#include "clarify/kb.hpp"

namespace clarify {

inline constexpr int kModelFormatVersion = 1;

// Diagnosis distribution in model disease order.
struct Posterior {
  std::vector<TermId> diseases;
  std::vector<double> probabilities;

  double at(std::string_view disease) const {
    for (std::size_t i = 0; i < diseases.size(); ++i)
      if (diseases[i] == disease) return probabilities[i];
    throw InvalidArgument("unknown disease '" + std::string(disease) + "'");
  }

  // Descending probability, ties by disease id ascending.
  std::vector<std::pair<TermId, double>> ranked() const {
    std::vector<std::pair<TermId, double>> out;
    out.reserve(diseases.size());
    for (std::size_t i = 0; i < diseases.size(); ++i) out.emplace_back(diseases[i], probabilities[i]);
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second > b.second;
      return a.first < b.first;
    });
    return out;
  }
};

// Normalizes log scores into probabilities with the log-sum-exp shift.
inline std::vector<double> normalize_log_scores(std::span<const double> log_scores) {
  std::vector<double> out(log_scores.size());
  if (log_scores.empty()) return out;
  const double peak = *std::max_element(log_scores.begin(), log_scores.end());
  double total = 0.0;
  for (std::size_t i = 0; i < log_scores.size(); ++i) {
    out[i] = std::exp(log_scores[i] - peak);
    total += out[i];
  }
  for (double& p : out) p /= total;
  return out;
}

// Bernoulli Naive Bayes over the full symptom vocabulary with add-alpha
// smoothing on both the conditionals and the priors. Raw counts are the
// stored state; every probability is derived from them.
class NaiveBayesModel {
 public:
  NaiveBayesModel(std::vector<TermId> symptoms, std::vector<TermId> diseases, double alpha,
                  std::vector<std::uint64_t> disease_counts, std::vector<std::vector<std::uint64_t>> joint_counts)
      : symptoms_(std::move(symptoms)),
        diseases_(std::move(diseases)),
        alpha_(alpha),
        disease_counts_(std::move(disease_counts)),
        joint_counts_(std::move(joint_counts)) {
    validate();
    derive();
  }

  static NaiveBayesModel train(const std::vector<TrainingExample>& examples, const KnowledgeBase& kb,
                               double alpha = 1.0) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InvalidArgument("alpha must be a positive number");
    std::vector<TermId> symptoms, diseases;
    for (const auto& t : kb.symptoms()) symptoms.push_back(t.id);
    for (const auto& t : kb.diseases()) diseases.push_back(t.id);
    auto index_of = [](const std::vector<TermId>& ids) {
      std::unordered_map<std::string_view, std::size_t> m;
      for (std::size_t i = 0; i < ids.size(); ++i) m.emplace(ids[i], i);
      return m;
    };
    const auto s_index = index_of(symptoms);
    const auto d_index = index_of(diseases);
    std::vector<std::uint64_t> n_d(diseases.size(), 0);
    std::vector<std::vector<std::uint64_t>> n_sd(symptoms.size(), std::vector<std::uint64_t>(diseases.size(), 0));
    for (const auto& ex : examples) {
      auto d = d_index.find(ex.diagnosis);
      if (d == d_index.end()) throw InvariantError("unknown disease id '" + ex.diagnosis + "' in training data");
      ++n_d[d->second];
      for (const auto& s : ex.symptoms) {
        auto si = s_index.find(s);
        if (si == s_index.end()) throw InvariantError("unknown symptom id '" + s + "' in training data");
        ++n_sd[si->second][d->second];
      }
    }
    return NaiveBayesModel(std::move(symptoms), std::move(diseases), alpha, std::move(n_d), std::move(n_sd));
  }

  const std::vector<TermId>& symptoms() const { return symptoms_; }
  const std::vector<TermId>& diseases() const { return diseases_; }
  double alpha() const { return alpha_; }
  std::uint64_t total_examples() const { return total_; }
  std::uint64_t disease_count(std::size_t d) const { return disease_counts_.at(d); }
  std::uint64_t joint_count(std::size_t s, std::size_t d) const { return joint_counts_.at(s).at(d); }

  std::optional<std::size_t> symptom_index(std::string_view id) const {
    auto it = symptom_pos_.find(std::string(id));
    if (it == symptom_pos_.end()) return std::nullopt;
    return it->second;
  }

  // P(d) = (n_d + a) / (N + a|D|)
  double prior(std::size_t d) const {
    return (static_cast<double>(disease_counts_[d]) + alpha_) /
           (static_cast<double>(total_) + alpha_ * static_cast<double>(diseases_.size()));
  }

  // P(s=1|d) = (n_sd + a) / (n_d + 2a)
  double conditional(std::size_t s, std::size_t d) const {
    return (static_cast<double>(joint_counts_[s][d]) + alpha_) /
           (static_cast<double>(disease_counts_[d]) + 2.0 * alpha_);
  }

  // Converts ids to a presence mask over the vocabulary.
  std::vector<bool> mask(const TermSet& mentioned) const {
    std::vector<bool> present(symptoms_.size(), false);
    for (const auto& id : mentioned) {
      auto idx = symptom_index(id);
      if (!idx) throw InvalidArgument("unknown symptom id '" + id + "'");
      present[*idx] = true;
    }
    return present;
  }

  // Unnormalized log posterior per disease: log P(d) plus, for every symptom
  // in the vocabulary, log P(s=1|d) if present else log P(s=0|d).
  std::vector<double> log_scores(const std::vector<bool>& present) const {
    std::vector<double> out(diseases_.size());
    for (std::size_t d = 0; d < diseases_.size(); ++d) {
      double acc = log_prior_[d];
      for (std::size_t s = 0; s < symptoms_.size(); ++s) acc += present[s] ? log_yes_[s][d] : log_no_[s][d];
      out[d] = acc;
    }
    return out;
  }

  std::vector<double> log_scores(const TermSet& mentioned) const { return log_scores(mask(mentioned)); }

  // log P(s=1|d) - log P(s=0|d): the change in a disease's log score when
  // symptom s flips from absent to present.
  double log_odds(std::size_t s, std::size_t d) const { return log_yes_[s][d] - log_no_[s][d]; }

  Posterior posterior(const TermSet& mentioned) const {
    return Posterior{diseases_, normalize_log_scores(log_scores(mentioned))};
  }

  nlohmann::json to_json() const {
    return {{"version", kModelFormatVersion},
            {"alpha", alpha_},
            {"symptoms", symptoms_},
            {"diseases", diseases_},
            {"disease_counts", disease_counts_},
            {"joint_counts", joint_counts_},
            {"total_examples", total_}};
  }

  static NaiveBayesModel from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("version")) throw ParseError("model: missing 'version'");
    try {
      const int version = j.at("version").get<int>();
      if (version != kModelFormatVersion)
        throw UnsupportedVersion("model: unsupported format version " + std::to_string(version) + " (expected " +
                                 std::to_string(kModelFormatVersion) + ")");
      NaiveBayesModel m(j.at("symptoms").get<std::vector<TermId>>(), j.at("diseases").get<std::vector<TermId>>(),
                        j.at("alpha").get<double>(), j.at("disease_counts").get<std::vector<std::uint64_t>>(),
                        j.at("joint_counts").get<std::vector<std::vector<std::uint64_t>>>());
      if (j.at("total_examples").get<std::uint64_t>() != m.total_)
        throw InvariantError("model: total_examples does not equal the sum of disease counts");
      return m;
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("model: ") + e.what());
    }
  }

 private:
  void validate() {
    if (!(alpha_ > 0.0) || !std::isfinite(alpha_)) throw InvalidArgument("alpha must be a positive number");
    if (disease_counts_.size() != diseases_.size())
      throw InvariantError("model: disease_counts length does not match disease list");
    if (joint_counts_.size() != symptoms_.size())
      throw InvariantError("model: joint_counts rows do not match symptom list");
    total_ = 0;
    for (auto n : disease_counts_) total_ += n;
    for (std::size_t s = 0; s < symptoms_.size(); ++s) {
      if (joint_counts_[s].size() != diseases_.size())
        throw InvariantError("model: joint_counts row for '" + symptoms_[s] + "' has wrong length");
      for (std::size_t d = 0; d < diseases_.size(); ++d)
        if (joint_counts_[s][d] > disease_counts_[d])
          throw InvariantError("model: count for ('" + symptoms_[s] + "', '" + diseases_[d] +
                               "') exceeds the disease count");
    }
    for (std::size_t s = 0; s < symptoms_.size(); ++s)
      if (!symptom_pos_.emplace(symptoms_[s], s).second)
        throw InvariantError("model: duplicate symptom '" + symptoms_[s] + "'");
    std::unordered_map<std::string, int> seen;
    for (const auto& d : diseases_)
      if (seen[d]++) throw InvariantError("model: duplicate disease '" + d + "'");
  }

  void derive() {
    log_prior_.resize(diseases_.size());
    for (std::size_t d = 0; d < diseases_.size(); ++d) log_prior_[d] = std::log(prior(d));
    log_yes_.assign(symptoms_.size(), std::vector<double>(diseases_.size()));
    log_no_.assign(symptoms_.size(), std::vector<double>(diseases_.size()));
    for (std::size_t s = 0; s < symptoms_.size(); ++s) {
      for (std::size_t d = 0; d < diseases_.size(); ++d) {
        const double denom = static_cast<double>(disease_counts_[d]) + 2.0 * alpha_;
        log_yes_[s][d] = std::log((static_cast<double>(joint_counts_[s][d]) + alpha_) / denom);
        log_no_[s][d] =
            std::log((static_cast<double>(disease_counts_[d] - joint_counts_[s][d]) + alpha_) / denom);
      }
    }
  }

  std::vector<TermId> symptoms_;
  std::vector<TermId> diseases_;
  double alpha_;
  std::vector<std::uint64_t> disease_counts_;
  std::vector<std::vector<std::uint64_t>> joint_counts_;  // [symptom][disease]
  std::uint64_t total_ = 0;

  std::unordered_map<std::string, std::size_t> symptom_pos_;
  std::vector<double> log_prior_;
  std::vector<std::vector<double>> log_yes_;
  std::vector<std::vector<double>> log_no_;
};

inline void save_model(const NaiveBayesModel& model, std::ostream& out) { out << model.to_json().dump(2) << '\n'; }

inline NaiveBayesModel load_model(std::istream& in) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("model: ") + e.what());
  }
  return NaiveBayesModel::from_json(j);
}

}  // namespace clarify
