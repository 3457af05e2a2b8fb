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

#include <cstdio>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "clarify/clarifier.hpp"
#include "clarify/corpus.hpp"
#include "clarify/error.hpp"
#include "clarify/nbmodel.hpp"

namespace clarify {

struct EvalReport {
  std::size_t k_max = 0;
  std::vector<double> recall_at;     // index k-1
  std::vector<double> precision_at;  // index k-1
  std::size_t n_instances = 0;
  // 1-based rank of the hidden symptom; nullopt when it was not a candidate.
  std::map<std::string, std::optional<std::size_t>> per_instance_rank;
};

// Rank of `symptom` in the ranking, 1-based.
inline std::optional<std::size_t> rank_of(const CandidateRanking& ranking, const TermId& symptom) {
  for (std::size_t i = 0; i < ranking.candidates.size(); ++i)
    if (ranking.candidates[i].symptom == symptom) return i + 1;
  return std::nullopt;
}

// Builds recall/precision curves from 1-based ranks. With one target per
// instance, precision@k is recall@k / k.
inline void fill_curves(EvalReport& report, const std::vector<std::optional<std::size_t>>& ranks) {
  std::vector<std::size_t> hits(report.k_max, 0);
  for (const auto& r : ranks)
    if (r && *r <= report.k_max) ++hits[*r - 1];
  report.recall_at.assign(report.k_max, 0.0);
  report.precision_at.assign(report.k_max, 0.0);
  std::size_t cumulative = 0;
  for (std::size_t k = 1; k <= report.k_max; ++k) {
    cumulative += hits[k - 1];
    report.recall_at[k - 1] = static_cast<double>(cumulative) / static_cast<double>(report.n_instances);
    report.precision_at[k - 1] = report.recall_at[k - 1] / static_cast<double>(k);
  }
}

inline EvalReport evaluate(const NaiveBayesModel& model, const std::vector<ClarificationInstance>& instances,
                           std::size_t k_max) {
  if (k_max < 1) throw InvalidArgument("k_max must be at least 1");
  if (instances.empty()) throw InvalidArgument("evaluation needs at least one instance");
  EvalReport report;
  report.k_max = k_max;
  report.n_instances = instances.size();
  std::vector<std::optional<std::size_t>> ranks;
  ranks.reserve(instances.size());
  for (const auto& inst : instances) {
    if (inst.reduced_symptoms.count(inst.hidden_symptom))
      throw InvariantError("instance '" + inst.id + "' lists its hidden symptom among the reduced symptoms");
    if (!model.symptom_index(inst.hidden_symptom))
      throw InvariantError("instance '" + inst.id + "' hides unknown symptom '" + inst.hidden_symptom + "'");
    const auto ranking = rank_candidates(model, inst.reduced_symptoms, {});
    ranks.push_back(rank_of(ranking, inst.hidden_symptom));
    report.per_instance_rank[inst.id] = ranks.back();
  }
  fill_curves(report, ranks);
  return report;
}

enum class ReportFormat { kText, kCsv };

inline std::string render_report(const EvalReport& report, ReportFormat format) {
  std::ostringstream out;
  char buf[128];
  if (format == ReportFormat::kCsv) {
    out << "k,recall,precision\n";
    for (std::size_t k = 1; k <= report.k_max; ++k) {
      std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", k, report.recall_at[k - 1], report.precision_at[k - 1]);
      out << buf;
    }
    return out.str();
  }
  std::snprintf(buf, sizeof buf, "instances: %zu\n%4s  %10s  %10s\n", report.n_instances, "k", "recall", "precision");
  out << buf;
  for (std::size_t k = 1; k <= report.k_max; ++k) {
    std::snprintf(buf, sizeof buf, "%4zu  %10.6f  %10.6f\n", k, report.recall_at[k - 1], report.precision_at[k - 1]);
    out << buf;
  }
  return out.str();
}

struct CurveRow {
  std::size_t k;
  double recall;
  double precision;
};

// Parses the CSV emitted by render_report.
inline std::vector<CurveRow> parse_report_csv(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  if (!std::getline(in, line) || line != "k,recall,precision") throw ParseError("report: missing CSV header");
  std::vector<CurveRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    CurveRow row{};
    char tail = 0;
    if (std::sscanf(line.c_str(), "%zu,%lf,%lf%c", &row.k, &row.recall, &row.precision, &tail) != 3)
      throw ParseError("report: malformed row '" + line + "'");
    rows.push_back(row);
  }
  return rows;
}

}  // namespace clarify
