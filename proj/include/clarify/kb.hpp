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
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <nlohmann/json.hpp>

#include "clarify/error.hpp"
#include "clarify/text.hpp"

namespace clarify {

using TermId = std::string;
// Sorted set of term ids; the sort order is what every serializer emits.
using TermSet = std::set<TermId>;

enum class TermKind { kSymptom, kDisease };

inline const char* to_string(TermKind k) { return k == TermKind::kSymptom ? "symptom" : "disease"; }

struct Term {
  TermId id;
  std::string canonical;
  std::vector<std::string> synonyms;
  TermKind kind = TermKind::kSymptom;
};

// Symptom and disease vocabularies with a single-valued surface lookup.
// Immutable once constructed.
class KnowledgeBase {
 public:
  KnowledgeBase() = default;

  // Validates every invariant; throws InvariantError naming the offending
  // string on the first violation.
  KnowledgeBase(std::vector<Term> symptoms, std::vector<Term> diseases)
      : symptoms_(std::move(symptoms)), diseases_(std::move(diseases)) {
    for (auto* list : {&symptoms_, &diseases_}) {
      for (std::size_t i = 0; i < list->size(); ++i) register_term((*list)[i], i);
    }
  }

  const std::vector<Term>& symptoms() const { return symptoms_; }
  const std::vector<Term>& diseases() const { return diseases_; }
  const std::vector<Term>& terms(TermKind kind) const {
    return kind == TermKind::kSymptom ? symptoms_ : diseases_;
  }

  const Term* find(std::string_view id) const {
    auto it = by_id_.find(std::string(id));
    if (it == by_id_.end()) return nullptr;
    return &terms(it->second.kind)[it->second.index];
  }

  bool has(std::string_view id, TermKind kind) const {
    const Term* t = find(id);
    return t != nullptr && t->kind == kind;
  }

  // Maps a surface string (any casing/punctuation) to its term id.
  std::optional<TermId> lookup(std::string_view surface) const {
    const std::string key = text::join(text::tokenize(surface));
    auto it = by_surface_.find(key);
    if (it == by_surface_.end()) return std::nullopt;
    return it->second.id;
  }

  // Ids of every term of `kind` mentioned in `input`, once each, in order of
  // first occurrence. Matching is case-insensitive over whole tokens; at each
  // position the longest surface wins and its tokens are consumed.
  std::vector<TermId> extract_mentions(std::string_view input, TermKind kind) const {
    const auto tokens = text::tokenize(input);
    const std::size_t longest = kind == TermKind::kSymptom ? max_len_[0] : max_len_[1];
    std::vector<TermId> out;
    std::unordered_set<std::string_view> seen;
    std::size_t i = 0;
    while (i < tokens.size()) {
      std::size_t matched = 0;
      const std::size_t upper = std::min(longest, tokens.size() - i);
      for (std::size_t len = upper; len >= 1 && matched == 0; --len) {
        std::string key = tokens[i];
        for (std::size_t j = 1; j < len; ++j) {
          key.push_back(' ');
          key += tokens[i + j];
        }
        auto it = by_surface_.find(key);
        if (it != by_surface_.end() && it->second.kind == kind) {
          if (seen.insert(it->second.id).second) out.push_back(it->second.id);
          matched = len;
        }
      }
      i += matched ? matched : 1;
    }
    return out;
  }

 private:
  struct Slot {
    TermKind kind;
    std::size_t index;
  };
  struct SurfaceEntry {
    TermId id;
    TermKind kind;
  };

  static void check_surface(const Term& t, const std::string& s) {
    if (s.empty()) throw InvariantError("term '" + t.id + "' has an empty surface string");
    if (text::trim(s).size() != s.size())
      throw InvariantError("surface string '" + s + "' has leading or trailing whitespace");
    if (text::to_lower(s) != s) throw InvariantError("surface string '" + s + "' is not lowercase");
  }

  void register_term(const Term& t, std::size_t index) {
    if (t.id.empty()) throw InvariantError("term with empty id");
    if (!by_id_.emplace(t.id, Slot{t.kind, index}).second)
      throw InvariantError("duplicate term id '" + t.id + "'");
    std::vector<const std::string*> surfaces{&t.canonical};
    for (const auto& s : t.synonyms) surfaces.push_back(&s);
    for (const std::string* s : surfaces) {
      check_surface(t, *s);
      const auto tokens = text::tokenize(*s);
      if (tokens.empty()) throw InvariantError("surface string '" + *s + "' has no word characters");
      const std::string key = text::join(tokens);
      auto [it, inserted] = by_surface_.emplace(key, SurfaceEntry{t.id, t.kind});
      if (!inserted && it->second.id != t.id)
        throw InvariantError("surface string '" + *s + "' is claimed by both '" + it->second.id +
                             "' and '" + t.id + "'");
      auto& longest = max_len_[t.kind == TermKind::kSymptom ? 0 : 1];
      longest = std::max(longest, tokens.size());
    }
  }

  std::vector<Term> symptoms_;
  std::vector<Term> diseases_;
  std::unordered_map<std::string, Slot> by_id_;
  std::unordered_map<std::string, SurfaceEntry> by_surface_;
  std::size_t max_len_[2] = {0, 0};
};

namespace detail {

inline std::vector<Term> parse_terms(const nlohmann::json& doc, const char* key, TermKind kind) {
  std::vector<Term> out;
  if (!doc.contains(key)) return out;
  const auto& arr = doc.at(key);
  if (!arr.is_array()) throw ParseError(std::string("'") + key + "' must be an array");
  for (const auto& item : arr) {
    if (!item.is_object() || !item.contains("id") || !item.contains("canonical"))
      throw ParseError(std::string("entry in '") + key + "' needs 'id' and 'canonical'");
    Term t;
    t.kind = kind;
    try {
      t.id = item.at("id").get<std::string>();
      t.canonical = item.at("canonical").get<std::string>();
      if (item.contains("synonyms")) t.synonyms = item.at("synonyms").get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("bad term entry in '") + key + "': " + e.what());
    }
    out.push_back(std::move(t));
  }
  return out;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace detail

inline KnowledgeBase load_kb(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("knowledge base: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("knowledge base: top level must be an object");
  return KnowledgeBase(detail::parse_terms(doc, "symptoms", TermKind::kSymptom),
                       detail::parse_terms(doc, "diseases", TermKind::kDisease));
}

inline KnowledgeBase load_kb_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open knowledge base '" + path.string() + "'");
  try {
    return load_kb(in);
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

inline nlohmann::json to_json(const KnowledgeBase& kb) {
  auto terms = [](const std::vector<Term>& list) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& t : list)
      arr.push_back({{"id", t.id}, {"canonical", t.canonical}, {"synonyms", t.synonyms}});
    return arr;
  };
  return {{"symptoms", terms(kb.symptoms())}, {"diseases", terms(kb.diseases())}};
}

}  // namespace clarify
