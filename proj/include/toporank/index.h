// Copyright 2026 The Toporank Authors.
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

#ifndef TOPORANK_INDEX_H_
#define TOPORANK_INDEX_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "toporank/gazetteer.h"

namespace toporank {

struct IndexConfig {
  int ngram_size = 3;
  int max_candidates = 50;
  int max_edit_distance = 2;
  int fuzzy_min_shared_ngrams = 2;

  void Validate() const;
};

struct Candidate {
  GazetteerEntry entry;
  double retrieval_score = 0.0;
  bool exact = false;
  int edit_distance = 0;
};

struct CandidateSet {
  std::string query_text;
  std::string normalized_query;
  std::vector<Candidate> candidates;
  std::optional<GeonameId> gold_id;

  bool Contains(GeonameId id) const;
  std::optional<size_t> Find(GeonameId id) const;
};

// Composite retrieval score. Ordering by it matches ordering by
// (exact, -edit distance, log10(population + 1)) for edit distances below 10.
double RetrievalScore(bool exact, int edit_distance, std::int64_t population);

// Distinct character n-grams of a string, measured in code points. Strings
// shorter than n have none.
std::vector<std::u32string> CharNgrams(std::u32string_view text, int n);

// Immutable after construction; Query is safe to call concurrently.
class GazetteerIndex {
 public:
  GazetteerIndex() = default;

  // Throws kParameter on an empty entry list or duplicate ids.
  static GazetteerIndex Build(std::vector<GazetteerEntry> entries,
                              const IndexConfig& config = {});

  // Top-k candidates; exact hits on any indexed name first. An empty or
  // whitespace-only name yields an empty set; k <= 0 throws kParameter.
  CandidateSet Query(std::string_view name, int k) const;
  CandidateSet Query(std::string_view name) const {
    return Query(name, config_.max_candidates);
  }

  // True if the normalized or folded form of |name| is an indexed key.
  bool HasExactKey(std::string_view name) const;

  const GazetteerEntry* Find(GeonameId id) const;
  const std::vector<GazetteerEntry>& entries() const { return entries_; }
  const IndexConfig& config() const { return config_; }
  size_t key_count() const { return exact_index_.size(); }
  size_t ngram_count() const { return ngram_index_.size(); }

  // Exposed for invariant checks.
  const std::unordered_map<std::string, std::vector<uint32_t>>& exact_index() const {
    return exact_index_;
  }
  const std::unordered_map<std::u32string, std::vector<uint32_t>>& ngram_index() const {
    return ngram_index_;
  }

  void Save(const std::string& path) const;
  static GazetteerIndex Load(const std::string& path);

 private:
  void Finalize();

  IndexConfig config_;
  std::vector<GazetteerEntry> entries_;
  // Postings hold positions into entries_, ascending.
  std::unordered_map<std::string, std::vector<uint32_t>> exact_index_;
  std::unordered_map<std::u32string, std::vector<uint32_t>> ngram_index_;
  std::unordered_map<GeonameId, uint32_t> position_of_;
  // Per-entry decoded index keys, used for edit-distance verification.
  std::vector<std::vector<std::u32string>> keys_;
};

inline constexpr uint32_t kIndexFormatVersion = 1;

}  // namespace toporank

#endif  // TOPORANK_INDEX_H_
