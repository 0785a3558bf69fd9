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

#ifndef TOPORANK_FEATURES_H_
#define TOPORANK_FEATURES_H_

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "toporank/gazetteer.h"
#include "toporank/index.h"

namespace toporank {

// Character offsets (code points), half-open.
struct Span {
  size_t start = 0;
  size_t end = 0;

  size_t length() const { return end - start; }
  double midpoint() const { return 0.5 * static_cast<double>(start + end); }
  bool operator==(const Span&) const = default;
};

struct StringFeatures {
  double min_edit = 0.0;
  double avg_edit = 0.0;
  double exact = 0.0;
};

struct CoherenceFeatures {
  double is_adm1_of_other = 0.0;
  double has_adm1_parent = 0.0;
  double shared_country_fraction = 0.0;
};

struct CandidateFeatures {
  static constexpr int kNumericCount = 8;

  double min_edit_distance = 0.0;
  double avg_edit_distance = 0.0;
  double exact_match_flag = 0.0;
  double alt_name_count_log = 0.0;
  double population_log = 0.0;
  double is_adm1_of_other_toponym = 0.0;
  double has_adm1_parent_in_doc = 0.0;
  double shared_country_fraction = 0.0;
  std::string candidate_country;
  char candidate_feature_class = 'P';

  // Fixed order: the eight numeric fields above as declared.
  std::array<double, kNumericCount> Numeric() const;
};

struct ContextVectors {
  Eigen::VectorXd mention_vector;
  Eigen::VectorXd other_mentions_vector;
  Eigen::VectorXd document_vector;

  Eigen::Index dimension() const { return mention_vector.size(); }
};

class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual Eigen::VectorXd EmbedSpan(std::string_view text, Span span) const = 0;
  virtual Eigen::VectorXd EmbedDocument(std::string_view text) const = 0;
  virtual int dimension() const = 0;
};

// Counts of seeded word hashes (plus character 4-grams for spans), L2
// normalized. Empty input gives the zero vector.
class HashedBowProvider : public EmbeddingProvider {
 public:
  HashedBowProvider(int dimension, std::uint64_t seed);

  Eigen::VectorXd EmbedSpan(std::string_view text, Span span) const override;
  Eigen::VectorXd EmbedDocument(std::string_view text) const override;
  int dimension() const override { return dimension_; }
  std::uint64_t seed() const { return seed_; }

 private:
  size_t Bucket(std::string_view token, std::uint64_t salt) const;

  int dimension_;
  std::uint64_t seed_;
};

std::unique_ptr<EmbeddingProvider> MakeHashedBowProvider(int dimension, std::uint64_t seed);

// Lowercased word tokens (normalized alphanumeric runs).
std::vector<std::string> WordTokens(std::string_view text);

double CosineSimilarity(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

StringFeatures ComputeStringFeatures(std::string_view normalized_query,
                                     const GazetteerEntry& candidate);

// |others| are the candidate sets of the other toponyms in the document.
CoherenceFeatures ComputeCoherenceFeatures(const GazetteerEntry& candidate,
                                           std::span<const CandidateSet* const> others,
                                           const AdminTables& admin);

CandidateFeatures ComputeCandidateFeatures(std::string_view normalized_query,
                                           const GazetteerEntry& candidate,
                                           std::span<const CandidateSet* const> others,
                                           const AdminTables& admin);

// Features for every candidate of sets[target], using all other sets for
// the coherence group.
std::vector<CandidateFeatures> FeaturesForToponym(std::span<const CandidateSet> sets,
                                                  size_t target,
                                                  const AdminTables& admin);

struct ContextOptions {
  // Documents longer than this (code points) are windowed around the span
  // for the document vector.
  size_t character_budget = 10000;
};

ContextVectors BuildContext(const EmbeddingProvider& provider, std::string_view text,
                            std::span<const Span> spans, size_t target,
                            const ContextOptions& options = {});

}  // namespace toporank

#endif  // TOPORANK_FEATURES_H_
