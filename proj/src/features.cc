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

#include "toporank/features.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <set>

#include "toporank/edit_distance.h"
#include "toporank/error.h"
#include "toporank/unicode.h"

namespace toporank {
namespace {

constexpr std::uint64_t kFnvOffset = 14695981039346656037ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

std::uint64_t Fnv1a(std::string_view bytes, std::uint64_t h) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= kFnvPrime;
  }
  return h;
}

void Normalize(Eigen::VectorXd& v) {
  double norm = v.norm();
  if (norm > 0.0) v /= norm;
}

constexpr std::uint64_t kWordSalt = 0x77;
constexpr std::uint64_t kGramSalt = 0x63;

}  // namespace

std::array<double, CandidateFeatures::kNumericCount> CandidateFeatures::Numeric() const {
  return {min_edit_distance,       avg_edit_distance,      exact_match_flag,
          alt_name_count_log,      population_log,         is_adm1_of_other_toponym,
          has_adm1_parent_in_doc,  shared_country_fraction};
}

std::vector<std::string> WordTokens(std::string_view text) {
  std::vector<std::string> tokens;
  std::u32string current;
  for (char32_t c : DecodeUtf8(NormalizeName(text))) {
    if (IsAlphanumeric(c)) {
      current.push_back(c);
    } else if (!current.empty()) {
      tokens.push_back(EncodeUtf8(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(EncodeUtf8(current));
  return tokens;
}

HashedBowProvider::HashedBowProvider(int dimension, std::uint64_t seed)
    : dimension_(dimension), seed_(seed) {
  if (dimension < 16) throw Error(ErrorCode::kParameter, "embedding dimension must be >= 16");
}

size_t HashedBowProvider::Bucket(std::string_view token, std::uint64_t salt) const {
  char prefix[sizeof(seed_) + sizeof(salt)];
  std::memcpy(prefix, &seed_, sizeof(seed_));
  std::memcpy(prefix + sizeof(seed_), &salt, sizeof(salt));
  std::uint64_t h = Fnv1a(std::string_view(prefix, sizeof(prefix)), kFnvOffset);
  h = Fnv1a(token, h);
  return static_cast<size_t>(h % static_cast<std::uint64_t>(dimension_));
}

Eigen::VectorXd HashedBowProvider::EmbedDocument(std::string_view text) const {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(dimension_);
  for (const auto& token : WordTokens(text)) v[Bucket(token, kWordSalt)] += 1.0;
  Normalize(v);
  return v;
}

Eigen::VectorXd HashedBowProvider::EmbedSpan(std::string_view text, Span span) const {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(dimension_);
  std::string surface = SubstrCodePoints(text, span.start, span.end);
  for (const auto& token : WordTokens(surface)) v[Bucket(token, kWordSalt)] += 1.0;
  std::u32string padded = U"#" + DecodeUtf8(NormalizeName(surface)) + U"#";
  if (padded.size() > 2) {
    for (size_t i = 0; i + 4 <= padded.size(); ++i) {
      v[Bucket(EncodeUtf8(padded.substr(i, 4)), kGramSalt)] += 1.0;
    }
  }
  Normalize(v);
  return v;
}

std::unique_ptr<EmbeddingProvider> MakeHashedBowProvider(int dimension, std::uint64_t seed) {
  return std::make_unique<HashedBowProvider>(dimension, seed);
}

double CosineSimilarity(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  double na = a.norm();
  double nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  return a.dot(b) / (na * nb);
}

StringFeatures ComputeStringFeatures(std::string_view normalized_query,
                                     const GazetteerEntry& candidate) {
  StringFeatures out;
  const std::u32string query = DecodeUtf8(normalized_query);
  const auto names = NormalizedNames(candidate);
  if (names.empty()) {
    out.min_edit = out.avg_edit = 1.0;
    return out;
  }
  double min = std::numeric_limits<double>::infinity();
  double sum = 0.0;
  for (const auto& raw : names) {
    std::u32string name = DecodeUtf8(raw);
    size_t longest = std::max(query.size(), name.size());
    double d = longest == 0 ? 0.0
                            : static_cast<double>(EditDistance(query, name)) /
                                  static_cast<double>(longest);
    min = std::min(min, d);
    sum += d;
    if (name == query) out.exact = 1.0;
  }
  out.min_edit = min;
  out.avg_edit = sum / static_cast<double>(names.size());
  return out;
}

CoherenceFeatures ComputeCoherenceFeatures(const GazetteerEntry& candidate,
                                           std::span<const CandidateSet* const> others,
                                           const AdminTables& admin) {
  CoherenceFeatures out;
  if (others.empty()) return out;

  std::optional<GeonameId> parent;
  if (!candidate.IsAdm1() && !candidate.country_code.empty()) {
    parent = admin.Adm1Of(candidate.country_code, candidate.admin1_code);
  }

  size_t sharing = 0;
  for (const CandidateSet* other : others) {
    bool shares_country = false;
    for (const auto& c : other->candidates) {
      const auto& e = c.entry;
      if (e.geoname_id == candidate.geoname_id) continue;
      if (parent && e.geoname_id == *parent) out.has_adm1_parent = 1.0;
      if (candidate.IsAdm1() && e.country_code == candidate.country_code &&
          e.admin1_code == candidate.admin1_code && !candidate.country_code.empty()) {
        out.is_adm1_of_other = 1.0;
      }
      if (!candidate.country_code.empty() && e.country_code == candidate.country_code) {
        shares_country = true;
      }
    }
    if (shares_country) ++sharing;
  }
  out.shared_country_fraction = static_cast<double>(sharing) / static_cast<double>(others.size());
  return out;
}

CandidateFeatures ComputeCandidateFeatures(std::string_view normalized_query,
                                           const GazetteerEntry& candidate,
                                           std::span<const CandidateSet* const> others,
                                           const AdminTables& admin) {
  CandidateFeatures f;
  auto s = ComputeStringFeatures(normalized_query, candidate);
  f.min_edit_distance = s.min_edit;
  f.avg_edit_distance = s.avg_edit;
  f.exact_match_flag = s.exact;
  f.alt_name_count_log = std::log10(static_cast<double>(candidate.alternative_names.size()) + 1.0);
  f.population_log = std::log10(static_cast<double>(candidate.population) + 1.0);
  auto c = ComputeCoherenceFeatures(candidate, others, admin);
  f.is_adm1_of_other_toponym = c.is_adm1_of_other;
  f.has_adm1_parent_in_doc = c.has_adm1_parent;
  f.shared_country_fraction = c.shared_country_fraction;
  f.candidate_country = candidate.country_code;
  f.candidate_feature_class = candidate.feature_class;
  return f;
}

std::vector<CandidateFeatures> FeaturesForToponym(std::span<const CandidateSet> sets,
                                                  size_t target, const AdminTables& admin) {
  std::vector<const CandidateSet*> others;
  others.reserve(sets.size());
  for (size_t i = 0; i < sets.size(); ++i) {
    if (i != target) others.push_back(&sets[i]);
  }
  const auto& set = sets[target];
  std::vector<CandidateFeatures> out;
  out.reserve(set.candidates.size());
  for (const auto& c : set.candidates) {
    out.push_back(ComputeCandidateFeatures(set.normalized_query, c.entry, others, admin));
  }
  return out;
}

ContextVectors BuildContext(const EmbeddingProvider& provider, std::string_view text,
                            std::span<const Span> spans, size_t target,
                            const ContextOptions& options) {
  ContextVectors ctx;
  const int dim = provider.dimension();
  ctx.mention_vector = provider.EmbedSpan(text, spans[target]);
  ctx.other_mentions_vector = Eigen::VectorXd::Zero(dim);
  if (spans.size() > 1) {
    for (size_t i = 0; i < spans.size(); ++i) {
      if (i != target) ctx.other_mentions_vector += provider.EmbedSpan(text, spans[i]);
    }
    ctx.other_mentions_vector /= static_cast<double>(spans.size() - 1);
  }
  const size_t length = CodePointLength(text);
  if (length > options.character_budget && options.character_budget > 0) {
    const size_t half = options.character_budget / 2;
    const auto mid = static_cast<size_t>(spans[target].midpoint());
    size_t start = mid > half ? mid - half : 0;
    start = std::min(start, length - options.character_budget);
    ctx.document_vector =
        provider.EmbedDocument(SubstrCodePoints(text, start, start + options.character_budget));
  } else {
    ctx.document_vector = provider.EmbedDocument(text);
  }
  return ctx;
}

}  // namespace toporank
