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

#ifndef TOPORANK_PIPELINE_H_
#define TOPORANK_PIPELINE_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "toporank/features.h"
#include "toporank/gazetteer.h"
#include "toporank/index.h"
#include "toporank/ranker.h"

namespace toporank {

// Gold annotation attached to a toponym span. Everything is optional so
// that distance-only corpora can be represented.
struct GoldAnnotation {
  std::optional<GeonameId> geoname_id;
  std::optional<double> latitude;
  std::optional<double> longitude;
  std::string country;
  std::string admin1;
  char feature_class = '\0';
  // Remove the gold entry from the retrieved candidates (impossible case).
  bool exclude_gold = false;
};

struct Toponym {
  Span span;
  std::string surface;
  std::optional<GoldAnnotation> gold;
};

struct Document {
  std::string doc_id;
  std::string text;
  std::vector<Toponym> toponyms;
  std::optional<Span> event_trigger;

  // Spans within bounds, end > start, sorted and non-overlapping.
  void Validate() const;
  std::vector<Span> spans() const;
};

struct ResolutionRecord {
  std::string doc_id;
  Span span;
  std::string query_text;
  std::optional<GeonameId> predicted_geoname_id;
  std::optional<double> predicted_latitude;
  std::optional<double> predicted_longitude;
  std::string predicted_country;
  std::string predicted_admin1;
  char predicted_feature_class = '\0';
  double score = 0.0;
  size_t candidate_count = 0;

  std::optional<GoldAnnotation> gold;
  // Whether the gold id was among the ranked candidates. Unknown without a
  // gold id.
  std::optional<bool> gold_in_candidates;

  bool abstained() const { return !predicted_geoname_id.has_value(); }
  bool impossible() const { return gold_in_candidates == false; }
};

class ToponymExtractor {
 public:
  virtual ~ToponymExtractor() = default;
  virtual std::vector<Span> Extract(std::string_view text) const = 0;
};

// Greedy left-to-right longest match of capitalized token runs whose
// normalized text is an exact index key.
class DictionaryExtractor : public ToponymExtractor {
 public:
  DictionaryExtractor(const GazetteerIndex& index, size_t min_token_len = 2,
                      size_t max_tokens = 6)
      : index_(index), min_token_len_(min_token_len), max_tokens_(max_tokens) {}

  std::vector<Span> Extract(std::string_view text) const override;

 private:
  const GazetteerIndex& index_;
  size_t min_token_len_;
  size_t max_tokens_;
};

std::vector<Span> DictionaryExtract(std::string_view text, const GazetteerIndex& index,
                                    size_t min_token_len = 2);

// Fills doc.toponyms from an extractor, surface text included.
void ExtractToponyms(Document& doc, const ToponymExtractor& extractor);

struct ResolveOptions {
  int k = 50;
  ContextOptions context;
};

// Phase one: one candidate set per toponym.
std::vector<CandidateSet> RetrieveCandidates(const Document& doc, const GazetteerIndex& index,
                                             int k);

// Drops the gold entry from every set whose annotation is flagged
// exclude_gold. This is the evaluation loader's job; resolution itself
// never looks at gold annotations.
void ApplyExclusions(const Document& doc, std::vector<CandidateSet>& sets);

// Phase two: features, context and scoring for every toponym.
std::vector<ResolutionRecord> ScoreDocument(const Document& doc,
                                            std::span<const CandidateSet> sets,
                                            const RankerModel& model,
                                            const EmbeddingProvider& provider,
                                            const AdminTables& admin,
                                            const ContextOptions& context = {});

std::vector<ResolutionRecord> ResolveDocument(const Document& doc, const GazetteerIndex& index,
                                              const RankerModel& model,
                                              const EmbeddingProvider& provider,
                                              const AdminTables& admin,
                                              const ResolveOptions& options = {});

// Retrieval with exclusions applied, then scoring; records carry gold
// annotations and whether gold was retrievable.
std::vector<ResolutionRecord> ResolveForEvaluation(const Document& doc,
                                                   const GazetteerIndex& index,
                                                   const RankerModel& model,
                                                   const EmbeddingProvider& provider,
                                                   const AdminTables& admin,
                                                   const ResolveOptions& options = {});

// One example per gold-annotated toponym. Gold points at the null slot
// when the gold entry was excluded or not retrieved.
std::vector<TrainingExample> BuildTrainingExamples(std::span<const Document> corpus,
                                                   const GazetteerIndex& index,
                                                   const EmbeddingProvider& provider,
                                                   const AdminTables& admin,
                                                   const ResolveOptions& options = {});

// Highest retrieval score wins; abstains only on an empty candidate set.
std::vector<ResolutionRecord> PopulationBaseline(const Document& doc,
                                                 const GazetteerIndex& index,
                                                 const ResolveOptions& options = {});

struct EventLocation {
  enum class Status { kLocated, kNone, kNotApplicable };
  Status status = Status::kNone;
  std::optional<size_t> record_index;
};

class EventLocator {
 public:
  virtual ~EventLocator() = default;
  virtual EventLocation Locate(const Document& doc,
                               std::span<const ResolutionRecord> records) const = 0;
};

// Picks the resolved toponym whose midpoint is nearest the event trigger's
// midpoint; earlier span wins ties.
class ProximityEventLocator : public EventLocator {
 public:
  EventLocation Locate(const Document& doc,
                       std::span<const ResolutionRecord> records) const override;
};

EventLocation LocateEvent(const Document& doc, std::span<const ResolutionRecord> records,
                          const EventLocator& locator);

}  // namespace toporank

#endif  // TOPORANK_PIPELINE_H_
