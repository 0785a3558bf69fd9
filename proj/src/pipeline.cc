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

#include "toporank/pipeline.h"

#include <algorithm>
#include <cmath>

#include "toporank/error.h"
#include "toporank/unicode.h"

namespace toporank {
namespace {

struct Token {
  size_t start;
  size_t end;
  bool capitalized;
};

std::vector<Token> Tokenize(const std::u32string& text) {
  std::vector<Token> tokens;
  size_t i = 0;
  while (i < text.size()) {
    if (!IsAlphanumeric(text[i])) {
      ++i;
      continue;
    }
    size_t start = i;
    while (i < text.size() && IsAlphanumeric(text[i])) ++i;
    tokens.push_back({start, i, IsUppercase(text[start])});
  }
  return tokens;
}

// Tokens of a multi-word name may only be separated by spaces, hyphens or
// apostrophes.
bool JoinableGap(const std::u32string& text, size_t from, size_t to) {
  for (size_t i = from; i < to; ++i) {
    char32_t c = text[i];
    if (c != U' ' && c != U'-' && c != U'\'' && c != U'’') return false;
  }
  return to - from <= 2;
}

ResolutionRecord EmptyRecord(const Document& doc, size_t i) {
  ResolutionRecord r;
  r.doc_id = doc.doc_id;
  r.span = doc.toponyms[i].span;
  r.query_text = SubstrCodePoints(doc.text, r.span.start, r.span.end);
  return r;
}

void FillPrediction(ResolutionRecord& r, const GazetteerEntry& e) {
  r.predicted_geoname_id = e.geoname_id;
  r.predicted_latitude = e.latitude;
  r.predicted_longitude = e.longitude;
  r.predicted_country = e.country_code;
  r.predicted_admin1 = e.admin1_code;
  r.predicted_feature_class = e.feature_class;
}

void AttachGold(const Document& doc, std::span<const CandidateSet> sets,
                std::vector<ResolutionRecord>& records) {
  for (size_t i = 0; i < records.size(); ++i) {
    const auto& gold = doc.toponyms[i].gold;
    records[i].gold = gold;
    if (gold && gold->geoname_id) records[i].gold_in_candidates = sets[i].Contains(*gold->geoname_id);
  }
}

}  // namespace

void Document::Validate() const {
  const size_t length = CodePointLength(text);
  std::vector<Span> sorted = spans();
  std::sort(sorted.begin(), sorted.end(),
            [](const Span& a, const Span& b) { return a.start < b.start; });
  for (size_t i = 0; i < sorted.size(); ++i) {
    const auto& s = sorted[i];
    if (s.end <= s.start || s.end > length) {
      throw Error(ErrorCode::kInput, "document " + doc_id + ": span [" + std::to_string(s.start) +
                                         ", " + std::to_string(s.end) + ") out of bounds");
    }
    if (i > 0 && sorted[i - 1].end > s.start) {
      throw Error(ErrorCode::kInput, "document " + doc_id + ": overlapping toponym spans");
    }
  }
  if (event_trigger && (event_trigger->end <= event_trigger->start || event_trigger->end > length)) {
    throw Error(ErrorCode::kInput, "document " + doc_id + ": event trigger out of bounds");
  }
}

std::vector<Span> Document::spans() const {
  std::vector<Span> out;
  out.reserve(toponyms.size());
  for (const auto& t : toponyms) out.push_back(t.span);
  return out;
}

std::vector<Span> DictionaryExtractor::Extract(std::string_view text) const {
  const std::u32string cps = DecodeUtf8(text);
  const auto tokens = Tokenize(cps);
  std::vector<Span> spans;
  size_t i = 0;
  while (i < tokens.size()) {
    if (!tokens[i].capitalized) {
      ++i;
      continue;
    }
    size_t last = i;
    while (last + 1 < tokens.size() && last + 1 - i < max_tokens_ &&
           JoinableGap(cps, tokens[last].end, tokens[last + 1].start)) {
      ++last;
    }
    std::optional<size_t> match;
    for (size_t j = last + 1; j-- > i;) {
      if (!tokens[j].capitalized) continue;
      size_t start = tokens[i].start;
      size_t end = tokens[j].end;
      if (end - start < min_token_len_) continue;
      if (index_.HasExactKey(EncodeUtf8(std::u32string_view(cps).substr(start, end - start)))) {
        match = j;
        break;
      }
    }
    if (match) {
      spans.push_back({tokens[i].start, tokens[*match].end});
      i = *match + 1;
    } else {
      ++i;
    }
  }
  return spans;
}

std::vector<Span> DictionaryExtract(std::string_view text, const GazetteerIndex& index,
                                    size_t min_token_len) {
  return DictionaryExtractor(index, min_token_len).Extract(text);
}

void ExtractToponyms(Document& doc, const ToponymExtractor& extractor) {
  doc.toponyms.clear();
  for (const auto& span : extractor.Extract(doc.text)) {
    doc.toponyms.push_back({span, SubstrCodePoints(doc.text, span.start, span.end), std::nullopt});
  }
}

std::vector<CandidateSet> RetrieveCandidates(const Document& doc, const GazetteerIndex& index,
                                             int k) {
  std::vector<CandidateSet> sets;
  sets.reserve(doc.toponyms.size());
  for (const auto& t : doc.toponyms) {
    sets.push_back(index.Query(SubstrCodePoints(doc.text, t.span.start, t.span.end), k));
  }
  return sets;
}

void ApplyExclusions(const Document& doc, std::vector<CandidateSet>& sets) {
  for (size_t i = 0; i < doc.toponyms.size(); ++i) {
    const auto& gold = doc.toponyms[i].gold;
    if (!gold || !gold->exclude_gold || !gold->geoname_id) continue;
    auto& c = sets[i].candidates;
    std::erase_if(c, [&](const Candidate& x) { return x.entry.geoname_id == *gold->geoname_id; });
  }
}

std::vector<ResolutionRecord> ScoreDocument(const Document& doc,
                                            std::span<const CandidateSet> sets,
                                            const RankerModel& model,
                                            const EmbeddingProvider& provider,
                                            const AdminTables& admin,
                                            const ContextOptions& context) {
  if (provider.dimension() != model.config().context_dim) {
    throw Error(ErrorCode::kConfiguration,
                "embedding provider dimension " + std::to_string(provider.dimension()) +
                    " does not match model context dimension " +
                    std::to_string(model.config().context_dim));
  }
  if (sets.size() != doc.toponyms.size()) {
    throw Error(ErrorCode::kParameter, "one candidate set per toponym required");
  }
  const auto spans = doc.spans();
  std::vector<ResolutionRecord> records;
  records.reserve(spans.size());
  for (size_t i = 0; i < spans.size(); ++i) {
    ResolutionRecord r = EmptyRecord(doc, i);
    r.candidate_count = sets[i].candidates.size();
    if (sets[i].candidates.empty()) {
      r.score = 1.0;
      records.push_back(std::move(r));
      continue;
    }
    auto features = FeaturesForToponym(sets, i, admin);
    auto ctx = BuildContext(provider, doc.text, spans, i, context);
    auto scored = model.Score(features, ctx);
    r.score = scored.probabilities[scored.predicted];
    if (!scored.abstained()) FillPrediction(r, sets[i].candidates[scored.predicted].entry);
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<ResolutionRecord> ResolveDocument(const Document& doc, const GazetteerIndex& index,
                                              const RankerModel& model,
                                              const EmbeddingProvider& provider,
                                              const AdminTables& admin,
                                              const ResolveOptions& options) {
  doc.Validate();
  auto sets = RetrieveCandidates(doc, index, options.k);
  return ScoreDocument(doc, sets, model, provider, admin, options.context);
}

std::vector<ResolutionRecord> ResolveForEvaluation(const Document& doc,
                                                   const GazetteerIndex& index,
                                                   const RankerModel& model,
                                                   const EmbeddingProvider& provider,
                                                   const AdminTables& admin,
                                                   const ResolveOptions& options) {
  doc.Validate();
  auto sets = RetrieveCandidates(doc, index, options.k);
  ApplyExclusions(doc, sets);
  auto records = ScoreDocument(doc, sets, model, provider, admin, options.context);
  AttachGold(doc, sets, records);
  return records;
}

std::vector<TrainingExample> BuildTrainingExamples(std::span<const Document> corpus,
                                                   const GazetteerIndex& index,
                                                   const EmbeddingProvider& provider,
                                                   const AdminTables& admin,
                                                   const ResolveOptions& options) {
  std::vector<TrainingExample> examples;
  for (const auto& doc : corpus) {
    doc.Validate();
    auto sets = RetrieveCandidates(doc, index, options.k);
    ApplyExclusions(doc, sets);
    const auto spans = doc.spans();
    for (size_t i = 0; i < doc.toponyms.size(); ++i) {
      const auto& gold = doc.toponyms[i].gold;
      if (!gold || !gold->geoname_id || sets[i].candidates.empty()) continue;
      TrainingExample ex;
      ex.features = FeaturesForToponym(sets, i, admin);
      ex.context = BuildContext(provider, doc.text, spans, i, options.context);
      ex.gold_slot = sets[i].Find(*gold->geoname_id).value_or(ex.features.size());
      if (!gold->country.empty()) ex.gold_country = gold->country;
      examples.push_back(std::move(ex));
    }
  }
  return examples;
}

std::vector<ResolutionRecord> PopulationBaseline(const Document& doc, const GazetteerIndex& index,
                                                 const ResolveOptions& options) {
  doc.Validate();
  auto sets = RetrieveCandidates(doc, index, options.k);
  ApplyExclusions(doc, sets);
  std::vector<ResolutionRecord> records;
  for (size_t i = 0; i < doc.toponyms.size(); ++i) {
    ResolutionRecord r = EmptyRecord(doc, i);
    r.candidate_count = sets[i].candidates.size();
    r.score = 1.0;
    if (!sets[i].candidates.empty()) FillPrediction(r, sets[i].candidates.front().entry);
    records.push_back(std::move(r));
  }
  AttachGold(doc, sets, records);
  return records;
}

EventLocation ProximityEventLocator::Locate(const Document& doc,
                                            std::span<const ResolutionRecord> records) const {
  if (!doc.event_trigger) return {EventLocation::Status::kNotApplicable, std::nullopt};
  const double trigger = doc.event_trigger->midpoint();
  std::optional<size_t> best;
  for (size_t i = 0; i < records.size(); ++i) {
    if (records[i].abstained()) continue;
    if (!best) {
      best = i;
      continue;
    }
    double d = std::abs(records[i].span.midpoint() - trigger);
    double best_d = std::abs(records[*best].span.midpoint() - trigger);
    if (d < best_d || (d == best_d && records[i].span.start < records[*best].span.start)) best = i;
  }
  if (!best) return {EventLocation::Status::kNone, std::nullopt};
  return {EventLocation::Status::kLocated, best};
}

EventLocation LocateEvent(const Document& doc, std::span<const ResolutionRecord> records,
                          const EventLocator& locator) {
  return locator.Locate(doc, records);
}

}  // namespace toporank
