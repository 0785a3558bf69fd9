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

#include "toporank/index.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <unordered_set>

#include "binary_io.h"
#include "toporank/edit_distance.h"
#include "toporank/error.h"
#include "toporank/unicode.h"

namespace toporank {
namespace {

constexpr std::string_view kIndexMagic = "TRIX";

struct Hit {
  uint32_t position;
  bool exact;
  int distance;
};

std::vector<std::u32string> QueryVariants(const std::string& normalized) {
  std::vector<std::u32string> out{DecodeUtf8(normalized)};
  std::u32string folded = DecodeUtf8(AsciiFold(normalized));
  if (folded != out.front() && !folded.empty()) out.push_back(std::move(folded));
  return out;
}

void WriteEntry(internal::BinaryWriter& w, const GazetteerEntry& e) {
  w.Put<int64_t>(e.geoname_id);
  w.PutString(e.name);
  w.PutString(e.ascii_name);
  w.Put<uint64_t>(e.alternative_names.size());
  for (const auto& alt : e.alternative_names) w.PutString(alt);
  w.Put<double>(e.latitude);
  w.Put<double>(e.longitude);
  w.Put<char>(e.feature_class);
  w.PutString(e.feature_code);
  w.PutString(e.country_code);
  w.PutString(e.admin1_code);
  w.PutString(e.admin2_code);
  w.Put<int64_t>(e.population);
}

GazetteerEntry ReadEntry(internal::BinaryReader& r) {
  GazetteerEntry e;
  e.geoname_id = r.Get<int64_t>();
  e.name = r.GetString();
  e.ascii_name = r.GetString();
  auto alts = r.Get<uint64_t>();
  if (alts > r.remaining()) throw Error(ErrorCode::kCorruption, "bad alternative name count");
  for (uint64_t i = 0; i < alts; ++i) e.alternative_names.push_back(r.GetString());
  e.latitude = r.Get<double>();
  e.longitude = r.Get<double>();
  e.feature_class = r.Get<char>();
  e.feature_code = r.GetString();
  e.country_code = r.GetString();
  e.admin1_code = r.GetString();
  e.admin2_code = r.GetString();
  e.population = r.Get<int64_t>();
  return e;
}

void WritePostings(internal::BinaryWriter& w, const std::vector<uint32_t>& postings) {
  w.Put<uint64_t>(postings.size());
  for (uint32_t p : postings) w.Put<uint32_t>(p);
}

std::vector<uint32_t> ReadPostings(internal::BinaryReader& r, size_t entry_count) {
  auto n = r.Get<uint64_t>();
  if (n > r.remaining()) throw Error(ErrorCode::kCorruption, "bad postings length");
  std::vector<uint32_t> postings(n);
  for (auto& p : postings) {
    p = r.Get<uint32_t>();
    if (p >= entry_count) throw Error(ErrorCode::kCorruption, "posting out of range");
  }
  return postings;
}

}  // namespace

void IndexConfig::Validate() const {
  if (ngram_size < 2) throw Error(ErrorCode::kParameter, "ngram_size must be >= 2");
  if (max_candidates < 1) throw Error(ErrorCode::kParameter, "max_candidates must be >= 1");
  if (max_edit_distance < 0) throw Error(ErrorCode::kParameter, "max_edit_distance must be >= 0");
  if (fuzzy_min_shared_ngrams < 1) {
    throw Error(ErrorCode::kParameter, "fuzzy_min_shared_ngrams must be >= 1");
  }
}

bool CandidateSet::Contains(GeonameId id) const { return Find(id).has_value(); }

std::optional<size_t> CandidateSet::Find(GeonameId id) const {
  for (size_t i = 0; i < candidates.size(); ++i) {
    if (candidates[i].entry.geoname_id == id) return i;
  }
  return std::nullopt;
}

double RetrievalScore(bool exact, int edit_distance, std::int64_t population) {
  return (exact ? 1000.0 : 0.0) - 100.0 * edit_distance +
         std::log10(static_cast<double>(population) + 1.0);
}

std::vector<std::u32string> CharNgrams(std::u32string_view text, int n) {
  std::vector<std::u32string> out;
  if (n <= 0 || text.size() < static_cast<size_t>(n)) return out;
  std::set<std::u32string> seen;
  for (size_t i = 0; i + n <= text.size(); ++i) {
    std::u32string gram(text.substr(i, n));
    if (seen.insert(gram).second) out.push_back(std::move(gram));
  }
  return out;
}

GazetteerIndex GazetteerIndex::Build(std::vector<GazetteerEntry> entries,
                                     const IndexConfig& config) {
  config.Validate();
  if (entries.empty()) throw Error(ErrorCode::kParameter, "cannot build an index from no entries");
  if (entries.size() > std::numeric_limits<uint32_t>::max()) {
    throw Error(ErrorCode::kParameter, "too many entries for a single index");
  }
  GazetteerIndex index;
  index.config_ = config;
  index.entries_ = std::move(entries);

  for (uint32_t pos = 0; pos < index.entries_.size(); ++pos) {
    for (const auto& key : IndexKeys(index.entries_[pos])) {
      index.exact_index_[key].push_back(pos);
    }
    std::set<std::u32string> grams;
    for (const auto& key : IndexKeys(index.entries_[pos])) {
      for (auto& g : CharNgrams(DecodeUtf8(key), config.ngram_size)) grams.insert(std::move(g));
    }
    for (const auto& g : grams) index.ngram_index_[g].push_back(pos);
  }
  index.Finalize();
  return index;
}

void GazetteerIndex::Finalize() {
  position_of_.clear();
  keys_.clear();
  keys_.reserve(entries_.size());
  for (uint32_t pos = 0; pos < entries_.size(); ++pos) {
    if (!position_of_.emplace(entries_[pos].geoname_id, pos).second) {
      throw Error(ErrorCode::kParameter,
                  "duplicate geoname id " + std::to_string(entries_[pos].geoname_id));
    }
    std::vector<std::u32string> keys;
    for (const auto& key : IndexKeys(entries_[pos])) keys.push_back(DecodeUtf8(key));
    keys_.push_back(std::move(keys));
  }
}

CandidateSet GazetteerIndex::Query(std::string_view name, int k) const {
  if (k <= 0) throw Error(ErrorCode::kParameter, "k must be positive");
  CandidateSet result;
  result.query_text = std::string(name);
  result.normalized_query = NormalizeName(name);
  if (result.normalized_query.empty() || entries_.empty()) return result;

  const auto variants = QueryVariants(result.normalized_query);
  std::unordered_set<uint32_t> exact;
  for (const auto& v : variants) {
    auto it = exact_index_.find(EncodeUtf8(v));
    if (it != exact_index_.end()) exact.insert(it->second.begin(), it->second.end());
  }

  std::set<std::u32string> query_grams;
  for (const auto& v : variants) {
    for (auto& g : CharNgrams(v, config_.ngram_size)) query_grams.insert(std::move(g));
  }
  std::unordered_map<uint32_t, int> shared;
  for (const auto& g : query_grams) {
    auto it = ngram_index_.find(g);
    if (it == ngram_index_.end()) continue;
    for (uint32_t pos : it->second) ++shared[pos];
  }

  std::vector<Hit> hits;
  hits.reserve(exact.size());
  for (uint32_t pos : exact) hits.push_back({pos, true, 0});
  const auto limit = static_cast<size_t>(config_.max_edit_distance);
  for (const auto& [pos, count] : shared) {
    if (count < config_.fuzzy_min_shared_ngrams || exact.contains(pos)) continue;
    std::optional<size_t> best;
    for (const auto& v : variants) {
      for (const auto& key : keys_[pos]) {
        auto d = BoundedEditDistance(v, key, best ? std::min(*best, limit) : limit);
        if (d && (!best || *d < *best)) best = d;
      }
    }
    if (best) hits.push_back({pos, false, static_cast<int>(*best)});
  }

  std::sort(hits.begin(), hits.end(), [this](const Hit& a, const Hit& b) {
    if (a.exact != b.exact) return a.exact;
    if (a.distance != b.distance) return a.distance < b.distance;
    const auto& ea = entries_[a.position];
    const auto& eb = entries_[b.position];
    if (ea.population != eb.population) return ea.population > eb.population;
    return ea.geoname_id < eb.geoname_id;
  });
  if (hits.size() > static_cast<size_t>(k)) hits.resize(k);

  result.candidates.reserve(hits.size());
  for (const auto& h : hits) {
    const auto& e = entries_[h.position];
    result.candidates.push_back(
        {e, RetrievalScore(h.exact, h.distance, e.population), h.exact, h.distance});
  }
  return result;
}

bool GazetteerIndex::HasExactKey(std::string_view name) const {
  std::string normalized = NormalizeName(name);
  if (normalized.empty()) return false;
  if (exact_index_.contains(normalized)) return true;
  return exact_index_.contains(AsciiFold(normalized));
}

const GazetteerEntry* GazetteerIndex::Find(GeonameId id) const {
  auto it = position_of_.find(id);
  return it == position_of_.end() ? nullptr : &entries_[it->second];
}

void GazetteerIndex::Save(const std::string& path) const {
  internal::BinaryWriter w;
  w.Put<int32_t>(config_.ngram_size);
  w.Put<int32_t>(config_.max_candidates);
  w.Put<int32_t>(config_.max_edit_distance);
  w.Put<int32_t>(config_.fuzzy_min_shared_ngrams);
  w.Put<uint64_t>(entries_.size());
  for (const auto& e : entries_) WriteEntry(w, e);

  // Sorted so the file is byte-identical for identical indexes.
  std::map<std::string, const std::vector<uint32_t>*> exact;
  for (const auto& [key, postings] : exact_index_) exact.emplace(key, &postings);
  w.Put<uint64_t>(exact.size());
  for (const auto& [key, postings] : exact) {
    w.PutString(key);
    WritePostings(w, *postings);
  }
  std::map<std::string, const std::vector<uint32_t>*> grams;
  for (const auto& [gram, postings] : ngram_index_) grams.emplace(EncodeUtf8(gram), &postings);
  w.Put<uint64_t>(grams.size());
  for (const auto& [gram, postings] : grams) {
    w.PutString(gram);
    WritePostings(w, *postings);
  }
  w.WriteFile(path, kIndexMagic, kIndexFormatVersion);
}

GazetteerIndex GazetteerIndex::Load(const std::string& path) {
  internal::BinaryReader r(path, kIndexMagic, kIndexFormatVersion);
  GazetteerIndex index;
  index.config_.ngram_size = r.Get<int32_t>();
  index.config_.max_candidates = r.Get<int32_t>();
  index.config_.max_edit_distance = r.Get<int32_t>();
  index.config_.fuzzy_min_shared_ngrams = r.Get<int32_t>();
  try {
    index.config_.Validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::kCorruption, std::string("index config invalid: ") + e.what());
  }
  auto n = r.Get<uint64_t>();
  if (n == 0 || n > r.remaining()) throw Error(ErrorCode::kCorruption, "bad entry count");
  index.entries_.reserve(n);
  for (uint64_t i = 0; i < n; ++i) index.entries_.push_back(ReadEntry(r));

  auto keys = r.Get<uint64_t>();
  if (keys > r.remaining()) throw Error(ErrorCode::kCorruption, "bad key count");
  for (uint64_t i = 0; i < keys; ++i) {
    std::string key = r.GetString();
    index.exact_index_.emplace(std::move(key), ReadPostings(r, n));
  }
  auto grams = r.Get<uint64_t>();
  if (grams > r.remaining()) throw Error(ErrorCode::kCorruption, "bad n-gram count");
  for (uint64_t i = 0; i < grams; ++i) {
    std::u32string gram = DecodeUtf8(r.GetString());
    index.ngram_index_.emplace(std::move(gram), ReadPostings(r, n));
  }
  r.ExpectEnd();
  try {
    index.Finalize();
  } catch (const Error& e) {
    throw Error(ErrorCode::kCorruption, e.what());
  }
  return index;
}

}  // namespace toporank
