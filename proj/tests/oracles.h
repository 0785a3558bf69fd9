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

#ifndef TOPORANK_TESTS_ORACLES_H_
#define TOPORANK_TESTS_ORACLES_H_

// Independent reference implementations. None of these call the library
// routine they are used to check.

#include <string>
#include <vector>

#include "toporank/evaluation.h"
#include "toporank/gazetteer.h"
#include "toporank/index.h"
#include "toporank/pipeline.h"

namespace toporank::oracle {

// Full-matrix Levenshtein.
size_t Levenshtein(const std::u32string& a, const std::u32string& b);

// Chord-length great-circle distance via unit vectors.
double ChordDistanceKm(double lat1, double lon1, double lat2, double lon2);

struct RankedId {
  GeonameId id;
  bool exact;
  int distance;
};

// Scans every entry: exact if any query variant equals an index key,
// fuzzy if enough shared trigrams and within the edit limit.
std::vector<RankedId> BruteForceQuery(const std::vector<GazetteerEntry>& entries,
                                      const IndexConfig& config, const std::string& name, int k);

// Straight-line recomputation of the metric definitions with distances from
// ChordDistanceKm. Counts compare exactly; distance aggregates agree to
// floating-point tolerance.
MetricsReport BruteForceMetrics(const std::vector<ResolutionRecord>& records, double threshold_km);

}  // namespace toporank::oracle

#endif  // TOPORANK_TESTS_ORACLES_H_
