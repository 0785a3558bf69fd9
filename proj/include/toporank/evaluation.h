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

#ifndef TOPORANK_EVALUATION_H_
#define TOPORANK_EVALUATION_H_

#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "toporank/index.h"
#include "toporank/pipeline.h"

namespace toporank {

inline constexpr double kEarthRadiusKm = 6371.0088;
inline constexpr double kAccuracyThresholdKm = 161.0;

// Great-circle distance on the mean-radius sphere. Throws kInput on
// out-of-range coordinates.
double HaversineKm(double lat1, double lon1, double lat2, double lon2);

struct MetricsReport {
  size_t n_eval = 0;
  // Records with a gold id whose gold was retrievable (or unknown).
  size_t n_resolvable = 0;
  // Non-abstained records with gold coordinates.
  size_t n_distance = 0;
  // Records whose gold was not among the candidates.
  size_t n_impossible = 0;

  double exact_match = 0.0;
  double mean_error_km = 0.0;
  double median_error_km = 0.0;
  double correct_country = 0.0;
  double correct_feature_class = 0.0;
  double correct_adm1 = 0.0;
  double acc_at_161km = 0.0;
  double abstention_recall = 0.0;
  double abstention_false_rate = 0.0;
  // k -> fraction of annotations whose gold is missing from the top k.
  std::map<int, double> recall_at_k;

  bool operator==(const MetricsReport&) const = default;
};

// Throws kParameter on an empty record list.
MetricsReport Evaluate(std::span<const ResolutionRecord> records,
                       double threshold_km = kAccuracyThresholdKm);

// Fraction of gold-annotated toponyms (not flagged exclude_gold) whose gold
// id is absent from Query(surface, k), for each k.
std::map<int, double> QueryRecall(const GazetteerIndex& index,
                                  std::span<const Document> corpus,
                                  std::span<const int> k_values);

nlohmann::json ReportToJson(const MetricsReport& report);
// Aligned table in the column order Eval N, Exact Match, Mean Error, Median
// Err., Correct Country, Correct Type, Correct ADM1, Acc@161km, followed by
// abstention and recall lines.
void PrintReportTable(std::ostream& out, const MetricsReport& report,
                      const std::string& label = "corpus");

}  // namespace toporank

#endif  // TOPORANK_EVALUATION_H_
