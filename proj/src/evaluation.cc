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

#include "toporank/evaluation.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "toporank/error.h"
#include "toporank/unicode.h"

namespace toporank {
namespace {

double Fraction(size_t num, size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

double Radians(double degrees) { return degrees * std::numbers::pi / 180.0; }

void CheckCoordinate(double lat, double lon) {
  if (!(lat >= -90.0 && lat <= 90.0) || !(lon >= -180.0 && lon <= 180.0)) {
    throw Error(ErrorCode::kInput, "coordinate out of range: (" + std::to_string(lat) + ", " +
                                       std::to_string(lon) + ")");
  }
}

std::string Percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f%%", 100.0 * v);
  return buf;
}

std::string Fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", v);
  return buf;
}

}  // namespace

double HaversineKm(double lat1, double lon1, double lat2, double lon2) {
  CheckCoordinate(lat1, lon1);
  CheckCoordinate(lat2, lon2);
  const double dlat = Radians(lat2 - lat1);
  const double dlon = Radians(lon2 - lon1);
  const double a = std::pow(std::sin(dlat / 2), 2) +
                   std::cos(Radians(lat1)) * std::cos(Radians(lat2)) * std::pow(std::sin(dlon / 2), 2);
  return 2.0 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(a)));
}

MetricsReport Evaluate(std::span<const ResolutionRecord> records, double threshold_km) {
  if (records.empty()) throw Error(ErrorCode::kParameter, "no records to evaluate");
  MetricsReport report;
  report.n_eval = records.size();

  size_t exact = 0, attr_total = 0, country = 0, feature_class = 0, adm1 = 0;
  size_t abstained_impossible = 0, retrievable = 0, abstained_retrievable = 0;
  std::vector<double> errors;
  for (const auto& r : records) {
    if (r.impossible()) {
      ++report.n_impossible;
      if (r.abstained()) ++abstained_impossible;
    }
    if (r.gold_in_candidates == true) {
      ++retrievable;
      if (r.abstained()) ++abstained_retrievable;
    }
    if (!r.gold) continue;
    const auto& g = *r.gold;
    if (!r.impossible()) {
      if (g.geoname_id) {
        ++report.n_resolvable;
        if (r.predicted_geoname_id == g.geoname_id) ++exact;
      }
      ++attr_total;
      if (!r.abstained()) {
        if (r.predicted_country == g.country) ++country;
        if (r.predicted_feature_class == g.feature_class) ++feature_class;
        if (r.predicted_country == g.country && r.predicted_admin1 == g.admin1) ++adm1;
      }
    }
    if (!r.abstained() && g.latitude && g.longitude) {
      errors.push_back(HaversineKm(*r.predicted_latitude, *r.predicted_longitude, *g.latitude,
                                   *g.longitude));
    }
  }

  report.exact_match = Fraction(exact, report.n_resolvable);
  report.correct_country = Fraction(country, attr_total);
  report.correct_feature_class = Fraction(feature_class, attr_total);
  report.correct_adm1 = Fraction(adm1, attr_total);
  report.abstention_recall = Fraction(abstained_impossible, report.n_impossible);
  report.abstention_false_rate = Fraction(abstained_retrievable, retrievable);

  report.n_distance = errors.size();
  if (!errors.empty()) {
    double sum = 0.0;
    size_t within = 0;
    for (double e : errors) {
      sum += e;
      if (e <= threshold_km) ++within;
    }
    report.mean_error_km = sum / static_cast<double>(errors.size());
    report.acc_at_161km = Fraction(within, errors.size());
    std::sort(errors.begin(), errors.end());
    size_t mid = errors.size() / 2;
    report.median_error_km =
        errors.size() % 2 ? errors[mid] : 0.5 * (errors[mid - 1] + errors[mid]);
  }
  return report;
}

std::map<int, double> QueryRecall(const GazetteerIndex& index, std::span<const Document> corpus,
                                  std::span<const int> k_values) {
  if (corpus.empty()) throw Error(ErrorCode::kParameter, "empty corpus");
  if (k_values.empty()) throw Error(ErrorCode::kParameter, "no k values");
  const int max_k = *std::max_element(k_values.begin(), k_values.end());
  if (*std::min_element(k_values.begin(), k_values.end()) <= 0) {
    throw Error(ErrorCode::kParameter, "k must be positive");
  }
  std::map<int, size_t> missing;
  size_t total = 0;
  for (const auto& doc : corpus) {
    for (const auto& t : doc.toponyms) {
      if (!t.gold || !t.gold->geoname_id || t.gold->exclude_gold) continue;
      ++total;
      auto set = index.Query(SubstrCodePoints(doc.text, t.span.start, t.span.end), max_k);
      auto rank = set.Find(*t.gold->geoname_id);
      for (int k : k_values) {
        if (!rank || *rank >= static_cast<size_t>(k)) ++missing[k];
      }
    }
  }
  std::map<int, double> out;
  for (int k : k_values) out[k] = Fraction(missing[k], total);
  return out;
}

nlohmann::json ReportToJson(const MetricsReport& r) {
  nlohmann::json j;
  j["n_eval"] = r.n_eval;
  j["n_resolvable"] = r.n_resolvable;
  j["n_distance"] = r.n_distance;
  j["n_impossible"] = r.n_impossible;
  j["exact_match"] = r.exact_match;
  j["mean_error_km"] = r.mean_error_km;
  j["median_error_km"] = r.median_error_km;
  j["correct_country"] = r.correct_country;
  j["correct_feature_class"] = r.correct_feature_class;
  j["correct_adm1"] = r.correct_adm1;
  j["acc_at_161km"] = r.acc_at_161km;
  j["abstention_recall"] = r.abstention_recall;
  j["abstention_false_rate"] = r.abstention_false_rate;
  nlohmann::json recall = nlohmann::json::object();
  for (const auto& [k, v] : r.recall_at_k) recall["missing@" + std::to_string(k)] = v;
  j["recall_at_k"] = recall;
  return j;
}

void PrintReportTable(std::ostream& out, const MetricsReport& r, const std::string& label) {
  const std::vector<std::string> header = {"Dataset", "Eval N", "Exact Match", "Mean Error (km)",
                                           "Median Err. (km)", "Correct Country", "Correct Type",
                                           "Correct ADM1", "Acc@161km"};
  const std::vector<std::string> row = {label,
                                        std::to_string(r.n_eval),
                                        Percent(r.exact_match),
                                        Fixed(r.mean_error_km),
                                        Fixed(r.median_error_km),
                                        Percent(r.correct_country),
                                        Percent(r.correct_feature_class),
                                        Percent(r.correct_adm1),
                                        Percent(r.acc_at_161km)};
  for (size_t i = 0; i < header.size(); ++i) {
    size_t width = std::max(header[i].size(), CodePointLength(row[i]));
    char fmt[16];
    std::snprintf(fmt, sizeof(fmt), "%%-%zus", width);
    char cell[128];
    std::snprintf(cell, sizeof(cell), fmt, header[i].c_str());
    out << cell << (i + 1 < header.size() ? "  " : "\n");
  }
  for (size_t i = 0; i < row.size(); ++i) {
    size_t width = std::max(header[i].size(), row[i].size());
    char fmt[16];
    std::snprintf(fmt, sizeof(fmt), "%%-%zus", width);
    char cell[128];
    std::snprintf(cell, sizeof(cell), fmt, row[i].c_str());
    out << cell << (i + 1 < row.size() ? "  " : "\n");
  }
  out << "Missingness correctly identified: " << Percent(r.abstention_recall) << " of "
      << r.n_impossible << " impossible cases; abstained on retrievable: "
      << Percent(r.abstention_false_rate) << "\n";
  for (const auto& [k, v] : r.recall_at_k) out << "% missing@" << k << ": " << Percent(v) << "\n";
}

}  // namespace toporank
