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

#include "toporank/corpus.h"

#include <fstream>

#include "toporank/error.h"

namespace toporank {
namespace {

using nlohmann::json;

void GoldToJson(const GoldAnnotation& g, json& j) {
  if (g.geoname_id) j["gold_geoname_id"] = *g.geoname_id;
  if (g.latitude) j["gold_lat"] = *g.latitude;
  if (g.longitude) j["gold_lon"] = *g.longitude;
  if (!g.country.empty()) j["gold_country"] = g.country;
  if (!g.admin1.empty()) j["gold_admin1"] = g.admin1;
  if (g.feature_class) j["gold_feature_class"] = std::string(1, g.feature_class);
  if (g.exclude_gold) j["exclude_gold"] = true;
}

std::optional<GoldAnnotation> GoldFromJson(const json& j) {
  static constexpr const char* kKeys[] = {"gold_geoname_id", "gold_lat",           "gold_lon",
                                          "gold_country",    "gold_admin1",        "gold_feature_class",
                                          "exclude_gold"};
  bool any = false;
  for (const char* key : kKeys) any = any || j.contains(key);
  if (!any) return std::nullopt;
  GoldAnnotation g;
  if (j.contains("gold_geoname_id") && !j["gold_geoname_id"].is_null()) {
    g.geoname_id = j["gold_geoname_id"].get<GeonameId>();
  }
  if (j.contains("gold_lat") && !j["gold_lat"].is_null()) g.latitude = j["gold_lat"].get<double>();
  if (j.contains("gold_lon") && !j["gold_lon"].is_null()) g.longitude = j["gold_lon"].get<double>();
  g.country = j.value("gold_country", "");
  g.admin1 = j.value("gold_admin1", "");
  std::string fc = j.value("gold_feature_class", "");
  g.feature_class = fc.empty() ? '\0' : fc[0];
  g.exclude_gold = j.value("exclude_gold", false);
  return g;
}

template <typename T, typename Parse>
std::vector<T> ReadLines(std::istream& in, Parse parse, const char* what) {
  std::vector<T> out;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(parse(json::parse(line)));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kInput, std::string(what) + " line " + std::to_string(line_no) +
                                         ": " + e.what());
    }
  }
  if (in.bad()) throw Error(ErrorCode::kIngestion, std::string("failed reading ") + what);
  return out;
}

}  // namespace

json DocumentToJson(const Document& doc) {
  json j;
  j["doc_id"] = doc.doc_id;
  j["text"] = doc.text;
  j["annotations"] = json::array();
  for (const auto& t : doc.toponyms) {
    json a;
    a["start"] = t.span.start;
    a["end"] = t.span.end;
    a["surface"] = t.surface;
    if (t.gold) GoldToJson(*t.gold, a);
    j["annotations"].push_back(std::move(a));
  }
  if (doc.event_trigger) {
    j["event_trigger"] = {{"start", doc.event_trigger->start}, {"end", doc.event_trigger->end}};
  }
  return j;
}

Document DocumentFromJson(const json& j) {
  Document doc;
  doc.doc_id = j.at("doc_id").get<std::string>();
  doc.text = j.at("text").get<std::string>();
  if (j.contains("annotations")) {
    for (const auto& a : j.at("annotations")) {
      Toponym t;
      t.span = {a.at("start").get<size_t>(), a.at("end").get<size_t>()};
      t.surface = a.value("surface", "");
      t.gold = GoldFromJson(a);
      doc.toponyms.push_back(std::move(t));
    }
  }
  if (j.contains("event_trigger") && !j["event_trigger"].is_null()) {
    const auto& e = j["event_trigger"];
    doc.event_trigger = Span{e.at("start").get<size_t>(), e.at("end").get<size_t>()};
  }
  return doc;
}

std::vector<Document> ReadCorpus(std::istream& in) {
  return ReadLines<Document>(in, DocumentFromJson, "corpus");
}

std::vector<Document> ReadCorpusFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kNotFound, "cannot open corpus: " + path);
  return ReadCorpus(in);
}

void WriteCorpus(std::ostream& out, const std::vector<Document>& corpus) {
  for (const auto& doc : corpus) out << DocumentToJson(doc).dump() << '\n';
}

void WriteCorpusFile(const std::string& path, const std::vector<Document>& corpus) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::kNotFound, "cannot write corpus: " + path);
  WriteCorpus(out, corpus);
}

json RecordToJson(const ResolutionRecord& r) {
  json j;
  j["doc_id"] = r.doc_id;
  j["start"] = r.span.start;
  j["end"] = r.span.end;
  j["query_text"] = r.query_text;
  j["predicted_geoname_id"] = r.predicted_geoname_id ? json(*r.predicted_geoname_id) : json();
  if (r.predicted_geoname_id) {
    j["predicted_lat"] = *r.predicted_latitude;
    j["predicted_lon"] = *r.predicted_longitude;
    j["predicted_country"] = r.predicted_country;
    j["predicted_admin1"] = r.predicted_admin1;
    j["predicted_feature_class"] = std::string(1, r.predicted_feature_class);
  }
  j["score"] = r.score;
  j["candidate_count"] = r.candidate_count;
  if (r.gold) GoldToJson(*r.gold, j);
  if (r.gold_in_candidates) j["gold_in_candidates"] = *r.gold_in_candidates;
  return j;
}

ResolutionRecord RecordFromJson(const json& j) {
  ResolutionRecord r;
  r.doc_id = j.value("doc_id", "");
  r.span = {j.at("start").get<size_t>(), j.at("end").get<size_t>()};
  r.query_text = j.value("query_text", "");
  if (j.contains("predicted_geoname_id") && !j["predicted_geoname_id"].is_null()) {
    r.predicted_geoname_id = j["predicted_geoname_id"].get<GeonameId>();
    r.predicted_latitude = j.at("predicted_lat").get<double>();
    r.predicted_longitude = j.at("predicted_lon").get<double>();
    r.predicted_country = j.value("predicted_country", "");
    r.predicted_admin1 = j.value("predicted_admin1", "");
    std::string fc = j.value("predicted_feature_class", "");
    r.predicted_feature_class = fc.empty() ? '\0' : fc[0];
  }
  r.score = j.value("score", 0.0);
  r.candidate_count = j.value("candidate_count", size_t{0});
  r.gold = GoldFromJson(j);
  if (j.contains("gold_in_candidates")) r.gold_in_candidates = j["gold_in_candidates"].get<bool>();
  return r;
}

std::vector<ResolutionRecord> ReadRecords(std::istream& in) {
  return ReadLines<ResolutionRecord>(in, RecordFromJson, "records");
}

std::vector<ResolutionRecord> ReadRecordsFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kNotFound, "cannot open records: " + path);
  return ReadRecords(in);
}

void WriteRecords(std::ostream& out, const std::vector<ResolutionRecord>& records) {
  for (const auto& r : records) out << RecordToJson(r).dump() << '\n';
}

}  // namespace toporank
