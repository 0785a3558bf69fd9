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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "doctest.h"
#include "oracles.h"
#include "test_support.h"
#include "toporank/error.h"
#include "toporank/evaluation.h"
#include "toporank/fixture.h"
#include "toporank/unicode.h"

namespace toporank {
namespace {

using testing::MakeEntry;

// Degrees of latitude spanning |km| along a meridian.
double LatitudeDegrees(double km) { return km / (kEarthRadiusKm * std::numbers::pi / 180.0); }

ResolutionRecord Record(GeonameId gold_id, double gold_lat, double gold_lon,
                        std::optional<GeonameId> predicted, double lat, double lon) {
  ResolutionRecord r;
  r.gold = GoldAnnotation{};
  r.gold->geoname_id = gold_id;
  r.gold->latitude = gold_lat;
  r.gold->longitude = gold_lon;
  r.gold->country = "US";
  r.gold->admin1 = "TX";
  r.gold->feature_class = 'P';
  r.gold_in_candidates = true;
  if (predicted) {
    r.predicted_geoname_id = predicted;
    r.predicted_latitude = lat;
    r.predicted_longitude = lon;
    r.predicted_country = "US";
    r.predicted_admin1 = "TX";
    r.predicted_feature_class = 'P';
  }
  return r;
}

void CheckSameReport(const MetricsReport& got, const MetricsReport& want) {
  CHECK(got.n_eval == want.n_eval);
  CHECK(got.n_resolvable == want.n_resolvable);
  CHECK(got.n_distance == want.n_distance);
  CHECK(got.n_impossible == want.n_impossible);
  CHECK(got.exact_match == doctest::Approx(want.exact_match).epsilon(1e-12));
  CHECK(got.correct_country == doctest::Approx(want.correct_country).epsilon(1e-12));
  CHECK(got.correct_feature_class == doctest::Approx(want.correct_feature_class).epsilon(1e-12));
  CHECK(got.correct_adm1 == doctest::Approx(want.correct_adm1).epsilon(1e-12));
  CHECK(got.acc_at_161km == doctest::Approx(want.acc_at_161km).epsilon(1e-12));
  CHECK(got.mean_error_km == doctest::Approx(want.mean_error_km).epsilon(1e-6));
  CHECK(got.median_error_km == doctest::Approx(want.median_error_km).epsilon(1e-6));
  CHECK(got.abstention_recall == doctest::Approx(want.abstention_recall).epsilon(1e-12));
  CHECK(got.abstention_false_rate == doctest::Approx(want.abstention_false_rate).epsilon(1e-12));
}

std::vector<ResolutionRecord> RandomRecords(std::mt19937_64& rng, size_t n) {
  std::uniform_real_distribution<double> lat(-80, 80), lon(-180, 180), unit(0, 1);
  static const char* kCountries[] = {"US", "FR"};
  static const char* kAdmin[] = {"TX", "11"};
  std::vector<ResolutionRecord> out;
  for (size_t i = 0; i < n; ++i) {
    const GeonameId gold = 1 + rng() % 5;
    auto r = Record(gold, lat(rng), lon(rng), std::nullopt, 0, 0);
    r.gold->country = kCountries[rng() % 2];
    r.gold->admin1 = kAdmin[rng() % 2];
    const double u = unit(rng);
    if (u < 0.1) r.gold_in_candidates = false;
    if (u > 0.05 && u < 0.97) {
      r.predicted_geoname_id = unit(rng) < 0.6 ? gold : 1 + rng() % 5;
      r.predicted_latitude = unit(rng) < 0.5 ? *r.gold->latitude + (unit(rng) - 0.5) * 4 : lat(rng);
      r.predicted_longitude = lon(rng);
      r.predicted_country = kCountries[rng() % 2];
      r.predicted_admin1 = kAdmin[rng() % 2];
      r.predicted_feature_class = unit(rng) < 0.7 ? 'P' : 'A';
    }
    if (unit(rng) < 0.1) r.gold->geoname_id.reset();
    out.push_back(r);
  }
  return out;
}

TEST_CASE("haversine examples against the chord oracle") {
  CHECK(HaversineKm(12.5, -40.0, 12.5, -40.0) == 0.0);

  const double london_paris = oracle::ChordDistanceKm(51.5074, -0.1278, 48.8566, 2.3522);
  CHECK(london_paris == doctest::Approx(343.6).epsilon(0.005));
  CHECK(HaversineKm(51.5074, -0.1278, 48.8566, 2.3522) == doctest::Approx(london_paris).epsilon(1e-9));

  const double half = std::numbers::pi * 6371.0088;
  CHECK(half == doctest::Approx(20015.1).epsilon(0.001));
  CHECK(HaversineKm(0, 0, 0, 180) == doctest::Approx(half).epsilon(0.001));

  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> lat(-90, 90), lon(-180, 180);
  for (int i = 0; i < 500; ++i) {
    double a = lat(rng), b = lon(rng), c = lat(rng), d = lon(rng);
    const double h = HaversineKm(a, b, c, d);
    CHECK(h == doctest::Approx(oracle::ChordDistanceKm(a, b, c, d)).epsilon(1e-6));
    CHECK(h == HaversineKm(c, d, a, b));
  }
  CHECK_THROWS_AS(HaversineKm(91, 0, 0, 0), Error);
  CHECK_THROWS_AS(HaversineKm(0, 181, 0, 0), Error);
  CHECK_THROWS_AS(HaversineKm(0, 0, std::nan(""), 0), Error);
}

TEST_CASE("evaluate examples") {
  SUBCASE("perfect predictions") {
    std::vector<ResolutionRecord> records = {Record(1, 30, -97, 1, 30, -97),
                                             Record(2, 48, 2, 2, 48, 2)};
    auto m = Evaluate(records);
    CHECK(m.n_eval == 2);
    CHECK(m.exact_match == 1.0);
    CHECK(m.mean_error_km == 0.0);
    CHECK(m.median_error_km == 0.0);
    CHECK(m.correct_country == 1.0);
    CHECK(m.correct_feature_class == 1.0);
    CHECK(m.correct_adm1 == 1.0);
    CHECK(m.acc_at_161km == 1.0);
  }
  SUBCASE("one prediction 100 km off") {
    const double off = LatitudeDegrees(100.0);
    CHECK(oracle::ChordDistanceKm(10, 20, 10 + off, 20) == doctest::Approx(100.0).epsilon(1e-9));
    std::vector<ResolutionRecord> records = {Record(1, 10, 20, 3, 10 + off, 20),
                                             Record(2, 40, 5, 2, 40, 5)};
    auto m = Evaluate(records);
    CHECK(m.acc_at_161km == 1.0);
    CHECK(m.mean_error_km == doctest::Approx(50.0).epsilon(1e-9));
    CHECK(m.median_error_km == doctest::Approx(50.0).epsilon(1e-9));
    CHECK(m.exact_match == 0.5);
  }
  SUBCASE("impossible case with abstention") {
    auto impossible = Record(1, 10, 20, std::nullopt, 0, 0);
    impossible.gold_in_candidates = false;
    std::vector<ResolutionRecord> records = {impossible, Record(2, 40, 5, 2, 40, 5)};
    auto m = Evaluate(records);
    CHECK(m.n_impossible == 1);
    CHECK(m.abstention_recall == 1.0);
    CHECK(m.abstention_false_rate == 0.0);
    CHECK(m.n_distance == 1);
    CHECK(m.mean_error_km == 0.0);
    CHECK(m.exact_match == 1.0);
  }
  SUBCASE("abstaining on a retrievable gold is a false abstention") {
    std::vector<ResolutionRecord> records = {Record(1, 10, 20, std::nullopt, 0, 0),
                                             Record(2, 40, 5, 2, 40, 5)};
    auto m = Evaluate(records);
    CHECK(m.abstention_false_rate == 0.5);
    CHECK(m.exact_match == 0.5);
    CHECK(m.correct_country == 0.5);
  }
  SUBCASE("empty input") { CHECK_THROWS_AS(Evaluate({}), Error); }
}

TEST_CASE("evaluate matches the brute-force recomputation") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    auto records = RandomRecords(rng, 1 + rng() % 100);
    auto got = Evaluate(records);
    CheckSameReport(got, oracle::BruteForceMetrics(records, kAccuracyThresholdKm));
    for (double f : {got.exact_match, got.correct_country, got.correct_feature_class,
                     got.correct_adm1, got.acc_at_161km, got.abstention_recall,
                     got.abstention_false_rate}) {
      CHECK((f >= 0.0 && f <= 1.0));
    }
  }
}

TEST_CASE("evaluate properties") {
  std::mt19937_64 rng(5);
  auto records = RandomRecords(rng, 100);
  auto base = Evaluate(records);
  for (int i = 0; i < 5; ++i) {
    std::shuffle(records.begin(), records.end(), rng);
    CheckSameReport(Evaluate(records), base);
  }
  double previous = 1.0;
  for (double threshold : {20000.0, 5000.0, 1000.0, 161.0, 50.0, 1.0, 0.0}) {
    double acc = Evaluate(records, threshold).acc_at_161km;
    CHECK(acc <= previous);
    previous = acc;
  }
}

TEST_CASE("report output") {
  std::vector<ResolutionRecord> records = {Record(1, 30, -97, 1, 30, -97)};
  auto m = Evaluate(records);
  m.recall_at_k = {{50, 0.0}, {500, 0.0}};
  auto j = ReportToJson(m);
  CHECK(j["exact_match"] == 1.0);
  CHECK(j["n_eval"] == 1);
  std::ostringstream table;
  PrintReportTable(table, m, "synth");
  const std::string text = table.str();
  CHECK(text.find("Exact Match") != std::string::npos);
  CHECK(text.find("Acc@161km") != std::string::npos);
  CHECK(text.find("Exact Match") < text.find("Acc@161km"));
  CHECK(text.find("synth") != std::string::npos);
}

Document Annotated(std::string text, Span span, GeonameId gold) {
  Document doc;
  doc.doc_id = "q";
  doc.text = std::move(text);
  Toponym t;
  t.span = span;
  t.gold = GoldAnnotation{};
  t.gold->geoname_id = gold;
  doc.toponyms.push_back(t);
  return doc;
}

TEST_CASE("query_recall examples") {
  auto index = GazetteerIndex::Build({MakeEntry(1, "Austin", "US", "TX"),
                                      MakeEntry(2, "Paris", "FR", "11"),
                                      MakeEntry(3, "Texas", "US", "TX", 'A', "ADM1")});
  const std::vector<int> ks = {50, 500};
  std::vector<Document> exact = {Annotated("In Austin", {3, 9}, 1),
                                 Annotated("Paris", {0, 5}, 2)};
  auto recall = QueryRecall(index, exact, ks);
  CHECK(recall.at(50) == 0.0);
  CHECK(recall.at(500) == 0.0);

  exact.push_back(Annotated("Gotham", {0, 6}, 999));
  recall = QueryRecall(index, exact, ks);
  CHECK(recall.at(50) == doctest::Approx(1.0 / 3.0));
  CHECK(recall.at(500) == doctest::Approx(1.0 / 3.0));

  exact.back().toponyms[0].gold->exclude_gold = true;
  CHECK(QueryRecall(index, exact, ks).at(50) == 0.0);

  CHECK_THROWS_AS(QueryRecall(index, {}, ks), Error);
}

TEST_CASE("missing@k is monotone in k") {
  auto entries = MakeFixtureGazetteer();
  auto index = GazetteerIndex::Build(entries);
  std::mt19937_64 rng(8);
  std::vector<Document> corpus;
  for (int i = 0; i < 300; ++i) {
    const auto& e = entries[rng() % entries.size()];
    std::u32string name = DecodeUtf8(e.name);
    if (i % 3 == 0 && name.size() > 3) name[1] = U'z';
    corpus.push_back(Annotated(EncodeUtf8(name), {0, name.size()}, e.geoname_id));
  }
  const std::vector<int> ks = {1, 5, 50, 500};
  auto recall = QueryRecall(index, corpus, ks);
  CHECK(recall.at(500) <= recall.at(50));
  CHECK(recall.at(50) <= recall.at(5));
  CHECK(recall.at(5) <= recall.at(1));
}

}  // namespace
}  // namespace toporank
