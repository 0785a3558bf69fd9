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

#include <map>
#include <set>

#include "doctest.h"
#include "test_support.h"
#include "toporank/corpus.h"
#include "toporank/error.h"
#include "toporank/fixture.h"
#include "toporank/synthgen.h"
#include "toporank/unicode.h"

namespace toporank {
namespace {

using testing::MakeEntry;

std::vector<GazetteerEntry> AustinTexas() {
  return {MakeEntry(4671654, "Austin", "US", "TX", 'P', "PPLA", 961855, 30.26715, -97.74306),
          MakeEntry(4736286, "Texas", "US", "TX", 'A', "ADM1", 22875689, 31.25044, -99.25061)};
}

std::string Serialize(const std::vector<Document>& corpus) {
  std::ostringstream out;
  WriteCorpus(out, corpus);
  return out.str();
}

TEST_CASE("template rendering on a hand-built fixture") {
  auto gaz = AustinTexas();
  auto admin = BuildAdminTables(gaz);
  std::vector<Template> templates = {{"Protests erupted in {PLACE}, {PARENT}.", Relation::kCityInState}};
  auto corpus = GenerateCorpus(gaz, admin, 3, 1, templates);
  REQUIRE(corpus.size() == 3);
  const auto& doc = corpus[0];
  CHECK(doc.text == "Protests erupted in Austin, Texas.");
  REQUIRE(doc.toponyms.size() == 2);
  CHECK(doc.toponyms[0].span == Span{20, 26});
  CHECK(doc.toponyms[0].gold->geoname_id == 4671654);
  CHECK(doc.toponyms[1].span == Span{28, 33});
  CHECK(doc.toponyms[1].gold->geoname_id == 4736286);
  CHECK(doc.toponyms[1].gold->latitude == 31.25044);
  CHECK_NOTHROW(doc.Validate());
}

TEST_CASE("template validation") {
  CHECK_THROWS_AS((Template{"In {PLACE}.", Relation::kCityInState}.Validate()), Error);
  CHECK_THROWS_AS((Template{"{PLACE}, {PARENT}", Relation::kCityInCountry}.Validate()), Error);
  CHECK_THROWS_AS((Template{"{PLACE} in {COUNTRY}", Relation::kStandalone}.Validate()), Error);
  CHECK_THROWS_AS((Template{"Nothing here", Relation::kStandalone}.Validate()), Error);
  std::set<Relation> covered;
  for (const auto& t : DefaultTemplates()) {
    CHECK_NOTHROW(t.Validate());
    covered.insert(t.relation);
  }
  CHECK(DefaultTemplates().size() >= 10);
  CHECK(covered.size() == 4);
}

TEST_CASE("generate_corpus contracts") {
  auto gaz = MakeFixtureGazetteer();
  auto admin = BuildAdminTables(gaz);
  CHECK(GenerateCorpus(gaz, admin, 0, 1).empty());
  CHECK(Serialize(GenerateCorpus(gaz, admin, 200, 42)) ==
        Serialize(GenerateCorpus(gaz, admin, 200, 42)));
  CHECK(Serialize(GenerateCorpus(gaz, admin, 200, 42)) !=
        Serialize(GenerateCorpus(gaz, admin, 200, 43)));

  SUBCASE("unsatisfiable templates name the relation") {
    std::vector<GazetteerEntry> lakes = {MakeEntry(1, "Lake One", "US", "TX", 'H', "LK")};
    try {
      GenerateCorpus(lakes, BuildAdminTables(lakes), 5, 1);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kUnsatisfiable);
      CHECK(std::string(e.what()).find("capital_of_country") != std::string::npos);
    }
  }
}

TEST_CASE("generated annotations cover their names and satisfy relations") {
  auto gaz = MakeFixtureGazetteer();
  auto admin = BuildAdminTables(gaz);
  std::map<GeonameId, const GazetteerEntry*> by_id;
  for (const auto& e : gaz) by_id[e.geoname_id] = &e;
  auto corpus = GenerateCorpus(gaz, admin, 500, 9);
  for (const auto& doc : corpus) {
    CHECK_NOTHROW(doc.Validate());
    REQUIRE(!doc.toponyms.empty());
    for (const auto& t : doc.toponyms) {
      const auto* e = by_id.at(*t.gold->geoname_id);
      CHECK(SubstrCodePoints(doc.text, t.span.start, t.span.end) == e->name);
      CHECK(t.surface == e->name);
    }
    const auto* place = by_id.at(*doc.toponyms[0].gold->geoname_id);
    for (size_t i = 1; i < doc.toponyms.size(); ++i) {
      const auto* other = by_id.at(*doc.toponyms[i].gold->geoname_id);
      CHECK(other->country_code == place->country_code);
      if (other->IsAdm1()) {
        CHECK(admin.Adm1Of(place->country_code, place->admin1_code) == other->geoname_id);
      } else {
        CHECK(other->IsCountry());
      }
    }
  }
}

TEST_CASE("augment_impossible") {
  auto gaz = MakeFixtureGazetteer();
  auto admin = BuildAdminTables(gaz);
  auto corpus = GenerateCorpus(gaz, admin, 400, 3);
  auto count = [](const std::vector<Document>& c) {
    size_t total = 0, flagged = 0;
    for (const auto& d : c) {
      for (const auto& t : d.toponyms) {
        ++total;
        flagged += t.gold->exclude_gold;
      }
    }
    return std::pair{total, flagged};
  };

  CHECK(Serialize(AugmentImpossible(corpus, 0.0, 1)) == Serialize(corpus));
  auto all = AugmentImpossible(corpus, 1.0, 1);
  CHECK(count(all).second == count(all).first);
  for (size_t d = 0; d < corpus.size(); ++d) {
    CHECK(all[d].text == corpus[d].text);
    for (size_t i = 0; i < corpus[d].toponyms.size(); ++i) {
      CHECK(all[d].toponyms[i].span == corpus[d].toponyms[i].span);
      CHECK(all[d].toponyms[i].gold->geoname_id == corpus[d].toponyms[i].gold->geoname_id);
    }
  }
  CHECK_THROWS_AS(AugmentImpossible(corpus, 1.5, 1), Error);
  CHECK_THROWS_AS(AugmentImpossible(corpus, -0.1, 1), Error);

  SUBCASE("ten percent of one thousand annotations") {
    std::vector<Document> docs(1);
    docs[0].doc_id = "bulk";
    for (int i = 0; i < 1000; ++i) {
      Toponym t;
      t.span = {static_cast<size_t>(2 * i), static_cast<size_t>(2 * i + 1)};
      t.gold = GoldAnnotation{};
      t.gold->geoname_id = i + 1;
      docs[0].toponyms.push_back(t);
    }
    auto a = AugmentImpossible(docs, 0.1, 2024);
    auto b = AugmentImpossible(docs, 0.1, 2024);
    size_t flagged = count(a).second;
    CHECK(flagged >= 80);
    CHECK(flagged <= 120);
    CHECK(Serialize(a) == Serialize(b));
  }
}

}  // namespace
}  // namespace toporank
