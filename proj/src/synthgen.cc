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

#include "toporank/synthgen.h"

#include <cmath>
#include <cstdio>
#include <map>
#include <random>

#include "toporank/error.h"
#include "toporank/unicode.h"

namespace toporank {
namespace {

constexpr std::u32string_view kPlace = U"{PLACE}";
constexpr std::u32string_view kParent = U"{PARENT}";
constexpr std::u32string_view kCountry = U"{COUNTRY}";

bool Has(const std::string& pattern, std::string_view slot) {
  return pattern.find(slot) != std::string::npos;
}

struct Pool {
  std::vector<const GazetteerEntry*> places;
  std::discrete_distribution<size_t> pick;
};

double SamplingWeight(const GazetteerEntry& e) {
  return 1.0 + std::log10(static_cast<double>(e.population) + 1.0);
}

GoldAnnotation GoldFor(const GazetteerEntry& e) {
  GoldAnnotation g;
  g.geoname_id = e.geoname_id;
  g.latitude = e.latitude;
  g.longitude = e.longitude;
  g.country = e.country_code;
  g.admin1 = e.admin1_code;
  g.feature_class = e.feature_class;
  return g;
}

}  // namespace

const char* RelationName(Relation relation) {
  switch (relation) {
    case Relation::kCityInState: return "city_in_state";
    case Relation::kCapitalOfCountry: return "capital_of_country";
    case Relation::kCityInCountry: return "city_in_country";
    case Relation::kStandalone: return "standalone";
  }
  return "unknown";
}

void Template::Validate() const {
  auto fail = [&](const std::string& why) {
    throw Error(ErrorCode::kParameter,
                std::string("template \"") + pattern + "\" (" + RelationName(relation) + "): " + why);
  };
  if (!Has(pattern, "{PLACE}")) fail("missing {PLACE}");
  bool parent = Has(pattern, "{PARENT}");
  bool country = Has(pattern, "{COUNTRY}");
  switch (relation) {
    case Relation::kCityInState:
      if (!parent) fail("missing {PARENT}");
      break;
    case Relation::kCapitalOfCountry:
    case Relation::kCityInCountry:
      if (!country) fail("missing {COUNTRY}");
      if (parent) fail("{PARENT} requires city_in_state");
      break;
    case Relation::kStandalone:
      if (parent || country) fail("standalone takes only {PLACE}");
      break;
  }
}

const std::vector<Template>& DefaultTemplates() {
  static const std::vector<Template> kTemplates = {
      {"Protests erupted in {PLACE}, {PARENT}.", Relation::kCityInState},
      {"Officials in {PLACE}, {PARENT} announced new curfews on Tuesday.", Relation::kCityInState},
      {"Flooding hit {PLACE} in {PARENT} overnight.", Relation::kCityInState},
      {"Police in {PLACE}, {PARENT}, {COUNTRY} arrested two men after the clashes.",
       Relation::kCityInState},
      {"{PLACE}, the capital of {COUNTRY}, hosted the summit.", Relation::kCapitalOfCountry},
      {"Talks were held in {PLACE}, capital of {COUNTRY}, this week.", Relation::kCapitalOfCountry},
      {"The government in {PLACE} said {COUNTRY} would respond.", Relation::kCapitalOfCountry},
      {"Residents of {PLACE} in {COUNTRY} reported power outages.", Relation::kCityInCountry},
      {"A train derailed near {PLACE}, {COUNTRY}.", Relation::kCityInCountry},
      {"Aid convoys reached {PLACE} in northern {COUNTRY} on Monday.", Relation::kCityInCountry},
      {"Heavy rain was reported in {PLACE}.", Relation::kStandalone},
      {"Crowds gathered in {PLACE} on Sunday.", Relation::kStandalone},
  };
  return kTemplates;
}

std::vector<Document> GenerateCorpus(const std::vector<GazetteerEntry>& gazetteer,
                                     const AdminTables& admin, size_t n, std::uint64_t seed,
                                     const std::vector<Template>& templates) {
  if (n == 0) return {};
  std::map<GeonameId, const GazetteerEntry*> by_id;
  for (const auto& e : gazetteer) by_id[e.geoname_id] = &e;
  auto lookup = [&](std::optional<GeonameId> id) -> const GazetteerEntry* {
    if (!id) return nullptr;
    auto it = by_id.find(*id);
    return it == by_id.end() ? nullptr : it->second;
  };

  std::vector<const Template*> usable;
  std::vector<Pool> pools;
  std::string unsatisfied;
  for (const auto& t : templates) {
    t.Validate();
    bool needs_country = Has(t.pattern, "{COUNTRY}");
    Pool pool;
    std::vector<double> weights;
    for (const auto& e : gazetteer) {
      bool eligible = false;
      switch (t.relation) {
        case Relation::kCityInState:
          eligible = e.feature_class == 'P' && lookup(admin.Adm1Of(e.country_code, e.admin1_code));
          break;
        case Relation::kCapitalOfCountry:
          eligible = e.feature_code == "PPLC";
          break;
        case Relation::kCityInCountry:
        case Relation::kStandalone:
          eligible = e.feature_class == 'P';
          break;
      }
      if (eligible && needs_country && !lookup(admin.CountryEntity(e.country_code))) eligible = false;
      if (!eligible) continue;
      pool.places.push_back(&e);
      weights.push_back(SamplingWeight(e));
    }
    if (pool.places.empty()) {
      if (!unsatisfied.empty()) unsatisfied += ", ";
      unsatisfied += RelationName(t.relation);
      continue;
    }
    pool.pick = std::discrete_distribution<size_t>(weights.begin(), weights.end());
    usable.push_back(&t);
    pools.push_back(std::move(pool));
  }
  if (usable.empty()) {
    throw Error(ErrorCode::kUnsatisfiable,
                "no template relation is satisfiable by the gazetteer: " + unsatisfied);
  }

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<size_t> pick_template(0, usable.size() - 1);
  std::vector<Document> corpus;
  corpus.reserve(n);
  for (size_t d = 0; d < n; ++d) {
    size_t ti = pick_template(rng);
    const Template& t = *usable[ti];
    const GazetteerEntry* place = pools[ti].places[pools[ti].pick(rng)];
    const GazetteerEntry* parent = lookup(admin.Adm1Of(place->country_code, place->admin1_code));
    const GazetteerEntry* country = lookup(admin.CountryEntity(place->country_code));

    Document doc;
    char id[32];
    std::snprintf(id, sizeof(id), "synth-%06zu", d);
    doc.doc_id = id;
    std::u32string pattern = DecodeUtf8(t.pattern);
    std::u32string text;
    size_t i = 0;
    while (i < pattern.size()) {
      const GazetteerEntry* fill = nullptr;
      size_t width = 0;
      for (auto [slot, entry] : {std::pair{kPlace, place}, std::pair{kParent, parent},
                                 std::pair{kCountry, country}}) {
        if (std::u32string_view(pattern).substr(i, slot.size()) == slot) {
          fill = entry;
          width = slot.size();
          break;
        }
      }
      if (!width) {
        text.push_back(pattern[i++]);
        continue;
      }
      std::u32string name = DecodeUtf8(fill->name);
      Span span{text.size(), text.size() + name.size()};
      text += name;
      doc.toponyms.push_back({span, fill->name, GoldFor(*fill)});
      i += width;
    }
    doc.text = EncodeUtf8(text);
    corpus.push_back(std::move(doc));
  }
  return corpus;
}

std::vector<Document> AugmentImpossible(std::vector<Document> corpus, double fraction,
                                        std::uint64_t seed) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) {
    throw Error(ErrorCode::kParameter, "impossible fraction must be in [0, 1]");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (auto& doc : corpus) {
    for (auto& t : doc.toponyms) {
      if (!t.gold || !t.gold->geoname_id) continue;
      if (unit(rng) < fraction) t.gold->exclude_gold = true;
    }
  }
  return corpus;
}

}  // namespace toporank
