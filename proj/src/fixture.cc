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

#include "toporank/fixture.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>

#include "toporank/error.h"

namespace toporank {
namespace {

struct CountrySeed {
  const char* name;
  const char* code;
  double lat;
  double lon;
};

constexpr CountrySeed kCountries[] = {
    {"France", "FR", 46.6, 2.4},        {"United States", "US", 39.8, -98.6},
    {"Germany", "DE", 51.2, 10.4},      {"Spain", "ES", 40.2, -3.7},
    {"Italy", "IT", 42.8, 12.8},        {"Brazil", "BR", -10.8, -52.9},
    {"India", "IN", 22.9, 79.6},        {"Nigeria", "NG", 9.1, 8.7},
    {"Kenya", "KE", 0.2, 37.9},         {"Mexico", "MX", 23.6, -102.5},
    {"Canada", "CA", 56.1, -106.3},     {"Australia", "AU", -25.3, 133.8},
    {"Japan", "JP", 36.2, 138.3},       {"Egypt", "EG", 26.8, 30.8},
    {"Turkey", "TR", 39.0, 35.2},       {"Poland", "PL", 51.9, 19.1},
    {"Ukraine", "UA", 48.4, 31.2},      {"Argentina", "AR", -38.4, -63.6},
    {"Colombia", "CO", 4.6, -74.3},     {"Indonesia", "ID", -0.8, 113.9},
    {"Pakistan", "PK", 30.4, 69.3},     {"Peru", "PE", -9.2, -75.0},
    {"Sweden", "SE", 60.1, 18.6},       {"Vietnam", "VN", 14.1, 108.3},
    {"Morocco", "MA", 31.8, -7.1},      {"Chile", "CL", -35.7, -71.5},
    {"Ghana", "GH", 7.9, -1.0},         {"Philippines", "PH", 12.9, 121.8},
    {"Thailand", "TH", 15.9, 101.0},    {"Romania", "RO", 45.9, 24.9},
    {"Greece", "GR", 39.1, 21.8},       {"Norway", "NO", 60.5, 8.5},
};

struct UsState {
  const char* name;
  const char* code;
  double lat;
  double lon;
};

constexpr UsState kUsStates[] = {
    {"Texas", "TX", 31.25, -99.25},     {"California", "CA", 37.25, -119.75},
    {"Ohio", "OH", 40.25, -82.75},      {"Illinois", "IL", 40.0, -89.25},
    {"District of Columbia", "DC", 38.91, -77.0},
};

constexpr const char* kOnsets[] = {"b", "br", "c", "d", "dr", "f", "g", "gr", "h", "k",
                                   "kr", "l", "m", "n", "p", "r", "s", "st", "t", "tr",
                                   "v", "w", "z", "ch", "sh", "th"};
constexpr const char* kVowels[] = {"a", "e", "i", "o", "u", "ai", "ea", "ou", "ia", "y"};
constexpr const char* kCodas[] = {"", "", "", "n", "r", "l", "s", "m", "nd", "rt", "x", "ck"};
constexpr const char* kSuffixes[] = {"", "", "", "", "ville", "burg", "ton", "field", "port",
                                     "ford", "polis", "stad", "grad", "abad"};

class NameFactory {
 public:
  explicit NameFactory(std::mt19937_64& rng) : rng_(rng) {}

  std::string Fresh() {
    for (;;) {
      std::string name = Raw();
      if (used_.insert(name).second) return name;
    }
  }

  void Reserve(const std::string& name) { used_.insert(name); }

 private:
  template <size_t N>
  const char* Pick(const char* const (&items)[N]) {
    return items[std::uniform_int_distribution<size_t>(0, N - 1)(rng_)];
  }

  std::string Raw() {
    int syllables = std::uniform_int_distribution<int>(2, 3)(rng_);
    std::string s;
    for (int i = 0; i < syllables; ++i) {
      s += Pick(kOnsets);
      s += Pick(kVowels);
      if (i + 1 == syllables) s += Pick(kCodas);
    }
    s += Pick(kSuffixes);
    s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
    return s;
  }

  std::mt19937_64& rng_;
  std::set<std::string> used_;
};

// Accented variant of an ascii name: first a/e/i/o/u after the initial
// letter gets a diacritic.
std::string Accented(const std::string& name) {
  for (size_t i = 1; i < name.size(); ++i) {
    switch (name[i]) {
      case 'a': return name.substr(0, i) + "á" + name.substr(i + 1);
      case 'e': return name.substr(0, i) + "é" + name.substr(i + 1);
      case 'i': return name.substr(0, i) + "í" + name.substr(i + 1);
      case 'o': return name.substr(0, i) + "ö" + name.substr(i + 1);
      case 'u': return name.substr(0, i) + "ü" + name.substr(i + 1);
      default: break;
    }
  }
  return name;
}

class Builder {
 public:
  explicit Builder(std::mt19937_64& rng) : rng_(rng) {}

  GazetteerEntry& Add(std::string name, char feature_class, std::string feature_code,
                      std::string country, std::string admin1, double lat, double lon,
                      std::int64_t population) {
    GazetteerEntry e;
    e.geoname_id = next_id_++;
    e.ascii_name = name;
    e.name = std::move(name);
    e.feature_class = feature_class;
    e.feature_code = std::move(feature_code);
    e.country_code = std::move(country);
    e.admin1_code = std::move(admin1);
    e.latitude = std::clamp(lat, -89.9, 89.9);
    e.longitude = std::clamp(lon, -179.9, 179.9);
    e.population = population;
    entries_.push_back(std::move(e));
    return entries_.back();
  }

  double Jitter(double spread) { return std::uniform_real_distribution<double>(-spread, spread)(rng_); }
  std::int64_t LogUniform(double lo, double hi) {
    double x = std::uniform_real_distribution<double>(std::log10(lo), std::log10(hi))(rng_);
    return static_cast<std::int64_t>(std::pow(10.0, x));
  }
  bool Chance(double p) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng_) < p; }

  std::vector<GazetteerEntry> Take() { return std::move(entries_); }

 private:
  std::mt19937_64& rng_;
  std::vector<GazetteerEntry> entries_;
  GeonameId next_id_ = 1000001;
};

}  // namespace

std::vector<GazetteerEntry> MakeFixtureGazetteer(const FixtureOptions& options) {
  constexpr int kMaxCountries = static_cast<int>(std::size(kCountries));
  if (options.countries < 2 || options.countries > kMaxCountries) {
    throw Error(ErrorCode::kParameter,
                "fixture countries must be in [2, " + std::to_string(kMaxCountries) + "]");
  }
  if (options.adm1_per_country < 1 || options.places_per_adm1 < 1 ||
      options.natural_per_country < 0 || !(options.homonym_rate >= 0.0 && options.homonym_rate <= 1.0)) {
    throw Error(ErrorCode::kParameter, "invalid fixture options");
  }

  std::mt19937_64 rng(options.seed);
  NameFactory names(rng);
  Builder b(rng);
  for (const auto& c : kCountries) names.Reserve(c.name);
  for (const auto& s : kUsStates) names.Reserve(s.name);
  for (const char* anchor : {"Paris", "Austin", "Washington", "Houston"}) names.Reserve(anchor);

  // Names shared by places in several countries.
  std::vector<std::string> shared;
  for (int i = 0; i < 40; ++i) shared.push_back(names.Fresh());

  auto decorate = [&](GazetteerEntry& e) {
    if (b.Chance(0.08)) {
      e.name = Accented(e.ascii_name);
    } else if (b.Chance(0.3)) {
      e.alternative_names.push_back(Accented(e.ascii_name));
    }
    if (b.Chance(0.25)) e.alternative_names.push_back(names.Fresh());
  };

  for (int ci = 0; ci < options.countries; ++ci) {
    const auto& c = kCountries[ci];
    const bool is_us = std::string_view(c.code) == "US";
    const bool is_fr = std::string_view(c.code) == "FR";
    b.Add(c.name, 'A', "PCLI", c.code, "00", c.lat, c.lon, b.LogUniform(5e6, 2e8));

    for (int ai = 0; ai < options.adm1_per_country; ++ai) {
      std::string adm1_name;
      std::string adm1_code;
      double lat = c.lat + b.Jitter(5.0);
      double lon = c.lon + b.Jitter(5.0);
      if (is_us && ai < static_cast<int>(std::size(kUsStates))) {
        adm1_name = kUsStates[ai].name;
        adm1_code = kUsStates[ai].code;
        lat = kUsStates[ai].lat;
        lon = kUsStates[ai].lon;
      } else if (is_fr && ai == 0) {
        adm1_name = "Île-de-France";
        adm1_code = "11";
        lat = 48.5;
        lon = 2.5;
      } else {
        adm1_name = names.Fresh();
        char code[16];
        std::snprintf(code, sizeof(code), "%02d", ai + 1);
        adm1_code = code;
      }
      auto& adm1 = b.Add(adm1_name, 'A', "ADM1", c.code, adm1_code, lat, lon, b.LogUniform(2e5, 1e7));
      if (is_fr && ai == 0) adm1.ascii_name = "Ile-de-France";
      const double adm1_lat = adm1.latitude;
      const double adm1_lon = adm1.longitude;

      for (int pi = 0; pi < options.places_per_adm1; ++pi) {
        std::string code = pi == 0 ? (ai == 0 ? "PPLC" : "PPLA") : "PPL";
        std::int64_t pop = pi == 0 ? b.LogUniform(3e5, 8e6) : b.LogUniform(300, 4e5);
        double plat = adm1_lat + b.Jitter(1.5);
        double plon = adm1_lon + b.Jitter(1.5);

        if (is_fr && ai == 0 && pi == 0) {
          auto& paris = b.Add("Paris", 'P', "PPLC", "FR", "11", 48.85341, 2.3488, 2138551);
          paris.alternative_names = {"Lutetia", "Paname", "Parigi"};
          continue;
        }
        if (is_us && ai == 0 && pi == 0) {
          auto& austin = b.Add("Austin", 'P', "PPLA", "US", "TX", 30.26715, -97.74306, 961855);
          austin.alternative_names = {"Austin City"};
          continue;
        }
        if (is_us && ai == 0 && pi == 1) {
          b.Add("Paris", 'P', "PPL", "US", "TX", 33.66094, -95.55551, 24171);
          continue;
        }
        if (is_us && ai == 0 && pi == 2) {
          b.Add("Houston", 'P', "PPL", "US", "TX", 29.76328, -95.36327, 2296224);
          continue;
        }
        if (is_us && ai == 4 && pi == 0) {
          b.Add("Washington", 'P', "PPLC", "US", "DC", 38.89511, -77.03637, 689545);
          continue;
        }
        if (is_us && code == "PPLC") code = "PPLA";

        std::string name = pi > 0 && b.Chance(options.homonym_rate)
                               ? shared[std::uniform_int_distribution<size_t>(0, shared.size() - 1)(rng)]
                               : names.Fresh();
        auto& place = b.Add(name, 'P', code, c.code, adm1_code, plat, plon, pop);
        decorate(place);
      }
    }

    for (int ni = 0; ni < options.natural_per_country; ++ni) {
      bool river = ni % 2 == 0;
      std::string admin1_code;
      char code[16];
      std::snprintf(code, sizeof(code), "%02d", 1 + ni % options.adm1_per_country);
      admin1_code = code;
      b.Add(names.Fresh(), river ? 'H' : 'T', river ? "STM" : "MT", c.code, admin1_code,
            c.lat + b.Jitter(6.0), c.lon + b.Jitter(6.0), 0);
    }
  }
  return b.Take();
}

}  // namespace toporank
