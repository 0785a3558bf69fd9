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

#include "toporank/gazetteer.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <set>
#include <unordered_set>

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include "toporank/error.h"
#include "toporank/unicode.h"

namespace toporank {
namespace {

constexpr size_t kGeonamesColumns = 19;
constexpr std::string_view kFeatureClasses = "AHLPRSTUV";

std::vector<std::string_view> SplitTabs(std::string_view line) {
  std::vector<std::string_view> fields;
  size_t begin = 0;
  while (true) {
    size_t tab = line.find('\t', begin);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(begin));
      break;
    }
    fields.push_back(line.substr(begin, tab - begin));
    begin = tab + 1;
  }
  return fields;
}

template <typename T>
bool ParseNumber(std::string_view s, T* out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), *out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::optional<GazetteerEntry> ParseLine(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  auto f = SplitTabs(line);
  if (f.size() != kGeonamesColumns) return std::nullopt;

  GazetteerEntry e;
  if (!ParseNumber(f[0], &e.geoname_id) || e.geoname_id <= 0) return std::nullopt;
  e.name = std::string(f[1]);
  if (NormalizeName(e.name).empty()) return std::nullopt;
  e.ascii_name = std::string(f[2]);
  if (!f[3].empty()) {
    size_t begin = 0;
    while (begin <= f[3].size()) {
      size_t comma = f[3].find(',', begin);
      if (comma == std::string_view::npos) comma = f[3].size();
      if (comma > begin) e.alternative_names.emplace_back(f[3].substr(begin, comma - begin));
      begin = comma + 1;
    }
  }
  if (!ParseNumber(f[4], &e.latitude) || !ParseNumber(f[5], &e.longitude)) return std::nullopt;
  if (!std::isfinite(e.latitude) || !std::isfinite(e.longitude)) return std::nullopt;
  if (e.latitude < -90.0 || e.latitude > 90.0) return std::nullopt;
  if (e.longitude < -180.0 || e.longitude > 180.0) return std::nullopt;
  if (f[6].size() != 1 || kFeatureClasses.find(f[6][0]) == std::string_view::npos) {
    return std::nullopt;
  }
  e.feature_class = f[6][0];
  e.feature_code = std::string(f[7]);
  e.country_code = std::string(f[8]);
  e.admin1_code = std::string(f[10]);
  e.admin2_code = std::string(f[11]);
  if (f[14].empty()) {
    e.population = 0;
  } else if (!ParseNumber(f[14], &e.population) || e.population < 0) {
    return std::nullopt;
  }
  return e;
}

const icu::Normalizer2& CasefoldNormalizer() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* n = icu::Normalizer2::getNFKCCasefoldInstance(status);
  if (U_FAILURE(status)) throw Error(ErrorCode::kConfiguration, "ICU NFKC_Casefold unavailable");
  return *n;
}

const icu::Normalizer2& DecomposingNormalizer() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* n = icu::Normalizer2::getNFDInstance(status);
  if (U_FAILURE(status)) throw Error(ErrorCode::kConfiguration, "ICU NFD unavailable");
  return *n;
}

// Letters with no canonical decomposition that still have an obvious
// ascii form.
std::string_view FoldSpecial(char32_t c) {
  switch (c) {
    case U'ł': return "l";
    case U'ø': return "o";
    case U'đ': return "d";
    case U'ħ': return "h";
    case U'ı': return "i";
    case U'æ': return "ae";
    case U'œ': return "oe";
    case U'þ': return "th";
    case U'ð': return "d";
    default: return {};
  }
}

void AppendUnique(std::vector<std::string>& out, std::unordered_set<std::string>& seen,
                  std::string value) {
  if (value.empty()) return;
  if (seen.insert(value).second) out.push_back(std::move(value));
}

}  // namespace

std::vector<GazetteerEntry> ParseGazetteer(std::istream& in, const ParseOptions& options,
                                           ParseStats* stats) {
  ParseStats local;
  std::vector<GazetteerEntry> entries;
  std::unordered_set<GeonameId> ids;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    ++local.lines;
    auto entry = ParseLine(line);
    if (!entry || !ids.insert(entry->geoname_id).second) {
      ++local.malformed;
      continue;
    }
    if (!options.feature_classes.empty() &&
        options.feature_classes.find(entry->feature_class) == std::string::npos) {
      ++local.filtered;
      continue;
    }
    entries.push_back(std::move(*entry));
  }
  if (in.bad()) throw Error(ErrorCode::kIngestion, "failed reading gazetteer stream");
  if (stats) *stats = local;
  if (local.malformed * 2 > local.lines) {
    throw Error(ErrorCode::kCorruptFile,
                "gazetteer rejected: " + std::to_string(local.malformed) + " of " +
                    std::to_string(local.lines) + " lines malformed");
  }
  return entries;
}

std::vector<GazetteerEntry> LoadGazetteerFile(const std::string& path,
                                              const ParseOptions& options, ParseStats* stats) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kNotFound, "cannot open gazetteer file: " + path);
  return ParseGazetteer(in, options, stats);
}

void WriteGazetteer(std::ostream& out, const std::vector<GazetteerEntry>& entries) {
  auto number = [](double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
  };
  for (const auto& e : entries) {
    std::string alts;
    for (size_t i = 0; i < e.alternative_names.size(); ++i) {
      if (i) alts += ',';
      alts += e.alternative_names[i];
    }
    out << e.geoname_id << '\t' << e.name << '\t' << e.ascii_name << '\t' << alts << '\t'
        << number(e.latitude) << '\t' << number(e.longitude) << '\t' << e.feature_class << '\t'
        << e.feature_code << '\t' << e.country_code << "\t\t" << e.admin1_code << '\t'
        << e.admin2_code << "\t\t\t" << e.population << "\t\t\t\t\n";
  }
}

std::string NormalizeName(std::string_view raw) {
  UErrorCode status = U_ZERO_ERROR;
  icu::UnicodeString src = icu::UnicodeString::fromUTF8(
      icu::StringPiece(raw.data(), static_cast<int32_t>(raw.size())));
  icu::UnicodeString folded = CasefoldNormalizer().normalize(src, status);
  if (U_FAILURE(status)) return {};

  std::string utf8;
  folded.toUTF8String(utf8);
  std::u32string cps = DecodeUtf8(utf8);
  std::u32string collapsed;
  collapsed.reserve(cps.size());
  bool pending_space = false;
  for (char32_t c : cps) {
    if (IsWhitespace(c)) {
      pending_space = !collapsed.empty();
      continue;
    }
    if (pending_space) collapsed.push_back(U' ');
    pending_space = false;
    collapsed.push_back(c);
  }
  return EncodeUtf8(collapsed);
}

std::string AsciiFold(std::string_view normalized) {
  UErrorCode status = U_ZERO_ERROR;
  icu::UnicodeString src = icu::UnicodeString::fromUTF8(
      icu::StringPiece(normalized.data(), static_cast<int32_t>(normalized.size())));
  icu::UnicodeString decomposed = DecomposingNormalizer().normalize(src, status);
  if (U_FAILURE(status)) return std::string(normalized);
  std::string utf8;
  decomposed.toUTF8String(utf8);

  std::string stripped;
  for (char32_t c : DecodeUtf8(utf8)) {
    if (u_charType(static_cast<UChar32>(c)) == U_NON_SPACING_MARK) continue;
    if (auto special = FoldSpecial(c); !special.empty()) {
      stripped += special;
    } else {
      stripped += EncodeUtf8(std::u32string_view(&c, 1));
    }
  }
  return NormalizeName(stripped);
}

std::vector<std::string> NormalizedNames(const GazetteerEntry& entry) {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  AppendUnique(out, seen, NormalizeName(entry.name));
  AppendUnique(out, seen, NormalizeName(entry.ascii_name));
  for (const auto& alt : entry.alternative_names) AppendUnique(out, seen, NormalizeName(alt));
  return out;
}

std::vector<std::string> IndexKeys(const GazetteerEntry& entry) {
  std::vector<std::string> names = NormalizedNames(entry);
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  for (const auto& n : names) {
    AppendUnique(out, seen, n);
    AppendUnique(out, seen, AsciiFold(n));
  }
  return out;
}

std::optional<GeonameId> AdminTables::Adm1Of(std::string_view country,
                                             std::string_view admin1) const {
  auto it = admin1_index.find({std::string(country), std::string(admin1)});
  if (it == admin1_index.end()) return std::nullopt;
  return it->second;
}

std::optional<GeonameId> AdminTables::CountryEntity(std::string_view country) const {
  auto it = country_entity_index.find(std::string(country));
  if (it == country_entity_index.end()) return std::nullopt;
  return it->second;
}

AdminTables BuildAdminTables(const std::vector<GazetteerEntry>& entries) {
  AdminTables tables;
  std::map<GeonameId, const GazetteerEntry*> by_id;
  for (const auto& e : entries) by_id[e.geoname_id] = &e;

  // More populous first, then lower id.
  auto better = [&](GeonameId challenger, GeonameId incumbent) {
    const auto& a = *by_id[challenger];
    const auto& b = *by_id[incumbent];
    if (a.population != b.population) return a.population > b.population;
    return a.geoname_id < b.geoname_id;
  };

  for (const auto& e : entries) {
    if (!e.country_code.empty()) tables.country_index[e.country_code].push_back(e.geoname_id);
    if (e.IsAdm1()) {
      auto key = std::make_pair(e.country_code, e.admin1_code);
      auto [it, inserted] = tables.admin1_index.emplace(key, e.geoname_id);
      if (!inserted) {
        std::cerr << "warning: duplicate ADM1 entries for (" << key.first << ", " << key.second
                  << "): " << it->second << " and " << e.geoname_id << "\n";
        if (better(e.geoname_id, it->second)) it->second = e.geoname_id;
      }
    }
    if (e.IsCountry() && !e.country_code.empty()) {
      auto [it, inserted] = tables.country_entity_index.emplace(e.country_code, e.geoname_id);
      if (!inserted && better(e.geoname_id, it->second)) it->second = e.geoname_id;
    }
  }
  return tables;
}

}  // namespace toporank
