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

#ifndef TOPORANK_GAZETTEER_H_
#define TOPORANK_GAZETTEER_H_

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace toporank {

using GeonameId = std::int64_t;

// One row of a Geonames dump.
struct GazetteerEntry {
  GeonameId geoname_id = 0;
  std::string name;
  std::string ascii_name;
  std::vector<std::string> alternative_names;
  double latitude = 0.0;
  double longitude = 0.0;
  char feature_class = 'P';
  std::string feature_code;
  std::string country_code;
  std::string admin1_code;
  std::string admin2_code;
  std::int64_t population = 0;

  bool IsAdm1() const { return feature_code == "ADM1"; }
  bool IsCountry() const { return feature_code.starts_with("PCL"); }

  bool operator==(const GazetteerEntry&) const = default;
};

struct ParseStats {
  size_t lines = 0;
  size_t malformed = 0;
  size_t filtered = 0;
};

struct ParseOptions {
  // Feature classes to keep; empty keeps all.
  std::string feature_classes;
};

// Parses the 19-column Geonames tab-separated layout. Malformed lines are
// skipped and counted; more than half malformed is a kCorruptFile error.
std::vector<GazetteerEntry> ParseGazetteer(std::istream& in,
                                           const ParseOptions& options = {},
                                           ParseStats* stats = nullptr);
std::vector<GazetteerEntry> LoadGazetteerFile(const std::string& path,
                                              const ParseOptions& options = {},
                                              ParseStats* stats = nullptr);

// Writes entries back in the same 19-column layout. Columns the entry does
// not model (cc2, admin3/4, elevation, dem, timezone, date) are left empty.
void WriteGazetteer(std::ostream& out, const std::vector<GazetteerEntry>& entries);

// NFC normalization, full case folding, whitespace collapsed and trimmed.
// Idempotent.
std::string NormalizeName(std::string_view raw);

// Removes combining marks after canonical decomposition ("são" -> "sao").
// Expects normalized input and returns normalized output.
std::string AsciiFold(std::string_view normalized);

// Normalized primary, ascii and alternative names without duplicates.
std::vector<std::string> NormalizedNames(const GazetteerEntry& entry);

// NormalizedNames plus the ascii-folded form of each. These are the keys an
// entry is indexed under.
std::vector<std::string> IndexKeys(const GazetteerEntry& entry);

struct AdminTables {
  std::map<std::pair<std::string, std::string>, GeonameId> admin1_index;
  std::map<std::string, std::vector<GeonameId>> country_index;
  // country code -> the country's own PCL* entry
  std::map<std::string, GeonameId> country_entity_index;

  std::optional<GeonameId> Adm1Of(std::string_view country,
                                  std::string_view admin1) const;
  std::optional<GeonameId> CountryEntity(std::string_view country) const;
};

// Duplicate ADM1 keys keep the most populous entry (ties: lowest id) and
// log a warning to stderr.
AdminTables BuildAdminTables(const std::vector<GazetteerEntry>& entries);

}  // namespace toporank

#endif  // TOPORANK_GAZETTEER_H_
