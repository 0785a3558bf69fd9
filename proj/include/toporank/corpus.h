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

#ifndef TOPORANK_CORPUS_H_
#define TOPORANK_CORPUS_H_

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "toporank/pipeline.h"

namespace toporank {

// Canonical corpus: one JSON object per line.
//   {"doc_id": str, "text": str,
//    "annotations": [{"start", "end", "surface", "gold_geoname_id"?,
//                     "gold_lat"?, "gold_lon"?, "gold_country"?, "gold_admin1"?,
//                     "gold_feature_class"?, "exclude_gold"?}],
//    "event_trigger"?: {"start", "end"}}
// Offsets count code points.
nlohmann::json DocumentToJson(const Document& doc);
Document DocumentFromJson(const nlohmann::json& j);

std::vector<Document> ReadCorpus(std::istream& in);
std::vector<Document> ReadCorpusFile(const std::string& path);
void WriteCorpus(std::ostream& out, const std::vector<Document>& corpus);
void WriteCorpusFile(const std::string& path, const std::vector<Document>& corpus);

nlohmann::json RecordToJson(const ResolutionRecord& record);
ResolutionRecord RecordFromJson(const nlohmann::json& j);
std::vector<ResolutionRecord> ReadRecords(std::istream& in);
std::vector<ResolutionRecord> ReadRecordsFile(const std::string& path);
void WriteRecords(std::ostream& out, const std::vector<ResolutionRecord>& records);

}  // namespace toporank

#endif  // TOPORANK_CORPUS_H_
