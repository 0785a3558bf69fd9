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

#ifndef TOPORANK_SYNTHGEN_H_
#define TOPORANK_SYNTHGEN_H_

#include <cstdint>
#include <string>
#include <vector>

#include "toporank/gazetteer.h"
#include "toporank/pipeline.h"

namespace toporank {

enum class Relation {
  kCityInState,       // {PLACE} is a populated place inside ADM1 {PARENT}
  kCapitalOfCountry,  // {PLACE} is the PPLC of {COUNTRY}
  kCityInCountry,     // {PLACE} is a populated place in {COUNTRY}
  kStandalone,        // {PLACE} alone
};

const char* RelationName(Relation relation);

// Slots are {PLACE}, {PARENT} and {COUNTRY}. {PARENT} is only valid for
// kCityInState; {COUNTRY} may appear in any relation.
struct Template {
  std::string pattern;
  Relation relation;

  // Throws kParameter if a required slot is missing or a slot is not
  // fillable for the relation.
  void Validate() const;
};

const std::vector<Template>& DefaultTemplates();

// Documents sampled uniformly over satisfiable templates, places weighted
// by 1 + log10(population + 1). Every inserted name is gold-annotated.
std::vector<Document> GenerateCorpus(const std::vector<GazetteerEntry>& gazetteer,
                                     const AdminTables& admin, size_t n, std::uint64_t seed,
                                     const std::vector<Template>& templates = DefaultTemplates());

// Flags each gold-annotated toponym as exclude_gold with probability
// |fraction|. Text and offsets are never touched.
std::vector<Document> AugmentImpossible(std::vector<Document> corpus, double fraction,
                                        std::uint64_t seed);

inline constexpr double kDefaultImpossibleFraction = 0.10;

}  // namespace toporank

#endif  // TOPORANK_SYNTHGEN_H_
