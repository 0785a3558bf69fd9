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

#ifndef TOPORANK_FIXTURE_H_
#define TOPORANK_FIXTURE_H_

#include <cstdint>
#include <vector>

#include "toporank/gazetteer.h"

namespace toporank {

// Parameters for a generated desk-scale gazetteer in the Geonames layout.
struct FixtureOptions {
  int countries = 24;
  int adm1_per_country = 5;
  int places_per_adm1 = 15;
  // Natural features (rivers, peaks) per country.
  int natural_per_country = 4;
  // Probability that a populated place reuses a name from the shared pool.
  double homonym_rate = 0.12;
  std::uint64_t seed = 7;
};

// Deterministic for fixed options. Always contains France (with Paris as
// PPLC), the United States with Texas, Austin and Paris TX, so small
// hand-written examples have stable anchors.
std::vector<GazetteerEntry> MakeFixtureGazetteer(const FixtureOptions& options = {});

}  // namespace toporank

#endif  // TOPORANK_FIXTURE_H_
