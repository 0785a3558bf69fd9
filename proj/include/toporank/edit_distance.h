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

#ifndef TOPORANK_EDIT_DISTANCE_H_
#define TOPORANK_EDIT_DISTANCE_H_

#include <optional>
#include <string>
#include <string_view>

namespace toporank {

// Levenshtein distance with unit costs, over code points.
size_t EditDistance(std::u32string_view a, std::u32string_view b);
size_t EditDistance(std::string_view a, std::string_view b);

// Distance if it is at most |limit|, otherwise nullopt. Only the diagonal
// band of width 2 * limit + 1 is filled.
std::optional<size_t> BoundedEditDistance(std::u32string_view a,
                                          std::u32string_view b, size_t limit);

}  // namespace toporank

#endif  // TOPORANK_EDIT_DISTANCE_H_
