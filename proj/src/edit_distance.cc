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

#include "toporank/edit_distance.h"

#include <algorithm>
#include <limits>
#include <vector>

#include "toporank/unicode.h"

namespace toporank {

size_t EditDistance(std::u32string_view a, std::u32string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<size_t> row(b.size() + 1);
  for (size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (size_t i = 1; i <= a.size(); ++i) {
    size_t diagonal = row[0];
    row[0] = i;
    for (size_t j = 1; j <= b.size(); ++j) {
      size_t above = row[j];
      size_t substitute = diagonal + (a[i - 1] == b[j - 1] ? 0 : 1);
      row[j] = std::min({above + 1, row[j - 1] + 1, substitute});
      diagonal = above;
    }
  }
  return row[b.size()];
}

size_t EditDistance(std::string_view a, std::string_view b) {
  return EditDistance(DecodeUtf8(a), DecodeUtf8(b));
}

std::optional<size_t> BoundedEditDistance(std::u32string_view a, std::u32string_view b,
                                          size_t limit) {
  if (a.size() < b.size()) std::swap(a, b);
  const size_t n = a.size();
  const size_t m = b.size();
  if (n - m > limit) return std::nullopt;
  if (m == 0) return n;

  constexpr size_t kInf = std::numeric_limits<size_t>::max() / 2;
  std::vector<size_t> prev(m + 1, kInf);
  std::vector<size_t> cur(m + 1, kInf);
  for (size_t j = 0; j <= std::min(m, limit); ++j) prev[j] = j;

  for (size_t i = 1; i <= n; ++i) {
    const size_t lo = i > limit ? i - limit : 0;
    const size_t hi = std::min(m, i + limit);
    std::fill(cur.begin(), cur.end(), kInf);
    if (lo == 0) cur[0] = i;
    size_t row_min = lo == 0 ? cur[0] : kInf;
    for (size_t j = std::max<size_t>(lo, 1); j <= hi; ++j) {
      size_t best = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      best = std::min(best, prev[j] + 1);
      best = std::min(best, cur[j - 1] + 1);
      cur[j] = best;
      row_min = std::min(row_min, best);
    }
    if (row_min > limit) return std::nullopt;
    std::swap(prev, cur);
  }
  if (prev[m] > limit) return std::nullopt;
  return prev[m];
}

}  // namespace toporank
