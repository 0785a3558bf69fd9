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

#ifndef TOPORANK_UNICODE_H_
#define TOPORANK_UNICODE_H_

#include <string>
#include <string_view>

namespace toporank {

// Invalid sequences decode to U+FFFD.
std::u32string DecodeUtf8(std::string_view text);
std::string EncodeUtf8(std::u32string_view text);

// Number of code points in a UTF-8 string.
size_t CodePointLength(std::string_view text);

// Substring by code point offsets [start, end). Offsets past the end clamp.
std::string SubstrCodePoints(std::string_view text, size_t start, size_t end);

bool IsUppercase(char32_t c);
bool IsAlphanumeric(char32_t c);
bool IsWhitespace(char32_t c);

}  // namespace toporank

#endif  // TOPORANK_UNICODE_H_
