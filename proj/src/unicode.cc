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

#include "toporank/unicode.h"

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include "toporank/error.h"

namespace toporank {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIngestion: return "ingestion error";
    case ErrorCode::kCorruptFile: return "corrupt file";
    case ErrorCode::kParameter: return "parameter error";
    case ErrorCode::kConfiguration: return "configuration error";
    case ErrorCode::kInput: return "input error";
    case ErrorCode::kIncompatible: return "incompatible format";
    case ErrorCode::kCorruption: return "corrupted file";
    case ErrorCode::kNotFound: return "not found";
    case ErrorCode::kUnsatisfiable: return "unsatisfiable";
    case ErrorCode::kNumerical: return "numerical error";
  }
  return "error";
}

std::u32string DecodeUtf8(std::string_view text) {
  std::u32string out;
  out.reserve(text.size());
  const auto* s = reinterpret_cast<const uint8_t*>(text.data());
  int32_t i = 0;
  const auto length = static_cast<int32_t>(text.size());
  while (i < length) {
    UChar32 c;
    U8_NEXT(s, i, length, c);
    out.push_back(c < 0 ? U'�' : static_cast<char32_t>(c));
  }
  return out;
}

std::string EncodeUtf8(std::u32string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char32_t c : text) {
    uint8_t buf[U8_MAX_LENGTH];
    int32_t n = 0;
    UBool error = false;
    U8_APPEND(buf, n, U8_MAX_LENGTH, static_cast<UChar32>(c), error);
    if (error) {
      out += "\xEF\xBF\xBD";
    } else {
      out.append(reinterpret_cast<const char*>(buf), n);
    }
  }
  return out;
}

size_t CodePointLength(std::string_view text) {
  size_t n = 0;
  for (unsigned char c : text) {
    if ((c & 0xC0) != 0x80) ++n;
  }
  return n;
}

std::string SubstrCodePoints(std::string_view text, size_t start, size_t end) {
  size_t cp = 0;
  size_t byte_start = text.size();
  size_t byte_end = text.size();
  for (size_t i = 0; i <= text.size(); ++i) {
    bool boundary = i == text.size() || (static_cast<unsigned char>(text[i]) & 0xC0) != 0x80;
    if (!boundary) continue;
    if (cp == start && byte_start == text.size()) byte_start = i;
    if (cp == end) {
      byte_end = i;
      break;
    }
    ++cp;
  }
  if (byte_start >= byte_end) return {};
  return std::string(text.substr(byte_start, byte_end - byte_start));
}

bool IsUppercase(char32_t c) { return u_isupper(static_cast<UChar32>(c)) || u_istitle(c); }

bool IsAlphanumeric(char32_t c) {
  auto type = u_charType(static_cast<UChar32>(c));
  return u_isalnum(static_cast<UChar32>(c)) || type == U_NON_SPACING_MARK ||
         type == U_COMBINING_SPACING_MARK;
}

bool IsWhitespace(char32_t c) { return u_isUWhiteSpace(static_cast<UChar32>(c)); }

}  // namespace toporank
