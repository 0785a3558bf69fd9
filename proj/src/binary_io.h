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

#ifndef TOPORANK_SRC_BINARY_IO_H_
#define TOPORANK_SRC_BINARY_IO_H_

#include <cstdint>
#include <cstring>
#include <string>
#include <string_view>
#include <type_traits>

#include "toporank/error.h"

namespace toporank::internal {

// Container layout: 4-byte magic, u32 version, u64 payload size, payload,
// u32 CRC-32 of the payload. Integers are little-endian host order.
class BinaryWriter {
 public:
  template <typename T>
  void Put(T value) {
    static_assert(std::is_arithmetic_v<T>);
    char buf[sizeof(T)];
    std::memcpy(buf, &value, sizeof(T));
    payload_.append(buf, sizeof(T));
  }
  void PutString(std::string_view s) {
    Put<uint64_t>(s.size());
    payload_.append(s.data(), s.size());
  }
  void PutDoubles(const double* data, size_t n) {
    Put<uint64_t>(n);
    payload_.append(reinterpret_cast<const char*>(data), n * sizeof(double));
  }

  void WriteFile(const std::string& path, std::string_view magic, uint32_t version) const;

 private:
  std::string payload_;
};

class BinaryReader {
 public:
  // Validates the container. Throws kNotFound, kCorruption or kIncompatible.
  BinaryReader(const std::string& path, std::string_view magic, uint32_t version);

  template <typename T>
  T Get() {
    static_assert(std::is_arithmetic_v<T>);
    Need(sizeof(T));
    T value;
    std::memcpy(&value, payload_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return value;
  }
  std::string GetString() {
    auto n = Get<uint64_t>();
    Need(n);
    std::string s = payload_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  void GetDoubles(double* data, size_t expected) {
    auto n = Get<uint64_t>();
    if (n != expected) throw Error(ErrorCode::kCorruption, "parameter block size mismatch");
    Need(n * sizeof(double));
    std::memcpy(data, payload_.data() + pos_, n * sizeof(double));
    pos_ += n * sizeof(double);
  }
  // Upper bound for element counts read from the file.
  size_t remaining() const { return payload_.size() - pos_; }
  void ExpectEnd() const {
    if (pos_ != payload_.size()) throw Error(ErrorCode::kCorruption, "trailing bytes in payload");
  }

 private:
  void Need(uint64_t n) const {
    if (n > payload_.size() - pos_) throw Error(ErrorCode::kCorruption, "unexpected end of payload");
  }

  std::string payload_;
  size_t pos_ = 0;
};

}  // namespace toporank::internal

#endif  // TOPORANK_SRC_BINARY_IO_H_
