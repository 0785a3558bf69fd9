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

#include "binary_io.h"

#include <fstream>
#include <iterator>

#include <boost/crc.hpp>

namespace toporank::internal {
namespace {

uint32_t Crc32(std::string_view data) {
  boost::crc_32_type crc;
  crc.process_bytes(data.data(), data.size());
  return crc.checksum();
}

constexpr size_t kHeaderSize = 4 + sizeof(uint32_t) + sizeof(uint64_t);

}  // namespace

void BinaryWriter::WriteFile(const std::string& path, std::string_view magic,
                             uint32_t version) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kNotFound, "cannot open for writing: " + path);
  uint64_t size = payload_.size();
  uint32_t crc = Crc32(payload_);
  out.write(magic.data(), 4);
  out.write(reinterpret_cast<const char*>(&version), sizeof(version));
  out.write(reinterpret_cast<const char*>(&size), sizeof(size));
  out.write(payload_.data(), static_cast<std::streamsize>(payload_.size()));
  out.write(reinterpret_cast<const char*>(&crc), sizeof(crc));
  if (!out) throw Error(ErrorCode::kIngestion, "write failed: " + path);
}

BinaryReader::BinaryReader(const std::string& path, std::string_view magic, uint32_t version) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kNotFound, "cannot open: " + path);
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.size() < kHeaderSize + sizeof(uint32_t)) {
    throw Error(ErrorCode::kCorruption, "file too short: " + path);
  }
  if (std::string_view(bytes).substr(0, 4) != magic) {
    throw Error(ErrorCode::kCorruption, "bad magic bytes: " + path);
  }
  uint32_t file_version;
  std::memcpy(&file_version, bytes.data() + 4, sizeof(file_version));
  if (file_version != version) {
    throw Error(ErrorCode::kIncompatible, "format version " + std::to_string(file_version) +
                                              " not supported (expected " +
                                              std::to_string(version) + "): " + path);
  }
  uint64_t size;
  std::memcpy(&size, bytes.data() + 8, sizeof(size));
  if (size != bytes.size() - kHeaderSize - sizeof(uint32_t)) {
    throw Error(ErrorCode::kCorruption, "payload size mismatch (truncated?): " + path);
  }
  payload_ = bytes.substr(kHeaderSize, size);
  uint32_t crc;
  std::memcpy(&crc, bytes.data() + kHeaderSize + size, sizeof(crc));
  if (crc != Crc32(payload_)) throw Error(ErrorCode::kCorruption, "checksum mismatch: " + path);
}

}  // namespace toporank::internal
