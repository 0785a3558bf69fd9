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

#ifndef TOPORANK_ERROR_H_
#define TOPORANK_ERROR_H_

#include <stdexcept>
#include <string>

namespace toporank {

enum class ErrorCode {
  kIngestion,      // stream could not be read
  kCorruptFile,    // too many malformed gazetteer lines
  kParameter,      // argument outside its declared range
  kConfiguration,  // mismatched dimensions between components
  kInput,          // malformed or non-finite input value
  kIncompatible,   // file written with another format version
  kCorruption,     // truncated or damaged binary file
  kNotFound,       // a required file or entry does not exist
  kUnsatisfiable,  // no data satisfies a request
  kNumerical,      // training diverged
};

const char* ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace toporank

#endif  // TOPORANK_ERROR_H_
