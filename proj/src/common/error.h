// Copyright 2026 The nasvad Authors. All Rights Reserved.
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

#ifndef NASVAD_COMMON_ERROR_H_
#define NASVAD_COMMON_ERROR_H_

#include <stdexcept>
#include <string>

namespace nasvad {

// Broad failure classes. The C API maps these onto status codes and the CLI
// maps them onto exit codes (schema/argument -> 1, io/runtime -> 2).
enum class ErrorCode {
  kInvalidArgument,
  kSchema,
  kIo,
  kRuntime,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

inline Error InvalidArgument(const std::string& what) {
  return Error(ErrorCode::kInvalidArgument, what);
}
inline Error SchemaError(const std::string& what) {
  return Error(ErrorCode::kSchema, what);
}
inline Error IoError(const std::string& what) {
  return Error(ErrorCode::kIo, what);
}
inline Error RuntimeError(const std::string& what) {
  return Error(ErrorCode::kRuntime, what);
}

}  // namespace nasvad

#endif  // NASVAD_COMMON_ERROR_H_
