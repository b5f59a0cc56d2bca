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

#ifndef NASVAD_COMMON_LOGGING_H_
#define NASVAD_COMMON_LOGGING_H_

#include <functional>
#include <sstream>
#include <string>

namespace nasvad {

enum class LogLevel { kDebug = 0, kInfo = 1, kWarning = 2, kError = 3, kSilent = 4 };

using LogSink = std::function<void(LogLevel, const std::string&)>;

void set_log_level(LogLevel level);
LogLevel log_level();

// Replaces the sink (default: stderr). Passing an empty function restores it.
void set_log_sink(LogSink sink);

void log_message(LogLevel level, const std::string& message);

}  // namespace nasvad

#define NASVAD_LOG(level, expr)                                   \
  do {                                                            \
    if (::nasvad::LogLevel::level >= ::nasvad::log_level()) {     \
      std::ostringstream nasvad_log_os_;                          \
      nasvad_log_os_ << expr;                                     \
      ::nasvad::log_message(::nasvad::LogLevel::level,            \
                            nasvad_log_os_.str());                \
    }                                                             \
  } while (0)

#endif  // NASVAD_COMMON_LOGGING_H_
