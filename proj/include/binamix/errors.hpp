// Copyright 2026 The Binamix Authors
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

#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace binamix {

enum class ErrorCode {
  kInvalidArgument,
  kInsufficientPoints,
  kNoEnclosingTriangle,
  kNotFound,
  kFormat,
  kEmptyImport,
  kUnsupportedLayout,
  kIo,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so
/// callers (and the CLI) can branch on the kind without parsing text.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Non-fatal conditions (clamped parameters, merged duplicates, mode
// fallbacks) are reported through a process-wide sink. The default sink
// writes to stderr; tests and the CLI may install their own.
using WarningSink = std::function<void(std::string_view)>;

void set_warning_sink(WarningSink sink);
void warn(std::string_view message);

/// Installs a sink for the lifetime of the object and restores the previous
/// one on destruction.
class ScopedWarningSink {
 public:
  explicit ScopedWarningSink(WarningSink sink);
  ~ScopedWarningSink();
  ScopedWarningSink(const ScopedWarningSink&) = delete;
  ScopedWarningSink& operator=(const ScopedWarningSink&) = delete;

 private:
  WarningSink previous_;
};

}  // namespace binamix
