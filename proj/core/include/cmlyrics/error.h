// Copyright 2026 The cmlyrics Authors.
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

#ifndef CMLYRICS_ERROR_H_
#define CMLYRICS_ERROR_H_

#include <stdexcept>
#include <string>

namespace cmlyrics {

// Broad failure classes. The CLI maps kUsage to exit code 1 and everything
// else to exit code 2.
enum class ErrorCategory { kUsage, kData, kModel, kNumeric, kIo };

const char* ErrorCategoryName(ErrorCategory category);

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& detail)
      : std::runtime_error(detail), category_(category) {}

  ErrorCategory category() const { return category_; }

 private:
  ErrorCategory category_;
};

[[noreturn]] inline void ThrowData(const std::string& detail) {
  throw Error(ErrorCategory::kData, detail);
}
[[noreturn]] inline void ThrowModel(const std::string& detail) {
  throw Error(ErrorCategory::kModel, detail);
}
[[noreturn]] inline void ThrowNumeric(const std::string& detail) {
  throw Error(ErrorCategory::kNumeric, detail);
}
[[noreturn]] inline void ThrowUsage(const std::string& detail) {
  throw Error(ErrorCategory::kUsage, detail);
}
[[noreturn]] inline void ThrowIo(const std::string& detail) {
  throw Error(ErrorCategory::kIo, detail);
}

}  // namespace cmlyrics

#endif  // CMLYRICS_ERROR_H_
