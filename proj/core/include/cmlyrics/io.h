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

#ifndef CMLYRICS_IO_H_
#define CMLYRICS_IO_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace cmlyrics {

// Whole-file helpers; both throw Error(kIo) on failure.
std::string ReadFile(const std::filesystem::path& path);
void WriteFile(const std::filesystem::path& path, std::string_view content);

// 64-bit FNV-1a, used as a content key for caches.
uint64_t Fnv1a64(std::string_view data);

// Shortest decimal form that parses back to the same double.
std::string FormatDouble(double value);

}  // namespace cmlyrics

#endif  // CMLYRICS_IO_H_
