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

#ifndef CMLYRICS_CMFEATURES_H_
#define CMLYRICS_CMFEATURES_H_

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cmlyrics/langid.h"

namespace cmlyrics {

// The four code-mixing statistics of a song. "Non-Telugu" means tagged En;
// Other tokens never count.
struct CodeMixFeatures {
  double s1 = 0.0;  // number of En words
  double s2 = 0.0;  // mean character length of En words
  double s3 = 0.0;  // number of sentences whose Word tokens are > 50% En
  double s4 = 0.0;  // mean Word-token count of those sentences

  std::array<double, 4> AsArray() const { return {s1, s2, s3, s4}; }
  bool operator==(const CodeMixFeatures&) const = default;
};

CodeMixFeatures ExtractCodeMixedFeatures(
    std::span<const TaggedSentence> tagged);

struct FeatureScaler {
  std::array<double, 4> mean{0, 0, 0, 0};
  std::array<double, 4> stdev{1, 1, 1, 1};

  // (f - mean) / stdev, componentwise.
  std::array<double, 4> Scale(const CodeMixFeatures& f) const;

  bool operator==(const FeatureScaler&) const = default;
};

// Population mean and standard deviation per component; components with
// stdev < 1e-12 get stdev 1. Throws Error(kData) on an empty list.
FeatureScaler FitScaler(std::span<const CodeMixFeatures> features);

// "id<TAB>s1<TAB>s2<TAB>s3<TAB>s4" in shortest round-trip form, no newline.
std::string FormatFeatureLine(std::string_view id, const CodeMixFeatures& f);

}  // namespace cmlyrics

#endif  // CMLYRICS_CMFEATURES_H_
