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

// Independent reference implementations used by the unit and acceptance
// tests: exhaustive CRF enumeration and central finite differences.
#ifndef CMLYRICS_TESTS_ORACLES_H_
#define CMLYRICS_TESTS_ORACLES_H_

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "cmlyrics/cmfeatures.h"
#include "cmlyrics/crf.h"
#include "cmlyrics/rng.h"

namespace cmlyrics::testing {

// Random model with n_features features and weights uniform in [-scale, scale].
inline CrfModel RandomCrfModel(Rng& rng, size_t n_features, double scale) {
  CrfModel m;
  for (size_t f = 0; f < n_features; ++f) m.AddFeature("f" + std::to_string(f));
  for (double& w : m.weights()) w = rng.Uniform(-scale, scale);
  return m;
}

// T tokens, each carrying 1..3 random feature ids.
inline FeaturizedSentence RandomSentence(Rng& rng, size_t T, size_t n_features) {
  FeaturizedSentence x;
  for (size_t t = 0; t < T; ++t) {
    std::vector<int> ids;
    const size_t n = 1 + rng.Below(3);
    for (size_t i = 0; i < n; ++i) ids.push_back(static_cast<int>(rng.Below(n_features)));
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    x.feature_ids.push_back(ids);
  }
  return x;
}

// Scores a labelling straight from the weight layout, without EmissionScores.
inline double DirectScore(const CrfModel& m, const FeaturizedSentence& x,
                          const std::vector<int>& y) {
  double s = 0.0;
  for (size_t t = 0; t < x.size(); ++t) {
    for (int f : x.feature_ids[t]) s += m.emission(static_cast<size_t>(f), y[t]);
    s += t == 0 ? m.begin(y[0]) : m.transition(y[t - 1], y[t]);
  }
  return s;
}

// Calls fn on every labelling of length T over K tags.
inline void ForEachLabelling(size_t T, size_t K,
                             const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> y(T, 0);
  for (;;) {
    fn(y);
    size_t t = 0;
    while (t < T && ++y[t] == static_cast<int>(K)) y[t++] = 0;
    if (t == T) return;
  }
}

inline double BruteLogPartition(const CrfModel& m, const FeaturizedSentence& x) {
  std::vector<double> scores;
  ForEachLabelling(x.size(), m.num_tags(),
                   [&](const std::vector<int>& y) { scores.push_back(DirectScore(m, x, y)); });
  const double mx = *std::max_element(scores.begin(), scores.end());
  double sum = 0.0;
  for (double s : scores) sum += std::exp(s - mx);
  return mx + std::log(sum);
}

// Exhaustive argmax; the first labelling in enumeration order wins ties.
inline std::vector<int> BruteArgmax(const CrfModel& m, const FeaturizedSentence& x) {
  std::vector<int> best;
  double best_score = -std::numeric_limits<double>::infinity();
  ForEachLabelling(x.size(), m.num_tags(), [&](const std::vector<int>& y) {
    const double s = DirectScore(m, x, y);
    if (s > best_score) {
      best_score = s;
      best = y;
    }
  });
  return best;
}

// Central difference of f with respect to x[i].
inline double CentralDifference(std::vector<double>& x, size_t i,
                                const std::function<double()>& f, double h) {
  const double saved = x[i];
  x[i] = saved + h;
  const double up = f();
  x[i] = saved - h;
  const double down = f();
  x[i] = saved;
  return (up - down) / (2.0 * h);
}

// |a - b| relative to the larger magnitude, with a floor for tiny values.
inline double GradRelError(double analytic, double numeric, double floor = 1e-6) {
  return std::abs(analytic - numeric) /
         std::max({std::abs(analytic), std::abs(numeric), floor});
}

// Random tagged song: 0..5 sentences of Word tokens tagged Te or En, with
// punctuation and numbers tagged Other mixed in.
inline std::vector<TaggedSentence> RandomTaggedSong(Rng& rng) {
  static const char* kWords[] = {"naa", "love", "ga", "heart", "o", "nuvvu", "baby", "chali"};
  std::vector<TaggedSentence> song(rng.Below(6));
  for (auto& s : song) {
    const size_t n = rng.Below(7);
    for (size_t i = 0; i < n; ++i) {
      const size_t r = rng.Below(10);
      if (r == 0) {
        s.tokens.push_back({"!", TokenKind::kPunct});
        s.tags.push_back(LangTag::kOther);
      } else if (r == 1) {
        s.tokens.push_back({"42", TokenKind::kNumber});
        s.tags.push_back(LangTag::kOther);
      } else {
        s.tokens.push_back({kWords[rng.Below(8)], TokenKind::kWord});
        s.tags.push_back(rng.Below(2) ? LangTag::kEn : LangTag::kTe);
      }
    }
  }
  return song;
}

// Code-mix statistics counted token by token, independent of the library.
inline CodeMixFeatures CountCodeMix(const std::vector<TaggedSentence>& song) {
  double en = 0, en_chars = 0, sents = 0, sent_words = 0;
  for (const auto& s : song) {
    int words = 0, en_words = 0;
    for (size_t i = 0; i < s.tokens.size(); ++i) {
      if (s.tokens[i].kind != TokenKind::kWord) continue;
      ++words;
      if (s.tags[i] == LangTag::kEn) {
        ++en_words;
        ++en;
        en_chars += s.tokens[i].surface.size();
      }
    }
    if (words > 0 && 2 * en_words > words) {
      ++sents;
      sent_words += words;
    }
  }
  CodeMixFeatures f;
  f.s1 = en;
  f.s2 = en > 0 ? en_chars / en : 0.0;
  f.s3 = sents;
  f.s4 = sents > 0 ? sent_words / sents : 0.0;
  return f;
}

}  // namespace cmlyrics::testing

#endif  // CMLYRICS_TESTS_ORACLES_H_
