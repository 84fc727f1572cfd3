// Copyright 2026 The vecforge Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "vecforge/eval_metrics.h"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "vecforge/error.h"

namespace vecforge {

double EditCounts::rate() const {
  if (reference_length == 0) {
    throw Error(ErrorCode::kEmptyReference, "error rate over an empty reference");
  }
  return static_cast<double>(edits()) / static_cast<double>(reference_length);
}

EditCounts& EditCounts::operator+=(const EditCounts& other) {
  substitutions += other.substitutions;
  insertions += other.insertions;
  deletions += other.deletions;
  reference_length += other.reference_length;
  return *this;
}

namespace {

template <typename T>
EditCounts Align(std::span<const T> ref, std::span<const T> hyp) {
  const std::size_t n = ref.size();
  const std::size_t m = hyp.size();
  const std::size_t stride = m + 1;
  std::vector<std::size_t> dist((n + 1) * stride);
  auto d = [&](std::size_t i, std::size_t j) -> std::size_t& { return dist[i * stride + j]; };
  for (std::size_t i = 0; i <= n; ++i) d(i, 0) = i;
  for (std::size_t j = 0; j <= m; ++j) d(0, j) = j;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t diag = d(i - 1, j - 1) + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
      d(i, j) = std::min({diag, d(i, j - 1) + 1, d(i - 1, j) + 1});
    }
  }

  EditCounts counts;
  counts.reference_length = n;
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0) {
      const bool same = ref[i - 1] == hyp[j - 1];
      if (d(i, j) == d(i - 1, j - 1) + (same ? 0 : 1)) {
        if (!same) ++counts.substitutions;
        --i;
        --j;
        continue;
      }
    }
    if (j > 0 && d(i, j) == d(i, j - 1) + 1) {
      ++counts.insertions;
      --j;
    } else {
      ++counts.deletions;
      --i;
    }
  }
  return counts;
}

}  // namespace

EditCounts AlignWords(std::span<const std::string> ref, std::span<const std::string> hyp) {
  return Align(ref, hyp);
}

EditCounts AlignChars(std::u32string_view ref, std::u32string_view hyp) {
  return Align(std::span<const char32_t>(ref.data(), ref.size()),
               std::span<const char32_t>(hyp.data(), hyp.size()));
}

WerResult Wer(std::span<const std::string> ref_tokens, std::span<const std::string> hyp_tokens) {
  if (ref_tokens.empty()) throw Error(ErrorCode::kEmptyReference, "WER needs reference tokens");
  const EditCounts c = AlignWords(ref_tokens, hyp_tokens);
  return {c.rate(), c.substitutions, c.insertions, c.deletions};
}

double Cer(std::string_view ref, std::string_view hyp) {
  const std::u32string r = ToCodePoints(ref);
  if (r.empty()) throw Error(ErrorCode::kEmptyReference, "CER needs a non-empty reference");
  return AlignChars(r, ToCodePoints(hyp)).rate();
}

std::string_view FilterRuleName(FilterRule rule) {
  switch (rule) {
    case FilterRule::kWordRate: return "word_rate";
    case FilterRule::kMinReferenceWords: return "min_reference_words";
    case FilterRule::kDurationCap: return "duration_cap";
  }
  return "unknown";
}

FilterResult FilterRecords(std::span<const EvalRecord> records, const FilterConfig& config) {
  FilterResult result;
  for (const EvalRecord& r : records) {
    if (!(r.duration_seconds > 0.0) || !std::isfinite(r.duration_seconds)) {
      throw Error(ErrorCode::kConfigError,
                  fmt::format("record '{}' has duration {}", r.id, r.duration_seconds));
    }
    const std::size_t hyp_words = SplitWords(NormalizeText(r.hyp_text, config.mode)).size();
    const std::size_t ref_words = SplitWords(NormalizeText(r.ref_text, config.mode)).size();
    std::vector<FilterRule> fired;
    if (static_cast<double>(hyp_words) / r.duration_seconds > config.max_words_per_second) {
      fired.push_back(FilterRule::kWordRate);
    }
    if (ref_words < config.min_reference_words) fired.push_back(FilterRule::kMinReferenceWords);
    if (r.duration_seconds >= config.max_duration_seconds) fired.push_back(FilterRule::kDurationCap);
    if (fired.empty()) {
      result.kept.push_back(r);
    } else {
      result.rejected.push_back({r, std::move(fired)});
    }
  }
  return result;
}

CorpusRates CorpusErrorRates(std::span<const EvalRecord> records, const FilterConfig& config) {
  FilterResult filtered = FilterRecords(records, config);
  CorpusRates rates;
  for (const EvalRecord& r : filtered.kept) {
    const std::string ref = NormalizeText(r.ref_text, config.mode);
    const std::string hyp = NormalizeText(r.hyp_text, config.mode);
    const auto ref_words = SplitWords(ref);
    if (ref_words.empty()) continue;
    rates.words += AlignWords(ref_words, SplitWords(hyp));
    rates.chars += AlignChars(ToCodePoints(ref), ToCodePoints(hyp));
    ++rates.kept;
  }
  rates.rejected = std::move(filtered.rejected);
  if (rates.kept == 0) {
    throw Error(ErrorCode::kAllFiltered,
                fmt::format("all {} records were filtered out", records.size()));
  }
  rates.wer = rates.words.rate();
  rates.cer = rates.chars.rate();
  return rates;
}

std::vector<double> Centroid(const EmbeddingSet& set) {
  if (set.embeddings.empty()) {
    throw Error(ErrorCode::kDimMismatch, "reference embedding set is empty");
  }
  const Shape& shape = set.embeddings.front().shape();
  std::vector<double> mean(set.embeddings.front().size(), 0.0);
  for (const Tensor& e : set.embeddings) {
    if (e.shape() != shape) {
      throw Error(ErrorCode::kDimMismatch,
                  fmt::format("embedding shapes {} and {} differ", ShapeString(shape),
                              ShapeString(e.shape())));
    }
    auto d = e.data();
    for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += d[i];
  }
  const auto n = static_cast<double>(set.embeddings.size());
  for (double& v : mean) v /= n;
  return mean;
}

double AccentSimilarity(const Tensor& sample, const EmbeddingSet& reference) {
  const std::vector<double> centroid = Centroid(reference);
  if (sample.size() != centroid.size()) {
    throw Error(ErrorCode::kDimMismatch,
                fmt::format("sample has {} dims, references have {}", sample.size(),
                            centroid.size()));
  }
  double dot = 0.0, ns = 0.0, nc = 0.0;
  auto d = sample.data();
  for (std::size_t i = 0; i < centroid.size(); ++i) {
    dot += d[i] * centroid[i];
    ns += static_cast<double>(d[i]) * d[i];
    nc += centroid[i] * centroid[i];
  }
  if (std::sqrt(ns) < 1e-12 || std::sqrt(nc) < 1e-12) {
    throw Error(ErrorCode::kZeroNorm, "accent similarity with a zero-norm vector");
  }
  return std::clamp(dot / std::sqrt(ns * nc), -1.0, 1.0);
}

double SpeakerSimilarity(const Tensor& reference, const Tensor& synthesized) {
  if (reference.size() != synthesized.size()) {
    throw Error(ErrorCode::kDimMismatch, "speaker embeddings differ in size");
  }
  const Tensor flat_ref({reference.size()}, {reference.data().begin(), reference.data().end()});
  const Tensor flat_syn({synthesized.size()},
                        {synthesized.data().begin(), synthesized.data().end()});
  return CosineSimilarity(flat_ref, flat_syn);
}

}  // namespace vecforge
