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

#ifndef VECFORGE_EVAL_METRICS_H_
#define VECFORGE_EVAL_METRICS_H_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vecforge/tensor.h"
#include "vecforge/text.h"

namespace vecforge {

struct EditCounts {
  std::size_t substitutions = 0;
  std::size_t insertions = 0;
  std::size_t deletions = 0;
  std::size_t reference_length = 0;

  std::size_t edits() const { return substitutions + insertions + deletions; }
  // edits / reference_length; throws EmptyReference for an empty reference.
  double rate() const;

  EditCounts& operator+=(const EditCounts& other);
  friend bool operator==(const EditCounts&, const EditCounts&) = default;
};

// Levenshtein alignment with unit costs. Among optimal alignments the
// backtrace prefers substitution (or match), then insertion, then deletion.
EditCounts AlignWords(std::span<const std::string> ref, std::span<const std::string> hyp);
EditCounts AlignChars(std::u32string_view ref, std::u32string_view hyp);

struct WerResult {
  double wer = 0.0;
  std::size_t substitutions = 0;
  std::size_t insertions = 0;
  std::size_t deletions = 0;
};

WerResult Wer(std::span<const std::string> ref_tokens, std::span<const std::string> hyp_tokens);
// Character error rate over code points; spaces count as characters.
double Cer(std::string_view ref, std::string_view hyp);

struct EvalRecord {
  std::string id;
  std::string ref_text;
  std::string hyp_text;
  double duration_seconds = 0.0;
};

enum class FilterRule {
  kWordRate,           // hypothesis faster than max_words_per_second
  kMinReferenceWords,  // reference shorter than min_reference_words
  kDurationCap,        // duration_seconds >= max_duration_seconds
};

std::string_view FilterRuleName(FilterRule rule);

struct FilterConfig {
  double max_words_per_second = 6.0;
  std::size_t min_reference_words = 2;
  double max_duration_seconds = 30.0;
  // Word counts are taken after normalizing with this mode.
  TextMode mode = TextMode::kBasicEn;
};

struct RejectedRecord {
  EvalRecord record;
  std::vector<FilterRule> rules;  // every rule that fired, in enum order
};

struct FilterResult {
  std::vector<EvalRecord> kept;
  std::vector<RejectedRecord> rejected;
};

// Partitions records in input order. Throws ConfigError for a non-positive
// duration.
FilterResult FilterRecords(std::span<const EvalRecord> records, const FilterConfig& config = {});

struct CorpusRates {
  double wer = 0.0;
  double cer = 0.0;
  EditCounts words;
  EditCounts chars;
  std::size_t kept = 0;
  std::vector<RejectedRecord> rejected;
};

// Normalizes, filters, then pools edits over all kept records (total edits
// over total reference length). Throws AllFiltered if nothing survives.
CorpusRates CorpusErrorRates(std::span<const EvalRecord> records, const FilterConfig& config = {});

struct EmbeddingSet {
  std::vector<std::string> ids;
  std::vector<Tensor> embeddings;
  std::string label;
};

// Arithmetic mean of the embeddings in 64-bit. Throws DimMismatch for
// ragged or empty sets.
std::vector<double> Centroid(const EmbeddingSet& set);

// Cosine similarity between a sample embedding and the reference centroid.
double AccentSimilarity(const Tensor& sample, const EmbeddingSet& reference);

// Cosine similarity between two utterance embeddings.
double SpeakerSimilarity(const Tensor& reference, const Tensor& synthesized);

}  // namespace vecforge

#endif  // VECFORGE_EVAL_METRICS_H_
