#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "denseval/segments.hpp"

namespace denseval {

struct CaptionEvent {
  TemporalSegment segment;
  std::string sentence;

  friend bool operator==(const CaptionEvent&, const CaptionEvent&) = default;
};

// One video's timestamped sentences, as produced by a captioning model.
struct CaptionRecord {
  std::string video_id;
  double duration = 0.0;
  std::vector<CaptionEvent> events;

  ProposalSet proposals() const;

  friend bool operator==(const CaptionRecord&, const CaptionRecord&) = default;
};

struct CaptionLoadResult {
  std::vector<CaptionRecord> records;
  std::vector<std::string> warnings;
};

// Keeps the events whose segments survive NMS at the given threshold,
// preserving the record's event order. Duplicate segments are matched off
// one-for-one against the kept set.
CaptionRecord apply_nms(const CaptionRecord& record, double threshold);

// Captions file: JSON map video_id -> { duration, timestamps, sentences }
// with parallel arrays. An optional "scores" array carries objectness; when
// absent, scores default to list rank (1 - i/n). Throws ParseError for
// undecodable input and ValidationError (naming the video) for invariant
// violations.
CaptionLoadResult load_captions(const std::filesystem::path& path);
void save_captions(const std::vector<CaptionRecord>& records,
                   const std::filesystem::path& path);

inline constexpr const char* kSummaryClasses[] = {
    "Arrest",  "Arson",    "Assault",  "Burglary",      "Explosion", "Normal",
    "RoadAccidents", "Robbery", "Shooting", "Shoplifting", "Vandalism"};

struct GroundTruthSummary {
  std::string video_id;
  std::string class_label;
  std::string text;
};

// CSV with header video_id,class,summary.
std::vector<GroundTruthSummary> load_summaries(const std::filesystem::path& path);
void save_summaries(const std::vector<GroundTruthSummary>& summaries,
                    const std::filesystem::path& path);

struct LabeledSummary {
  std::string text;
  int label = 0;  // 1 = suspicious, 0 = non-suspicious

  friend bool operator==(const LabeledSummary&, const LabeledSummary&) = default;
};

// CSV with header label,text.
std::vector<LabeledSummary> load_labeled(const std::filesystem::path& path);
void save_labeled(const std::vector<LabeledSummary>& data,
                  const std::filesystem::path& path);

struct NormalizeRules {
  bool lowercase = true;
  bool strip_punctuation = true;
  bool remove_stopwords = true;
  bool substitute_person_terms = true;
};

const std::vector<std::string>& default_stopwords();
std::vector<std::string> load_stopwords(const std::filesystem::path& path);

// Applies the enabled rules in declaration order. Person-term substitution
// rewrites "a person"/"person" and "suspect" to "man", "victim" to "woman".
// Idempotent for any fixed rule set.
std::string normalize_text(const std::string& text, const NormalizeRules& rules = {},
                           const std::vector<std::string>& stopwords = default_stopwords());

// Augmentation mode: emits every distinct man/woman assignment for the
// suspect/victim terms (two permutations when either term is present).
std::vector<std::string> normalize_text_variants(
    const std::string& text, const NormalizeRules& rules = {},
    const std::vector<std::string>& stopwords = default_stopwords());

// Joins consecutive groups of k transcripts with ". "; a short trailing
// group is kept unless drop_remainder is set.
std::vector<std::string> merge_transcripts(const std::vector<std::string>& transcripts,
                                           std::size_t k = 3,
                                           bool drop_remainder = false);

struct SplitResult {
  std::vector<LabeledSummary> train;
  std::vector<LabeledSummary> test;
  std::vector<std::string> warnings;
};

// Per-label split: test count is round(n * (1 - ratio)), remainder to train;
// deterministic under seed. A single-class dataset yields a warning.
SplitResult stratified_split(const std::vector<LabeledSummary>& data,
                             double train_ratio, std::uint64_t seed);

}  // namespace denseval
