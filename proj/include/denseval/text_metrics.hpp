#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "denseval/parallel.hpp"

namespace denseval {

using TokenSequence = std::vector<std::string>;
using NGram = std::vector<std::string>;

// Lowercases, splits on whitespace, strips leading/trailing punctuation from
// each token, drops tokens that end up empty.
TokenSequence tokenize(const std::string& text);

struct NGramProfile {
  int n = 1;
  std::map<NGram, int> counts;
};

NGramProfile ngram_profile(const TokenSequence& tokens, int n);

// Clipped n-gram precision: each candidate n-gram is credited at most the
// maximum count any single reference gives it. 0 when the candidate has no
// n-grams; std::domain_error when references is empty.
double modified_ngram_precision(const TokenSequence& candidate,
                                const std::vector<TokenSequence>& references,
                                int n);

// exp(-max(0, r/c - 1)); 1 whenever r <= c. c = 0 is a domain error.
double brevity_penalty(std::size_t reference_len, std::size_t candidate_len);

enum class BleuMode { Individual, Cumulative };

struct BleuResult {
  int n = 1;
  double precision = 0.0;       // geometric mean of p_1..p_n in cumulative mode
  double brevity_penalty = 1.0;
  double score = 0.0;           // precision * brevity_penalty * 100
};

// The reference length closest to the candidate length, ties toward the
// shorter reference.
std::size_t effective_reference_length(const std::vector<TokenSequence>& references,
                                       std::size_t candidate_len);

BleuResult bleu(const TokenSequence& candidate,
                const std::vector<TokenSequence>& references, int n,
                BleuMode mode = BleuMode::Individual);

struct MeteorResult {
  int matched_unigrams = 0;  // u_m
  int chunk_count = 0;       // ch
  double precision = 0.0;
  double recall = 0.0;
  double fmean = 0.0;        // 10PR / (R + 9P)
  double penalty = 0.0;      // 0.5 * (ch/u_m)^3
  double score = 0.0;        // fmean * (1 - penalty)
};

// Exact-string unigram alignment maximizing matched_unigrams and, among
// maximal alignments, minimizing the chunk count. Empty candidate or
// reference is a domain error.
MeteorResult meteor(const TokenSequence& candidate, const TokenSequence& reference);

struct EvalReport {
  std::array<double, 4> bleu{};   // BLEU@1..4, each 0..100
  double meteor = 0.0;            // scaled to 0..100
  BleuMode mode = BleuMode::Individual;
  std::size_t pairs_evaluated = 0;
  std::size_t pairs_skipped = 0;
  std::vector<std::string> warnings;
};

struct CorpusEvalOptions {
  BleuMode mode = BleuMode::Individual;
  Execution exec = Execution::Parallel;
};

// Per-pair BLEU@1..4 and METEOR, macro-averaged over pairs. Pairs whose
// reference tokenizes to nothing are skipped with a warning; throws
// ValidationError if the pair list is empty or every pair is skipped.
EvalReport corpus_eval(const std::vector<std::pair<std::string, std::string>>& pairs,
                       const CorpusEvalOptions& options = {});

}  // namespace denseval
