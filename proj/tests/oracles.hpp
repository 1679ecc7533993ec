// Slow reference implementations used only to cross-check the library.
// Deliberately structured differently from the production code.
#pragma once

#include <algorithm>
#include <climits>
#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "denseval/detection_metrics.hpp"
#include "denseval/segments.hpp"
#include "denseval/text_metrics.hpp"

namespace oracles {

inline double tiou(const denseval::TemporalSegment& a, const denseval::TemporalSegment& b) {
  const double inter = std::min(a.end, b.end) - std::max(a.start, b.start);
  if (inter <= 0.0) return 0.0;
  const double uni = (a.end - a.start) + (b.end - b.start) - inter;
  return inter / uni;
}

// Literal restatement of greedy suppression on a shrinking worklist.
inline std::vector<denseval::TemporalSegment> naive_nms(
    std::vector<denseval::TemporalSegment> pending, double threshold) {
  auto precedes = [](const denseval::TemporalSegment& a, const denseval::TemporalSegment& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.start != b.start) return a.start < b.start;
    return a.end < b.end;
  };
  std::vector<denseval::TemporalSegment> kept;
  while (!pending.empty()) {
    std::size_t top = 0;
    for (std::size_t i = 1; i < pending.size(); ++i)
      if (precedes(pending[i], pending[top])) top = i;
    const denseval::TemporalSegment winner = pending[top];
    kept.push_back(winner);
    std::vector<denseval::TemporalSegment> rest;
    for (std::size_t i = 0; i < pending.size(); ++i) {
      if (i == top) continue;
      if (oracles::tiou(winner, pending[i]) > threshold) continue;
      rest.push_back(pending[i]);
    }
    pending = std::move(rest);
  }
  return kept;
}

inline bool ngram_equal(const denseval::TokenSequence& a, std::size_t i,
                        const denseval::TokenSequence& b, std::size_t j, int n) {
  for (int k = 0; k < n; ++k)
    if (a[i + static_cast<std::size_t>(k)] != b[j + static_cast<std::size_t>(k)])
      return false;
  return true;
}

// Clipped precision by direct window scans, no count tables.
inline double clipped_precision(const denseval::TokenSequence& cand,
                                const std::vector<denseval::TokenSequence>& refs, int n) {
  const auto nn = static_cast<std::size_t>(n);
  if (cand.size() < nn) return 0.0;
  const std::size_t total = cand.size() - nn + 1;
  double clipped = 0.0;
  for (std::size_t i = 0; i < total; ++i) {
    bool first = true;
    for (std::size_t j = 0; j < i && first; ++j)
      if (ngram_equal(cand, j, cand, i, n)) first = false;
    if (!first) continue;
    int in_cand = 0;
    for (std::size_t j = 0; j < total; ++j)
      if (ngram_equal(cand, j, cand, i, n)) ++in_cand;
    int best_ref = 0;
    for (const auto& ref : refs) {
      if (ref.size() < nn) continue;
      int c = 0;
      for (std::size_t j = 0; j + nn <= ref.size(); ++j)
        if (ngram_equal(ref, j, cand, i, n)) ++c;
      best_ref = std::max(best_ref, c);
    }
    clipped += std::min(in_cand, best_ref);
  }
  return clipped / static_cast<double>(total);
}

struct Alignment {
  int matches = 0;
  int chunks = 0;
};

// Exhaustive alignment search: maximal unigram matching is forced (its size
// follows from per-word counts); chunks are counted directly as runs of
// consecutive reference positions.
inline Alignment align(const denseval::TokenSequence& cand,
                       const denseval::TokenSequence& ref) {
  int target = 0;
  for (std::size_t i = 0; i < cand.size(); ++i) {
    bool first = true;
    for (std::size_t j = 0; j < i && first; ++j)
      if (cand[j] == cand[i]) first = false;
    if (!first) continue;
    int in_cand = 0, in_ref = 0;
    for (const auto& w : cand)
      if (w == cand[i]) ++in_cand;
    for (const auto& w : ref)
      if (w == cand[i]) ++in_ref;
    target += std::min(in_cand, in_ref);
  }
  if (target == 0) return {0, 0};

  int best_chunks = INT_MAX;
  std::vector<bool> used(ref.size(), false);
  std::function<void(std::size_t, int, int, int)> dfs = [&](std::size_t i, int prev_ref,
                                                            int matches, int chunks) {
    if (chunks >= best_chunks) return;
    const int remaining = static_cast<int>(cand.size() - i);
    if (matches + remaining < target) return;
    if (i == cand.size()) {
      if (matches == target) best_chunks = std::min(best_chunks, chunks);
      return;
    }
    for (std::size_t r = 0; r < ref.size(); ++r) {
      if (used[r] || ref[r] != cand[i]) continue;
      used[r] = true;
      const bool extends = prev_ref >= 0 && r == static_cast<std::size_t>(prev_ref) + 1;
      dfs(i + 1, static_cast<int>(r), matches + 1, chunks + (extends ? 0 : 1));
      used[r] = false;
    }
    dfs(i + 1, -1, matches, chunks);  // an unmatched word breaks any run
  };
  dfs(0, -1, 0, 0);
  return {target, best_chunks};
}

// All-point interpolated AP with a quadratic max-scan envelope.
inline double interpolated_ap(const std::vector<bool>& is_tp, std::size_t num_gt) {
  std::vector<double> recall, precision;
  std::size_t tp = 0;
  for (std::size_t i = 0; i < is_tp.size(); ++i) {
    if (is_tp[i]) ++tp;
    recall.push_back(static_cast<double>(tp) / static_cast<double>(num_gt));
    precision.push_back(static_cast<double>(tp) / static_cast<double>(i + 1));
  }
  double ap = 0.0;
  double prev_recall = 0.0;
  for (std::size_t i = 0; i < recall.size(); ++i) {
    double envelope = 0.0;
    for (std::size_t j = i; j < precision.size(); ++j)
      envelope = std::max(envelope, precision[j]);
    ap += (recall[i] - prev_recall) * envelope;
    prev_recall = recall[i];
  }
  return ap;
}

// Independent restatement of the ranked matching rule.
inline std::vector<bool> greedy_match_flags(
    std::vector<denseval::Detection> detections,
    const std::vector<denseval::GroundTruthInstance>& gts, double threshold) {
  std::sort(detections.begin(), detections.end(),
            [](const denseval::Detection& a, const denseval::Detection& b) {
              if (a.segment.score != b.segment.score) return a.segment.score > b.segment.score;
              if (a.video_id != b.video_id) return a.video_id < b.video_id;
              if (a.segment.start != b.segment.start) return a.segment.start < b.segment.start;
              return a.segment.end < b.segment.end;
            });
  std::vector<bool> claimed(gts.size(), false);
  std::vector<bool> flags;
  for (const auto& det : detections) {
    int best = -1;
    double best_overlap = -1.0;
    for (std::size_t g = 0; g < gts.size(); ++g) {
      if (claimed[g] || gts[g].video_id != det.video_id) continue;
      const double overlap = oracles::tiou(det.segment, gts[g].segment);
      if (overlap > best_overlap) {
        best_overlap = overlap;
        best = static_cast<int>(g);
      }
    }
    const bool hit = best >= 0 && best_overlap >= threshold;
    if (hit) claimed[static_cast<std::size_t>(best)] = true;
    flags.push_back(hit);
  }
  return flags;
}

}  // namespace oracles
