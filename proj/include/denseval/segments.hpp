#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "denseval/parallel.hpp"

namespace denseval {

// A scored [start,end) interval on one video's timeline, in seconds.
struct TemporalSegment {
  double start = 0.0;
  double end = 0.0;
  double score = 0.0;

  friend bool operator==(const TemporalSegment&, const TemporalSegment&) = default;
};

// Throws ValidationError unless 0 <= start < end and score in [0,1].
void validate_segment(const TemporalSegment& s, const std::string& context = {});

// Canonical proposal order: descending score, ties by ascending start, then
// ascending end.
bool canonical_less(const TemporalSegment& a, const TemporalSegment& b);

// Scored proposals for one video, held in canonical order.
struct ProposalSet {
  std::string video_id;
  double duration = 0.0;
  std::vector<TemporalSegment> segments;

  // Validates every segment against [0, duration] and sorts canonically.
  static ProposalSet make(std::string video_id, double duration,
                          std::vector<TemporalSegment> segments);

  friend bool operator==(const ProposalSet&, const ProposalSet&) = default;
};

// Overlap ratio of two time intervals: intersection length over union length.
// Disjoint or merely touching intervals score 0.
double tiou(const TemporalSegment& a, const TemporalSegment& b);

// Greedy suppression: repeatedly keep the highest-score remaining segment and
// drop every remaining segment whose tiou with it strictly exceeds the
// threshold. Throws std::domain_error for thresholds outside [0,1].
ProposalSet nms(const ProposalSet& proposals, double threshold);

// Kept-segment count after NMS at each threshold, in the order given.
std::vector<std::pair<double, std::size_t>> segment_count_profile(
    const ProposalSet& proposals, const std::vector<double>& thresholds);

// NMS over many videos; items are independent.
std::vector<ProposalSet> nms_batch(const std::vector<ProposalSet>& sets,
                                   double threshold,
                                   Execution exec = Execution::Parallel);

}  // namespace denseval
