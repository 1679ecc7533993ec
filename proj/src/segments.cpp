#include "denseval/segments.hpp"

#include <algorithm>
#include <stdexcept>

#include "denseval/errors.hpp"

namespace denseval {

void validate_segment(const TemporalSegment& s, const std::string& context) {
  const std::string where = context.empty() ? std::string() : context + ": ";
  if (s.start < 0.0)
    throw ValidationError(where + "segment start " + std::to_string(s.start) + " is negative");
  if (!(s.end > s.start))
    throw ValidationError(where + "segment end " + std::to_string(s.end) +
                          " must exceed start " + std::to_string(s.start));
  if (s.score < 0.0 || s.score > 1.0)
    throw ValidationError(where + "segment score " + std::to_string(s.score) +
                          " outside [0,1]");
}

bool canonical_less(const TemporalSegment& a, const TemporalSegment& b) {
  if (a.score != b.score) return a.score > b.score;
  if (a.start != b.start) return a.start < b.start;
  return a.end < b.end;
}

ProposalSet ProposalSet::make(std::string video_id, double duration,
                              std::vector<TemporalSegment> segments) {
  if (!(duration > 0.0))
    throw ValidationError(video_id + ": duration must be positive");
  for (const auto& s : segments) {
    validate_segment(s, video_id);
    if (s.end > duration)
      throw ValidationError(video_id + ": segment end " + std::to_string(s.end) +
                            " exceeds duration " + std::to_string(duration));
  }
  std::sort(segments.begin(), segments.end(), canonical_less);
  return ProposalSet{std::move(video_id), duration, std::move(segments)};
}

double tiou(const TemporalSegment& a, const TemporalSegment& b) {
  const double inter =
      std::max(0.0, std::min(a.end, b.end) - std::max(a.start, b.start));
  const double uni = (a.end - a.start) + (b.end - b.start) - inter;
  return inter / uni;
}

static void check_threshold(double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0))
    throw std::domain_error("NMS threshold " + std::to_string(threshold) +
                            " outside [0,1]");
}

ProposalSet nms(const ProposalSet& proposals, double threshold) {
  check_threshold(threshold);
  const auto& segs = proposals.segments;  // canonical order
  std::vector<bool> suppressed(segs.size(), false);
  std::vector<TemporalSegment> kept;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    if (suppressed[i]) continue;
    kept.push_back(segs[i]);
    for (std::size_t j = i + 1; j < segs.size(); ++j) {
      if (!suppressed[j] && tiou(segs[i], segs[j]) > threshold) suppressed[j] = true;
    }
  }
  return ProposalSet{proposals.video_id, proposals.duration, std::move(kept)};
}

std::vector<std::pair<double, std::size_t>> segment_count_profile(
    const ProposalSet& proposals, const std::vector<double>& thresholds) {
  std::vector<std::pair<double, std::size_t>> profile;
  profile.reserve(thresholds.size());
  for (double t : thresholds) profile.emplace_back(t, nms(proposals, t).segments.size());
  return profile;
}

std::vector<ProposalSet> nms_batch(const std::vector<ProposalSet>& sets,
                                   double threshold, Execution exec) {
  check_threshold(threshold);
  std::vector<ProposalSet> out(sets.size());
  for_each_index(sets.size(), exec,
                 [&](std::size_t i) { out[i] = nms(sets[i], threshold); });
  return out;
}

}  // namespace denseval
