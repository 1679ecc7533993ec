#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "denseval/parallel.hpp"
#include "denseval/segments.hpp"

namespace denseval {

// A scored temporal detection; segment.score holds the confidence.
struct Detection {
  TemporalSegment segment;
  std::string class_label;
  std::string video_id;

  friend bool operator==(const Detection&, const Detection&) = default;
};

struct GroundTruthInstance {
  TemporalSegment segment;  // score ignored
  std::string class_label;
  std::string video_id;
};

struct PRCurve {
  std::vector<std::pair<double, double>> points;  // (recall, precision)
  double ap = 0.0;
};

// Detections sorted by descending confidence (ties: video_id, start, end
// ascending); each detection matches the unclaimed same-video ground truth
// with highest tiou and is a true positive iff that tiou >= iou_threshold.
// A ground truth is consumed only by a successful match. All inputs must
// share one class label.
std::vector<std::pair<Detection, bool>> match_detections(
    const std::vector<Detection>& detections,
    const std::vector<GroundTruthInstance>& ground_truths, double iou_threshold);

// Cumulative precision/recall after each detection; AP by all-point
// interpolation (right-to-left precision envelope, area over recall deltas).
// num_gt = 0 is a domain error.
PRCurve pr_curve(const std::vector<std::pair<Detection, bool>>& flags,
                 std::size_t num_gt);

// AP per (class, threshold), averaged uniformly over thresholds per class,
// then uniformly over classes. Classes are defined by the ground truth; a
// class with no detections contributes AP 0.
double mean_ap(const std::vector<Detection>& detections,
               const std::vector<GroundTruthInstance>& ground_truths,
               const std::vector<double>& iou_thresholds,
               Execution exec = Execution::Parallel);

// Per-class, per-threshold AP rows backing mean_ap; exposed for reporting.
struct ClassAP {
  std::string class_label;
  double iou_threshold = 0.0;
  double ap = 0.0;
};

std::vector<ClassAP> per_class_ap(const std::vector<Detection>& detections,
                                  const std::vector<GroundTruthInstance>& ground_truths,
                                  const std::vector<double>& iou_thresholds,
                                  Execution exec = Execution::Parallel);

}  // namespace denseval
