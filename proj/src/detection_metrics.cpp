#include "denseval/detection_metrics.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include "denseval/errors.hpp"

namespace denseval {

static bool detection_order(const Detection& a, const Detection& b) {
  if (a.segment.score != b.segment.score) return a.segment.score > b.segment.score;
  if (a.video_id != b.video_id) return a.video_id < b.video_id;
  if (a.segment.start != b.segment.start) return a.segment.start < b.segment.start;
  return a.segment.end < b.segment.end;
}

std::vector<std::pair<Detection, bool>> match_detections(
    const std::vector<Detection>& detections,
    const std::vector<GroundTruthInstance>& ground_truths, double iou_threshold) {
  if (!(iou_threshold >= 0.0 && iou_threshold <= 1.0))
    throw std::domain_error("match_detections: iou threshold outside [0,1]");
  const std::string* label = nullptr;
  for (const auto& d : detections) {
    if (label && d.class_label != *label)
      throw std::domain_error("match_detections: mixed class labels");
    label = &d.class_label;
  }
  for (const auto& g : ground_truths) {
    if (label && g.class_label != *label)
      throw std::domain_error("match_detections: mixed class labels");
    label = &g.class_label;
  }

  std::vector<Detection> sorted = detections;
  std::sort(sorted.begin(), sorted.end(), detection_order);

  std::vector<bool> claimed(ground_truths.size(), false);
  std::vector<std::pair<Detection, bool>> out;
  out.reserve(sorted.size());
  for (const auto& d : sorted) {
    int best = -1;
    double best_tiou = 0.0;
    for (std::size_t g = 0; g < ground_truths.size(); ++g) {
      if (claimed[g] || ground_truths[g].video_id != d.video_id) continue;
      const double t = tiou(d.segment, ground_truths[g].segment);
      if (best < 0 || t > best_tiou) {
        best = static_cast<int>(g);
        best_tiou = t;
      }
    }
    const bool tp = best >= 0 && best_tiou >= iou_threshold;
    if (tp) claimed[static_cast<std::size_t>(best)] = true;
    out.emplace_back(d, tp);
  }
  return out;
}

PRCurve pr_curve(const std::vector<std::pair<Detection, bool>>& flags,
                 std::size_t num_gt) {
  if (num_gt == 0) throw std::domain_error("pr_curve: num_gt must be >= 1");
  PRCurve curve;
  std::size_t tp = 0, seen = 0;
  for (const auto& [det, is_tp] : flags) {
    (void)det;
    ++seen;
    if (is_tp) ++tp;
    const double recall = static_cast<double>(tp) / static_cast<double>(num_gt);
    const double precision = static_cast<double>(tp) / static_cast<double>(seen);
    curve.points.emplace_back(recall, precision);
  }

  // All-point interpolation: make the precision envelope non-increasing from
  // the right, then sum precision over recall increments.
  std::vector<double> envelope(curve.points.size());
  double running = 0.0;
  for (std::size_t i = curve.points.size(); i-- > 0;) {
    running = std::max(running, curve.points[i].second);
    envelope[i] = running;
  }
  double ap = 0.0;
  double prev_recall = 0.0;
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    ap += (curve.points[i].first - prev_recall) * envelope[i];
    prev_recall = curve.points[i].first;
  }
  curve.ap = ap;
  return curve;
}

std::vector<ClassAP> per_class_ap(const std::vector<Detection>& detections,
                                  const std::vector<GroundTruthInstance>& ground_truths,
                                  const std::vector<double>& iou_thresholds,
                                  Execution exec) {
  if (ground_truths.empty())
    throw std::domain_error("per_class_ap: no ground-truth instances");
  if (iou_thresholds.empty())
    throw std::domain_error("per_class_ap: no iou thresholds");
  for (double t : iou_thresholds)
    if (!(t >= 0.0 && t <= 1.0))
      throw std::domain_error("per_class_ap: iou threshold outside [0,1]");

  std::map<std::string, std::vector<GroundTruthInstance>> gt_by_class;
  for (const auto& g : ground_truths) gt_by_class[g.class_label].push_back(g);
  std::map<std::string, std::vector<Detection>> det_by_class;
  for (const auto& d : detections) det_by_class[d.class_label].push_back(d);

  struct Job {
    const std::string* label;
    const std::vector<Detection>* dets;
    const std::vector<GroundTruthInstance>* gts;
    double threshold;
  };
  static const std::vector<Detection> no_dets;
  std::vector<Job> jobs;
  for (const auto& [label, gts] : gt_by_class) {
    auto it = det_by_class.find(label);
    const std::vector<Detection>* dets = it == det_by_class.end() ? &no_dets : &it->second;
    for (double t : iou_thresholds) jobs.push_back({&label, dets, &gts, t});
  }

  std::vector<ClassAP> rows(jobs.size());
  for_each_index(jobs.size(), exec, [&](std::size_t i) {
    const Job& job = jobs[i];
    double ap = 0.0;
    if (!job.dets->empty())
      ap = pr_curve(match_detections(*job.dets, *job.gts, job.threshold),
                    job.gts->size())
               .ap;
    rows[i] = ClassAP{*job.label, job.threshold, ap};
  });
  return rows;
}

double mean_ap(const std::vector<Detection>& detections,
               const std::vector<GroundTruthInstance>& ground_truths,
               const std::vector<double>& iou_thresholds, Execution exec) {
  const std::vector<ClassAP> rows =
      per_class_ap(detections, ground_truths, iou_thresholds, exec);
  std::map<std::string, std::pair<double, std::size_t>> per_class;
  for (const auto& row : rows) {
    auto& [sum, count] = per_class[row.class_label];
    sum += row.ap;
    ++count;
  }
  double total = 0.0;
  for (const auto& [label, acc] : per_class) {
    (void)label;
    total += acc.first / static_cast<double>(acc.second);
  }
  return total / static_cast<double>(per_class.size());
}

}  // namespace denseval
