// Compares the serial reference path against the OpenMP path for each batch
// kernel on synthetic workloads, checking that both produce identical output.

#include <chrono>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "denseval/detection_metrics.hpp"
#include "denseval/segments.hpp"
#include "denseval/text_metrics.hpp"

using namespace denseval;

namespace {

template <typename Fn>
double best_of(int reps, Fn&& fn) {
  double best = 1e100;
  for (int i = 0; i < reps; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
  }
  return best;
}

void report(const std::string& name, double serial_s, double parallel_s, bool identical) {
  std::printf("%-14s %9.1f ms %9.1f ms %6.2fx  %s\n", name.c_str(), serial_s * 1e3,
              parallel_s * 1e3, serial_s / parallel_s,
              identical ? "outputs identical" : "OUTPUT MISMATCH");
}

std::vector<ProposalSet> synthetic_proposals(std::size_t videos, std::size_t segments,
                                             std::mt19937_64& rng) {
  std::uniform_real_distribution<double> start_dist(0.0, 900.0);
  std::uniform_real_distribution<double> len_dist(1.0, 80.0);
  std::uniform_real_distribution<double> score_dist(0.0, 1.0);
  std::vector<ProposalSet> sets;
  for (std::size_t v = 0; v < videos; ++v) {
    std::vector<TemporalSegment> segs;
    for (std::size_t s = 0; s < segments; ++s) {
      const double start = start_dist(rng);
      segs.push_back({start, start + len_dist(rng), score_dist(rng)});
    }
    sets.push_back(ProposalSet::make("video_" + std::to_string(v), 1000.0, std::move(segs)));
  }
  return sets;
}

std::string synthetic_sentence(std::size_t words, std::mt19937_64& rng) {
  static const char* vocab[] = {"man",   "walks", "into",  "store", "takes", "bag",
                                "runs",  "out",   "door",  "woman", "watches", "camera",
                                "car",   "stops", "near",  "entrance", "then", "leaves",
                                "guard", "follows"};
  std::uniform_int_distribution<std::size_t> pick(0, std::size(vocab) - 1);
  std::string text;
  for (std::size_t i = 0; i < words; ++i) {
    if (i) text.push_back(' ');
    text += vocab[pick(rng)];
  }
  return text;
}

}  // namespace

int main() {
  std::mt19937_64 rng(7);

  {
    const auto sets = synthetic_proposals(256, 384, rng);
    std::vector<ProposalSet> out_serial, out_parallel;
    const double s = best_of(3, [&] { out_serial = nms_batch(sets, 0.5, Execution::Serial); });
    const double p =
        best_of(3, [&] { out_parallel = nms_batch(sets, 0.5, Execution::Parallel); });
    report("nms_batch", s, p, out_serial == out_parallel);
  }

  {
    std::uniform_int_distribution<std::size_t> words(20, 40);
    std::vector<std::pair<std::string, std::string>> pairs;
    for (int i = 0; i < 400; ++i)
      pairs.emplace_back(synthetic_sentence(words(rng), rng),
                         synthetic_sentence(words(rng), rng));
    EvalReport r_serial, r_parallel;
    const double s = best_of(3, [&] {
      r_serial = corpus_eval(pairs, {BleuMode::Individual, Execution::Serial});
    });
    const double p = best_of(3, [&] {
      r_parallel = corpus_eval(pairs, {BleuMode::Individual, Execution::Parallel});
    });
    report("corpus_eval", s, p,
           r_serial.bleu == r_parallel.bleu && r_serial.meteor == r_parallel.meteor);
  }

  {
    std::uniform_real_distribution<double> start_dist(0.0, 900.0);
    std::uniform_real_distribution<double> len_dist(1.0, 60.0);
    std::uniform_real_distribution<double> score_dist(0.0, 1.0);
    std::uniform_int_distribution<int> class_dist(0, 7);
    std::uniform_int_distribution<int> video_dist(0, 39);
    std::vector<Detection> dets;
    std::vector<GroundTruthInstance> gts;
    for (int i = 0; i < 20000; ++i) {
      const double start = start_dist(rng);
      dets.push_back({{start, start + len_dist(rng), score_dist(rng)},
                      "class_" + std::to_string(class_dist(rng)),
                      "video_" + std::to_string(video_dist(rng))});
    }
    for (int i = 0; i < 4000; ++i) {
      const double start = start_dist(rng);
      gts.push_back({{start, start + len_dist(rng), 1.0},
                     "class_" + std::to_string(class_dist(rng)),
                     "video_" + std::to_string(video_dist(rng))});
    }
    const std::vector<double> thresholds = {0.3, 0.5, 0.7};
    std::vector<ClassAP> out_serial, out_parallel;
    const double s = best_of(3, [&] {
      out_serial = per_class_ap(dets, gts, thresholds, Execution::Serial);
    });
    const double p = best_of(3, [&] {
      out_parallel = per_class_ap(dets, gts, thresholds, Execution::Parallel);
    });
    bool identical = out_serial.size() == out_parallel.size();
    for (std::size_t i = 0; identical && i < out_serial.size(); ++i)
      identical = out_serial[i].class_label == out_parallel[i].class_label &&
                  out_serial[i].iou_threshold == out_parallel[i].iou_threshold &&
                  out_serial[i].ap == out_parallel[i].ap;
    report("per_class_ap", s, p, identical);
  }

  return 0;
}
