#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "denseval/corpus.hpp"
#include "denseval/parallel.hpp"

namespace denseval {

inline constexpr std::uint64_t kDefaultTunerSeed = 20210607;

struct GAConfig {
  int generations = 5;
  int population = 8;
  int elites = 2;
  std::vector<double> mutation_magnitudes = {0.01, 0.03, 0.05, 0.07, 0.1};
  double lower = 0.0;
  double upper = 1.0;
  std::uint64_t seed = kDefaultTunerSeed;
  Execution exec = Execution::Parallel;
};

struct Individual {
  double threshold = 0.0;
  double fitness = 0.0;
};

// A fitness landscape over NMS thresholds. canonical() maps a raw threshold
// to the representative the source actually scores (identity by default).
class FitnessSource {
 public:
  virtual ~FitnessSource() = default;
  virtual double evaluate(double threshold) const = 0;
  virtual double canonical(double threshold) const { return threshold; }
  virtual bool flat() const { return false; }
};

// Piecewise-constant landscape from (threshold, fitness) samples: a query
// scores as its nearest sampled threshold, ties toward the lower one.
class TableFitness : public FitnessSource {
 public:
  explicit TableFitness(std::vector<std::pair<double, double>> entries);

  // Lines of "threshold<ws>fitness"; '#' comments and blank lines ignored.
  static TableFitness from_file(const std::filesystem::path& path);

  double evaluate(double threshold) const override;
  double canonical(double threshold) const override;
  bool flat() const override;
  const std::map<double, double>& entries() const { return table_; }

 private:
  std::map<double, double> table_;
};

// Smooth single-peak landscape: 100 - 500 * (t - peak)^2.
class SyntheticFitness : public FitnessSource {
 public:
  explicit SyntheticFitness(double peak);
  double evaluate(double threshold) const override;
  double peak() const { return peak_; }

 private:
  double peak_;
};

// Scores a threshold by running NMS on every caption record, joining the
// surviving sentences per video in ascending start order, and taking the
// corpus BLEU@1 against that video's reference summaries.
class PipelineFitness : public FitnessSource {
 public:
  PipelineFitness(std::vector<CaptionRecord> records,
                  const std::vector<GroundTruthSummary>& references);
  double evaluate(double threshold) const override;

 private:
  std::vector<CaptionRecord> records_;
  std::map<std::string, std::string> reference_text_;
};

// One magnitude drawn uniformly from the set, then a zero-mean Gaussian step
// with that magnitude as its standard deviation, clamped into [lower, upper].
// The child's fitness is left to the caller.
double mutate(double threshold, const std::vector<double>& magnitudes,
              double lower, double upper, std::mt19937_64& rng);

// One generation: the config.elites fittest individuals are copied verbatim,
// the rest are mutants of parents drawn by fitness-proportional selection
// (uniform when fitnesses are all equal). Children come back evaluated.
// Selection and mutation draw from rng serially; only fitness evaluation
// honors config.exec.
std::vector<Individual> evolve(std::vector<Individual> population,
                               const GAConfig& config, const FitnessSource& fitness,
                               std::mt19937_64& rng);

struct GenerationStats {
  int generation = 0;  // 0 is the initial population
  double best_threshold = 0.0;
  double best_fitness = 0.0;
  double mean_fitness = 0.0;
};

struct SearchResult {
  double best_threshold = 0.0;
  double best_fitness = 0.0;
  std::vector<GenerationStats> history;
  std::vector<Individual> final_population;
};

// Generational GA: elites carried over unchanged, the rest drawn by
// fitness-proportional selection (weights shifted by the population minimum,
// uniform when the population is flat) and mutated. All random draws happen
// on one generator in a fixed order, so results are seed-deterministic and
// identical under serial and parallel evaluation.
SearchResult run_search(const FitnessSource& fitness, const GAConfig& config);

}  // namespace denseval
