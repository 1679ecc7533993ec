#include "denseval/tuner.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "denseval/errors.hpp"
#include "denseval/text_metrics.hpp"

namespace denseval {

TableFitness::TableFitness(std::vector<std::pair<double, double>> entries) {
  if (entries.empty()) throw ValidationError("fitness table is empty");
  for (const auto& [threshold, value] : entries) {
    if (!std::isfinite(threshold) || threshold < 0.0 || threshold > 1.0)
      throw ValidationError("fitness table threshold outside [0,1]");
    if (!std::isfinite(value)) throw ValidationError("fitness table value is not finite");
    if (!table_.emplace(threshold, value).second)
      throw ValidationError("duplicate fitness table threshold");
  }
}

TableFitness TableFitness::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  std::vector<std::pair<double, double>> entries;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::size_t first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    double threshold = 0.0, value = 0.0;
    std::string extra;
    if (!(fields >> threshold >> value) || (fields >> extra))
      throw ParseError(path.string() + ":" + std::to_string(lineno) +
                       ": expected 'threshold fitness'");
    entries.emplace_back(threshold, value);
  }
  return TableFitness(std::move(entries));
}

double TableFitness::canonical(double threshold) const {
  auto above = table_.lower_bound(threshold);
  if (above == table_.begin()) return above->first;
  if (above == table_.end()) return std::prev(above)->first;
  const auto below = std::prev(above);
  // equidistant queries resolve to the lower threshold
  if (threshold - below->first <= above->first - threshold) return below->first;
  return above->first;
}

double TableFitness::evaluate(double threshold) const {
  return table_.at(canonical(threshold));
}

bool TableFitness::flat() const {
  const double first = table_.begin()->second;
  for (const auto& [threshold, value] : table_) {
    (void)threshold;
    if (value != first) return false;
  }
  return true;
}

SyntheticFitness::SyntheticFitness(double peak) : peak_(peak) {
  if (!(peak >= 0.0 && peak <= 1.0))
    throw std::domain_error("synthetic peak must lie in [0,1]");
}

double SyntheticFitness::evaluate(double threshold) const {
  const double d = threshold - peak_;
  return 100.0 - 500.0 * d * d;
}

PipelineFitness::PipelineFitness(std::vector<CaptionRecord> records,
                                 const std::vector<GroundTruthSummary>& references)
    : records_(std::move(records)) {
  if (records_.empty()) throw ValidationError("no caption records to tune on");
  for (const auto& ref : references) {
    std::string& text = reference_text_[ref.video_id];
    if (!text.empty()) text += ". ";
    text += ref.text;
  }
  bool any = false;
  for (const auto& record : records_)
    if (reference_text_.count(record.video_id)) any = true;
  if (!any) throw ValidationError("no caption record has a reference summary");
}

double PipelineFitness::evaluate(double threshold) const {
  double sum = 0.0;
  std::size_t counted = 0;
  for (const auto& record : records_) {
    const auto ref = reference_text_.find(record.video_id);
    if (ref == reference_text_.end()) continue;
    const TokenSequence ref_tokens = tokenize(ref->second);
    if (ref_tokens.empty()) continue;

    CaptionRecord kept = apply_nms(record, threshold);
    std::stable_sort(kept.events.begin(), kept.events.end(),
                     [](const CaptionEvent& a, const CaptionEvent& b) {
                       return a.segment.start < b.segment.start;
                     });
    std::string joined;
    for (const auto& event : kept.events) {
      if (!joined.empty()) joined.push_back(' ');
      joined += event.sentence;
    }
    const TokenSequence cand_tokens = tokenize(joined);
    ++counted;
    if (!cand_tokens.empty())
      sum += bleu(cand_tokens, {ref_tokens}, 1, BleuMode::Individual).score;
  }
  if (counted == 0) throw ValidationError("no scorable caption/reference pairs");
  return sum / static_cast<double>(counted);
}

double mutate(double threshold, const std::vector<double>& magnitudes,
              double lower, double upper, std::mt19937_64& rng) {
  if (magnitudes.empty()) throw std::domain_error("mutate: no magnitudes given");
  std::uniform_int_distribution<std::size_t> pick(0, magnitudes.size() - 1);
  std::normal_distribution<double> step(0.0, magnitudes[pick(rng)]);
  return std::clamp(threshold + step(rng), lower, upper);
}

namespace {

void validate_config(const GAConfig& config) {
  if (config.population < 2) throw ValidationError("population must be at least 2");
  if (config.elites < 0 || config.elites >= config.population)
    throw ValidationError("elites must be in [0, population)");
  if (config.generations < 0) throw ValidationError("generations must be non-negative");
  if (config.mutation_magnitudes.empty())
    throw ValidationError("at least one mutation magnitude is required");
  for (double m : config.mutation_magnitudes)
    if (!(m > 0.0)) throw ValidationError("mutation magnitudes must be positive");
  if (!(config.lower >= 0.0 && config.lower < config.upper && config.upper <= 1.0))
    throw ValidationError("threshold bounds must satisfy 0 <= lower < upper <= 1");
}

void sort_population(std::vector<Individual>& pop) {
  std::sort(pop.begin(), pop.end(), [](const Individual& a, const Individual& b) {
    if (a.fitness != b.fitness) return a.fitness > b.fitness;
    return a.threshold < b.threshold;
  });
}

std::size_t select_parent(const std::vector<Individual>& pop, std::mt19937_64& rng) {
  double min_fitness = pop.front().fitness;
  for (const auto& ind : pop) min_fitness = std::min(min_fitness, ind.fitness);
  double total = 0.0;
  for (const auto& ind : pop) total += ind.fitness - min_fitness;
  if (!(total > 0.0)) {
    std::uniform_int_distribution<std::size_t> uniform(0, pop.size() - 1);
    return uniform(rng);
  }
  std::uniform_real_distribution<double> spin(0.0, total);
  const double u = spin(rng);
  double acc = 0.0;
  for (std::size_t i = 0; i < pop.size(); ++i) {
    acc += pop[i].fitness - min_fitness;
    if (u < acc) return i;
  }
  return pop.size() - 1;
}

}  // namespace

std::vector<Individual> evolve(std::vector<Individual> population, const GAConfig& config,
                               const FitnessSource& fitness, std::mt19937_64& rng) {
  validate_config(config);
  if (population.size() != static_cast<std::size_t>(config.population))
    throw ValidationError("population size does not match the configuration");

  sort_population(population);
  const auto elites = static_cast<std::size_t>(config.elites);
  std::vector<Individual> next(population.begin(), population.begin() + elites);
  next.resize(population.size());
  // selection and mutation draws stay on the serial generator; only the
  // fitness calls below run concurrently
  for (std::size_t i = elites; i < next.size(); ++i) {
    const std::size_t parent = select_parent(population, rng);
    next[i].threshold = mutate(population[parent].threshold, config.mutation_magnitudes,
                               config.lower, config.upper, rng);
  }
  for_each_index(next.size() - elites, config.exec, [&](std::size_t i) {
    next[elites + i].fitness = fitness.evaluate(next[elites + i].threshold);
  });
  return next;
}

SearchResult run_search(const FitnessSource& fitness, const GAConfig& config) {
  validate_config(config);
  std::mt19937_64 rng(config.seed);

  std::vector<Individual> pop(static_cast<std::size_t>(config.population));
  {
    std::uniform_real_distribution<double> init(config.lower, config.upper);
    for (auto& ind : pop) ind.threshold = init(rng);
  }
  for_each_index(pop.size(), config.exec,
                 [&](std::size_t i) { pop[i].fitness = fitness.evaluate(pop[i].threshold); });

  SearchResult result;
  bool has_best = false;
  auto consider = [&](const Individual& ind) {
    if (!has_best || ind.fitness > result.best_fitness) {
      has_best = true;
      result.best_fitness = ind.fitness;
      result.best_threshold = fitness.canonical(ind.threshold);
    }
  };
  auto record_generation = [&](int gen) {
    GenerationStats stats;
    stats.generation = gen;
    const Individual* best = nullptr;
    double sum = 0.0;
    for (const auto& ind : pop) {
      sum += ind.fitness;
      if (!best || ind.fitness > best->fitness ||
          (ind.fitness == best->fitness && ind.threshold < best->threshold))
        best = &ind;
    }
    stats.best_threshold = fitness.canonical(best->threshold);
    stats.best_fitness = best->fitness;
    stats.mean_fitness = sum / static_cast<double>(pop.size());
    result.history.push_back(stats);
  };

  for (const auto& ind : pop) consider(ind);
  record_generation(0);

  const auto elites = static_cast<std::size_t>(config.elites);
  for (int gen = 1; gen <= config.generations; ++gen) {
    pop = evolve(std::move(pop), config, fitness, rng);
    for (std::size_t i = elites; i < pop.size(); ++i) consider(pop[i]);
    record_generation(gen);
  }

  sort_population(pop);
  result.final_population = std::move(pop);
  return result;
}

}  // namespace denseval
