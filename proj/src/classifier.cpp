#include "denseval/classifier.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <string_view>

#include "denseval/errors.hpp"

namespace denseval {

namespace {

std::vector<std::string> split_ws(const std::string& text) {
  std::vector<std::string> tokens;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) tokens.push_back(std::move(tok));
  return tokens;
}

void for_each_term(const std::vector<std::string>& tokens, bool unigrams,
                   const std::function<void(const std::string&)>& fn) {
  if (unigrams) {
    for (const auto& t : tokens) fn(t);
  } else {
    for (std::size_t i = 1; i < tokens.size(); ++i) fn(tokens[i - 1] + " " + tokens[i]);
  }
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// -[y log p + (1-y) log(1-p)] computed from the logit
double logistic_loss(double z, int y) {
  return std::max(z, 0.0) - z * static_cast<double>(y) + std::log1p(std::exp(-std::abs(z)));
}

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text, const std::string& where) {
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
    throw ParseError(where + ": bad number '" + std::string(text) + "'");
  return value;
}

}  // namespace

Vocabulary build_vocabulary(const std::vector<std::string>& texts) {
  Vocabulary vocab;
  auto add = [&](const std::string& term) {
    if (vocab.index.emplace(term, vocab.terms.size()).second) vocab.terms.push_back(term);
  };
  for (const auto& text : texts) {
    const auto tokens = split_ws(text);
    for_each_term(tokens, true, add);
    for_each_term(tokens, false, add);
  }
  return vocab;
}

std::vector<std::pair<std::size_t, double>> featurize(const std::string& text,
                                                      const Vocabulary& vocab) {
  std::map<std::size_t, double> counts;
  const auto tokens = split_ws(text);
  auto add = [&](const std::string& term) {
    const auto it = vocab.index.find(term);
    if (it != vocab.index.end()) counts[it->second] += 1.0;
  };
  for_each_term(tokens, true, add);
  for_each_term(tokens, false, add);
  return {counts.begin(), counts.end()};
}

TrainResult train(const std::vector<LabeledSummary>& data, const TrainOptions& options) {
  if (data.empty()) throw ValidationError("training data is empty");
  bool has_pos = false, has_neg = false;
  for (const auto& d : data) (d.label == 1 ? has_pos : has_neg) = true;
  if (!has_pos || !has_neg)
    throw ValidationError("training data must contain both classes");
  if (!(options.learning_rate > 0.0))
    throw ValidationError("learning rate must be positive");
  if (options.epochs < 1 || options.steps_per_epoch < 1)
    throw ValidationError("epochs and steps per epoch must be at least 1");

  std::vector<std::string> texts;
  texts.reserve(data.size());
  for (const auto& d : data) texts.push_back(d.text);

  TrainResult result;
  result.model.vocab = build_vocabulary(texts);
  result.model.weights.assign(result.model.vocab.size(), 0.0);
  result.model.bias = 0.0;

  std::vector<std::vector<std::pair<std::size_t, double>>> features;
  features.reserve(data.size());
  for (const auto& d : data) features.push_back(featurize(d.text, result.model.vocab));

  auto logit = [&](std::size_t i) {
    double z = result.model.bias;
    for (const auto& [j, c] : features[i]) z += result.model.weights[j] * c;
    return z;
  };
  auto mean_loss = [&]() {
    double sum = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i)
      sum += logistic_loss(logit(i), data[i].label);
    return sum / static_cast<double>(data.size());
  };

  result.loss_history.push_back(mean_loss());
  const int total_steps = options.epochs * options.steps_per_epoch;
  const double inv_n = 1.0 / static_cast<double>(data.size());
  std::vector<double> grad(result.model.weights.size());
  for (int step = 0; step < total_steps; ++step) {
    std::fill(grad.begin(), grad.end(), 0.0);
    double grad_bias = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
      const double residual = sigmoid(logit(i)) - static_cast<double>(data[i].label);
      for (const auto& [j, c] : features[i]) grad[j] += residual * c;
      grad_bias += residual;
    }
    for (std::size_t j = 0; j < grad.size(); ++j)
      result.model.weights[j] -= options.learning_rate * grad[j] * inv_n;
    result.model.bias -= options.learning_rate * grad_bias * inv_n;
    result.loss_history.push_back(mean_loss());
  }
  return result;
}

Prediction predict(const LogisticModel& model, const std::string& text) {
  double z = model.bias;
  for (const auto& [j, c] : featurize(text, model.vocab)) z += model.weights[j] * c;
  Prediction p;
  p.probability = sigmoid(z);
  p.label = p.probability >= 0.5 ? 1 : 0;
  return p;
}

ClassifierStats evaluate(const LogisticModel& model,
                         const std::vector<LabeledSummary>& data) {
  if (data.empty()) throw ValidationError("evaluation data is empty");
  ClassifierStats stats;
  for (const auto& d : data) {
    const int predicted = predict(model, d.text).label;
    if (d.label == 1)
      (predicted == 1 ? stats.true_positives : stats.false_negatives)++;
    else
      (predicted == 1 ? stats.false_positives : stats.true_negatives)++;
  }
  stats.accuracy = static_cast<double>(stats.true_positives + stats.true_negatives) /
                   static_cast<double>(data.size());
  return stats;
}

void save_model(const LogisticModel& model, const std::filesystem::path& path) {
  if (model.weights.size() != model.vocab.size())
    throw ValidationError("model weight count does not match vocabulary");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path.string());
  out << "denseval-lm v1 V=" << model.vocab.size() << '\n';
  out << "bias\t" << format_double(model.bias) << '\n';
  for (std::size_t j = 0; j < model.vocab.size(); ++j)
    out << model.vocab.terms[j] << '\t' << j << '\t' << format_double(model.weights[j])
        << '\n';
}

LogisticModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path.string() + ": empty model file");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  std::istringstream header(line);
  std::string magic, version, vocab_field;
  header >> magic >> version >> vocab_field;
  if (magic != "denseval-lm") throw ParseError(path.string() + ": not a model file");
  if (version != "v1")
    throw VersionError(path.string() + ": unsupported model version '" + version + "'");
  if (vocab_field.rfind("V=", 0) != 0)
    throw ParseError(path.string() + ": malformed header");
  const auto vocab_size = static_cast<std::size_t>(
      parse_double(std::string_view(vocab_field).substr(2), path.string() + ": header"));

  if (!std::getline(in, line)) throw ParseError(path.string() + ": missing bias line");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto bias_tab = line.find('\t');
  if (line.substr(0, bias_tab) != "bias" || bias_tab == std::string::npos)
    throw ParseError(path.string() + ": missing bias line");

  LogisticModel model;
  model.bias = parse_double(std::string_view(line).substr(bias_tab + 1),
                            path.string() + ": bias");
  model.vocab.terms.assign(vocab_size, std::string());
  model.weights.assign(vocab_size, 0.0);
  std::vector<bool> seen(vocab_size, false);

  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto where = path.string() + ": term row " + std::to_string(rows + 1);
    const auto t1 = line.find('\t');
    const auto t2 = line.find('\t', t1 == std::string::npos ? t1 : t1 + 1);
    if (t1 == std::string::npos || t2 == std::string::npos)
      throw ParseError(where + ": expected term\\tindex\\tweight");
    const std::string term = line.substr(0, t1);
    const auto index = static_cast<std::size_t>(
        parse_double(std::string_view(line).substr(t1 + 1, t2 - t1 - 1), where));
    const double weight =
        parse_double(std::string_view(line).substr(t2 + 1), where);
    if (index >= vocab_size) throw ParseError(where + ": index out of range");
    if (seen[index]) throw ParseError(where + ": duplicate index");
    seen[index] = true;
    model.vocab.terms[index] = term;
    model.vocab.index.emplace(term, index);
    model.weights[index] = weight;
    ++rows;
  }
  if (rows != vocab_size)
    throw ParseError(path.string() + ": expected " + std::to_string(vocab_size) +
                     " term rows, got " + std::to_string(rows));
  return model;
}

}  // namespace denseval
