#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "denseval/classifier.hpp"
#include "denseval/corpus.hpp"
#include "denseval/csv.hpp"
#include "denseval/detection_metrics.hpp"
#include "denseval/errors.hpp"
#include "denseval/manifest.hpp"
#include "denseval/parallel.hpp"
#include "denseval/segments.hpp"
#include "denseval/text_metrics.hpp"
#include "denseval/tuner.hpp"
#include "denseval/version.hpp"

namespace {

using namespace denseval;

// Command produced nothing to report; mapped to exit code 3.
struct EmptyResult : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt_fixed(double value, int places) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", places, value);
  return buf;
}

std::string fmt_full(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

double parse_number(const std::string& text, const std::string& where) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto res = std::from_chars(begin, end, value);
  if (res.ec != std::errc{} || res.ptr != end)
    throw ParseError(where + ": bad number '" + text + "'");
  return value;
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

// First column left-justified, the rest right-justified, two-space gutters.
std::string render_table(const std::vector<std::string>& headers,
                         const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width(headers.size());
  for (std::size_t j = 0; j < headers.size(); ++j) width[j] = headers[j].size();
  for (const auto& row : rows)
    for (std::size_t j = 0; j < row.size(); ++j)
      width[j] = std::max(width[j], row[j].size());

  std::string out;
  auto emit_row = [&](const std::vector<std::string>& cells) {
    std::string line;
    for (std::size_t j = 0; j < cells.size(); ++j) {
      if (j > 0) line += "  ";
      if (j == 0) {
        line += cells[j];
        line.append(width[j] - cells[j].size(), ' ');
      } else {
        line.append(width[j] - cells[j].size(), ' ');
        line += cells[j];
      }
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line;
    out += '\n';
  };
  emit_row(headers);
  for (const auto& row : rows) emit_row(row);
  return out;
}

std::string render_csv(const std::vector<std::vector<std::string>>& rows) {
  std::string out;
  for (const auto& row : rows) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j > 0) out += ',';
      out += csv_escape(row[j]);
    }
    out += '\n';
  }
  return out;
}

// Writes to the output file (plus a manifest) when a path was given,
// otherwise to stdout.
void emit(const std::string& text, const std::string& output, RunManifest manifest) {
  if (output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(output, std::ios::binary);
  if (!f) throw ParseError("cannot write " + output);
  f << text;
  f.close();
  manifest.output = output;
  write_manifest(manifest);
}

// Sentences of a record joined in ascending start order.
std::string candidate_text(const CaptionRecord& record) {
  std::vector<const CaptionEvent*> events;
  events.reserve(record.events.size());
  for (const auto& e : record.events) events.push_back(&e);
  std::stable_sort(events.begin(), events.end(),
                   [](const CaptionEvent* a, const CaptionEvent* b) {
                     return a->segment.start < b->segment.start;
                   });
  std::string text;
  for (const auto* e : events) {
    if (!text.empty()) text.push_back(' ');
    text += e->sentence;
  }
  return text;
}

// Reference summaries per video, multiple rows joined with ". ".
std::map<std::string, std::string> reference_texts(
    const std::vector<GroundTruthSummary>& summaries) {
  std::map<std::string, std::string> texts;
  for (const auto& s : summaries) {
    std::string& text = texts[s.video_id];
    if (!text.empty()) text += ". ";
    text += s.text;
  }
  return texts;
}

struct NmsArgs {
  std::string captions;
  std::string output;
  double threshold = 0.0;
  bool serial = false;
};

void cmd_nms(const NmsArgs& args) {
  if (!(args.threshold >= 0.0 && args.threshold <= 1.0))
    throw ValidationError("threshold must lie in [0,1]");
  const auto loaded = load_captions(args.captions);
  print_warnings(loaded.warnings);
  if (loaded.records.empty())
    throw EmptyResult(args.captions + ": no videos to suppress");

  std::vector<CaptionRecord> kept(loaded.records.size());
  for_each_index(loaded.records.size(),
                 args.serial ? Execution::Serial : Execution::Parallel,
                 [&](std::size_t i) { kept[i] = apply_nms(loaded.records[i], args.threshold); });

  std::size_t before = 0, after = 0;
  for (const auto& r : loaded.records) before += r.events.size();
  for (const auto& r : kept) after += r.events.size();

  save_captions(kept, args.output);
  RunManifest manifest;
  manifest.command = "nms";
  manifest.parameters = {{"threshold", fmt_full(args.threshold)},
                         {"execution", args.serial ? "serial" : "parallel"}};
  manifest.inputs = {args.captions};
  manifest.output = args.output;
  write_manifest(manifest);
  std::cout << "kept " << after << " of " << before << " events across "
            << kept.size() << " videos\n";
}

struct EvalArgs {
  std::vector<std::string> candidates;
  std::string references;
  std::string from_csv;
  std::string mode = "individual";
  std::string format = "table";
  std::string output;
  bool serial = false;
};

const std::vector<std::string> kEvalCsvHeader = {"candidate", "bleu1", "bleu2",
                                                 "bleu3",     "bleu4", "meteor"};

struct EvalRow {
  std::string name;
  std::array<double, 5> values{};  // BLEU@1..4, METEOR
};

std::string render_eval(const std::vector<EvalRow>& rows, const std::string& format) {
  if (format == "csv") {
    std::vector<std::vector<std::string>> cells{kEvalCsvHeader};
    for (const auto& row : rows) {
      std::vector<std::string> line{row.name};
      for (double v : row.values) line.push_back(fmt_full(v));
      cells.push_back(std::move(line));
    }
    return render_csv(cells);
  }
  std::vector<std::vector<std::string>> cells;
  for (const auto& row : rows) {
    std::vector<std::string> line{row.name};
    for (double v : row.values) line.push_back(fmt_fixed(v, 2));
    cells.push_back(std::move(line));
  }
  return render_table({"candidate", "BLEU@1", "BLEU@2", "BLEU@3", "BLEU@4", "METEOR"},
                      cells);
}

void cmd_eval(const EvalArgs& args) {
  if (args.format != "table" && args.format != "csv")
    throw ValidationError("--format must be table or csv");

  RunManifest manifest;
  manifest.command = "eval";
  std::vector<EvalRow> rows;

  if (!args.from_csv.empty()) {
    if (!args.candidates.empty() || !args.references.empty())
      throw ValidationError("--from-csv cannot be combined with --candidates/--references");
    const auto csv = read_csv(args.from_csv);
    if (csv.empty() || csv.front() != kEvalCsvHeader)
      throw ParseError(args.from_csv +
                       ": expected header candidate,bleu1,bleu2,bleu3,bleu4,meteor");
    for (std::size_t i = 1; i < csv.size(); ++i) {
      const auto& line = csv[i];
      const std::string where = args.from_csv + ": row " + std::to_string(i + 1);
      if (line.size() != kEvalCsvHeader.size())
        throw ParseError(where + ": expected " + std::to_string(kEvalCsvHeader.size()) +
                         " fields");
      EvalRow row;
      row.name = line[0];
      for (std::size_t j = 0; j < row.values.size(); ++j)
        row.values[j] = parse_number(line[j + 1], where);
      rows.push_back(std::move(row));
    }
    if (rows.empty()) throw EmptyResult(args.from_csv + ": no result rows");
    manifest.parameters = {{"format", args.format}, {"source", "from-csv"}};
    manifest.inputs = {args.from_csv};
  } else {
    if (args.candidates.empty() || args.references.empty())
      throw ValidationError("eval needs --candidates and --references (or --from-csv)");
    BleuMode mode;
    if (args.mode == "individual") mode = BleuMode::Individual;
    else if (args.mode == "cumulative") mode = BleuMode::Cumulative;
    else throw ValidationError("--mode must be individual or cumulative");

    const auto refs = reference_texts(load_summaries(args.references));
    for (const auto& path : args.candidates) {
      const auto loaded = load_captions(path);
      print_warnings(loaded.warnings);
      std::vector<std::pair<std::string, std::string>> pairs;
      for (const auto& record : loaded.records) {
        const auto it = refs.find(record.video_id);
        if (it == refs.end()) continue;
        pairs.emplace_back(candidate_text(record), it->second);
      }
      if (pairs.empty())
        throw EmptyResult(path + ": no videos matching the references");
      const EvalReport report = corpus_eval(
          pairs, {mode, args.serial ? Execution::Serial : Execution::Parallel});
      print_warnings(report.warnings);
      EvalRow row;
      row.name = path;
      for (int n = 0; n < 4; ++n) row.values[static_cast<std::size_t>(n)] = report.bleu[static_cast<std::size_t>(n)];
      row.values[4] = report.meteor;
      rows.push_back(std::move(row));
    }
    if (rows.size() > 1) {
      EvalRow mean;
      mean.name = "Mean";
      for (const auto& row : rows)
        for (std::size_t j = 0; j < mean.values.size(); ++j) mean.values[j] += row.values[j];
      for (auto& v : mean.values) v /= static_cast<double>(rows.size());
      rows.push_back(std::move(mean));
    }
    manifest.parameters = {{"mode", args.mode}, {"format", args.format}};
    for (const auto& path : args.candidates) manifest.inputs.push_back(path);
    manifest.inputs.push_back(args.references);
  }

  emit(render_eval(rows, args.format), args.output, std::move(manifest));
}

struct TuneArgs {
  std::string fixture;
  double synthetic_peak = 0.0;
  bool has_peak = false;
  std::string captions;
  std::string references;
  std::string output;
  GAConfig config;
  bool serial = false;
};

void cmd_tune(const TuneArgs& args) {
  const bool pipeline = !args.captions.empty() || !args.references.empty();
  const int sources = (!args.fixture.empty() ? 1 : 0) + (args.has_peak ? 1 : 0) +
                      (pipeline ? 1 : 0);
  if (sources != 1)
    throw ValidationError(
        "choose one fitness source: --fitness-fixture, --synthetic-peak, or "
        "--captions with --references");
  if (pipeline && (args.captions.empty() || args.references.empty()))
    throw ValidationError("pipeline tuning needs both --captions and --references");

  RunManifest manifest;
  manifest.command = "tune";
  std::unique_ptr<FitnessSource> source;
  if (!args.fixture.empty()) {
    auto table = std::make_unique<TableFitness>(TableFitness::from_file(args.fixture));
    if (table->flat())
      std::cerr << "warning: fitness landscape is flat; the search cannot improve\n";
    source = std::move(table);
    manifest.parameters.emplace_back("source", "fixture");
    manifest.inputs.push_back(args.fixture);
  } else if (args.has_peak) {
    source = std::make_unique<SyntheticFitness>(args.synthetic_peak);
    manifest.parameters.emplace_back("source", "synthetic");
    manifest.parameters.emplace_back("peak", fmt_full(args.synthetic_peak));
  } else {
    const auto loaded = load_captions(args.captions);
    print_warnings(loaded.warnings);
    source = std::make_unique<PipelineFitness>(loaded.records,
                                               load_summaries(args.references));
    manifest.parameters.emplace_back("source", "pipeline");
    manifest.inputs.push_back(args.captions);
    manifest.inputs.push_back(args.references);
  }

  GAConfig config = args.config;
  config.exec = args.serial ? Execution::Serial : Execution::Parallel;
  const SearchResult result = run_search(*source, config);

  for (const auto& gen : result.history)
    std::cout << "gen " << gen.generation << ": best " << fmt_fixed(gen.best_fitness, 3)
              << " mean " << fmt_fixed(gen.mean_fitness, 3) << '\n';
  std::cout << "best threshold " << fmt_fixed(result.best_threshold, 3) << " fitness "
            << fmt_fixed(result.best_fitness, 3) << '\n';

  if (!args.output.empty()) {
    nlohmann::ordered_json doc;
    doc["best_threshold"] = result.best_threshold;
    doc["best_fitness"] = result.best_fitness;
    nlohmann::ordered_json history = nlohmann::ordered_json::array();
    for (const auto& gen : result.history) {
      nlohmann::ordered_json entry;
      entry["generation"] = gen.generation;
      entry["best_threshold"] = gen.best_threshold;
      entry["best_fitness"] = gen.best_fitness;
      entry["mean_fitness"] = gen.mean_fitness;
      history.push_back(std::move(entry));
    }
    doc["history"] = std::move(history);
    std::ofstream out(args.output, std::ios::binary);
    if (!out) throw ParseError("cannot write " + args.output);
    out << doc.dump(2) << '\n';
    out.close();
    manifest.parameters.emplace_back("generations", std::to_string(config.generations));
    manifest.parameters.emplace_back("population", std::to_string(config.population));
    manifest.parameters.emplace_back("elites", std::to_string(config.elites));
    manifest.parameters.emplace_back("seed", std::to_string(config.seed));
    manifest.output = args.output;
    write_manifest(manifest);
  }
}

struct TrainArgs {
  std::string data;
  std::string out;
  std::string stopwords;
  TrainOptions options;
};

void cmd_train(const TrainArgs& args) {
  auto data = load_labeled(args.data);
  if (data.empty()) throw EmptyResult(args.data + ": no training rows");
  const auto stopwords =
      args.stopwords.empty() ? default_stopwords() : load_stopwords(args.stopwords);
  for (auto& d : data) d.text = normalize_text(d.text, {}, stopwords);

  const TrainResult result = train(data, args.options);
  save_model(result.model, args.out);

  std::vector<std::vector<std::string>> loss_rows{{"step", "loss"}};
  for (std::size_t i = 0; i < result.loss_history.size(); ++i)
    loss_rows.push_back({std::to_string(i), fmt_full(result.loss_history[i])});
  write_csv(args.out + ".loss.csv", loss_rows);

  RunManifest manifest;
  manifest.command = "train-classifier";
  manifest.parameters = {{"learning_rate", fmt_full(args.options.learning_rate)},
                         {"epochs", std::to_string(args.options.epochs)},
                         {"steps_per_epoch", std::to_string(args.options.steps_per_epoch)},
                         {"seed", std::to_string(args.options.seed)}};
  manifest.inputs = {args.data};
  if (!args.stopwords.empty()) manifest.inputs.push_back(args.stopwords);
  manifest.output = args.out;
  write_manifest(manifest);

  std::cout << "vocab " << result.model.vocab.size() << " examples " << data.size()
            << " loss " << fmt_full(result.loss_history.front()) << " -> "
            << fmt_full(result.loss_history.back()) << '\n';
}

struct ClassifyArgs {
  std::string model;
  std::string input;
  std::string output;
  std::string stopwords;
};

void cmd_classify(const ClassifyArgs& args) {
  const LogisticModel model = load_model(args.model);
  const auto stopwords =
      args.stopwords.empty() ? default_stopwords() : load_stopwords(args.stopwords);

  std::vector<std::pair<std::string, std::string>> items;  // video_id, text
  std::string ext = std::filesystem::path(args.input).extension().string();
  for (char& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (ext == ".json") {
    const auto loaded = load_captions(args.input);
    print_warnings(loaded.warnings);
    for (const auto& record : loaded.records)
      items.emplace_back(record.video_id, candidate_text(record));
  } else {
    for (const auto& s : load_summaries(args.input)) items.emplace_back(s.video_id, s.text);
  }
  if (items.empty()) throw EmptyResult(args.input + ": nothing to classify");

  std::vector<std::vector<std::string>> rows{{"video_id", "label", "probability"}};
  std::size_t flagged = 0;
  for (const auto& [video_id, text] : items) {
    const Prediction p = predict(model, normalize_text(text, {}, stopwords));
    flagged += p.label;
    rows.push_back({video_id, std::to_string(p.label), fmt_full(p.probability)});
  }
  write_csv(args.output, rows);

  RunManifest manifest;
  manifest.command = "classify";
  manifest.inputs = {args.model, args.input};
  if (!args.stopwords.empty()) manifest.inputs.push_back(args.stopwords);
  manifest.output = args.output;
  write_manifest(manifest);

  std::cout << "classified " << items.size() << " videos, " << flagged
            << " flagged suspicious\n";
}

struct MapArgs {
  std::string detections;
  std::string ground_truth;
  std::string thresholds = "0.5";
  std::string format = "table";
  std::string output;
  bool serial = false;
};

std::vector<double> parse_thresholds(const std::string& text) {
  std::vector<double> out;
  std::size_t begin = 0;
  while (begin <= text.size()) {
    std::size_t end = text.find(',', begin);
    if (end == std::string::npos) end = text.size();
    std::string piece = text.substr(begin, end - begin);
    const auto first = piece.find_first_not_of(" \t");
    if (first == std::string::npos)
      throw ValidationError("--iou-thresholds: empty entry");
    const auto last = piece.find_last_not_of(" \t");
    piece = piece.substr(first, last - first + 1);
    const double value = parse_number(piece, "--iou-thresholds");
    if (!(value >= 0.0 && value <= 1.0))
      throw ValidationError("--iou-thresholds: " + piece + " outside [0,1]");
    if (std::find(out.begin(), out.end(), value) != out.end())
      throw ValidationError("--iou-thresholds: duplicate " + piece);
    out.push_back(value);
    begin = end + 1;
    if (end == text.size()) break;
  }
  return out;
}

std::vector<Detection> load_detections(const std::string& path) {
  const auto rows = read_csv(path);
  const std::vector<std::string> header = {"video_id", "class", "start", "end",
                                           "confidence"};
  if (rows.empty() || rows.front() != header)
    throw ParseError(path + ": expected header video_id,class,start,end,confidence");
  std::vector<Detection> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    const std::string where = path + ": row " + std::to_string(i + 1);
    if (row.size() != header.size()) throw ParseError(where + ": expected 5 fields");
    if (row[1].empty()) throw ValidationError(where + ": empty class");
    Detection d;
    d.video_id = row[0];
    d.class_label = row[1];
    d.segment.start = parse_number(row[2], where);
    d.segment.end = parse_number(row[3], where);
    d.segment.score = parse_number(row[4], where);
    validate_segment(d.segment, where);
    out.push_back(std::move(d));
  }
  return out;
}

std::vector<GroundTruthInstance> load_ground_truth(const std::string& path) {
  const auto rows = read_csv(path);
  const std::vector<std::string> header = {"video_id", "class", "start", "end"};
  if (rows.empty() || rows.front() != header)
    throw ParseError(path + ": expected header video_id,class,start,end");
  std::vector<GroundTruthInstance> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    const std::string where = path + ": row " + std::to_string(i + 1);
    if (row.size() != header.size()) throw ParseError(where + ": expected 4 fields");
    if (row[1].empty()) throw ValidationError(where + ": empty class");
    GroundTruthInstance g;
    g.video_id = row[0];
    g.class_label = row[1];
    g.segment.start = parse_number(row[2], where);
    g.segment.end = parse_number(row[3], where);
    g.segment.score = 1.0;
    validate_segment(g.segment, where);
    out.push_back(std::move(g));
  }
  return out;
}

void cmd_map(const MapArgs& args) {
  if (args.format != "table" && args.format != "csv")
    throw ValidationError("--format must be table or csv");
  const auto thresholds = parse_thresholds(args.thresholds);
  const auto detections = load_detections(args.detections);
  const auto ground_truth = load_ground_truth(args.ground_truth);
  if (ground_truth.empty())
    throw EmptyResult(args.ground_truth + ": no ground-truth instances");

  const auto rows = per_class_ap(detections, ground_truth, thresholds,
                                 args.serial ? Execution::Serial : Execution::Parallel);

  std::vector<std::string> headers{"class"};
  for (double t : thresholds) headers.push_back("AP@" + fmt_fixed(t, 2));
  headers.push_back("mean");

  const std::size_t per_class = thresholds.size();
  const bool full = args.format == "csv";
  auto fmt = [&](double v) { return full ? fmt_full(v) : fmt_fixed(v, 3); };

  std::vector<std::vector<std::string>> cells;
  std::vector<double> column_sums(per_class, 0.0);
  double overall = 0.0;
  std::size_t classes = 0;
  for (std::size_t i = 0; i < rows.size(); i += per_class) {
    std::vector<std::string> line{rows[i].class_label};
    double class_sum = 0.0;
    for (std::size_t j = 0; j < per_class; ++j) {
      line.push_back(fmt(rows[i + j].ap));
      class_sum += rows[i + j].ap;
      column_sums[j] += rows[i + j].ap;
    }
    line.push_back(fmt(class_sum / static_cast<double>(per_class)));
    cells.push_back(std::move(line));
    overall += class_sum / static_cast<double>(per_class);
    ++classes;
  }
  std::vector<std::string> map_row{"mAP"};
  for (double sum : column_sums)
    map_row.push_back(fmt(sum / static_cast<double>(classes)));
  map_row.push_back(fmt(overall / static_cast<double>(classes)));
  cells.push_back(std::move(map_row));

  RunManifest manifest;
  manifest.command = "map";
  manifest.parameters = {{"iou_thresholds", args.thresholds}, {"format", args.format}};
  manifest.inputs = {args.detections, args.ground_truth};

  if (args.format == "csv") {
    std::vector<std::vector<std::string>> csv_rows{headers};
    csv_rows.insert(csv_rows.end(), cells.begin(), cells.end());
    emit(render_csv(csv_rows), args.output, std::move(manifest));
  } else {
    emit(render_table(headers, cells), args.output, std::move(manifest));
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"temporal proposal suppression and caption evaluation toolkit"};
  app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);
  app.require_subcommand(1);

  NmsArgs nms_args;
  auto* nms_cmd = app.add_subcommand("nms", "Suppress overlapping caption events");
  nms_cmd->add_option("-c,--captions", nms_args.captions, "Captions JSON")->required();
  nms_cmd->add_option("-t,--threshold", nms_args.threshold, "Overlap threshold")->required();
  nms_cmd->add_option("-o,--output", nms_args.output, "Filtered captions JSON")->required();
  nms_cmd->add_flag("--serial", nms_args.serial, "Run single-threaded");
  nms_cmd->callback([&] { cmd_nms(nms_args); });

  EvalArgs eval_args;
  auto* eval_cmd = app.add_subcommand("eval", "Score captions against references");
  eval_cmd->add_option("-c,--candidates", eval_args.candidates,
                       "Candidate captions JSON (repeatable)");
  eval_cmd->add_option("-r,--references", eval_args.references, "Reference summaries CSV");
  eval_cmd->add_option("--from-csv", eval_args.from_csv,
                       "Render a previously written results CSV");
  eval_cmd->add_option("--mode", eval_args.mode, "individual|cumulative");
  eval_cmd->add_option("--format", eval_args.format, "table|csv");
  eval_cmd->add_option("-o,--output", eval_args.output, "Write results here");
  eval_cmd->add_flag("--serial", eval_args.serial, "Run single-threaded");
  eval_cmd->callback([&] { cmd_eval(eval_args); });

  TuneArgs tune_args;
  auto* tune_cmd = app.add_subcommand("tune", "Search for the best NMS threshold");
  tune_cmd->add_option("--fitness-fixture", tune_args.fixture,
                       "threshold/fitness table file");
  auto* peak_opt =
      tune_cmd->add_option("--synthetic-peak", tune_args.synthetic_peak,
                           "Quadratic landscape peaked here");
  tune_cmd->add_option("-c,--captions", tune_args.captions, "Captions JSON");
  tune_cmd->add_option("-r,--references", tune_args.references, "Reference summaries CSV");
  tune_cmd->add_option("--generations", tune_args.config.generations, "Evolution steps");
  tune_cmd->add_option("--population", tune_args.config.population, "Population size");
  tune_cmd->add_option("--elites", tune_args.config.elites, "Elites kept per generation");
  tune_cmd->add_option("--seed", tune_args.config.seed, "Random seed");
  tune_cmd->add_option("-o,--output", tune_args.output, "Write search summary JSON");
  tune_cmd->add_flag("--serial", tune_args.serial, "Run single-threaded");
  tune_cmd->callback([&] {
    tune_args.has_peak = peak_opt->count() > 0;
    cmd_tune(tune_args);
  });

  TrainArgs train_args;
  auto* train_cmd =
      app.add_subcommand("train-classifier", "Fit the suspicious-summary classifier");
  train_cmd->add_option("-d,--data", train_args.data, "Labeled CSV (label,text)")->required();
  train_cmd->add_option("-o,--out", train_args.out, "Model file to write")->required();
  train_cmd->add_option("--lr", train_args.options.learning_rate, "Learning rate");
  train_cmd->add_option("--epochs", train_args.options.epochs, "Training epochs");
  train_cmd->add_option("--steps", train_args.options.steps_per_epoch, "Steps per epoch");
  train_cmd->add_option("--seed", train_args.options.seed, "Random seed");
  train_cmd->add_option("--stopwords", train_args.stopwords, "Stopword list file");
  train_cmd->callback([&] { cmd_train(train_args); });

  ClassifyArgs classify_args;
  auto* classify_cmd =
      app.add_subcommand("classify", "Label videos with a trained model");
  classify_cmd->add_option("-m,--model", classify_args.model, "Model file")->required();
  classify_cmd->add_option("-i,--input", classify_args.input,
                           "Captions JSON or summaries CSV")
      ->required();
  classify_cmd->add_option("-o,--output", classify_args.output, "Predictions CSV")
      ->required();
  classify_cmd->add_option("--stopwords", classify_args.stopwords, "Stopword list file");
  classify_cmd->callback([&] { cmd_classify(classify_args); });

  MapArgs map_args;
  auto* map_cmd = app.add_subcommand("map", "Detection AP / mAP over tIoU thresholds");
  map_cmd->add_option("-d,--detections", map_args.detections,
                      "CSV video_id,class,start,end,confidence")
      ->required();
  map_cmd->add_option("-g,--ground-truth", map_args.ground_truth,
                      "CSV video_id,class,start,end")
      ->required();
  map_cmd->add_option("--iou-thresholds", map_args.thresholds, "Comma-separated list");
  map_cmd->add_option("--format", map_args.format, "table|csv");
  map_cmd->add_option("-o,--output", map_args.output, "Write results here");
  map_cmd->add_flag("--serial", map_args.serial, "Run single-threaded");
  map_cmd->callback([&] { cmd_map(map_args); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const EmptyResult& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const VersionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
