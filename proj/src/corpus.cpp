#include "denseval/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include <json.hpp>

#include "denseval/csv.hpp"
#include "denseval/errors.hpp"

namespace denseval {

using ordered_json = nlohmann::ordered_json;

ProposalSet CaptionRecord::proposals() const {
  std::vector<TemporalSegment> segs;
  segs.reserve(events.size());
  for (const auto& e : events) segs.push_back(e.segment);
  return ProposalSet::make(video_id, duration, std::move(segs));
}

CaptionRecord apply_nms(const CaptionRecord& record, double threshold) {
  const ProposalSet kept = nms(record.proposals(), threshold);
  std::multiset<std::tuple<double, double, double>> pool;
  for (const auto& s : kept.segments) pool.insert({s.start, s.end, s.score});

  CaptionRecord out;
  out.video_id = record.video_id;
  out.duration = record.duration;
  for (const auto& e : record.events) {
    auto it = pool.find({e.segment.start, e.segment.end, e.segment.score});
    if (it != pool.end()) {
      pool.erase(it);
      out.events.push_back(e);
    }
  }
  return out;
}

CaptionLoadResult load_captions(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();

  CaptionLoadResult result;
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
    result.warnings.push_back(path.string() + ": empty captions file");
    return result;
  }

  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  if (!doc.is_object())
    throw ParseError(path.string() + ": top level must be an object keyed by video_id");
  if (doc.empty())
    result.warnings.push_back(path.string() + ": no videos in captions file");

  for (const auto& [video_id, body] : doc.items()) {
    auto fail = [&](const std::string& msg) -> ValidationError {
      return ValidationError(path.string() + ": video " + video_id + ": " + msg);
    };
    if (!body.is_object()) throw fail("entry must be an object");
    if (!body.contains("duration") || !body["duration"].is_number())
      throw fail("missing numeric 'duration'");
    if (!body.contains("timestamps") || !body["timestamps"].is_array())
      throw fail("missing 'timestamps' array");
    if (!body.contains("sentences") || !body["sentences"].is_array())
      throw fail("missing 'sentences' array");

    CaptionRecord record;
    record.video_id = video_id;
    record.duration = body["duration"].get<double>();
    if (!(record.duration > 0.0)) throw fail("duration must be positive");

    const auto& timestamps = body["timestamps"];
    const auto& sentences = body["sentences"];
    if (timestamps.size() != sentences.size())
      throw fail("timestamps and sentences must have equal length");

    std::vector<double> scores;
    if (body.contains("scores")) {
      if (!body["scores"].is_array() || body["scores"].size() != timestamps.size())
        throw fail("'scores' must parallel timestamps");
      for (const auto& s : body["scores"]) {
        if (!s.is_number()) throw fail("scores must be numeric");
        scores.push_back(s.get<double>());
      }
    } else {
      const std::size_t n = timestamps.size();
      for (std::size_t i = 0; i < n; ++i)
        scores.push_back(1.0 - static_cast<double>(i) / static_cast<double>(n));
    }

    for (std::size_t i = 0; i < timestamps.size(); ++i) {
      const auto& ts = timestamps[i];
      if (!ts.is_array() || ts.size() != 2 || !ts[0].is_number() || !ts[1].is_number())
        throw fail("timestamps[" + std::to_string(i) + "] must be [start, end]");
      CaptionEvent event;
      event.segment.start = ts[0].get<double>();
      event.segment.end = ts[1].get<double>();
      event.segment.score = scores[i];
      if (event.segment.start < 0.0)
        throw fail("timestamps[" + std::to_string(i) + "]: start is negative");
      if (!(event.segment.end > event.segment.start))
        throw fail("timestamps[" + std::to_string(i) + "]: end " +
                   std::to_string(event.segment.end) + " must exceed start " +
                   std::to_string(event.segment.start));
      if (event.segment.end > record.duration)
        throw fail("timestamps[" + std::to_string(i) + "]: end exceeds duration");
      if (event.segment.score < 0.0 || event.segment.score > 1.0)
        throw fail("scores[" + std::to_string(i) + "] outside [0,1]");
      if (!sentences[i].is_string() || sentences[i].get<std::string>().empty())
        throw fail("sentences[" + std::to_string(i) + "] must be a non-empty string");
      event.sentence = sentences[i].get<std::string>();
      record.events.push_back(std::move(event));
    }
    result.records.push_back(std::move(record));
  }
  return result;
}

void save_captions(const std::vector<CaptionRecord>& records,
                   const std::filesystem::path& path) {
  ordered_json doc = ordered_json::object();
  for (const auto& record : records) {
    ordered_json body;
    body["duration"] = record.duration;
    ordered_json timestamps = ordered_json::array();
    ordered_json sentences = ordered_json::array();
    ordered_json scores = ordered_json::array();
    for (const auto& e : record.events) {
      timestamps.push_back({e.segment.start, e.segment.end});
      sentences.push_back(e.sentence);
      scores.push_back(e.segment.score);
    }
    body["timestamps"] = std::move(timestamps);
    body["sentences"] = std::move(sentences);
    body["scores"] = std::move(scores);
    doc[record.video_id] = std::move(body);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

std::vector<GroundTruthSummary> load_summaries(const std::filesystem::path& path) {
  const auto rows = read_csv(path);
  if (rows.empty() || rows.front() != std::vector<std::string>{"video_id", "class", "summary"})
    throw ParseError(path.string() + ": expected header video_id,class,summary");
  static const std::set<std::string> classes(std::begin(kSummaryClasses),
                                             std::end(kSummaryClasses));
  std::vector<GroundTruthSummary> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (row.size() != 3)
      throw ParseError(path.string() + ": row " + std::to_string(i + 1) +
                       ": expected 3 fields, got " + std::to_string(row.size()));
    if (!classes.count(row[1]))
      throw ValidationError(path.string() + ": row " + std::to_string(i + 1) +
                            ": unknown class '" + row[1] + "'");
    if (row[2].empty())
      throw ValidationError(path.string() + ": row " + std::to_string(i + 1) +
                            ": empty summary for video " + row[0]);
    out.push_back({row[0], row[1], row[2]});
  }
  return out;
}

void save_summaries(const std::vector<GroundTruthSummary>& summaries,
                    const std::filesystem::path& path) {
  std::vector<std::vector<std::string>> rows{{"video_id", "class", "summary"}};
  for (const auto& s : summaries) rows.push_back({s.video_id, s.class_label, s.text});
  write_csv(path, rows);
}

std::vector<LabeledSummary> load_labeled(const std::filesystem::path& path) {
  const auto rows = read_csv(path);
  if (rows.empty() || rows.front() != std::vector<std::string>{"label", "text"})
    throw ParseError(path.string() + ": expected header label,text");
  std::vector<LabeledSummary> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (row.size() != 2)
      throw ParseError(path.string() + ": row " + std::to_string(i + 1) +
                       ": expected 2 fields, got " + std::to_string(row.size()));
    if (row[0] != "0" && row[0] != "1")
      throw ValidationError(path.string() + ": row " + std::to_string(i + 1) +
                            ": label must be 0 or 1, got '" + row[0] + "'");
    out.push_back({row[1], row[0] == "1" ? 1 : 0});
  }
  return out;
}

void save_labeled(const std::vector<LabeledSummary>& data,
                  const std::filesystem::path& path) {
  std::vector<std::vector<std::string>> rows{{"label", "text"}};
  for (const auto& d : data) rows.push_back({std::to_string(d.label), d.text});
  write_csv(path, rows);
}

const std::vector<std::string>& default_stopwords() {
  static const std::vector<std::string> words = {
      "a",    "an",   "the",  "is",    "are",  "was",   "were", "be",
      "been", "being", "to",  "of",    "in",   "on",    "at",   "and",
      "or",   "it",   "its",  "this",  "that", "these", "those", "with",
      "for",  "as",   "by",   "from",  "then", "there", "he",   "she",
      "they", "them", "his",  "her",   "their"};
  return words;
}

std::vector<std::string> load_stopwords(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (!line.empty() && line.front() != '#') words.push_back(line);
  }
  return words;
}

namespace {

std::vector<std::string> split_whitespace(const std::string& text) {
  std::vector<std::string> tokens;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) tokens.push_back(std::move(tok));
  return tokens;
}

struct PersonAssignment {
  std::string suspect;
  std::string victim;
};

std::string normalize_with(const std::string& text, const NormalizeRules& rules,
                           const std::vector<std::string>& stopwords,
                           const PersonAssignment& assignment) {
  std::vector<std::string> tokens = split_whitespace(text);

  if (rules.lowercase) {
    for (auto& t : tokens)
      for (char& c : t) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  if (rules.strip_punctuation) {
    std::vector<std::string> stripped;
    for (auto& t : tokens) {
      std::size_t b = 0, e = t.size();
      while (b < e && std::ispunct(static_cast<unsigned char>(t[b]))) ++b;
      while (e > b && std::ispunct(static_cast<unsigned char>(t[e - 1]))) --e;
      if (e > b) stripped.push_back(t.substr(b, e - b));
    }
    tokens = std::move(stripped);
  }
  if (rules.remove_stopwords) {
    const std::set<std::string> stop(stopwords.begin(), stopwords.end());
    std::erase_if(tokens, [&](const std::string& t) { return stop.count(t) > 0; });
  }
  if (rules.substitute_person_terms) {
    std::vector<std::string> substituted;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (tokens[i] == "a" && i + 1 < tokens.size() && tokens[i + 1] == "person") {
        substituted.push_back("man");
        ++i;
      } else if (tokens[i] == "person") {
        substituted.push_back("man");
      } else if (tokens[i] == "suspect") {
        substituted.push_back(assignment.suspect);
      } else if (tokens[i] == "victim") {
        substituted.push_back(assignment.victim);
      } else {
        substituted.push_back(tokens[i]);
      }
    }
    tokens = std::move(substituted);
  }

  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

}  // namespace

std::string normalize_text(const std::string& text, const NormalizeRules& rules,
                           const std::vector<std::string>& stopwords) {
  return normalize_with(text, rules, stopwords, {"man", "woman"});
}

std::vector<std::string> normalize_text_variants(
    const std::string& text, const NormalizeRules& rules,
    const std::vector<std::string>& stopwords) {
  const std::string first = normalize_with(text, rules, stopwords, {"man", "woman"});
  if (rules.substitute_person_terms) {
    const std::string second = normalize_with(text, rules, stopwords, {"woman", "man"});
    if (second != first) return {first, second};
  }
  return {first};
}

std::vector<std::string> merge_transcripts(const std::vector<std::string>& transcripts,
                                           std::size_t k, bool drop_remainder) {
  if (k < 1) throw std::domain_error("merge_transcripts: k must be >= 1");
  auto trim = [](const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return std::string();
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
  };
  std::vector<std::string> merged;
  for (std::size_t i = 0; i < transcripts.size(); i += k) {
    const std::size_t end = std::min(i + k, transcripts.size());
    if (drop_remainder && end - i < k) break;
    std::string group;
    for (std::size_t j = i; j < end; ++j) {
      if (j > i) group += ". ";
      group += trim(transcripts[j]);
    }
    merged.push_back(std::move(group));
  }
  return merged;
}

SplitResult stratified_split(const std::vector<LabeledSummary>& data,
                             double train_ratio, std::uint64_t seed) {
  if (!(train_ratio > 0.0 && train_ratio < 1.0))
    throw std::domain_error("stratified_split: ratio must be in (0,1)");
  if (data.empty()) throw ValidationError("stratified_split: no samples");

  std::map<int, std::vector<std::size_t>> by_label;
  for (std::size_t i = 0; i < data.size(); ++i) by_label[data[i].label].push_back(i);

  SplitResult result;
  if (by_label.size() == 1)
    result.warnings.push_back("single-class dataset: split is not stratified");

  std::mt19937_64 rng(seed);
  for (auto& [label, indices] : by_label) {
    (void)label;
    std::shuffle(indices.begin(), indices.end(), rng);
    const std::size_t n = indices.size();
    // Half-away-from-zero on the test share; the nudge keeps exact halves
    // (e.g. 445 * 0.3) from falling to the wrong side in floating point.
    const auto n_test = static_cast<std::size_t>(
        std::floor(static_cast<double>(n) * (1.0 - train_ratio) + 0.5 + 1e-9));
    const std::size_t n_train = n - std::min(n_test, n);
    for (std::size_t i = 0; i < n; ++i) {
      const LabeledSummary& sample = data[indices[i]];
      if (i < n_train) result.train.push_back(sample);
      else result.test.push_back(sample);
    }
  }
  return result;
}

}  // namespace denseval
