#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "denseval/corpus.hpp"
#include "denseval/errors.hpp"

using namespace denseval;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = DENSEVAL_FIXTURE_DIR;

struct TempDir {
  fs::path path;
  TempDir() {
    static std::mt19937_64 rng(std::random_device{}());
    path = fs::temp_directory_path() / ("denseval_test_" + std::to_string(rng()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream f(p, std::ios::binary);
  f << content;
}

std::string read_file(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("captions fixture loads with the declared structure") {
  const auto loaded = load_captions(kFixtures / "sample_captions.json");
  CHECK(loaded.warnings.empty());
  REQUIRE(loaded.records.size() == 3);
  const CaptionRecord& a = loaded.records[0];
  CHECK(a.video_id == "video_a");
  CHECK(a.duration == 60.0);
  REQUIRE(a.events.size() == 3);
  CHECK(a.events[0].segment == TemporalSegment{0.0, 10.0, 0.9});
  CHECK(a.events[1].segment == TemporalSegment{1.0, 11.0, 0.8});
  CHECK(a.events[0].sentence == "a man walks into the store");
  CHECK(loaded.records[2].events.size() == 1);
}

TEST_CASE("missing scores default to list rank") {
  TempDir tmp;
  write_file(tmp.path / "c.json",
             R"({"v": {"duration": 40, "timestamps": [[0,1],[2,3],[4,5],[6,7]],
                 "sentences": ["a", "b", "c", "d"]}})");
  const auto loaded = load_captions(tmp.path / "c.json");
  REQUIRE(loaded.records.size() == 1);
  const auto& events = loaded.records[0].events;
  REQUIRE(events.size() == 4);
  CHECK(events[0].segment.score == 1.0);
  CHECK(events[1].segment.score == 0.75);
  CHECK(events[2].segment.score == 0.5);
  CHECK(events[3].segment.score == 0.25);
}

TEST_CASE("caption load/save round trip is lossless") {
  TempDir tmp;
  const auto first = load_captions(kFixtures / "sample_captions.json");
  save_captions(first.records, tmp.path / "one.json");
  const auto second = load_captions(tmp.path / "one.json");
  CHECK(first.records == second.records);
  save_captions(second.records, tmp.path / "two.json");
  CHECK(read_file(tmp.path / "one.json") == read_file(tmp.path / "two.json"));
}

TEST_CASE("caption validation failures name the offending video") {
  TempDir tmp;
  auto expect_validation = [&](const std::string& body, const std::string& needle) {
    write_file(tmp.path / "bad.json", body);
    try {
      load_captions(tmp.path / "bad.json");
      FAIL_CHECK("expected ValidationError for " << body);
    } catch (const ValidationError& e) {
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };
  expect_validation(R"({"vid": {"duration": 0, "timestamps": [], "sentences": []}})", "vid");
  expect_validation(
      R"({"vid": {"duration": 10, "timestamps": [[0,1]], "sentences": []}})", "equal length");
  expect_validation(
      R"({"vid": {"duration": 10, "timestamps": [[0,11]], "sentences": ["x"]}})", "duration");
  expect_validation(
      R"({"vid": {"duration": 10, "timestamps": [[-1,2]], "sentences": ["x"]}})", "negative");
  expect_validation(
      R"({"vid": {"duration": 10, "timestamps": [[3,2]], "sentences": ["x"]}})", "exceed");
  expect_validation(
      R"({"vid": {"duration": 10, "timestamps": [[0,2]], "sentences": [""]}})", "sentences");
  expect_validation(
      R"({"vid": {"duration": 10, "timestamps": [[0,2]], "sentences": ["x"], "scores": [2]}})",
      "scores");

  write_file(tmp.path / "garbage.json", "{{{");
  CHECK_THROWS_AS(load_captions(tmp.path / "garbage.json"), ParseError);
  write_file(tmp.path / "array.json", "[1, 2]");
  CHECK_THROWS_AS(load_captions(tmp.path / "array.json"), ParseError);
}

TEST_CASE("an empty captions file is a warning, not an error") {
  TempDir tmp;
  write_file(tmp.path / "empty.json", "  \n");
  const auto loaded = load_captions(tmp.path / "empty.json");
  CHECK(loaded.records.empty());
  REQUIRE(loaded.warnings.size() == 1);
}

TEST_CASE("nms filtering keeps event order and sentences") {
  const auto loaded = load_captions(kFixtures / "sample_captions.json");
  const CaptionRecord filtered = apply_nms(loaded.records[0], 0.5);
  REQUIRE(filtered.events.size() == 2);  // the 0.8-scored overlap is suppressed
  CHECK(filtered.events[0].sentence == "a man walks into the store");
  CHECK(filtered.events[1].sentence == "a woman waits near the entrance");
}

TEST_CASE("summary class list is the eleven-way taxonomy") {
  CHECK(std::size(kSummaryClasses) == 11);
  const auto summaries = load_summaries(kFixtures / "sample_references.csv");
  REQUIRE(summaries.size() == 3);
  CHECK(summaries[0].video_id == "video_a");
  CHECK(summaries[0].class_label == "Shoplifting");
  CHECK(summaries[1].text == "The suspect takes a bag from the victim");
}

TEST_CASE("summary loading validates header, class and text") {
  TempDir tmp;
  write_file(tmp.path / "refs.csv", "video_id,klass,summary\nv,Normal,x\n");
  CHECK_THROWS_AS(load_summaries(tmp.path / "refs.csv"), ParseError);
  write_file(tmp.path / "refs.csv", "video_id,class,summary\nv,Quiet,x\n");
  CHECK_THROWS_AS(load_summaries(tmp.path / "refs.csv"), ValidationError);
  write_file(tmp.path / "refs.csv", "video_id,class,summary\nv,Normal,\n");
  CHECK_THROWS_AS(load_summaries(tmp.path / "refs.csv"), ValidationError);

  const std::vector<GroundTruthSummary> summaries = {
      {"v1", "Arson", "fire, then smoke"}, {"v2", "Normal", "a \"quiet\" day"}};
  save_summaries(summaries, tmp.path / "out.csv");
  const auto reloaded = load_summaries(tmp.path / "out.csv");
  REQUIRE(reloaded.size() == 2);
  CHECK(reloaded[0].text == "fire, then smoke");
  CHECK(reloaded[1].text == "a \"quiet\" day");
}

TEST_CASE("labeled data round trip and validation") {
  TempDir tmp;
  const std::vector<LabeledSummary> data = {{"a man runs, then hides", 1},
                                            {"a calm afternoon", 0}};
  save_labeled(data, tmp.path / "l.csv");
  CHECK(load_labeled(tmp.path / "l.csv") == data);

  write_file(tmp.path / "bad.csv", "label,text\n2,x\n");
  CHECK_THROWS_AS(load_labeled(tmp.path / "bad.csv"), ValidationError);
  write_file(tmp.path / "bad.csv", "text,label\nx,1\n");
  CHECK_THROWS_AS(load_labeled(tmp.path / "bad.csv"), ParseError);
}

TEST_CASE("default stopwords cover articles but never person terms") {
  const auto& words = default_stopwords();
  auto has = [&](const std::string& w) {
    return std::find(words.begin(), words.end(), w) != words.end();
  };
  for (const char* w : {"a", "an", "the", "is", "and", "with"}) CHECK(has(w));
  for (const char* w : {"man", "woman", "person", "suspect", "victim"}) CHECK(!has(w));

  const auto from_file = load_stopwords(kFixtures / ".." / "stopwords.txt");
  CHECK(from_file == words);
}

TEST_CASE("normalization applies the rules in order") {
  CHECK(normalize_text("The suspect runs.") == "man runs");
  CHECK(normalize_text("The victim fell!") == "woman fell");
  CHECK(normalize_text("A person walks.") == "man walks");
  CHECK(normalize_text("Police; arrived, QUICKLY...") == "police arrived quickly");
  CHECK(normalize_text("the a of and") == "");

  NormalizeRules keep_stopwords{true, true, false, true};
  CHECK(normalize_text("A person walks", keep_stopwords) == "man walks");

  NormalizeRules no_substitution{true, true, true, false};
  CHECK(normalize_text("The suspect runs", no_substitution) == "suspect runs");

  NormalizeRules keep_case{false, true, true, true};
  CHECK(normalize_text("The CAT sat", keep_case) == "The CAT sat");
}

TEST_CASE("normalization is idempotent") {
  const std::vector<std::string> samples = {
      "The suspect grabbed the victim's bag!",
      "A PERSON, walking... near a person",
      "its on the mat; it is THERE",
      "",
  };
  for (const auto& s : samples) {
    const std::string once = normalize_text(s);
    CHECK(normalize_text(once) == once);
  }
  std::mt19937_64 rng(64);
  const std::vector<std::string> vocab = {"the",  "suspect", "victim", "a",   "person",
                                          "runs", "Man!",    "woman,", "and", "STOPS"};
  std::uniform_int_distribution<std::size_t> pick(0, vocab.size() - 1);
  for (int trial = 0; trial < 100; ++trial) {
    std::string text;
    for (int i = 0; i < 8; ++i) text += vocab[pick(rng)] + " ";
    const std::string once = normalize_text(text);
    CHECK(normalize_text(once) == once);
  }
}

TEST_CASE("augmentation emits both person-term assignments") {
  const auto both = normalize_text_variants("the suspect hit the victim");
  REQUIRE(both.size() == 2);
  CHECK(both[0] == "man hit woman");
  CHECK(both[1] == "woman hit man");

  const auto suspect_only = normalize_text_variants("the suspect ran");
  REQUIRE(suspect_only.size() == 2);
  CHECK(suspect_only[0] == "man ran");
  CHECK(suspect_only[1] == "woman ran");

  CHECK(normalize_text_variants("a person ran") == std::vector<std::string>{"man ran"});
  CHECK(normalize_text_variants("a dog ran") == std::vector<std::string>{"dog ran"});
}

TEST_CASE("transcript merging joins groups of k") {
  const std::vector<std::string> t = {" a ", "b", "c\n", "d", "e", "f", "g"};
  const auto merged = merge_transcripts(t, 3);
  REQUIRE(merged.size() == 3);
  CHECK(merged[0] == "a. b. c");
  CHECK(merged[1] == "d. e. f");
  CHECK(merged[2] == "g");
  CHECK(merge_transcripts(t, 3, true).size() == 2);
  CHECK(merge_transcripts({}, 3).empty());
  CHECK(merge_transcripts({"x"}, 1) == std::vector<std::string>{"x"});
  CHECK_THROWS_AS(merge_transcripts(t, 0), std::domain_error);
}

TEST_CASE("merging 7985 transcripts in threes") {
  std::vector<std::string> t(7985, "x");
  CHECK(merge_transcripts(t, 3).size() == 2662);
  CHECK(merge_transcripts(t, 3, true).size() == 2661);
}

namespace {

std::vector<LabeledSummary> synthetic_corpus(std::size_t positives, std::size_t negatives) {
  std::vector<LabeledSummary> data;
  for (std::size_t i = 0; i < positives; ++i)
    data.push_back({"bad event " + std::to_string(i), 1});
  for (std::size_t i = 0; i < negatives; ++i)
    data.push_back({"calm event " + std::to_string(i), 0});
  return data;
}

std::map<std::pair<int, std::string>, int> histogram(const std::vector<LabeledSummary>& v) {
  std::map<std::pair<int, std::string>, int> h;
  for (const auto& s : v) ++h[{s.label, s.text}];
  return h;
}

}  // namespace

TEST_CASE("stratified split rounds the test share per label") {
  const auto data = synthetic_corpus(445, 475);
  const SplitResult split = stratified_split(data, 0.7, 5);
  std::size_t train1 = 0, train0 = 0, test1 = 0, test0 = 0;
  for (const auto& s : split.train) (s.label ? train1 : train0)++;
  for (const auto& s : split.test) (s.label ? test1 : test0)++;
  CHECK(train1 == 311);
  CHECK(test1 == 134);
  CHECK(train0 == 332);
  CHECK(test0 == 143);
}

TEST_CASE("stratified split partitions and is seed-deterministic") {
  const auto data = synthetic_corpus(10, 10);
  const SplitResult a = stratified_split(data, 0.7, 123);
  const SplitResult b = stratified_split(data, 0.7, 123);
  CHECK(a.train == b.train);
  CHECK(a.test == b.test);
  CHECK(a.train.size() == 14);
  CHECK(a.test.size() == 6);

  auto combined = a.train;
  combined.insert(combined.end(), a.test.begin(), a.test.end());
  CHECK(histogram(combined) == histogram(data));
}

TEST_CASE("stratified split edge cases") {
  const auto single = stratified_split(synthetic_corpus(10, 0), 0.7, 1);
  REQUIRE(single.warnings.size() == 1);
  CHECK(single.train.size() == 7);
  CHECK(single.test.size() == 3);

  CHECK_THROWS_AS(stratified_split({}, 0.7, 1), ValidationError);
  CHECK_THROWS_AS(stratified_split(synthetic_corpus(2, 2), 0.0, 1), std::domain_error);
  CHECK_THROWS_AS(stratified_split(synthetic_corpus(2, 2), 1.0, 1), std::domain_error);
}
