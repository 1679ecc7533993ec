#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "denseval/corpus.hpp"

using namespace denseval;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = DENSEVAL_FIXTURE_DIR;
const std::string kBinary = DENSEVAL_CLI;

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

struct Scratch {
  fs::path dir;
  int runs = 0;

  Scratch() {
    static std::mt19937_64 rng(std::random_device{}());
    dir = fs::temp_directory_path() / ("denseval_cli_" + std::to_string(rng()));
    fs::create_directories(dir);
  }
  ~Scratch() {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }

  fs::path path(const std::string& name) const { return dir / name; }

  std::string read(const fs::path& p) const {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
  }

  void write(const fs::path& p, const std::string& content) const {
    std::ofstream f(p, std::ios::binary);
    f << content;
  }

  RunResult run(const std::string& args) {
    const fs::path out = path("stdout." + std::to_string(runs));
    const fs::path err = path("stderr." + std::to_string(runs));
    ++runs;
    const std::string cmd = "'" + kBinary + "' " + args + " >'" + out.string() + "' 2>'" +
                            err.string() + "'";
    const int raw = std::system(cmd.c_str());
    RunResult result;
    if (raw != -1 && WIFEXITED(raw)) result.code = WEXITSTATUS(raw);
    result.out = read(out);
    result.err = read(err);
    return result;
  }
};

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("top-level flags and argument errors") {
  Scratch s;
  CHECK(s.run("--version").code == 0);
  CHECK(contains(s.run("--version").out, "denseval"));
  CHECK(s.run("--help").code == 0);
  CHECK(s.run("").code == 2);              // a subcommand is required
  CHECK(s.run("--no-such-flag").code == 2);
  CHECK(s.run("nms").code == 2);           // missing required options
}

TEST_CASE("nms filters a captions file and writes a manifest") {
  Scratch s;
  const fs::path out = s.path("filtered.json");
  const RunResult r = s.run("nms -c '" + (kFixtures / "sample_captions.json").string() +
                            "' -t 0.5 -o '" + out.string() + "'");
  CHECK(r.code == 0);
  CHECK(contains(r.out, "kept 5 of 6 events across 3 videos"));

  const auto filtered = load_captions(out);
  REQUIRE(filtered.records.size() == 3);
  CHECK(filtered.records[0].events.size() == 2);

  const fs::path manifest = out.string() + ".manifest.json";
  REQUIRE(fs::exists(manifest));
  const auto doc = nlohmann::json::parse(s.read(manifest));
  CHECK(doc.at("command") == "nms");
  CHECK(doc.at("tool") == "denseval");
  CHECK(doc.at("inputs").size() == 1);
  CHECK(doc.at("inputs")[0].at("fnv1a64").get<std::string>().size() == 16);
}

TEST_CASE("nms error paths map to documented exit codes") {
  Scratch s;
  const std::string captions = (kFixtures / "sample_captions.json").string();
  CHECK(s.run("nms -c '" + captions + "' -t 1.5 -o '" + s.path("x.json").string() + "'")
            .code == 2);
  CHECK(s.run("nms -c '" + s.path("missing.json").string() + "' -t 0.5 -o '" +
              s.path("x.json").string() + "'")
            .code == 2);
  s.write(s.path("none.json"), "{}");
  const RunResult empty = s.run("nms -c '" + s.path("none.json").string() + "' -t 0.5 -o '" +
                                s.path("x.json").string() + "'");
  CHECK(empty.code == 3);
  CHECK(contains(empty.err, "no videos"));
}

TEST_CASE("eval scores captions against references in both formats") {
  Scratch s;
  const std::string captions = (kFixtures / "sample_captions.json").string();
  const std::string refs = (kFixtures / "sample_references.csv").string();

  const RunResult table = s.run("eval -c '" + captions + "' -r '" + refs + "'");
  CHECK(table.code == 0);
  CHECK(contains(table.out, "BLEU@1"));
  CHECK(contains(table.out, "METEOR"));
  CHECK(contains(table.out, captions));
  CHECK_FALSE(contains(table.out, "Mean"));

  const RunResult csv = s.run("eval -c '" + captions + "' -r '" + refs + "' --format csv");
  CHECK(csv.code == 0);
  CHECK(csv.out.rfind("candidate,bleu1,bleu2,bleu3,bleu4,meteor\n", 0) == 0);

  const RunResult two =
      s.run("eval -c '" + captions + "' -c '" + captions + "' -r '" + refs + "'");
  CHECK(two.code == 0);
  CHECK(contains(two.out, "Mean"));

  CHECK(s.run("eval -c '" + captions + "'").code == 2);
  CHECK(s.run("eval -c '" + captions + "' -r '" + refs + "' --mode sideways").code == 2);
}

TEST_CASE("eval results round trip through the archival csv") {
  Scratch s;
  const std::string captions = (kFixtures / "sample_captions.json").string();
  const std::string refs = (kFixtures / "sample_references.csv").string();
  const fs::path results = s.path("results.csv");
  const fs::path direct = s.path("direct.txt");
  const fs::path rendered = s.path("rendered.txt");

  CHECK(s.run("eval -c '" + captions + "' -r '" + refs + "' --format csv -o '" +
              results.string() + "'")
            .code == 0);
  CHECK(s.run("eval -c '" + captions + "' -r '" + refs + "' -o '" + direct.string() + "'")
            .code == 0);
  CHECK(s.run("eval --from-csv '" + results.string() + "' -o '" + rendered.string() + "'")
            .code == 0);
  CHECK(s.read(direct) == s.read(rendered));

  // from-csv excludes live scoring inputs
  CHECK(s.run("eval --from-csv '" + results.string() + "' -c '" + captions + "'").code == 2);

  s.write(s.path("empty.csv"), "candidate,bleu1,bleu2,bleu3,bleu4,meteor\n");
  CHECK(s.run("eval --from-csv '" + s.path("empty.csv").string() + "'").code == 3);
  s.write(s.path("badhdr.csv"), "candidate,b1\nx,1\n");
  CHECK(s.run("eval --from-csv '" + s.path("badhdr.csv").string() + "'").code == 2);
}

TEST_CASE("eval renders the bundled precomputed results") {
  Scratch s;
  const RunResult r =
      s.run("eval --from-csv '" + (kFixtures / "precomputed_eval_results.csv").string() + "'");
  CHECK(r.code == 0);
  CHECK(contains(r.out, "baseline"));
  CHECK(contains(r.out, "10.47"));
  CHECK(contains(r.out, "13.22"));
}

TEST_CASE("tune finds the measured optimum of the bundled sweep") {
  Scratch s;
  const fs::path summary = s.path("search.json");
  const RunResult r =
      s.run("tune --fitness-fixture '" + (kFixtures / "threshold_sweep.tsv").string() +
            "' -o '" + summary.string() + "'");
  CHECK(r.code == 0);
  CHECK(contains(r.out, "gen 0: best"));
  CHECK(contains(r.out, "gen 5: best"));
  CHECK(contains(r.out, "best threshold 0.470 fitness 13.970"));

  REQUIRE(fs::exists(summary));
  const auto doc = nlohmann::json::parse(s.read(summary));
  CHECK(doc.at("best_threshold").get<double>() == 0.47);
  CHECK(doc.at("history").size() == 6);
  CHECK(fs::exists(summary.string() + ".manifest.json"));
}

TEST_CASE("tune validates its fitness source selection") {
  Scratch s;
  CHECK(s.run("tune").code == 2);
  CHECK(s.run("tune --synthetic-peak 0.4 --fitness-fixture '" +
              (kFixtures / "threshold_sweep.tsv").string() + "'")
            .code == 2);
  CHECK(s.run("tune -c '" + (kFixtures / "sample_captions.json").string() + "'").code == 2);
  CHECK(s.run("tune --synthetic-peak 1.4").code == 2);

  const RunResult synthetic = s.run("tune --synthetic-peak 0.47 --seed 5 --serial");
  CHECK(synthetic.code == 0);
  CHECK(contains(synthetic.out, "best threshold"));

  s.write(s.path("flat.tsv"), "0.2\t5.0\n0.8\t5.0\n");
  const RunResult flat = s.run("tune --fitness-fixture '" + s.path("flat.tsv").string() + "'");
  CHECK(flat.code == 0);
  CHECK(contains(flat.err, "flat"));
}

TEST_CASE("tune runs the full caption pipeline as a fitness source") {
  Scratch s;
  const RunResult r = s.run("tune -c '" + (kFixtures / "sample_captions.json").string() +
                            "' -r '" + (kFixtures / "sample_references.csv").string() +
                            "' --generations 2 --seed 3");
  CHECK(r.code == 0);
  CHECK(contains(r.out, "best threshold"));
}

TEST_CASE("classifier training and prediction from the command line") {
  Scratch s;
  const fs::path model = s.path("model.txt");
  const RunResult trained =
      s.run("train-classifier -d '" + (kFixtures / "labeled_summaries.csv").string() +
            "' -o '" + model.string() + "' --lr 0.5 --epochs 50");
  CHECK(trained.code == 0);
  CHECK(contains(trained.out, "vocab "));
  CHECK(contains(trained.out, "examples 20"));
  REQUIRE(fs::exists(model));
  REQUIRE(fs::exists(model.string() + ".loss.csv"));
  CHECK(s.read(model.string() + ".loss.csv").rfind("step,loss\n", 0) == 0);
  CHECK(fs::exists(model.string() + ".manifest.json"));

  const fs::path preds = s.path("preds.csv");
  const RunResult classified =
      s.run("classify -m '" + model.string() + "' -i '" +
            (kFixtures / "sample_references.csv").string() + "' -o '" + preds.string() + "'");
  CHECK(classified.code == 0);
  CHECK(contains(classified.out, "classified 3 videos"));
  CHECK(s.read(preds).rfind("video_id,label,probability\n", 0) == 0);

  const RunResult from_captions =
      s.run("classify -m '" + model.string() + "' -i '" +
            (kFixtures / "sample_captions.json").string() + "' -o '" +
            s.path("preds2.csv").string() + "'");
  CHECK(from_captions.code == 0);
  CHECK(contains(from_captions.out, "classified 3 videos"));

  // A future model version is refused with its dedicated exit code.
  std::string contents = s.read(model);
  contents.replace(contents.find(" v1 "), 4, " v9 ");
  s.write(s.path("future.txt"), contents);
  const RunResult refused = s.run("classify -m '" + s.path("future.txt").string() + "' -i '" +
                                  (kFixtures / "sample_references.csv").string() + "' -o '" +
                                  s.path("preds3.csv").string() + "'");
  CHECK(refused.code == 4);
  CHECK(contains(refused.err, "version"));
}

TEST_CASE("map reports per-class average precision") {
  Scratch s;
  const std::string dets = (kFixtures / "sample_detections.csv").string();
  const std::string gts = (kFixtures / "sample_groundtruth.csv").string();

  const RunResult table = s.run("map -d '" + dets + "' -g '" + gts + "'");
  CHECK(table.code == 0);
  CHECK(contains(table.out, "AP@0.50"));
  CHECK(contains(table.out, "Assault"));
  CHECK(contains(table.out, "0.833"));
  CHECK(contains(table.out, "Robbery"));
  CHECK(contains(table.out, "1.000"));
  CHECK(contains(table.out, "mAP"));
  CHECK(contains(table.out, "0.917"));

  const RunResult csv =
      s.run("map -d '" + dets + "' -g '" + gts + "' --format csv --iou-thresholds 0.3,0.5");
  CHECK(csv.code == 0);
  CHECK(csv.out.rfind("class,AP@0.30,AP@0.50,mean\n", 0) == 0);

  CHECK(s.run("map -d '" + dets + "' -g '" + gts + "' --iou-thresholds 0.5,0.5").code == 2);
  CHECK(s.run("map -d '" + dets + "' -g '" + gts + "' --iou-thresholds 1.5").code == 2);

  s.write(s.path("nogt.csv"), "video_id,class,start,end\n");
  CHECK(s.run("map -d '" + dets + "' -g '" + s.path("nogt.csv").string() + "'").code == 3);
}
