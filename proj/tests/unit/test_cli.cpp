#include <doctest.h>

#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "qvsum/cli.hpp"

using namespace qvsum;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

int run(std::vector<std::string> args) { return cli::run(args); }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> summarize_args(const pipeline::RunConfig& cfg) {
  return {"summarize",          "--frames",           cfg.frames_dir.string(),
          "--query_image",      cfg.query_image.string(), "--query_detections",
          cfg.query_detections.string(), "--detections",  cfg.detections.string(),
          "--duration_s",       "12",                 "--out",
          cfg.output_dir.string()};
}

}  // namespace

TEST_CASE("usage errors exit with 2") {
  CHECK(run({}) == cli::kExitInput);
  CHECK(run({"bogus"}) == cli::kExitInput);
  CHECK(run({"summarize", "--lambda1", "abc"}) == cli::kExitInput);
  CHECK(run({"--help"}) == cli::kExitOk);
}

TEST_CASE("summarize writes artifacts and rejects a missing query") {
  testing::TempDir tmp("cli_sum");
  const auto cfg = testing::write_three_shot_fixture(tmp.path());
  CHECK(run(summarize_args(cfg)) == cli::kExitOk);
  CHECK(fs::exists(cfg.output_dir / "manifest.json"));

  auto args = summarize_args(cfg);
  args[4] = (tmp.path() / "missing.png").string();
  CHECK(run(args) == cli::kExitInput);

  CHECK(run({"summarize", "--detections", cfg.detections.string(), "--frames", cfg.frames_dir.string(), "--out",
             (tmp.path() / "o2").string()}) == cli::kExitInput);

  auto bad_enum = summarize_args(cfg);
  bad_enum.insert(bad_enum.end(), {"--threshold_mode", "median"});
  CHECK(run(bad_enum) == cli::kExitInput);
  auto bad_alpha = summarize_args(cfg);
  bad_alpha.insert(bad_alpha.end(), {"--alpha", "1.5"});
  CHECK(run(bad_alpha) == cli::kExitInput);
}

TEST_CASE("config file values apply and flags override them") {
  testing::TempDir tmp("cli_cfg");
  const auto cfg = testing::write_three_shot_fixture(tmp.path());
  {
    std::ofstream ini(tmp.path() / "run.ini");
    ini << "lambda1 = 0.25\nlambda2 = 2.0\nthreshold_mode = mean_plus_k_sigma\nk = 0.5\n";
  }
  auto args = summarize_args(cfg);
  args.insert(args.end(), {"--config", (tmp.path() / "run.ini").string(), "--lambda2", "3.0"});
  REQUIRE(run(args) == cli::kExitOk);
  const auto m = json::parse(slurp(cfg.output_dir / "manifest.json"));
  const auto& c = m.at("provenance").at("config");
  CHECK(c.at("lambda1").get<double>() == 0.25);
  CHECK(c.at("lambda2").get<double>() == 3.0);
  CHECK(c.at("threshold_mode") == "mean_plus_k_sigma");
  CHECK(c.at("k").get<double>() == 0.5);
}

TEST_CASE("evaluate reports P/R/F1") {
  testing::TempDir tmp("cli_eval");
  const auto& dir = tmp.path();
  testing::write_json(dir / "gt.json", {{"video_id", "v"},
                                        {"shots", {{{"shot_id", 1}, {"concepts", {"person", "car"}}}}}});
  auto manifest = [&](std::vector<std::string> names) {
    return json{{"video_id", "v"},
                {"total_shots", 3},
                {"video_duration_s", 15.0},
                {"shots", {{{"shot_id", 1}, {"class_names", names}}}},
                {"provenance", {{"timing", {{"process_time_s", 1.5}}}}}};
  };
  testing::write_json(dir / "exact.json", manifest({"car", "person"}));
  testing::write_json(dir / "half.json", manifest({"person"}));
  testing::write_json(dir / "empty.json", json{{"video_id", "v"}, {"total_shots", 3}, {"shots", json::array()}});

  auto f1_of = [&](const char* name) {
    const auto out = dir / (std::string(name) + ".report.json");
    REQUIRE(run({"evaluate", "--manifest", (dir / (std::string(name) + ".json")).string(), "--ground_truth",
                 (dir / "gt.json").string(), "--report", out.string()}) == cli::kExitOk);
    return json::parse(slurp(out));
  };
  const auto exact = f1_of("exact");
  CHECK(exact.at("f1").get<double>() == 1.0);
  CHECK(exact.at("speedup").get<double>() == 10.0);
  CHECK(f1_of("half").at("f1").get<double>() == 0.5);
  CHECK(f1_of("empty").at("f1").get<double>() == 0.0);

  testing::write_json(dir / "broken.json", json{{"shots", 1}});
  CHECK(run({"evaluate", "--manifest", (dir / "broken.json").string(), "--ground_truth", (dir / "gt.json").string()}) ==
        cli::kExitInput);
  CHECK(run({"evaluate", "--manifest", (dir / "exact.json").string(), "--ground_truth", (dir / "nope.json").string()}) ==
        cli::kExitInput);
}

TEST_CASE("timeline, score, inspect and saliency subcommands") {
  testing::TempDir tmp("cli_misc");
  const auto cfg = testing::write_three_shot_fixture(tmp.path());
  REQUIRE(run(summarize_args(cfg)) == cli::kExitOk);
  const auto out = cfg.output_dir;

  REQUIRE(run({"timeline", "--manifest", (out / "manifest.json").string(), "--ground_truth", cfg.ground_truth.string(),
               "--csv", (out / "t.csv").string(), "--svg", (out / "t.svg").string()}) == cli::kExitOk);
  const auto csv = slurp(out / "t.csv");
  CHECK(csv.rfind("track,0,1,2\n", 0) == 0);
  CHECK(csv.find("ground_truth,0,1,0\n") != std::string::npos);
  CHECK(slurp(out / "t.svg").find("<svg") == 0);

  const auto rescored = tmp.path() / "rescored";
  REQUIRE(run({"score", "--features", (out / "features.csv").string(), "--distances", (out / "distances.csv").string(),
               "--out", rescored.string()}) == cli::kExitOk);
  CHECK(slurp(rescored / "scores.csv") == slurp(out / "scores.csv"));

  CHECK(run({"inspect", "--features", (out / "features.csv").string(), "--distances",
             (out / "distances.csv").string()}) == cli::kExitOk);
  CHECK(run({"inspect", "--features", (out / "features.csv").string(), "--distances", (out / "distances.csv").string(),
             "--max_n", "2"}) == cli::kExitInput);

  const auto mask = tmp.path() / "q.pgm";
  CHECK(run({"saliency", "--image", cfg.query_image.string(), "--out", mask.string()}) == cli::kExitOk);
  CHECK(fs::exists(mask));
  CHECK(run({"saliency", "--image", cfg.query_image.string(), "--alpha", "0"}) == cli::kExitInput);
}

TEST_CASE("non-finite distances exit with 3") {
  testing::TempDir tmp("cli_nan");
  const auto& dir = tmp.path();
  pipeline::write_text(dir / "f.csv", "shot_id,f0,f1\n0,1,0\n1,0,1\n");
  pipeline::write_text(dir / "d.csv", "shot_id,d,s\n0,nan,nan\n1,1,0.36787944117144233\n");
  CHECK(run({"score", "--features", (dir / "f.csv").string(), "--distances", (dir / "d.csv").string(), "--out",
             (dir / "o").string()}) == cli::kExitNumeric);
}

TEST_CASE("config file errors exit with 2") {
  testing::TempDir tmp("cli_cfg_err");
  const auto cfg = testing::write_three_shot_fixture(tmp.path());
  pipeline::write_text(tmp.path() / "bad.ini", "lamda1 = 0.5\n");
  auto args = summarize_args(cfg);
  args.insert(args.end(), {"--config", (tmp.path() / "bad.ini").string()});
  CHECK(run(args) == cli::kExitInput);

  auto missing = summarize_args(cfg);
  missing.insert(missing.end(), {"--config", (tmp.path() / "none.ini").string()});
  CHECK(run(missing) == cli::kExitInput);
}

TEST_CASE("evaluate paths may come from the config file") {
  testing::TempDir tmp("cli_cfg_eval");
  const auto cfg = testing::write_three_shot_fixture(tmp.path());
  REQUIRE(run(summarize_args(cfg)) == cli::kExitOk);
  pipeline::write_text(tmp.path() / "eval.ini", "manifest = " + (cfg.output_dir / "manifest.json").string() +
                                                    "\nground_truth = " + cfg.ground_truth.string() +
                                                    "\naliases = " + cfg.aliases.string() + "\n");
  const auto report = tmp.path() / "eval.json";
  REQUIRE(run({"evaluate", "--config", (tmp.path() / "eval.ini").string(), "--report", report.string()}) ==
          cli::kExitOk);
  CHECK(json::parse(slurp(report)).at("s2").get<int>() == 1);
  CHECK(run({"evaluate"}) == cli::kExitInput);
}
