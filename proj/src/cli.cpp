#include "qvsum/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

#include "qvsum/error.hpp"
#include "qvsum/image.hpp"
#include "qvsum/pipeline.hpp"
#include "qvsum/simd/kernels.hpp"

namespace qvsum::cli {

namespace fs = std::filesystem;
using pipeline::RunConfig;

namespace {

// Enum-valued options are captured as strings and parsed after CLI11 is done.
struct EnumOptions {
  std::string threshold_mode = "paper_stddev";
  std::string phi1_mode = "count_diff";
  std::string relevance = "exp";
  std::string metric_mode = "weight_sum";
  double duration_s = 0.0;
  bool no_preprocess = false;

  void apply(RunConfig& cfg) const {
    cfg.threshold.mode = solver::parse_threshold_mode(threshold_mode);
    cfg.distance.phi1_mode = query::parse_phi1_mode(phi1_mode);
    cfg.distance.relevance = query::parse_relevance_mode(relevance);
    cfg.metric_mode = eval::parse_metric_mode(metric_mode);
    if (duration_s > 0.0) cfg.duration_s = duration_s;
    cfg.preprocess = !no_preprocess;
  }
};

constexpr const char* kConfigHelp = "Flat key = value config file; command-line flags override it";

// Values from the config file go to options not given on the command line.
// Keys are option names without the leading dashes.
void apply_config_file(CLI::App& sub, const fs::path& path) {
  if (!fs::is_regular_file(path)) throw InputError("config file not found: " + path.string());
  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigINI().from_file(path.string());
  } catch (const CLI::Error& err) {
    throw ConfigError("cannot parse config file " + path.string() + ": " + err.what());
  }
  for (const auto& item : items) {
    if (item.name == "++" || item.name == "--") continue;  // section markers
    if (!item.parents.empty()) throw ConfigError("config file must be flat; got section key " + item.fullname());
    if (item.name == "config") throw ConfigError("config file cannot name another config file");
    CLI::Option* opt = sub.get_option_no_throw("--" + item.name);
    if (opt == nullptr) throw ConfigError("unknown config key '" + item.name + "' for " + sub.get_name());
    if (opt->count() > 0) continue;
    try {
      opt->add_result(item.inputs);
      opt->run_callback();
    } catch (const CLI::Error& err) {
      throw ConfigError("config key '" + item.name + "': " + err.what());
    }
  }
}

void add_model_options(CLI::App* sub, RunConfig& cfg, EnumOptions& e) {
  sub->add_option("--lambda1", cfg.loss.lambda1, "Weight of the summary-variance term")->capture_default_str();
  sub->add_option("--lambda2", cfg.loss.lambda2, "Weight of the query-relevance term")->capture_default_str();
  sub->add_option("--threshold_mode", e.threshold_mode, "paper_stddev | mean_plus_k_sigma")->capture_default_str();
  sub->add_option("--k", cfg.threshold.k, "k for mean_plus_k_sigma")->capture_default_str();
  sub->add_option("--max_iters", cfg.solver.max_iters, "CCCP iteration cap")->capture_default_str();
  sub->add_option("--tol", cfg.solver.tol, "CCCP infinity-norm step tolerance")->capture_default_str();
  sub->add_option("--init", cfg.solver.init, "Initial value of every selection score")->capture_default_str();
  sub->add_option("--relevance", e.relevance, "exp (s = exp(-d)) | raw (s = d)")->capture_default_str();
}

void add_pipeline_options(CLI::App* sub, RunConfig& cfg, EnumOptions& e) {
  add_model_options(sub, cfg, e);
  sub->add_option("--alpha", cfg.alpha, "Saliency threshold in (0,1)")->capture_default_str();
  sub->add_option("--shot_length_s", cfg.shot_length_s, "Shot length in seconds")->capture_default_str();
  sub->add_option("--phi1_mode", e.phi1_mode, "count_diff | symdiff")->capture_default_str();
  sub->add_option("--duration_s", e.duration_s, "Video duration; inferred from detections when omitted");
  sub->add_flag("--no_preprocess", e.no_preprocess, "Skip resize and luminance equalization");
  sub->add_option("--frames", cfg.frames_dir, "Directory of frame_%06d.{png,ppm} images");
  sub->add_option("--masks", cfg.masks_dir, "Directory of precomputed shot_%06d.pgm masks");
  sub->add_option("--query_image", cfg.query_image, "Query image (PNG/PPM/PGM)");
  sub->add_option("--query_mask", cfg.query_mask, "Precomputed query saliency mask (PGM)");
  sub->add_option("--query_detections", cfg.query_detections, "Detections JSON for the query image");
  sub->add_option("--detections", cfg.detections, "Detections JSON for the video");
  sub->add_option("--out", cfg.output_dir, "Output directory");
}

int report_error(const std::exception& e, int code) {
  std::cerr << "qvsum: " << e.what() << "\n";
  return code;
}

int cmd_summarize(RunConfig& cfg) {
  if (cfg.output_dir.empty()) throw InputError("summarize needs --out");
  const auto result = pipeline::run_summarize(cfg);
  for (const auto& w : result.manifest.warnings) std::cerr << "warning: " << w << "\n";
  std::printf("selected %zu of %zu shots; threshold=%.6g; iterations=%d; converged=%s; process=%.3fs; speedup=%.2fx\n",
              result.mask.count(), result.mask.selected.size(), result.mask.threshold_used,
              result.scores.iterations_used, result.scores.converged ? "yes" : "no", result.process_time_s,
              result.report.at("speedup").get<double>());
  return kExitOk;
}

struct ScoreInputs {
  fs::path features;
  fs::path distances;
};

query::DistanceVector load_distance_vector(const ScoreInputs& in, const pipeline::FeatureTable& ft,
                                           const RunConfig& cfg) {
  const auto dt = pipeline::read_distances_csv(in.distances);
  if (dt.shot_ids != ft.shot_ids) throw InputError("features and distances list different shot ids");
  return query::from_distances(dt.d, cfg.distance.relevance);
}

int cmd_score(RunConfig& cfg, const ScoreInputs& in) {
  if (cfg.output_dir.empty()) throw InputError("score needs --out");
  if (in.features.empty() || in.distances.empty()) throw InputError("score needs --features and --distances");
  const auto ft = pipeline::read_features_csv(in.features);
  const auto dv = load_distance_vector(in, ft, cfg);
  const auto result = pipeline::run_score(ft.rows, ft.dim, dv, cfg);
  fs::create_directories(cfg.output_dir);
  pipeline::write_text(cfg.output_dir / "scores.csv", pipeline::scores_csv(ft.shot_ids, result.scores, result.mask));
  pipeline::write_text(cfg.output_dir / "report.json", result.report.dump(2) + "\n");
  std::printf("selected %zu of %zu shots; threshold=%.6g; final_loss=%.9g\n", result.mask.count(),
              result.mask.selected.size(), result.mask.threshold_used, result.scores.final_loss);
  return kExitOk;
}

int cmd_inspect(RunConfig& cfg, const ScoreInputs& in, std::size_t max_n) {
  const auto ft = pipeline::read_features_csv(in.features);
  const auto dv = load_distance_vector(in, ft, cfg);
  const std::size_t n = ft.shot_ids.size();
  if (n > max_n) throw InputError("inspect prints dense matrices; n=" + std::to_string(n) + " exceeds --max_n");
  const auto m = objective::build_matrices(ft.rows, n, ft.dim, dv.s);
  std::printf("P_diag");
  for (double v : m.p) std::printf(",%.17g", v);
  std::printf("\nR_diag");
  for (double v : m.r) std::printf(",%.17g", v);
  std::printf("\n");
  for (std::size_t i = 0; i < n; ++i) {
    std::printf("Q_row_%zu", i);
    for (std::size_t j = 0; j < n; ++j) std::printf(",%.17g", m.q_at(i, j));
    std::printf("\n");
  }
  return kExitOk;
}

struct SaliencyInputs {
  fs::path image;
  fs::path out;
};

int cmd_saliency(const RunConfig& cfg, const SaliencyInputs& in) {
  if (in.image.empty() || !fs::is_regular_file(in.image)) throw InputError("image not found: " + in.image.string());
  const auto mask = pipeline::frame_saliency(read_image(in.image), cfg.alpha, cfg.preprocess);
  if (!in.out.empty()) write_pgm(in.out, saliency::to_gray(mask));
  std::printf("%zux%zu salient=%zu coverage=%.6f\n", mask.width, mask.height, mask.salient_count(),
              static_cast<double>(mask.salient_count()) / static_cast<double>(mask.area()));
  return kExitOk;
}

struct EvalInputs {
  fs::path report;
  fs::path csv;
  fs::path svg;
};

int cmd_evaluate(const RunConfig& cfg, const EvalInputs& in) {
  if (cfg.manifest.empty() || cfg.ground_truth.empty()) throw InputError("evaluate needs --manifest and --ground_truth");
  const auto manifest = solver::load_manifest(cfg.manifest);
  const auto gt = eval::load_ground_truth(cfg.ground_truth);
  std::optional<eval::AliasTable> aliases;
  if (!cfg.aliases.empty()) aliases = eval::load_alias_table(cfg.aliases);
  const auto report = eval::evaluate(manifest, gt, aliases ? &*aliases : nullptr, cfg.metric_mode);
  if (!in.report.empty()) pipeline::write_text(in.report, eval::to_json(report).dump(2) + "\n");
  std::printf("%s\n", eval::summary_line(report).c_str());
  return kExitOk;
}

int cmd_timeline(const RunConfig& cfg, const EvalInputs& in) {
  const auto manifest = solver::load_manifest(cfg.manifest);
  eval::GroundTruth gt;
  if (!cfg.ground_truth.empty()) gt = eval::load_ground_truth(cfg.ground_truth);
  const auto t = pipeline::build_timeline(manifest, gt);
  if (in.csv.empty() && in.svg.empty()) {
    std::printf("%s", pipeline::timeline_csv(t).c_str());
  }
  if (!in.csv.empty()) pipeline::write_text(in.csv, pipeline::timeline_csv(t));
  if (!in.svg.empty()) pipeline::write_text(in.svg, pipeline::timeline_svg(t));
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"Query-image conditioned keyframe selection", "qvsum"};
  app.require_subcommand(1);

  RunConfig cfg;
  EnumOptions e;
  ScoreInputs score_in;
  SaliencyInputs sal_in;
  EvalInputs eval_in;
  std::size_t max_n = 50;
  fs::path config_file;

  auto* summarize = app.add_subcommand("summarize", "Run the full pipeline and write the summary manifest");
  add_pipeline_options(summarize, cfg, e);
  summarize->add_option("--config", config_file, kConfigHelp);

  auto* score = app.add_subcommand("score", "Solve and threshold from features.csv + distances.csv");
  add_model_options(score, cfg, e);
  score->add_option("--config", config_file, kConfigHelp);
  score->add_option("--features", score_in.features, "features.csv from summarize");
  score->add_option("--distances", score_in.distances, "distances.csv (shot_id,d,s)");
  score->add_option("--out", cfg.output_dir, "Output directory");

  auto* inspect = app.add_subcommand("inspect", "Print P diagonal, R diagonal and Q for a small problem");
  inspect->add_option("--features", score_in.features, "features.csv")->required();
  inspect->add_option("--distances", score_in.distances, "distances.csv")->required();
  inspect->add_option("--relevance", e.relevance, "exp | raw")->capture_default_str();
  inspect->add_option("--max_n", max_n, "Refuse problems larger than this")->capture_default_str();

  auto* sal = app.add_subcommand("saliency", "Compute the salient-region mask of one image");
  sal->add_option("--image", sal_in.image, "Input image")->required();
  sal->add_option("--out", sal_in.out, "Write the mask as PGM (0/255)");
  sal->add_option("--alpha", cfg.alpha, "Saliency threshold in (0,1)")->capture_default_str();
  sal->add_flag("--no_preprocess", e.no_preprocess, "Skip resize and luminance equalization");

  auto* evaluate = app.add_subcommand("evaluate", "Score a manifest against ground truth");
  evaluate->add_option("--config", config_file, kConfigHelp);
  evaluate->add_option("--manifest", cfg.manifest, "manifest.json from summarize");
  evaluate->add_option("--ground_truth", cfg.ground_truth, "Ground-truth JSON");
  evaluate->add_option("--aliases", cfg.aliases, "class_name -> concept JSON map");
  evaluate->add_option("--metric_mode", e.metric_mode, "weight_sum | pair_count")->capture_default_str();
  evaluate->add_option("--report", eval_in.report, "Write the EvalReport JSON here");

  auto* timeline = app.add_subcommand("timeline", "Two-track predicted vs ground-truth shot timeline");
  timeline->add_option("--manifest", cfg.manifest, "manifest.json")->required();
  timeline->add_option("--ground_truth", cfg.ground_truth, "Ground-truth JSON");
  timeline->add_option("--csv", eval_in.csv, "Write the CSV track file here");
  timeline->add_option("--svg", eval_in.svg, "Write an SVG rendering here");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& h) {
    return app.exit(h);
  } catch (const CLI::CallForAllHelp& h) {
    return app.exit(h);
  } catch (const CLI::ParseError& err) {
    app.exit(err);
    return kExitInput;
  }

  try {
    if (!config_file.empty()) {
      for (CLI::App* sub : {summarize, score, evaluate}) {
        if (*sub) apply_config_file(*sub, config_file);
      }
    }
    e.apply(cfg);
    if (*summarize) return cmd_summarize(cfg);
    if (*score) return cmd_score(cfg, score_in);
    if (*inspect) return cmd_inspect(cfg, score_in, max_n);
    if (*sal) {
      saliency::validate_alpha(cfg.alpha);
      return cmd_saliency(cfg, sal_in);
    }
    if (*evaluate) return cmd_evaluate(cfg, eval_in);
    if (*timeline) return cmd_timeline(cfg, eval_in);
  } catch (const NumericError& err) {
    return report_error(err, kExitNumeric);
  } catch (const Error& err) {
    return report_error(err, kExitInput);
  } catch (const std::filesystem::filesystem_error& err) {
    return report_error(err, kExitInput);
  }
  return kExitInput;
}

}  // namespace qvsum::cli
