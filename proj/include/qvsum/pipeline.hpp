#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qvsum/evaluation.hpp"
#include "qvsum/ingest.hpp"
#include "qvsum/objective.hpp"
#include "qvsum/query_distance.hpp"
#include "qvsum/saliency.hpp"
#include "qvsum/solver.hpp"

namespace qvsum::pipeline {

struct RunConfig {
  objective::LossParams loss;
  double alpha = saliency::kDefaultAlpha;
  double shot_length_s = ingest::kDefaultShotLength;
  solver::ThresholdConfig threshold;
  query::DistanceOptions distance;
  eval::MetricMode metric_mode = eval::MetricMode::weight_sum;
  solver::SolverConfig solver;
  std::optional<double> duration_s;
  bool preprocess = true;

  std::filesystem::path frames_dir;
  std::filesystem::path masks_dir;
  std::filesystem::path query_image;
  std::filesystem::path query_mask;
  std::filesystem::path query_detections;
  std::filesystem::path detections;
  std::filesystem::path ground_truth;
  std::filesystem::path aliases;
  std::filesystem::path manifest;
  std::filesystem::path output_dir;

  // Numeric ranges only; paths are checked when they are used.
  void validate() const;
  nlohmann::json to_json() const;
};

// Frame file for a frame index: frame_%06d.png, else frame_%06d.ppm.
std::filesystem::path frame_path(const std::filesystem::path& dir, std::size_t frame_index);
std::filesystem::path mask_path(const std::filesystem::path& dir, std::size_t shot_id);

saliency::SaliencyMask frame_saliency(const RgbImage& frame, double alpha, bool preprocess);

query::QueryProfile load_query(const RunConfig& cfg);

struct LoadedVideo {
  ingest::DetectionsDocument detections;
  std::vector<ingest::ShotRecord> shots;
  double duration_s = 0.0;
};

LoadedVideo load_video(const RunConfig& cfg);

struct SummarizeResult {
  std::vector<ingest::ShotRecord> shots;
  ingest::FeatureMatrix features;
  query::DistanceVector distances;
  solver::SelectionScores scores;
  solver::SelectionMask mask;
  solver::SummaryManifest manifest;
  double process_time_s = 0.0;
  double video_time_s = 0.0;
  nlohmann::json report;
};

// Segmentation through manifest write. Writes manifest.json, scores.csv,
// distances.csv, features.csv and report.json when cfg.output_dir is set.
SummarizeResult run_summarize(const RunConfig& cfg);

struct ScoreResult {
  solver::SelectionScores scores;
  solver::SelectionMask mask;
  nlohmann::json report;
};

// Objective + solver + threshold on precomputed features and distances.
ScoreResult run_score(const std::vector<double>& feature_rows, std::size_t dim,
                      const query::DistanceVector& dv, const RunConfig& cfg);

// CSV artifacts. Numbers use %.17g so identical runs give identical bytes.
std::string scores_csv(const std::vector<std::size_t>& shot_ids, const solver::SelectionScores& scores,
                       const solver::SelectionMask& mask);
std::string distances_csv(const std::vector<std::size_t>& shot_ids, const query::DistanceVector& dv);
std::string features_csv(const std::vector<std::size_t>& shot_ids, const std::vector<double>& rows,
                         std::size_t dim);

struct FeatureTable {
  std::vector<std::size_t> shot_ids;
  std::vector<double> rows;
  std::size_t dim = 0;
};
FeatureTable read_features_csv(const std::filesystem::path& path);

struct DistanceTable {
  std::vector<std::size_t> shot_ids;
  std::vector<double> d;
};
DistanceTable read_distances_csv(const std::filesystem::path& path);

// Two-track predicted vs ground-truth table over shot indices.
struct Timeline {
  std::size_t columns = 0;
  std::vector<std::uint8_t> predicted;
  std::vector<std::uint8_t> ground_truth;
};

Timeline build_timeline(const solver::SummaryManifest& m, const eval::GroundTruth& gt);
std::string timeline_csv(const Timeline& t);
std::string timeline_svg(const Timeline& t);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace qvsum::pipeline
