#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "qvsum/ingest.hpp"
#include "qvsum/objective.hpp"
#include "qvsum/query_distance.hpp"

namespace qvsum::solver {

struct SolverConfig {
  int max_iters = 100;
  double tol = 1e-6;   // infinity-norm step tolerance
  double init = 0.5;   // every coordinate of Z_0
  bool record_iterates = false;

  void validate() const;
};

struct SelectionScores {
  std::vector<double> z;             // relaxed selection, each in [0,1]
  int iterations_used = 0;           // number of updates evaluated
  double final_loss = 0.0;
  std::vector<double> loss_trace;    // L(Z_0), L(Z_1), ...
  bool converged = false;
  std::vector<std::vector<double>> iterates;  // Z_0, Z_1, ... when recorded
};

// Concave-convex procedure on L = f - g with f = lambda1 Z^T P Z and
// g = Z^T (lambda1 Q + lambda2 R) Z over the box [0,1]^n. Each step minimizes
// f(Z) - grad g(Z_t)^T Z, which separates per coordinate:
//   c = 2 (lambda1 Q + lambda2 R) Z_t
//   z_i = clamp(c_i / (2 lambda1 p_ii), 0, 1),  or [c_i > 0] when lambda1 p_ii == 0.
// Running out of iterations is reported through `converged`, not thrown.
SelectionScores cccp_minimize(const objective::ObjectiveMatrices& m, const objective::LossParams& params,
                              const SolverConfig& cfg = {});

enum class ThresholdMode { paper_stddev, mean_plus_k_sigma };

ThresholdMode parse_threshold_mode(std::string_view s);
std::string_view to_string(ThresholdMode m);

struct ThresholdConfig {
  ThresholdMode mode = ThresholdMode::paper_stddev;
  double k = 0.0;
};

struct SelectionMask {
  std::vector<std::uint8_t> selected;
  double threshold_used = 0.0;

  std::size_t count() const;
};

// paper_stddev: tau = population std of z_m.  mean_plus_k_sigma: tau = mean + k std.
// Shot i is selected when z_m[i] > tau.
SelectionMask adaptive_threshold(std::span<const double> z_m, const ThresholdConfig& cfg = {});

struct ManifestEntry {
  std::size_t shot_id = 0;
  double t_start = 0.0;
  double t_end = 0.0;
  double z_m = 0.0;
  double d = 0.0;
  double s = 0.0;
  std::vector<std::string> class_names;  // distinct, sorted
};

// Selected shots in temporal order plus enough provenance to evaluate and
// render the summary.
struct SummaryManifest {
  std::string video_id;
  std::size_t total_shots = 0;
  double shot_length_s = ingest::kDefaultShotLength;
  double video_duration_s = 0.0;
  double threshold = 0.0;
  std::vector<ManifestEntry> entries;
  std::vector<std::string> warnings;
  nlohmann::json provenance = nlohmann::json::object();
};

SummaryManifest select_summary(std::span<const ingest::ShotRecord> shots, const SelectionMask& mask,
                               std::span<const double> z_m, const query::DistanceVector& dv);

nlohmann::json to_json(const SummaryManifest& m);
SummaryManifest manifest_from_json(const nlohmann::json& j);
SummaryManifest load_manifest(const std::filesystem::path& path);

}  // namespace qvsum::solver
