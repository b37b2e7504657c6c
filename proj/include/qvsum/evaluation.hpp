#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "qvsum/solver.hpp"

namespace qvsum::eval {

using ConceptSet = std::set<std::string>;

struct GroundTruthShot {
  std::size_t shot_id = 0;
  ConceptSet concepts;
};

struct GroundTruth {
  std::string video_id;
  std::vector<GroundTruthShot> shots;  // unique shot ids
};

GroundTruth ground_truth_from_json(const nlohmann::json& j);
GroundTruth load_ground_truth(const std::filesystem::path& path);

// Detector class name -> lexicon concept.
using AliasTable = std::map<std::string, std::string>;

AliasTable alias_table_from_json(const nlohmann::json& j);
AliasTable load_alias_table(const std::filesystem::path& path);

// Without a table each class name is its own concept; with one, names missing
// from the table are dropped.
ConceptSet concepts_for(const std::vector<std::string>& class_names, const AliasTable* aliases);

// |a ∩ b| / |a ∪ b|, and 0 when both are empty.
double concept_iou(const ConceptSet& a, const ConceptSet& b);

struct Matching {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (row, col), weight > 0 only
  double total_weight = 0.0;
};

// Maximum-weight bipartite matching on a rows x cols matrix of non-negative
// weights (Hungarian method on the zero-padded square matrix).
Matching bipartite_match(const std::vector<std::vector<double>>& weights);

enum class MetricMode { weight_sum, pair_count };

MetricMode parse_metric_mode(std::string_view s);
std::string_view to_string(MetricMode m);

struct EvalReport {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double matching_weight = 0.0;
  std::size_t s1 = 0;  // predicted shots
  std::size_t s2 = 0;  // ground-truth shots
  std::optional<double> process_time_s;
  std::optional<double> video_time_s;
  std::optional<double> speedup;
  MetricMode metric_mode = MetricMode::weight_sum;
};

double f1_score(double precision, double recall);

EvalReport evaluate(const std::vector<ConceptSet>& predicted, const GroundTruth& gt,
                    MetricMode mode = MetricMode::weight_sum);

// Concepts come from each entry's class names through the alias table; timing
// fields are taken from the manifest provenance when present.
EvalReport evaluate(const solver::SummaryManifest& manifest, const GroundTruth& gt,
                    const AliasTable* aliases, MetricMode mode = MetricMode::weight_sum);

// video_duration / process_time. Throws InputError for process_time <= 0.
double timing_report(double process_time_s, double video_duration_s);

nlohmann::json to_json(const EvalReport& r);
std::string summary_line(const EvalReport& r);

}  // namespace qvsum::eval
