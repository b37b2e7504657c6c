#include "qvsum/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "qvsum/error.hpp"

namespace qvsum::eval {

using nlohmann::json;

namespace {

json read_json_file(const std::filesystem::path& path, const char* what) {
  std::ifstream in(path);
  if (!in) throw InputError(std::string("cannot open ") + what + ": " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error&) {
    throw SchemaError(std::string(what) + ": invalid JSON in " + path.string());
  }
}

}  // namespace

GroundTruth ground_truth_from_json(const json& j) {
  GroundTruth gt;
  try {
    gt.video_id = j.at("video_id").get<std::string>();
    std::set<std::size_t> seen;
    for (const auto& s : j.at("shots")) {
      GroundTruthShot shot;
      shot.shot_id = s.at("shot_id").get<std::size_t>();
      for (const auto& c : s.at("concepts")) shot.concepts.insert(c.get<std::string>());
      if (!seen.insert(shot.shot_id).second) {
        throw SchemaError("ground truth: duplicate shot_id " + std::to_string(shot.shot_id));
      }
      gt.shots.push_back(std::move(shot));
    }
  } catch (const json::exception& e) {
    throw SchemaError(std::string("ground truth: ") + e.what());
  }
  return gt;
}

GroundTruth load_ground_truth(const std::filesystem::path& path) {
  return ground_truth_from_json(read_json_file(path, "ground truth"));
}

AliasTable alias_table_from_json(const json& j) {
  if (!j.is_object()) throw SchemaError("alias table must be a JSON object");
  AliasTable out;
  for (const auto& [key, value] : j.items()) {
    if (!value.is_string()) throw SchemaError("alias table: value for '" + key + "' must be a string");
    out.emplace(key, value.get<std::string>());
  }
  return out;
}

AliasTable load_alias_table(const std::filesystem::path& path) {
  return alias_table_from_json(read_json_file(path, "alias table"));
}

ConceptSet concepts_for(const std::vector<std::string>& class_names, const AliasTable* aliases) {
  ConceptSet out;
  for (const auto& name : class_names) {
    if (aliases == nullptr) {
      out.insert(name);
    } else if (auto it = aliases->find(name); it != aliases->end()) {
      out.insert(it->second);
    }
  }
  return out;
}

double concept_iou(const ConceptSet& a, const ConceptSet& b) {
  if (a.empty() && b.empty()) return 0.0;
  std::size_t inter = 0;
  for (const auto& c : a) inter += b.count(c);
  const std::size_t uni = a.size() + b.size() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

Matching bipartite_match(const std::vector<std::vector<double>>& weights) {
  Matching out;
  const std::size_t rows = weights.size();
  if (rows == 0) return out;
  const std::size_t cols = weights.front().size();
  for (const auto& r : weights) {
    if (r.size() != cols) throw DimensionError("bipartite_match: ragged weight matrix");
    for (double w : r) {
      if (!(w >= 0.0) || !std::isfinite(w)) throw InputError("bipartite_match: weights must be finite and >= 0");
    }
  }
  if (cols == 0) return out;

  // Minimum-cost assignment on cost = -weight, padded to N x N with zeros.
  // Potentials u (rows) and v (cols); way[] holds the augmenting path.
  const std::size_t n = std::max(rows, cols);
  auto cost = [&](std::size_t i, std::size_t j) {
    return (i < rows && j < cols) ? -weights[i][j] : 0.0;
  };
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> owner(n + 1, 0), way(n + 1, 0);  // owner[j]: row assigned to column j (1-based)
  for (std::size_t i = 1; i <= n; ++i) {
    owner[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = owner[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[owner[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (owner[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      owner[j0] = owner[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  for (std::size_t j = 1; j <= n; ++j) {
    const std::size_t i = owner[j];
    if (i == 0 || i > rows || j > cols) continue;
    const double w = weights[i - 1][j - 1];
    if (w > 0.0) out.pairs.emplace_back(i - 1, j - 1);
  }
  std::sort(out.pairs.begin(), out.pairs.end());
  for (const auto& [i, j] : out.pairs) out.total_weight += weights[i][j];
  return out;
}

MetricMode parse_metric_mode(std::string_view s) {
  if (s == "weight_sum") return MetricMode::weight_sum;
  if (s == "pair_count") return MetricMode::pair_count;
  throw ConfigError("metric_mode must be weight_sum or pair_count, got '" + std::string(s) + "'");
}

std::string_view to_string(MetricMode m) { return m == MetricMode::weight_sum ? "weight_sum" : "pair_count"; }

double f1_score(double precision, double recall) {
  const double denom = precision + recall;
  return denom > 0.0 ? 2.0 * precision * recall / denom : 0.0;
}

EvalReport evaluate(const std::vector<ConceptSet>& predicted, const GroundTruth& gt, MetricMode mode) {
  EvalReport r;
  r.metric_mode = mode;
  r.s1 = predicted.size();
  r.s2 = gt.shots.size();
  if (r.s1 == 0 || r.s2 == 0) return r;

  std::vector<std::vector<double>> w(r.s1, std::vector<double>(r.s2));
  for (std::size_t i = 0; i < r.s1; ++i) {
    for (std::size_t j = 0; j < r.s2; ++j) w[i][j] = concept_iou(predicted[i], gt.shots[j].concepts);
  }
  const Matching m = bipartite_match(w);
  r.matching_weight = m.total_weight;
  const double matched = mode == MetricMode::weight_sum ? m.total_weight : static_cast<double>(m.pairs.size());
  r.precision = matched / static_cast<double>(r.s1);
  r.recall = matched / static_cast<double>(r.s2);
  r.f1 = f1_score(r.precision, r.recall);
  return r;
}

EvalReport evaluate(const solver::SummaryManifest& manifest, const GroundTruth& gt, const AliasTable* aliases,
                    MetricMode mode) {
  std::vector<ConceptSet> predicted;
  predicted.reserve(manifest.entries.size());
  for (const auto& e : manifest.entries) predicted.push_back(concepts_for(e.class_names, aliases));
  EvalReport r = evaluate(predicted, gt, mode);

  const auto& prov = manifest.provenance;
  if (prov.is_object() && prov.contains("timing") && prov.at("timing").is_object() &&
      prov.at("timing").contains("process_time_s") && prov.at("timing").at("process_time_s").is_number()) {
    r.process_time_s = prov.at("timing").at("process_time_s").get<double>();
    r.video_time_s = manifest.video_duration_s;
    if (*r.process_time_s > 0.0) r.speedup = timing_report(*r.process_time_s, *r.video_time_s);
  }
  return r;
}

double timing_report(double process_time_s, double video_duration_s) {
  if (!(process_time_s > 0.0)) throw InputError("timing_report: process time must be positive");
  if (!(video_duration_s >= 0.0)) throw InputError("timing_report: video duration must be non-negative");
  return video_duration_s / process_time_s;
}

json to_json(const EvalReport& r) {
  json j = {{"precision", r.precision},
            {"recall", r.recall},
            {"f1", r.f1},
            {"matching_weight", r.matching_weight},
            {"s1", r.s1},
            {"s2", r.s2},
            {"metric_mode", to_string(r.metric_mode)}};
  j["process_time_s"] = r.process_time_s ? json(*r.process_time_s) : json(nullptr);
  j["video_time_s"] = r.video_time_s ? json(*r.video_time_s) : json(nullptr);
  j["speedup"] = r.speedup ? json(*r.speedup) : json(nullptr);
  return j;
}

std::string summary_line(const EvalReport& r) {
  char buf[160];
  if (r.speedup) {
    std::snprintf(buf, sizeof buf, "P=%.4f R=%.4f F1=%.4f speedup=%.2fx", r.precision, r.recall, r.f1, *r.speedup);
  } else {
    std::snprintf(buf, sizeof buf, "P=%.4f R=%.4f F1=%.4f speedup=n/a", r.precision, r.recall, r.f1);
  }
  return buf;
}

}  // namespace qvsum::eval
