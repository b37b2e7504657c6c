#include "qvsum/solver.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>

#include "qvsum/error.hpp"
#include "qvsum/simd/kernels.hpp"

namespace qvsum::solver {

using nlohmann::json;

void SolverConfig::validate() const {
  if (max_iters < 1) throw ConfigError("solver max_iters must be >= 1");
  if (!(tol > 0.0)) throw ConfigError("solver tol must be positive");
  if (!(init > 0.0 && init < 1.0)) throw ConfigError("solver init must lie in (0,1)");
}

namespace {

void check_finite(const std::vector<double>& v, const char* what) {
  if (!std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); })) {
    throw NumericError(std::string("cccp: non-finite entry in ") + what);
  }
}

}  // namespace

SelectionScores cccp_minimize(const objective::ObjectiveMatrices& m, const objective::LossParams& params,
                              const SolverConfig& cfg) {
  params.validate();
  cfg.validate();
  if (m.n == 0) throw InputError("cccp: empty problem");
  if (m.p.size() != m.n || m.r.size() != m.n || m.q.size() != m.n * m.n) {
    throw DimensionError("cccp: inconsistent objective matrices");
  }
  check_finite(m.p, "P");
  check_finite(m.q, "Q");
  check_finite(m.r, "R");

  const std::size_t n = m.n;
  const auto& k = simd::kernels();
  const double l1 = params.lambda1;
  const double l2 = params.lambda2;

  SelectionScores out;
  std::vector<double> z(n, cfg.init);
  std::vector<double> qz(n);
  std::vector<double> next(n);

  double current = objective::loss(m, params, z);
  if (!std::isfinite(current)) throw NumericError("cccp: non-finite initial loss");
  out.loss_trace.push_back(current);
  if (cfg.record_iterates) out.iterates.push_back(z);

  std::vector<double> best = z;
  double best_loss = current;

  for (int it = 0; it < cfg.max_iters; ++it) {
    k.matvec(m.q.data(), z.data(), qz.data(), n);
    double step = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double c = 2.0 * (l1 * qz[i] + l2 * m.r[i] * z[i]);
      const double curvature = 2.0 * l1 * m.p[i];
      if (curvature > 0.0) {
        next[i] = std::clamp(c / curvature, 0.0, 1.0);
      } else {
        next[i] = c > 0.0 ? 1.0 : 0.0;
      }
      step = std::max(step, std::abs(next[i] - z[i]));
    }
    z.swap(next);
    current = objective::loss(m, params, z);
    if (!std::isfinite(current)) throw NumericError("cccp: non-finite loss");
    out.loss_trace.push_back(current);
    if (cfg.record_iterates) out.iterates.push_back(z);
    out.iterations_used = it + 1;
    if (current <= best_loss) {
      best_loss = current;
      best = z;
    }
    if (step < cfg.tol) {
      out.converged = true;
      break;
    }
  }

  out.z = std::move(best);
  out.final_loss = best_loss;
  return out;
}

ThresholdMode parse_threshold_mode(std::string_view s) {
  if (s == "paper_stddev") return ThresholdMode::paper_stddev;
  if (s == "mean_plus_k_sigma") return ThresholdMode::mean_plus_k_sigma;
  throw ConfigError("threshold_mode must be paper_stddev or mean_plus_k_sigma, got '" + std::string(s) + "'");
}

std::string_view to_string(ThresholdMode m) {
  return m == ThresholdMode::paper_stddev ? "paper_stddev" : "mean_plus_k_sigma";
}

std::size_t SelectionMask::count() const {
  return static_cast<std::size_t>(std::count(selected.begin(), selected.end(), std::uint8_t{1}));
}

SelectionMask adaptive_threshold(std::span<const double> z_m, const ThresholdConfig& cfg) {
  if (z_m.empty()) throw InputError("adaptive_threshold: no scores");
  if (!std::isfinite(cfg.k)) throw ConfigError("threshold k must be finite");
  const double n = static_cast<double>(z_m.size());
  const double mean = std::accumulate(z_m.begin(), z_m.end(), 0.0) / n;
  double var = 0.0;
  for (double v : z_m) var += (v - mean) * (v - mean);
  const double sigma = std::sqrt(var / n);

  SelectionMask out;
  out.threshold_used = cfg.mode == ThresholdMode::paper_stddev ? sigma : mean + cfg.k * sigma;
  out.selected.reserve(z_m.size());
  for (double v : z_m) out.selected.push_back(v > out.threshold_used ? 1 : 0);
  return out;
}

SummaryManifest select_summary(std::span<const ingest::ShotRecord> shots, const SelectionMask& mask,
                               std::span<const double> z_m, const query::DistanceVector& dv) {
  if (mask.selected.size() != shots.size() || z_m.size() != shots.size() || dv.size() != shots.size()) {
    throw DimensionError("select_summary: mask, scores and shots differ in length");
  }
  SummaryManifest out;
  out.total_shots = shots.size();
  out.threshold = mask.threshold_used;
  if (!shots.empty()) out.video_duration_s = shots.back().span.t_end;
  std::vector<std::size_t> order(shots.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return shots[a].span.t_start < shots[b].span.t_start;
  });
  for (std::size_t i : order) {
    if (!mask.selected[i]) continue;
    ManifestEntry e;
    e.shot_id = shots[i].span.shot_id;
    e.t_start = shots[i].span.t_start;
    e.t_end = shots[i].span.t_end;
    e.z_m = z_m[i];
    e.d = dv.d[i];
    e.s = dv.s[i];
    std::set<std::string> names;
    for (const auto& det : shots[i].detections) names.insert(det.class_name);
    e.class_names.assign(names.begin(), names.end());
    out.entries.push_back(std::move(e));
  }
  if (out.entries.empty()) out.warnings.emplace_back("no shot passed the selection threshold; summary is empty");
  return out;
}

json to_json(const SummaryManifest& m) {
  json entries = json::array();
  for (const auto& e : m.entries) {
    entries.push_back({{"shot_id", e.shot_id},
                       {"t_start", e.t_start},
                       {"t_end", e.t_end},
                       {"z_m", e.z_m},
                       {"d", e.d},
                       {"s", e.s},
                       {"class_names", e.class_names}});
  }
  return {{"video_id", m.video_id},
          {"total_shots", m.total_shots},
          {"shot_length_s", m.shot_length_s},
          {"video_duration_s", m.video_duration_s},
          {"threshold", m.threshold},
          {"shots", std::move(entries)},
          {"warnings", m.warnings},
          {"provenance", m.provenance}};
}

SummaryManifest manifest_from_json(const json& j) {
  try {
    SummaryManifest m;
    m.video_id = j.at("video_id").get<std::string>();
    m.total_shots = j.at("total_shots").get<std::size_t>();
    m.shot_length_s = j.value("shot_length_s", ingest::kDefaultShotLength);
    m.video_duration_s = j.value("video_duration_s", 0.0);
    m.threshold = j.value("threshold", 0.0);
    for (const auto& e : j.at("shots")) {
      ManifestEntry me;
      me.shot_id = e.at("shot_id").get<std::size_t>();
      me.t_start = e.value("t_start", 0.0);
      me.t_end = e.value("t_end", 0.0);
      me.z_m = e.value("z_m", 0.0);
      me.d = e.value("d", 0.0);
      me.s = e.value("s", 0.0);
      me.class_names = e.value("class_names", std::vector<std::string>{});
      m.entries.push_back(std::move(me));
    }
    m.warnings = j.value("warnings", std::vector<std::string>{});
    m.provenance = j.value("provenance", json::object());
    return m;
  } catch (const json::exception& e) {
    throw SchemaError(std::string("manifest: ") + e.what());
  }
}

SummaryManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open manifest: " + path.string());
  try {
    return manifest_from_json(json::parse(in));
  } catch (const json::parse_error& e) {
    throw SchemaError("manifest: invalid JSON in " + path.string());
  }
}

}  // namespace qvsum::solver
