#include "qvsum/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "qvsum/error.hpp"
#include "qvsum/parallel.hpp"
#include "qvsum/simd/kernels.hpp"

namespace qvsum::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string numbered(const char* prefix, std::size_t index, const char* ext) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s%06zu%s", prefix, index, ext);
  return buf;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void require_file(const fs::path& p, const char* what) {
  if (p.empty()) throw InputError(std::string("missing required input: ") + what);
  if (!fs::is_regular_file(p)) throw InputError(std::string(what) + " not found: " + p.string());
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s, const fs::path& path) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw SchemaError("bad number '" + s + "' in " + path.string());
  }
}

std::size_t parse_index(const std::string& s, const fs::path& path) {
  const double v = parse_double(s, path);
  if (v < 0.0 || v != std::floor(v)) throw SchemaError("bad shot id '" + s + "' in " + path.string());
  return static_cast<std::size_t>(v);
}

std::vector<std::vector<std::string>> read_csv(const fs::path& path, const std::string& first_header) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  std::vector<std::vector<std::string>> rows;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = split_csv_line(line);
    if (header) {
      header = false;
      if (cells.empty() || cells[0] != first_header) {
        throw SchemaError(path.string() + ": expected header starting with '" + first_header + "'");
      }
      continue;
    }
    rows.push_back(std::move(cells));
  }
  return rows;
}

json scores_report(const solver::SelectionScores& scores, const solver::SelectionMask& mask, const RunConfig& cfg) {
  return {{"iterations", scores.iterations_used},
          {"final_loss", scores.final_loss},
          {"converged", scores.converged},
          {"threshold", mask.threshold_used},
          {"threshold_mode", solver::to_string(cfg.threshold.mode)},
          {"selected_count", mask.count()},
          {"total_shots", mask.selected.size()},
          {"simd_backend", simd::to_string(simd::kernels().backend)},
          {"config", cfg.to_json()}};
}

}  // namespace

fs::path frame_path(const fs::path& dir, std::size_t frame_index) {
  const fs::path png = dir / numbered("frame_", frame_index, ".png");
  if (fs::exists(png)) return png;
  return dir / numbered("frame_", frame_index, ".ppm");
}

fs::path mask_path(const fs::path& dir, std::size_t shot_id) { return dir / numbered("shot_", shot_id, ".pgm"); }

saliency::SaliencyMask frame_saliency(const RgbImage& frame, double alpha, bool preprocess) {
  if (preprocess) return saliency::salient_mask(saliency::hsv_planes(ingest::preprocess_frame(frame)), alpha);
  return saliency::salient_mask(saliency::hsv_planes(frame), alpha);
}

query::QueryProfile load_query(const RunConfig& cfg) {
  query::QueryProfile q;
  if (!cfg.query_image.empty()) {
    require_file(cfg.query_image, "query image");
    q.saliency = frame_saliency(read_image(cfg.query_image), cfg.alpha, cfg.preprocess);
  } else if (!cfg.query_mask.empty()) {
    require_file(cfg.query_mask, "query mask");
    q.saliency = saliency::from_gray(read_pgm(cfg.query_mask), cfg.alpha);
  } else {
    throw InputError("missing required input: query image (--query_image or --query_mask)");
  }
  if (!cfg.query_detections.empty()) {
    require_file(cfg.query_detections, "query detections");
    const auto doc = ingest::load_detections(cfg.query_detections);
    for (const auto& sd : doc.shots) {
      q.detections.insert(q.detections.end(), sd.detections.begin(), sd.detections.end());
    }
  }
  return q;
}

LoadedVideo load_video(const RunConfig& cfg) {
  require_file(cfg.detections, "detections JSON");
  LoadedVideo out;
  out.detections = ingest::load_detections(cfg.detections);
  const auto& doc = out.detections;
  if (std::abs(doc.shot_length_s - cfg.shot_length_s) > 1e-9) {
    throw InputError("detections were produced with shot_length_s=" + fmt(doc.shot_length_s) +
                     " but the run uses " + fmt(cfg.shot_length_s));
  }
  if (cfg.duration_s) {
    out.duration_s = *cfg.duration_s;
  } else {
    if (doc.shots.empty()) throw InputError("cannot infer video duration: detections list no shots; set duration_s");
    out.duration_s = static_cast<double>(doc.shots.back().shot_id + 1) * cfg.shot_length_s;
  }

  const auto spans = ingest::segment({out.duration_s, doc.fps}, cfg.shot_length_s);
  auto per_shot = doc.per_shot(spans.size());

  const bool use_frames = !cfg.frames_dir.empty();
  if (!use_frames && cfg.masks_dir.empty()) throw InputError("missing required input: --frames or --masks directory");
  const fs::path& dir = use_frames ? cfg.frames_dir : cfg.masks_dir;
  if (!fs::is_directory(dir)) throw InputError("input directory not found: " + dir.string());

  out.shots.resize(spans.size());
  parallel_for(spans.size(), [&](std::size_t i) {
    auto& shot = out.shots[i];
    shot.span = spans[i];
    shot.detections = std::move(per_shot[i]);
    if (use_frames) {
      std::size_t frame_index = spans[i].rep_frame_index;
      if (const auto* sd = doc.find(spans[i].shot_id); sd != nullptr && sd->frame_index) frame_index = *sd->frame_index;
      const fs::path p = frame_path(dir, frame_index);
      require_file(p, "frame image");
      shot.saliency = frame_saliency(read_image(p), cfg.alpha, cfg.preprocess);
    } else {
      const fs::path p = mask_path(dir, spans[i].shot_id);
      require_file(p, "saliency mask");
      shot.saliency = saliency::from_gray(read_pgm(p), cfg.alpha);
    }
  });
  return out;
}

ScoreResult run_score(const std::vector<double>& feature_rows, std::size_t dim, const query::DistanceVector& dv,
                      const RunConfig& cfg) {
  cfg.validate();
  const std::size_t n = dv.size();
  const auto m = objective::build_matrices(feature_rows, n, dim, dv.s);
  ScoreResult out;
  out.scores = solver::cccp_minimize(m, cfg.loss, cfg.solver);
  out.mask = solver::adaptive_threshold(out.scores.z, cfg.threshold);
  out.report = scores_report(out.scores, out.mask, cfg);
  return out;
}

SummarizeResult run_summarize(const RunConfig& cfg) {
  cfg.validate();
  using clock = std::chrono::steady_clock;
  const auto started = clock::now();

  SummarizeResult out;
  const query::QueryProfile q = load_query(cfg);
  LoadedVideo video = load_video(cfg);
  out.shots = std::move(video.shots);
  out.video_time_s = video.duration_s;

  out.features = ingest::assemble_features(out.shots);
  out.distances = query::distance_vector(q, out.shots, cfg.distance);
  const auto m = objective::build_matrices(out.features, out.distances);
  out.scores = solver::cccp_minimize(m, cfg.loss, cfg.solver);
  out.mask = solver::adaptive_threshold(out.scores.z, cfg.threshold);
  out.manifest = solver::select_summary(out.shots, out.mask, out.scores.z, out.distances);
  out.manifest.video_id = video.detections.video_id;
  out.manifest.shot_length_s = cfg.shot_length_s;
  out.manifest.video_duration_s = video.duration_s;
  out.manifest.provenance = {{"config", cfg.to_json()},
                             {"solver", {{"iterations", out.scores.iterations_used},
                                         {"final_loss", out.scores.final_loss},
                                         {"converged", out.scores.converged}}}};

  std::vector<std::size_t> ids;
  ids.reserve(out.shots.size());
  for (const auto& s : out.shots) ids.push_back(s.span.shot_id);

  if (!cfg.output_dir.empty()) {
    fs::create_directories(cfg.output_dir);
    write_text(cfg.output_dir / "scores.csv", scores_csv(ids, out.scores, out.mask));
    write_text(cfg.output_dir / "distances.csv", distances_csv(ids, out.distances));
    write_text(cfg.output_dir / "features.csv", features_csv(ids, out.features.data, ingest::kFeatureDim));
  }
  // Timing covers everything up to and including the manifest write.
  out.process_time_s = std::chrono::duration<double>(clock::now() - started).count();
  out.manifest.provenance["timing"] = {{"process_time_s", out.process_time_s}};
  if (!cfg.output_dir.empty()) write_text(cfg.output_dir / "manifest.json", to_json(out.manifest).dump(2) + "\n");
  out.process_time_s = std::chrono::duration<double>(clock::now() - started).count();

  out.report = scores_report(out.scores, out.mask, cfg);
  out.report["video_id"] = out.manifest.video_id;
  out.report["process_time_s"] = out.process_time_s;
  out.report["video_time_s"] = out.video_time_s;
  out.report["speedup"] = eval::timing_report(out.process_time_s, out.video_time_s);
  out.report["workers"] = worker_count();
  out.report["warnings"] = out.manifest.warnings;
  if (!cfg.output_dir.empty()) write_text(cfg.output_dir / "report.json", out.report.dump(2) + "\n");
  return out;
}

std::string scores_csv(const std::vector<std::size_t>& shot_ids, const solver::SelectionScores& scores,
                       const solver::SelectionMask& mask) {
  std::string out = "shot_id,z_m,selected\n";
  for (std::size_t i = 0; i < shot_ids.size(); ++i) {
    out += std::to_string(shot_ids[i]) + "," + fmt(scores.z[i]) + "," + (mask.selected[i] ? "1" : "0") + "\n";
  }
  return out;
}

std::string distances_csv(const std::vector<std::size_t>& shot_ids, const query::DistanceVector& dv) {
  std::string out = "shot_id,d,s\n";
  for (std::size_t i = 0; i < shot_ids.size(); ++i) {
    out += std::to_string(shot_ids[i]) + "," + fmt(dv.d[i]) + "," + fmt(dv.s[i]) + "\n";
  }
  return out;
}

std::string features_csv(const std::vector<std::size_t>& shot_ids, const std::vector<double>& rows, std::size_t dim) {
  std::string out = "shot_id";
  for (std::size_t k = 0; k < dim; ++k) out += ",f" + std::to_string(k);
  out += "\n";
  for (std::size_t i = 0; i < shot_ids.size(); ++i) {
    out += std::to_string(shot_ids[i]);
    for (std::size_t k = 0; k < dim; ++k) out += "," + fmt(rows[i * dim + k]);
    out += "\n";
  }
  return out;
}

FeatureTable read_features_csv(const fs::path& path) {
  FeatureTable t;
  for (const auto& cells : read_csv(path, "shot_id")) {
    if (cells.size() < 2) throw SchemaError(path.string() + ": feature row without values");
    if (t.dim == 0) t.dim = cells.size() - 1;
    if (cells.size() - 1 != t.dim) throw SchemaError(path.string() + ": ragged feature rows");
    t.shot_ids.push_back(parse_index(cells[0], path));
    for (std::size_t k = 1; k < cells.size(); ++k) t.rows.push_back(parse_double(cells[k], path));
  }
  if (t.shot_ids.empty()) throw InputError(path.string() + ": no feature rows");
  return t;
}

DistanceTable read_distances_csv(const fs::path& path) {
  DistanceTable t;
  for (const auto& cells : read_csv(path, "shot_id")) {
    if (cells.size() < 2) throw SchemaError(path.string() + ": expected shot_id,d[,s]");
    t.shot_ids.push_back(parse_index(cells[0], path));
    t.d.push_back(parse_double(cells[1], path));
  }
  if (t.shot_ids.empty()) throw InputError(path.string() + ": no distance rows");
  return t;
}

Timeline build_timeline(const solver::SummaryManifest& m, const eval::GroundTruth& gt) {
  std::size_t columns = m.total_shots;
  for (const auto& e : m.entries) columns = std::max(columns, e.shot_id + 1);
  for (const auto& s : gt.shots) columns = std::max(columns, s.shot_id + 1);
  Timeline t{columns, std::vector<std::uint8_t>(columns, 0), std::vector<std::uint8_t>(columns, 0)};
  for (const auto& e : m.entries) t.predicted[e.shot_id] = 1;
  for (const auto& s : gt.shots) t.ground_truth[s.shot_id] = 1;
  return t;
}

std::string timeline_csv(const Timeline& t) {
  std::string out = "track";
  for (std::size_t c = 0; c < t.columns; ++c) out += "," + std::to_string(c);
  out += "\npredicted";
  for (auto v : t.predicted) out += v ? ",1" : ",0";
  out += "\nground_truth";
  for (auto v : t.ground_truth) out += v ? ",1" : ",0";
  out += "\n";
  return out;
}

std::string timeline_svg(const Timeline& t) {
  const std::size_t cell = 6;
  const std::size_t width = std::max<std::size_t>(1, t.columns) * cell + 100;
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"60\">\n"
      << "  <text x=\"2\" y=\"18\" font-size=\"10\">ground truth</text>\n"
      << "  <text x=\"2\" y=\"43\" font-size=\"10\">predicted</text>\n";
  for (std::size_t c = 0; c < t.columns; ++c) {
    const std::size_t x = 90 + c * cell;
    if (t.ground_truth[c]) svg << "  <rect x=\"" << x << "\" y=\"8\" width=\"" << cell - 1 << "\" height=\"14\" fill=\"blue\"/>\n";
    if (t.predicted[c]) svg << "  <rect x=\"" << x << "\" y=\"33\" width=\"" << cell - 1 << "\" height=\"14\" fill=\"green\"/>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << text;
  if (!out) throw InputError("write failed: " + path.string());
}

}  // namespace qvsum::pipeline
