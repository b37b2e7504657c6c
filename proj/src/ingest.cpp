#include "qvsum/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>

#include "qvsum/coco_classes.hpp"
#include "qvsum/error.hpp"
#include "qvsum/parallel.hpp"

namespace qvsum::ingest {

using nlohmann::json;

std::vector<ShotSpan> segment(const VideoMeta& meta, double shot_length) {
  if (!(meta.duration_s > 0.0) || !std::isfinite(meta.duration_s)) {
    throw InputError("segment: video duration must be positive");
  }
  if (!(meta.fps > 0.0) || !std::isfinite(meta.fps)) throw InputError("segment: fps must be positive");
  if (!(shot_length > 0.0) || !std::isfinite(shot_length)) {
    throw ConfigError("segment: shot length must be positive");
  }
  auto count = static_cast<std::size_t>(std::ceil(meta.duration_s / shot_length));
  // Guard against the quotient rounding just above an integer.
  if (count > 1 && static_cast<double>(count - 1) * shot_length >= meta.duration_s) --count;

  std::vector<ShotSpan> shots;
  shots.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    ShotSpan s;
    s.shot_id = i;
    s.t_start = static_cast<double>(i) * shot_length;
    s.t_end = std::min(static_cast<double>(i + 1) * shot_length, meta.duration_s);
    s.rep_frame_index = static_cast<std::size_t>(std::floor(meta.fps * (s.t_start + s.t_end) / 2.0));
    shots.push_back(s);
  }
  return shots;
}

RgbImage resize_bilinear(const RgbImage& frame, std::size_t width, std::size_t height) {
  if (frame.empty()) throw DimensionError("resize: zero-area frame");
  if (width == 0 || height == 0) throw DimensionError("resize: zero-area target");
  if (width == frame.width && height == frame.height) return frame;

  struct Tap {
    std::size_t i0, i1;
    double f;
  };
  auto taps = [](std::size_t dst, std::size_t src) {
    std::vector<Tap> out(dst);
    const double scale = static_cast<double>(src) / static_cast<double>(dst);
    for (std::size_t d = 0; d < dst; ++d) {
      double pos = (static_cast<double>(d) + 0.5) * scale - 0.5;
      pos = std::clamp(pos, 0.0, static_cast<double>(src - 1));
      const auto i0 = static_cast<std::size_t>(pos);
      out[d] = {i0, std::min(i0 + 1, src - 1), pos - static_cast<double>(i0)};
    }
    return out;
  };
  const auto tx = taps(width, frame.width);
  const auto ty = taps(height, frame.height);

  RgbImage out(width, height);
  for (std::size_t y = 0; y < height; ++y) {
    for (std::size_t x = 0; x < width; ++x) {
      const std::uint8_t* p00 = frame.at(tx[x].i0, ty[y].i0);
      const std::uint8_t* p10 = frame.at(tx[x].i1, ty[y].i0);
      const std::uint8_t* p01 = frame.at(tx[x].i0, ty[y].i1);
      const std::uint8_t* p11 = frame.at(tx[x].i1, ty[y].i1);
      std::uint8_t* dst = out.at(x, y);
      for (int c = 0; c < 3; ++c) {
        const double top = p00[c] + tx[x].f * (p10[c] - p00[c]);
        const double bottom = p01[c] + tx[x].f * (p11[c] - p01[c]);
        const double v = top + ty[y].f * (bottom - top);
        dst[c] = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
      }
    }
  }
  return out;
}

RgbImage equalize_luminance(const RgbImage& frame) {
  if (frame.empty()) throw DimensionError("equalize: zero-area frame");
  const std::size_t n = frame.area();
  std::vector<int> luma(n);
  std::array<std::size_t, 256> hist{};
  for (std::size_t p = 0; p < n; ++p) {
    const std::uint8_t* px = &frame.pixels[3 * p];
    luma[p] = static_cast<int>(std::lround(0.299 * px[0] + 0.587 * px[1] + 0.114 * px[2]));
    luma[p] = std::clamp(luma[p], 0, 255);
    ++hist[static_cast<std::size_t>(luma[p])];
  }

  std::array<int, 256> lut{};
  std::size_t cdf = 0;
  std::size_t cdf_min = 0;
  for (std::size_t v = 0; v < 256; ++v) {
    if (cdf_min == 0 && hist[v] != 0) cdf_min = hist[v];
  }
  for (std::size_t v = 0; v < 256; ++v) {
    cdf += hist[v];
    if (n == cdf_min) {
      lut[v] = static_cast<int>(v);  // single-level histogram maps to itself
    } else {
      const double scaled = static_cast<double>(cdf > cdf_min ? cdf - cdf_min : 0) * 255.0 /
                            static_cast<double>(n - cdf_min);
      lut[v] = static_cast<int>(std::lround(scaled));
    }
  }

  RgbImage out = frame;
  for (std::size_t p = 0; p < n; ++p) {
    const int delta = lut[static_cast<std::size_t>(luma[p])] - luma[p];
    if (delta == 0) continue;
    for (int c = 0; c < 3; ++c) {
      out.pixels[3 * p + c] = static_cast<std::uint8_t>(std::clamp(frame.pixels[3 * p + c] + delta, 0, 255));
    }
  }
  return out;
}

RgbImage preprocess_frame(const RgbImage& frame, std::size_t size) {
  if (frame.empty()) throw DimensionError("preprocess: zero-area frame");
  return equalize_luminance(resize_bilinear(frame, size, size));
}

// --- detections document ---------------------------------------------------

namespace {

template <typename T>
T require(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw SchemaError(where + ": missing field '" + key + "'");
  }
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw SchemaError(where + ": field '" + key + "' has the wrong type");
  }
}

double require_number(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key) || !obj.at(key).is_number()) {
    throw SchemaError(where + ": field '" + key + "' must be a number");
  }
  return obj.at(key).get<double>();
}

std::size_t require_index(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key) || !obj.at(key).is_number_integer() ||
      obj.at(key).get<long long>() < 0) {
    throw SchemaError(where + ": field '" + key + "' must be a non-negative integer");
  }
  return obj.at(key).get<std::size_t>();
}

// Clip one axis of a box to [0,1]. An axis already inside is returned as is so
// that parsing a serialized document does not perturb it.
std::optional<std::pair<double, double>> clip_axis(double c, double extent) {
  const double lo = c - extent / 2.0;
  const double hi = c + extent / 2.0;
  if (lo >= 0.0 && hi <= 1.0) return std::pair{c, extent};
  const double l = std::clamp(lo, 0.0, 1.0);
  const double h = std::clamp(hi, 0.0, 1.0);
  if (!(h > l)) return std::nullopt;
  return std::pair{(l + h) / 2.0, h - l};
}

// Clip a box to the unit square. Returns nullopt when nothing remains.
std::optional<BBox> clip_to_unit(const BBox& b) {
  const auto x = clip_axis(b.cx, b.w);
  const auto y = clip_axis(b.cy, b.h);
  if (!x || !y) return std::nullopt;
  return BBox{x->first, y->first, x->second, y->second};
}

std::optional<DetectionRecord> parse_record(const json& rec, const std::string& where) {
  if (!rec.is_object()) throw SchemaError(where + ": detection must be an object");
  if (!rec.contains("class_id") || !rec.at("class_id").is_number_integer()) {
    throw SchemaError(where + ": field 'class_id' must be an integer");
  }
  const auto class_id = rec.at("class_id").get<long long>();
  if (class_id < 0 || class_id >= kNumClasses) {
    throw SchemaError(where + ": unknown class_id " + std::to_string(class_id));
  }
  DetectionRecord out;
  out.class_id = static_cast<int>(class_id);
  out.class_name = std::string(class_name(out.class_id));
  if (rec.contains("class_name")) {
    const auto name = require<std::string>(rec, "class_name", where);
    const auto id = class_id_from_name(name);
    if (!id || *id != out.class_id) {
      throw SchemaError(where + ": class_name '" + name + "' does not match class_id " +
                        std::to_string(class_id));
    }
  }
  out.confidence = require_number(rec, "confidence", where);
  if (!(out.confidence >= 0.0 && out.confidence <= 1.0)) {
    throw SchemaError(where + ": confidence must lie in [0,1]");
  }
  if (!rec.contains("bbox") || !rec.at("bbox").is_array() || rec.at("bbox").size() != 4) {
    throw SchemaError(where + ": bbox must be an array [cx, cy, w, h]");
  }
  std::array<double, 4> v{};
  for (std::size_t k = 0; k < 4; ++k) {
    const json& x = rec.at("bbox").at(k);
    if (!x.is_number() || !std::isfinite(x.get<double>())) {
      throw SchemaError(where + ": bbox entries must be finite numbers");
    }
    v[k] = x.get<double>();
  }
  if (v[2] <= 0.0 || v[3] <= 0.0) throw SchemaError(where + ": bbox w and h must be positive");

  if (out.confidence < kMinConfidence) return std::nullopt;
  const auto clipped = clip_to_unit(BBox{v[0], v[1], v[2], v[3]});
  if (!clipped) return std::nullopt;
  out.bbox = *clipped;
  return out;
}

}  // namespace

DetectionsDocument parse_detections(const json& doc) {
  if (!doc.is_object()) throw SchemaError("detections: document must be a JSON object");
  DetectionsDocument out;
  out.video_id = require<std::string>(doc, "video_id", "detections");
  out.fps = require_number(doc, "fps", "detections");
  out.shot_length_s = require_number(doc, "shot_length_s", "detections");
  if (!(out.fps > 0.0)) throw SchemaError("detections: fps must be positive");
  if (!(out.shot_length_s > 0.0)) throw SchemaError("detections: shot_length_s must be positive");
  if (!doc.contains("shots") || !doc.at("shots").is_array()) {
    throw SchemaError("detections: field 'shots' must be an array");
  }

  for (const json& shot : doc.at("shots")) {
    ShotDetections sd;
    sd.shot_id = require_index(shot, "shot_id", "detections.shots[]");
    const std::string where = "shot " + std::to_string(sd.shot_id);
    if (shot.contains("frame_index")) sd.frame_index = require_index(shot, "frame_index", where);
    if (!shot.contains("detections") || !shot.at("detections").is_array()) {
      throw SchemaError(where + ": field 'detections' must be an array");
    }
    for (const json& rec : shot.at("detections")) {
      if (auto r = parse_record(rec, where)) sd.detections.push_back(std::move(*r));
    }
    out.shots.push_back(std::move(sd));
  }
  std::sort(out.shots.begin(), out.shots.end(),
            [](const ShotDetections& a, const ShotDetections& b) { return a.shot_id < b.shot_id; });
  for (std::size_t i = 1; i < out.shots.size(); ++i) {
    if (out.shots[i].shot_id == out.shots[i - 1].shot_id) {
      throw SchemaError("detections: duplicate shot_id " + std::to_string(out.shots[i].shot_id));
    }
  }
  return out;
}

DetectionsDocument load_detections(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open detections file: " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError("detections: invalid JSON in " + path.string() + ": " + e.what());
  }
  return parse_detections(doc);
}

json to_json(const DetectionsDocument& doc) {
  json shots = json::array();
  for (const auto& sd : doc.shots) {
    json dets = json::array();
    for (const auto& d : sd.detections) {
      dets.push_back({{"class_id", d.class_id},
                      {"class_name", d.class_name},
                      {"confidence", d.confidence},
                      {"bbox", {d.bbox.cx, d.bbox.cy, d.bbox.w, d.bbox.h}}});
    }
    json entry = {{"shot_id", sd.shot_id}, {"detections", std::move(dets)}};
    if (sd.frame_index) entry["frame_index"] = *sd.frame_index;
    shots.push_back(std::move(entry));
  }
  return {{"video_id", doc.video_id},
          {"fps", doc.fps},
          {"shot_length_s", doc.shot_length_s},
          {"shots", std::move(shots)}};
}

const ShotDetections* DetectionsDocument::find(std::size_t shot_id) const {
  auto it = std::lower_bound(shots.begin(), shots.end(), shot_id,
                             [](const ShotDetections& s, std::size_t id) { return s.shot_id < id; });
  return (it != shots.end() && it->shot_id == shot_id) ? &*it : nullptr;
}

std::vector<std::vector<DetectionRecord>> DetectionsDocument::per_shot(std::size_t n_shots) const {
  std::vector<std::vector<DetectionRecord>> out(n_shots);
  for (const auto& sd : shots) {
    if (sd.shot_id >= n_shots) {
      throw InputError("detections name shot " + std::to_string(sd.shot_id) + " but the video has " +
                       std::to_string(n_shots) + " shots");
    }
    out[sd.shot_id] = sd.detections;
  }
  return out;
}

// --- features --------------------------------------------------------------

FeatureVector shot_feature(std::span<const DetectionRecord> detections,
                           const saliency::SaliencyMask& mask) {
  if (mask.area() == 0 || mask.mask.size() != mask.area()) {
    throw DimensionError("shot_feature: saliency mask missing or inconsistent");
  }
  FeatureVector f{};
  if (!detections.empty()) {
    const double total = static_cast<double>(detections.size());
    std::array<std::size_t, kNumClasses> counts{};
    double area = 0.0;
    for (const auto& d : detections) {
      if (d.class_id < 0 || d.class_id >= kNumClasses) throw SchemaError("shot_feature: bad class_id");
      ++counts[static_cast<std::size_t>(d.class_id)];
      area += d.bbox.area();
    }
    for (std::size_t c = 0; c < counts.size(); ++c) f[c] = static_cast<double>(counts[c]) / total;
    f[kAreaIndex] = std::clamp(area, 0.0, 1.0);
  }

  std::size_t salient = 0;
  double sum_x = 0.0;
  double sum_y = 0.0;
  for (std::size_t y = 0; y < mask.height; ++y) {
    std::size_t row_count = 0;
    double row_x = 0.0;
    for (std::size_t x = 0; x < mask.width; ++x) {
      if (mask.mask[y * mask.width + x]) {
        ++row_count;
        row_x += static_cast<double>(x) + 0.5;
      }
    }
    salient += row_count;
    sum_x += row_x;
    sum_y += static_cast<double>(row_count) * (static_cast<double>(y) + 0.5);
  }
  f[kCoverageIndex] = static_cast<double>(salient) / static_cast<double>(mask.area());
  if (salient == 0) {
    f[kCentroidXIndex] = 0.5;
    f[kCentroidYIndex] = 0.5;
  } else {
    f[kCentroidXIndex] = sum_x / static_cast<double>(salient) / static_cast<double>(mask.width);
    f[kCentroidYIndex] = sum_y / static_cast<double>(salient) / static_cast<double>(mask.height);
  }
  return f;
}

FeatureMatrix assemble_features(std::span<const ShotRecord> shots) {
  if (shots.empty()) throw InputError("assemble_features: no shots");
  FeatureMatrix m{shots.size(), std::vector<double>(shots.size() * kFeatureDim)};
  parallel_for(shots.size(), [&](std::size_t i) {
    const FeatureVector f = shot_feature(shots[i].detections, shots[i].saliency);
    std::copy(f.begin(), f.end(), m.data.begin() + static_cast<std::ptrdiff_t>(i * kFeatureDim));
  });
  return m;
}

}  // namespace qvsum::ingest
