#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "qvsum/image.hpp"
#include "qvsum/saliency.hpp"

namespace qvsum::ingest {

inline constexpr double kDefaultShotLength = 5.0;
inline constexpr double kMinConfidence = 0.5;
inline constexpr std::size_t kFrameSize = 416;

// Normalized (cx, cy, w, h) relative to the frame.
struct BBox {
  double cx = 0.5;
  double cy = 0.5;
  double w = 0.0;
  double h = 0.0;

  double area() const { return w * h; }
};

struct DetectionRecord {
  int class_id = 0;
  std::string class_name;
  double confidence = 0.0;
  BBox bbox;
};

struct VideoMeta {
  double duration_s = 0.0;
  double fps = 0.0;
};

struct ShotSpan {
  std::size_t shot_id = 0;
  double t_start = 0.0;
  double t_end = 0.0;
  std::size_t rep_frame_index = 0;
};

// ceil(duration / shot_length) contiguous shots; the last one may be shorter.
// The representative frame is the temporal midpoint.
std::vector<ShotSpan> segment(const VideoMeta& meta, double shot_length = kDefaultShotLength);

RgbImage resize_bilinear(const RgbImage& frame, std::size_t width, std::size_t height);

// Histogram equalization of integer luma; the same offset is added to all
// three channels so chroma (Cb, Cr) is untouched up to clamping.
RgbImage equalize_luminance(const RgbImage& frame);

// Resize to size x size, then equalize luminance.
RgbImage preprocess_frame(const RgbImage& frame, std::size_t size = kFrameSize);

struct ShotDetections {
  std::size_t shot_id = 0;
  std::optional<std::size_t> frame_index;
  std::vector<DetectionRecord> detections;
};

struct DetectionsDocument {
  std::string video_id;
  double fps = 0.0;
  double shot_length_s = kDefaultShotLength;
  std::vector<ShotDetections> shots;  // ascending shot_id, unique

  const ShotDetections* find(std::size_t shot_id) const;

  // Detections for shots [0, n_shots); shots without an entry are empty.
  // Throws InputError if the document names a shot_id >= n_shots.
  std::vector<std::vector<DetectionRecord>> per_shot(std::size_t n_shots) const;
};

// Validates against the detections schema. Records below kMinConfidence are
// dropped and boxes are clipped to the unit square. Throws SchemaError.
DetectionsDocument parse_detections(const nlohmann::json& doc);
DetectionsDocument load_detections(const std::filesystem::path& path);
nlohmann::json to_json(const DetectionsDocument& doc);

// Feature layout, 84 components, all in [0,1]:
//   [0, 80)  per-class detection histogram, normalized by total detections
//   80       salient coverage ratio
//   81, 82   salient centroid (x, y), (0.5, 0.5) with no salient pixel
//   83       summed box area, clamped to 1
inline constexpr std::size_t kFeatureDim = 84;
inline constexpr std::size_t kCoverageIndex = 80;
inline constexpr std::size_t kCentroidXIndex = 81;
inline constexpr std::size_t kCentroidYIndex = 82;
inline constexpr std::size_t kAreaIndex = 83;

using FeatureVector = std::array<double, kFeatureDim>;

struct ShotRecord {
  ShotSpan span;
  std::vector<DetectionRecord> detections;
  saliency::SaliencyMask saliency;
};

FeatureVector shot_feature(std::span<const DetectionRecord> detections,
                           const saliency::SaliencyMask& mask);

// Row i is the feature vector of shot i.
struct FeatureMatrix {
  std::size_t n = 0;
  std::vector<double> data;  // n * kFeatureDim, row-major

  std::span<const double> row(std::size_t i) const {
    return {data.data() + i * kFeatureDim, kFeatureDim};
  }
};

FeatureMatrix assemble_features(std::span<const ShotRecord> shots);

}  // namespace qvsum::ingest
