#pragma once

// Synthetic inputs for pipeline, CLI and acceptance tests.

#include <cstddef>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"
#include "oracles.hpp"
#include "qvsum/image.hpp"
#include "qvsum/pipeline.hpp"

namespace qvsum::testing {

class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

struct DetSpec {
  int class_id = 0;
  double cx = 0.5, cy = 0.5, w = 0.1, h = 0.1;
  double confidence = 0.9;
};

nlohmann::json detections_doc(const std::string& video_id, double fps, double shot_length,
                              const std::vector<std::vector<DetSpec>>& per_shot,
                              const std::vector<std::size_t>& frame_indices = {});

void write_json(const std::filesystem::path& path, const nlohmann::json& j);

GrayImage mask_image(std::size_t w, std::size_t h, const std::function<bool(std::size_t, std::size_t)>& salient);

// Saturated red where `salient`, light gray elsewhere. Survives resizing and
// luminance equalization with the same salient layout.
RgbImage two_tone_frame(std::size_t w, std::size_t h, const std::function<bool(std::size_t, std::size_t)>& salient);

// Uniform X in [0,1]^(n x dim) and d uniform in [0, d_max], s = exp(-d).
Instance random_instance(std::mt19937_64& rng, std::size_t n, std::size_t dim = 84, double d_max = 4.0);

// 30 shots of 5 s over precomputed 256x256 masks. Five planted shots share the
// query's detections and mask; the other 25 come in five groups of five
// identical shots, each group differing from the query.
struct PlantedFixture {
  pipeline::RunConfig cfg;
  std::vector<std::size_t> planted;   // shot ids
  std::vector<int> group;             // per shot: 0 = planted, 1..5 = distractor groups
};
PlantedFixture write_planted_fixture(const std::filesystem::path& dir);

// 120 shots (600 s) with random detections and 256x256 masks.
pipeline::RunConfig write_throughput_fixture(const std::filesystem::path& dir, std::uint64_t seed = 7);

// 12 s at 10 fps, three shots with frame images; shot 1 matches the query.
// Also writes ground_truth.json (shot 1 = {person, car}) and aliases.json.
pipeline::RunConfig write_three_shot_fixture(const std::filesystem::path& dir);

}  // namespace qvsum::testing
