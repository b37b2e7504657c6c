#include "fixtures.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>

#include "qvsum/coco_classes.hpp"

namespace qvsum::testing {

namespace fs = std::filesystem;
using nlohmann::json;

TempDir::TempDir(const std::string& tag) {
  static std::atomic<int> counter{0};
  const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
  path_ = fs::temp_directory_path() /
          ("qvsum_" + tag + "_" + std::to_string(stamp) + "_" + std::to_string(counter++));
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

json detections_doc(const std::string& video_id, double fps, double shot_length,
                    const std::vector<std::vector<DetSpec>>& per_shot, const std::vector<std::size_t>& frame_indices) {
  json shots = json::array();
  for (std::size_t i = 0; i < per_shot.size(); ++i) {
    json dets = json::array();
    for (const auto& d : per_shot[i]) {
      dets.push_back({{"class_id", d.class_id},
                      {"class_name", std::string(class_name(d.class_id))},
                      {"confidence", d.confidence},
                      {"bbox", {d.cx, d.cy, d.w, d.h}}});
    }
    json entry = {{"shot_id", i}, {"detections", dets}};
    if (i < frame_indices.size()) entry["frame_index"] = frame_indices[i];
    shots.push_back(entry);
  }
  return {{"video_id", video_id}, {"fps", fps}, {"shot_length_s", shot_length}, {"shots", shots}};
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  out << j.dump(2) << "\n";
}

GrayImage mask_image(std::size_t w, std::size_t h, const std::function<bool(std::size_t, std::size_t)>& salient) {
  GrayImage g{w, h, std::vector<std::uint8_t>(w * h, 0)};
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) g.pixels[y * w + x] = salient(x, y) ? 255 : 0;
  }
  return g;
}

RgbImage two_tone_frame(std::size_t w, std::size_t h, const std::function<bool(std::size_t, std::size_t)>& salient) {
  RgbImage img(w, h);
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      std::uint8_t* px = img.at(x, y);
      if (salient(x, y)) {
        px[0] = 200, px[1] = 30, px[2] = 30;
      } else {
        px[0] = px[1] = px[2] = 230;
      }
    }
  }
  return img;
}

Instance random_instance(std::mt19937_64& rng, std::size_t n, std::size_t dim, double d_max) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> dist(0.0, d_max);
  Instance inst{n, dim, std::vector<double>(n * dim), std::vector<double>(n)};
  for (auto& v : inst.x) v = unit(rng);
  for (auto& s : inst.s) s = std::exp(-dist(rng));
  return inst;
}

namespace {

constexpr std::size_t kMaskSize = 256;

// Class ids in detector order.
constexpr int kPerson = 0;
constexpr int kBicycle = 1;
constexpr int kCar = 2;
constexpr int kDog = 16;
constexpr int kBottle = 39;
constexpr int kCup = 41;
constexpr int kChair = 56;
constexpr int kTv = 62;

}  // namespace

PlantedFixture write_planted_fixture(const fs::path& dir) {
  PlantedFixture fx;
  const std::vector<DetSpec> query_dets{{kPerson, 0.3, 0.4, 0.2, 0.4}, {kCar, 0.7, 0.6, 0.3, 0.2}};
  const auto query_mask = [](std::size_t x, std::size_t y) { return x < 128 && y > 64; };

  struct Group {
    std::vector<DetSpec> dets;
    std::function<bool(std::size_t, std::size_t)> mask;
  };
  const std::vector<Group> groups{
      {query_dets, query_mask},
      {{{kDog, 0.8, 0.2, 0.1, 0.1}}, [](std::size_t x, std::size_t) { return x >= 192; }},
      {{{kChair, 0.5, 0.5, 0.3, 0.3}, {kTv, 0.2, 0.2, 0.1, 0.1}}, [](std::size_t, std::size_t y) { return y < 40; }},
      {{{kBottle, 0.9, 0.9, 0.05, 0.1}, {kCup, 0.1, 0.9, 0.05, 0.05}, {kChair, 0.4, 0.1, 0.2, 0.2}},
       [](std::size_t, std::size_t) { return false; }},
      {{}, [](std::size_t x, std::size_t y) { return (x / 32 + y / 32) % 2 == 0; }},
      {{{kBicycle, 0.6, 0.6, 0.2, 0.2}, {kBicycle, 0.65, 0.62, 0.2, 0.2}},
       [](std::size_t x, std::size_t y) { return x > 160 && y > 160; }},
  };

  const std::vector<std::size_t> planted{3, 9, 14, 20, 27};
  fx.planted = planted;
  fx.group.assign(30, 0);
  int next_group = 1;
  int filled = 0;
  for (std::size_t i = 0; i < 30; ++i) {
    if (std::find(planted.begin(), planted.end(), i) != planted.end()) continue;
    fx.group[i] = next_group;
    if (++filled == 5) {
      filled = 0;
      ++next_group;
    }
  }

  fs::create_directories(dir / "masks");
  std::vector<std::vector<DetSpec>> per_shot(30);
  for (std::size_t i = 0; i < 30; ++i) {
    const Group& g = groups[static_cast<std::size_t>(fx.group[i])];
    per_shot[i] = g.dets;
    write_pgm(pipeline::mask_path(dir / "masks", i), mask_image(kMaskSize, kMaskSize, g.mask));
  }
  write_json(dir / "detections.json", detections_doc("planted30", 30.0, 5.0, per_shot));
  write_json(dir / "query_detections.json", detections_doc("query", 1.0, 5.0, {query_dets}));
  write_pgm(dir / "query_mask.pgm", mask_image(kMaskSize, kMaskSize, query_mask));

  fx.cfg.masks_dir = dir / "masks";
  fx.cfg.query_mask = dir / "query_mask.pgm";
  fx.cfg.query_detections = dir / "query_detections.json";
  fx.cfg.detections = dir / "detections.json";
  fx.cfg.output_dir = dir / "out";
  return fx;
}

pipeline::RunConfig write_throughput_fixture(const fs::path& dir, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> cls(0, kNumClasses - 1);
  std::uniform_int_distribution<int> count(0, 4);
  std::uniform_real_distribution<double> pos(0.1, 0.9);
  std::uniform_real_distribution<double> ext(0.05, 0.3);
  std::uniform_real_distribution<double> conf(0.3, 1.0);
  std::uniform_int_distribution<std::size_t> corner(0, kMaskSize - 1);

  constexpr std::size_t kShots = 120;
  fs::create_directories(dir / "masks");
  std::vector<std::vector<DetSpec>> per_shot(kShots);
  for (std::size_t i = 0; i < kShots; ++i) {
    const int k = count(rng);
    for (int j = 0; j < k; ++j) per_shot[i].push_back({cls(rng), pos(rng), pos(rng), ext(rng), ext(rng), conf(rng)});
    const std::size_t x0 = corner(rng), y0 = corner(rng), x1 = corner(rng), y1 = corner(rng);
    write_pgm(pipeline::mask_path(dir / "masks", i),
              mask_image(kMaskSize, kMaskSize, [&](std::size_t x, std::size_t y) {
                return x >= std::min(x0, x1) && x <= std::max(x0, x1) && y >= std::min(y0, y1) &&
                       y <= std::max(y0, y1);
              }));
  }
  write_json(dir / "detections.json", detections_doc("throughput120", 30.0, 5.0, per_shot));
  write_json(dir / "query_detections.json",
             detections_doc("query", 1.0, 5.0, {{{kPerson, 0.5, 0.5, 0.3, 0.6}, {kCar, 0.2, 0.7, 0.2, 0.2}}}));
  write_pgm(dir / "query_mask.pgm", mask_image(kMaskSize, kMaskSize, [](std::size_t x, std::size_t y) {
              return x > 50 && x < 200 && y > 30 && y < 220;
            }));

  pipeline::RunConfig cfg;
  cfg.masks_dir = dir / "masks";
  cfg.query_mask = dir / "query_mask.pgm";
  cfg.query_detections = dir / "query_detections.json";
  cfg.detections = dir / "detections.json";
  cfg.duration_s = 600.0;
  cfg.output_dir = dir / "out";
  return cfg;
}

pipeline::RunConfig write_three_shot_fixture(const fs::path& dir) {
  fs::create_directories(dir / "frames");
  const auto query_layout = [](std::size_t x, std::size_t y) { return x < 32 && y >= 12 && y < 36; };
  const auto layout0 = [](std::size_t x, std::size_t) { return x >= 48; };
  const auto layout2 = [](std::size_t, std::size_t y) { return y < 8; };

  const std::vector<std::size_t> frame_index{25, 75, 110};
  write_ppm(pipeline::frame_path(dir / "frames", frame_index[0]), two_tone_frame(64, 48, layout0));
  write_ppm(pipeline::frame_path(dir / "frames", frame_index[1]), two_tone_frame(64, 48, query_layout));
  write_ppm(pipeline::frame_path(dir / "frames", frame_index[2]), two_tone_frame(64, 48, layout2));
  write_ppm(dir / "query.ppm", two_tone_frame(64, 48, query_layout));

  const std::vector<DetSpec> query_dets{{kPerson, 0.25, 0.5, 0.2, 0.5}, {kCar, 0.7, 0.7, 0.3, 0.2}};
  write_json(dir / "detections.json",
             detections_doc("three_shot", 10.0, 5.0,
                            {{{kDog, 0.8, 0.5, 0.2, 0.3, 0.8}, {kChair, 0.2, 0.2, 0.1, 0.1, 0.4}},
                             query_dets,
                             {{kTv, 0.5, 0.1, 0.4, 0.2, 0.7}, {kTv, 0.1, 0.1, 0.1, 0.1, 0.6}, {kCup, 0.9, 0.9, 0.1, 0.1}}},
                            frame_index));
  write_json(dir / "query_detections.json", detections_doc("query", 1.0, 5.0, {query_dets}));
  write_json(dir / "ground_truth.json",
             {{"video_id", "three_shot"}, {"shots", {{{"shot_id", 1}, {"concepts", {"person", "car"}}}}}});
  write_json(dir / "aliases.json", {{"person", "person"}, {"car", "car"}, {"dog", "pet"}, {"tv", "screen"}});

  pipeline::RunConfig cfg;
  cfg.frames_dir = dir / "frames";
  cfg.query_image = dir / "query.ppm";
  cfg.query_detections = dir / "query_detections.json";
  cfg.detections = dir / "detections.json";
  cfg.duration_s = 12.0;
  cfg.ground_truth = dir / "ground_truth.json";
  cfg.aliases = dir / "aliases.json";
  cfg.output_dir = dir / "out";
  return cfg;
}

}  // namespace qvsum::testing
