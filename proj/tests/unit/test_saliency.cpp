#include <doctest.h>

#include <cmath>
#include <random>

#include "qvsum/error.hpp"
#include "qvsum/saliency.hpp"

using namespace qvsum;
using namespace qvsum::saliency;

namespace {

RgbImage one_pixel(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  RgbImage img(1, 1);
  img.pixels = {r, g, b};
  return img;
}

SaliencyMask mask_of(std::size_t w, std::size_t h, std::vector<std::uint8_t> bits) {
  return SaliencyMask{w, h, std::move(bits), kDefaultAlpha};
}

}  // namespace

TEST_CASE("hsv planes of single pixels") {
  const auto red = hsv_planes(one_pixel(255, 0, 0));
  CHECK(red.s[0] == 1.0);
  CHECK(red.v[0] == 1.0);
  const auto gray = hsv_planes(one_pixel(128, 128, 128));
  CHECK(gray.s[0] == 0.0);
  CHECK(gray.v[0] == 128.0 / 255.0);
  const auto black = hsv_planes(one_pixel(0, 0, 0));
  CHECK(black.s[0] == 0.0);
  CHECK(black.v[0] == 0.0);
}

TEST_CASE("hsv planes reject empty frames") {
  CHECK_THROWS_AS(hsv_planes(RgbImage{}), DimensionError);
}

TEST_CASE("salient mask examples") {
  const auto planes = make_planes(3, 1, {0.5, 0.0, 0.65}, {0.5, 1.0, 0.3});
  const auto m = salient_mask(planes);
  CHECK(m.mask[0] == 1);  // exp(0) = 1 > 0.7
  CHECK(m.mask[1] == 0);  // exp(-1) ~ 0.368
  CHECK(m.mask[2] == 1);  // exp(0.35) ~ 1.419
  CHECK(std::exp(-(1.0 - 0.0)) == doctest::Approx(0.3679).epsilon(1e-4));
}

TEST_CASE("alpha outside (0,1) is a config error") {
  const auto planes = make_planes(1, 1, {0.0}, {0.0});
  CHECK_THROWS_AS(salient_mask(planes, 0.0), ConfigError);
  CHECK_THROWS_AS(salient_mask(planes, 1.0), ConfigError);
  CHECK_THROWS_AS(salient_mask(planes, -0.2), ConfigError);
  CHECK_NOTHROW(salient_mask(planes, 0.5));
}

TEST_CASE("threshold agrees with the exponential form away from the boundary") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (double alpha : {0.1, 0.5, 0.7, 0.95}) {
    const std::size_t n = 4000;
    std::vector<double> s(n), v(n);
    for (std::size_t p = 0; p < n; ++p) s[p] = u(rng), v[p] = u(rng);
    const auto m = salient_mask(make_planes(n, 1, s, v), alpha);
    for (std::size_t p = 0; p < n; ++p) {
      if (std::abs((v[p] - s[p]) + std::log(alpha)) < 1e-12) continue;
      CHECK(static_cast<bool>(m.mask[p]) == (std::exp(-(v[p] - s[p])) > alpha));
    }
  }
}

TEST_CASE("pixels with S >= V are salient for every alpha < 1") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    double s = u(rng), v = u(rng);
    if (s < v) std::swap(s, v);
    const double alpha = 0.01 + 0.98 * u(rng);
    CHECK(salient_mask(make_planes(1, 1, {s}, {v}), alpha).mask[0] == 1);
  }
}

TEST_CASE("mask difference examples") {
  const auto a = mask_of(4, 1, {1, 1, 0, 0});
  const auto b = mask_of(4, 1, {1, 0, 0, 1});
  CHECK(mask_difference(a, a) == 0.0);
  CHECK(mask_difference(a, mask_of(4, 1, {0, 0, 1, 1})) == 1.0);
  CHECK(mask_difference(a, b) == 0.5);
  // Same layout at a different resolution compares equal.
  CHECK(mask_difference(mask_of(2, 1, {1, 0}), mask_of(4, 1, {1, 1, 0, 0})) == 0.0);
}

TEST_CASE("mask difference rejects empty masks") {
  CHECK_THROWS_AS(mask_difference(SaliencyMask{}, mask_of(1, 1, {1})), DimensionError);
}

TEST_CASE("mask difference is symmetric, bounded and zero only for identical masks") {
  std::mt19937_64 rng(9);
  std::bernoulli_distribution coin(0.5);
  std::uniform_int_distribution<std::size_t> side(1, 40);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t w = side(rng), h = side(rng);
    std::vector<std::uint8_t> x(w * h), y(w * h);
    for (auto& p : x) p = coin(rng);
    for (auto& p : y) p = coin(rng);
    const auto a = mask_of(w, h, x), b = mask_of(w, h, y);
    const double ab = mask_difference(a, b);
    CHECK(ab == mask_difference(b, a));
    CHECK(ab >= 0.0);
    CHECK(ab <= 1.0);
    CHECK((ab == 0.0) == (resample(a, 256, 256).mask == resample(b, 256, 256).mask));
  }
}

TEST_CASE("nearest-neighbour resample replicates blocks") {
  const auto m = resample(mask_of(2, 2, {1, 0, 0, 1}), 4, 4);
  const std::vector<std::uint8_t> expected{1, 1, 0, 0, 1, 1, 0, 0, 0, 0, 1, 1, 0, 0, 1, 1};
  CHECK(m.mask == expected);
}

TEST_CASE("gray round trip") {
  const auto m = mask_of(3, 1, {1, 0, 1});
  const auto g = to_gray(m);
  CHECK(g.pixels == std::vector<std::uint8_t>{255, 0, 255});
  CHECK(from_gray(g).mask == m.mask);
}
