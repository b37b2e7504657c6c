// Writes the synthetic fixtures used by the tests to disk for manual runs.
// tests/fixtures/three_shot in the repository was produced by this tool.
#include <cstdio>
#include <filesystem>
#include <string>

#include "fixtures.hpp"

int main(int argc, char** argv) {
  const std::string kind = argc == 3 ? argv[2] : "three_shot";
  if (argc < 2 || argc > 3 || (kind != "three_shot" && kind != "planted" && kind != "throughput")) {
    std::fprintf(stderr, "usage: gen_fixtures OUTDIR [three_shot|planted|throughput]\n");
    return 2;
  }
  const std::filesystem::path dir = argv[1];
  std::filesystem::create_directories(dir);
  if (kind == "three_shot") {
    qvsum::testing::write_three_shot_fixture(dir);
  } else if (kind == "planted") {
    qvsum::testing::write_planted_fixture(dir);
  } else {
    qvsum::testing::write_throughput_fixture(dir);
  }
  return 0;
}
