#include <string>
#include <vector>

#include "qvsum/cli.hpp"

int main(int argc, char** argv) {
  return qvsum::cli::run(std::vector<std::string>(argv + 1, argv + argc));
}
