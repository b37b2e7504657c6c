#pragma once

#include <string>
#include <vector>

namespace qvsum::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitNumeric = 3;

// Entry point for the qvsum tool; args exclude the program name.
int run(const std::vector<std::string>& args);

}  // namespace qvsum::cli
