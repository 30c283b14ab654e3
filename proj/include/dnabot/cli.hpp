#pragma once

#include <string>
#include <vector>

namespace dnabot {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitInput = 2;
inline constexpr int kExitConfig = 3;
inline constexpr int kExitPipeline = 4;

/// Entry point of the `dnabot` tool. args[0] is the program name.
int run_cli(const std::vector<std::string>& args);

}  // namespace dnabot
