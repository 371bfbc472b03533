#pragma once

#include <string>

#include "shearwave/config.hpp"

namespace shearwave {

// Exit codes: 0 success, 2 config error, 3 numerical failure,
// 4 spectral precondition failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitSpectral = 4;

int cmd_spectrum(const RunConfig& cfg, const std::string& out_dir, int threads);
int cmd_thresholds(const RunConfig& cfg, const std::string& out_dir);
int cmd_evolve(const RunConfig& cfg, const std::string& out_dir);
int cmd_verify(const RunConfig& cfg, const std::string& out_dir,
               const std::string& suite_filter);

int exit_code_for(const Error& e);

}  // namespace shearwave
