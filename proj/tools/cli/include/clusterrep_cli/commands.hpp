#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace clusterrep::cli {

/// Exit codes: 0 success, 1 run failure, 2 usage or config error.
/// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Environment variable naming the default output directory for sweeps.
inline constexpr const char* kOutDirEnv = "CLUSTERREP_OUT_DIR";

}  // namespace clusterrep::cli
