#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "qdpc/io/config.hpp"

namespace qdpc::io {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFatal = 1;
inline constexpr int kExitPartial = 2;

struct RunOutcome {
  int exit_code = kExitOk;
  std::vector<std::filesystem::path> files;
};

/// Runs cfg.experiment and writes `<output>config.txt`, the experiment CSVs
/// and `<output>summary.json`. Human-readable progress goes to `log`.
/// Fatal errors are reported on `log` and yield kExitFatal.
RunOutcome run_experiment(const RunConfig& cfg, std::ostream& log);

}  // namespace qdpc::io
