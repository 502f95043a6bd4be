#pragma once

#include "ryflow/config.hpp"
#include "ryflow/report.hpp"

#include <string>
#include <utility>
#include <vector>

namespace ryflow {

/// Outcome of one command: the exit status, the JSON report, and named
/// artifact payloads. The report itself is always the first artifact, under
/// the name "report.json"; callers write the payloads below output_dir.
struct RunResult {
  int exit_code = 0;
  Json report;
  std::vector<std::pair<std::string, std::string>> artifacts;
};

/// Dispatches a validated config to its command. Reports are deterministic:
/// the same config yields byte-identical artifacts. A refused PDE step
/// (stability guard) and a blown-up run are reported, not thrown.
RunResult execute(const RunConfig& config);

}  // namespace ryflow
