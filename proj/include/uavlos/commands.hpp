#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "uavlos/config.hpp"

namespace uavlos {

/// gen-scene, plos-analytic, plos-mc, trace, fit-markov, sweep, validate.
const std::vector<std::string>& command_verbs();

struct CommandOptions {
  std::string trace_input; // fit-markov; defaults to <out_dir>/trace.csv
};

/// Runs one verb, writing its CSV and run_metadata.txt into cfg.out_dir.
/// Returns 0 on success; on failure prints a one-line diagnostic to `err` and
/// returns 1.
int run_command(std::string_view verb, const RunConfig& cfg,
                const CommandOptions& options, std::ostream& log,
                std::ostream& err);

} // namespace uavlos
