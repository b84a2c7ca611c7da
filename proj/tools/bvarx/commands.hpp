#pragma once

#include <filesystem>
#include <string>

#include "config.hpp"

namespace bvarx::cli {

/// Panel after transforms, as described by the data section.
Panel load_data(const RunConfig& cfg);

void cmd_tune(const RunConfig& cfg);
void cmd_fit(const RunConfig& cfg);
void cmd_forecast(const RunConfig& cfg);
void cmd_evaluate(const RunConfig& cfg);
void cmd_irf(const RunConfig& cfg);
void cmd_coherence(const RunConfig& cfg);

/// Full command-line entry point; returns the process exit code. Errors are
/// written to `err` as a single JSON object {code, module, message}.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace bvarx::cli
