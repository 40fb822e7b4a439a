#pragma once

#include <string>
#include <vector>

#include "afrrcast/cli/run_config.hpp"

namespace afrrcast::cli {

/// Full command-line entry point: parses `tool <command> --config <path>
/// [--override k=v]... [--workers N]`, runs the command and maps failures to
/// exit codes 0 (ok), 1 (usage), 2 (data), 3 (runtime), printing a one-line
/// machine-parsable error to stderr.
int run(const std::vector<std::string>& args);

// Individual commands, callable in-process (tests drive these directly).
void cmd_fetch(const RunConfig& config);
void cmd_synth(const RunConfig& config);
void cmd_features(const RunConfig& config);
void cmd_split(const RunConfig& config);
void cmd_tune(const RunConfig& config);
void cmd_train(const RunConfig& config);
void cmd_predict(const RunConfig& config);
void cmd_evaluate(const RunConfig& config);
void cmd_explain(const RunConfig& config);
void cmd_report(const RunConfig& config);

/// Runs one named command ("synth", "features", ...).
void run_command(const std::string& command, const RunConfig& config);

}  // namespace afrrcast::cli
