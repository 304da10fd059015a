#pragma once

#include <iosfwd>

namespace ctrlpower {

/// Exit statuses of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitData = 2 };

/// Entry point of the `ctrlpower` tool; subcommands spi, evolve, fit, synth
/// and pipeline. Normal output goes to `out`, usage text and diagnostics to
/// `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace ctrlpower
