#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace eegbench {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIo = 3;

/// Output directory used when a command gets no explicit path: $EEGBENCH_OUT_DIR or ".".
std::string default_output_dir();

/// Parses argv and dispatches to a subcommand. Never throws; returns the exit status.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace eegbench
