#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace difftrail {

inline constexpr int exit_ok = 0;
inline constexpr int exit_usage = 1;
inline constexpr int exit_runtime = 2;

// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int cli_main(int argc, char** argv);

// Merges `key = value` lines from a config file into args as `--key value`
// pairs, skipping keys already given on the command line. `#` starts a comment.
std::vector<std::string> merge_config(const std::vector<std::string>& args, const std::string& config_text);

} // namespace difftrail
