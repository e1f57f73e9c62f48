#pragma once

// Subcommands of the amalgam tool. Each takes the arguments after the
// subcommand name and returns the process exit code:
//   0  success (including Inconclusive probe verdicts)
//   2  usage, configuration or exponent-domain error
//   3  unreadable or malformed input file

#include <iosfwd>
#include <string>
#include <vector>

namespace amalgam {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitInput = 3;

int cmd_classify(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int cmd_norm(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int cmd_probe(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int cmd_atlas(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
/// Writes a generated witness as a grid-function file plus manifest.
int cmd_export(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
/// Replays the command line stored in a manifest.
int cmd_rerun(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Dispatch on args[0]; args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace amalgam
