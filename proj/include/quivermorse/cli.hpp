#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qm::cli {

constexpr int kExitOk = 0;
constexpr int kExitPrecondition = 2;
constexpr int kExitStall = 3;
constexpr int kExitUsage = 64;

/// Runs one subcommand; args excludes the program name. JSON goes to out, diagnostics to err.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace qm::cli
