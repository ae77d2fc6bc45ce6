#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace atspp {

// Exit codes of the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitArgument = 1;
inline constexpr int kExitInvariant = 2;

// Runs one subcommand; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Header line of the gap-report CSV.
const char* gap_report_header();

}  // namespace atspp
