#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace vcpc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitIncomplete = 3;
inline constexpr int kExitNoResult = 4;

/// Runs one command line (without the program name). Input defaults to `in`
/// when a command takes a corpus and no path (or "-") is given.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace vcpc::cli
