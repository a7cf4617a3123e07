#pragma once

// The `substrate` command-line tool, as a library entry point so tests can
// drive it in-process.
//
// Exit codes:
//   0  success
//   1  usage error, unreadable/corrupt log, lock held by another writer
//   2  validation failure (bad draft, inactive target, stale dependency)
//   3  authority violation or authority-mode conflict
//   4  unknown artifact
//   5  resolve found a conflict (contenders are still printed)
//   6  unknown role
//   7  malformed benchmark instance or snapshot, bad bench parameters

#include <iosfwd>
#include <string>
#include <vector>

#include "substrate/error.hpp"

namespace substrate::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitAuthority = 3;
inline constexpr int kExitUnknownArtifact = 4;
inline constexpr int kExitConflict = 5;
inline constexpr int kExitUnknownRole = 6;
inline constexpr int kExitBenchInput = 7;

int exit_code_for(ErrorCode code, bool bench_command);

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace substrate::cli
