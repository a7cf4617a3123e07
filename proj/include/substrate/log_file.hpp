#pragma once

// Line-delimited log file: a header line
//   {"format":"artifact-substrate-log","version":1}
// followed by one canonical SubstrateEvent document per line.

#include <filesystem>
#include <istream>
#include <string_view>
#include <vector>

#include "substrate/state.hpp"

namespace substrate {

inline constexpr std::string_view kLogFormatName = "artifact-substrate-log";
inline constexpr int kLogFormatVersion = 1;

std::string log_header_line();

// Parses a whole log stream. Throws SubstrateError(kCorruptLog).
std::vector<SubstrateEvent> parse_log(std::istream& in);
// A missing file reads as an empty log.
std::vector<SubstrateEvent> read_log(const std::filesystem::path& path);

// Appends events to a log file, writing the header when the file is new.
class LogWriter {
 public:
  LogWriter(const std::filesystem::path& path, bool fsync_on_commit);
  ~LogWriter();
  LogWriter(const LogWriter&) = delete;
  LogWriter& operator=(const LogWriter&) = delete;

  void append(const SubstrateEvent& event);

 private:
  void write_line(std::string line);

  int fd_ = -1;
  bool fsync_;
};

// Exclusive advisory lock on "<log>.lock" held for the object's lifetime.
// Throws SubstrateError(kLockHeld) if another process holds it.
class WriterLock {
 public:
  explicit WriterLock(const std::filesystem::path& log_path);
  ~WriterLock();
  WriterLock(const WriterLock&) = delete;
  WriterLock& operator=(const WriterLock&) = delete;

 private:
  int fd_ = -1;
};

}  // namespace substrate
