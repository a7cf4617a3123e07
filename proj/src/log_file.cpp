#include "substrate/log_file.hpp"

#include <cerrno>
#include <cstring>
#include <fstream>

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include "substrate/error.hpp"

namespace substrate {

namespace {

[[noreturn]] void io_error(const std::string& what) {
  throw SubstrateError(ErrorCode::kIo, what + ": " + std::strerror(errno));
}

[[noreturn]] void corrupt(std::size_t line, const std::string& what) {
  throw SubstrateError(ErrorCode::kCorruptLog, "log line " + std::to_string(line) + ": " + what);
}

}  // namespace

std::string log_header_line() {
  return canonical_json(Document{{"format", kLogFormatName}, {"version", kLogFormatVersion}});
}

std::vector<SubstrateEvent> parse_log(std::istream& in) {
  std::vector<SubstrateEvent> events;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    Document doc = Document::parse(line, nullptr, false);
    if (doc.is_discarded()) corrupt(line_no, "not valid JSON");
    if (!header_seen) {
      if (!doc.is_object() || doc.value("format", "") != kLogFormatName) {
        corrupt(line_no, "missing log header");
      }
      if (doc.value("version", 0) != kLogFormatVersion) corrupt(line_no, "unsupported version");
      header_seen = true;
      continue;
    }
    try {
      events.push_back(event_from_document(doc));
    } catch (const SubstrateError& e) {
      corrupt(line_no, e.what());
    }
    const auto expected = static_cast<std::uint64_t>(events.size());
    if (events.back().seq != expected) {
      throw SubstrateError(ErrorCode::kCorruptLog,
                           "log seq " + std::to_string(events.back().seq) + " out of order (expected " +
                               std::to_string(expected) + ")");
    }
  }
  return events;
}

std::vector<SubstrateEvent> read_log(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::exists(path, ec)) return {};
  std::ifstream in(path, std::ios::binary);
  if (!in) io_error("cannot open " + path.string());
  return parse_log(in);
}

LogWriter::LogWriter(const std::filesystem::path& path, bool fsync_on_commit)
    : fsync_(fsync_on_commit) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  fd_ = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd_ < 0) io_error("cannot open " + path.string());
  if (::lseek(fd_, 0, SEEK_END) == 0) write_line(log_header_line());
}

LogWriter::~LogWriter() {
  if (fd_ >= 0) ::close(fd_);
}

void LogWriter::append(const SubstrateEvent& event) {
  write_line(canonical_json(to_document(event)));
}

void LogWriter::write_line(std::string line) {
  line.push_back('\n');
  const char* data = line.data();
  std::size_t left = line.size();
  while (left > 0) {
    ssize_t n = ::write(fd_, data, left);
    if (n < 0) {
      if (errno == EINTR) continue;
      io_error("log write failed");
    }
    data += n;
    left -= static_cast<std::size_t>(n);
  }
  if (fsync_ && ::fsync(fd_) != 0) io_error("fsync failed");
}

WriterLock::WriterLock(const std::filesystem::path& log_path) {
  std::filesystem::path lock_path = log_path;
  lock_path += ".lock";
  if (lock_path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(lock_path.parent_path(), ec);
  }
  fd_ = ::open(lock_path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
  if (fd_ < 0) io_error("cannot open " + lock_path.string());
  if (::flock(fd_, LOCK_EX | LOCK_NB) != 0) {
    ::close(fd_);
    fd_ = -1;
    throw SubstrateError(ErrorCode::kLockHeld,
                         "another writer holds " + lock_path.string());
  }
}

WriterLock::~WriterLock() {
  if (fd_ >= 0) {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
}

}  // namespace substrate
