#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "substrate/error.hpp"
#include "substrate/log_file.hpp"
#include "substrate/store.hpp"
#include "support/oracles.hpp"

namespace substrate {
namespace {

namespace fs = std::filesystem;

class LogFile : public ::testing::Test {
 protected:
  void SetUp() override {
    dir = fs::temp_directory_path() /
          ("substrate_log_test_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
           ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir);
    fs::create_directories(dir);
    path = dir / "store.log";
  }
  void TearDown() override { fs::remove_all(dir); }

  std::string slurp() const {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  fs::path dir;
  fs::path path;
};

TEST_F(LogFile, MissingFileIsEmptyLog) { EXPECT_TRUE(read_log(path).empty()); }

TEST_F(LogFile, WriteThenReadRoundTrips) {
  auto log = testing::random_valid_log(5, {.artifacts = 50});
  {
    LogWriter writer(path, false);
    for (const auto& e : log) writer.append(e);
  }
  EXPECT_EQ(read_log(path), log);
  std::string text = slurp();
  EXPECT_EQ(text.substr(0, text.find('\n')), log_header_line());
}

TEST_F(LogFile, ReopeningAppendsWithoutSecondHeader) {
  auto log = testing::random_valid_log(6, {.artifacts = 20});
  std::size_t half = log.size() / 2;
  {
    LogWriter writer(path, true);
    for (std::size_t i = 0; i < half; ++i) writer.append(log[i]);
  }
  {
    LogWriter writer(path, true);
    for (std::size_t i = half; i < log.size(); ++i) writer.append(log[i]);
  }
  EXPECT_EQ(read_log(path), log);
}

TEST_F(LogFile, StoreSinkPersistsCommits) {
  {
    Store store;
    LogWriter writer(path, false);
    store.set_sink([&](const SubstrateEvent& e) { writer.append(e); });
    store.declare_role({"r", AuthorityMode::kSingleActive});
  }
  Store reopened(read_log(path));
  EXPECT_TRUE(reopened.state().role_mode("r"));
}

TEST_F(LogFile, CorruptionIsReported) {
  auto expect_corrupt = [](const std::string& text) {
    std::istringstream in(text);
    try {
      parse_log(in);
      ADD_FAILURE() << text;
    } catch (const SubstrateError& e) {
      EXPECT_EQ(e.code(), ErrorCode::kCorruptLog) << text;
    }
  };
  const std::string header = log_header_line() + "\n";
  const std::string declare1 =
      R"({"body":{"authority_mode":"single_active","name":"r"},"kind":"declare_role","seq":1})";
  const std::string declare3 =
      R"({"body":{"authority_mode":"single_active","name":"q"},"kind":"declare_role","seq":3})";
  expect_corrupt("not json\n");
  expect_corrupt(R"({"format":"other","version":1})" "\n");
  expect_corrupt(R"({"format":"artifact-substrate-log","version":9})" "\n");
  expect_corrupt(header + "{broken\n");
  expect_corrupt(header + declare1 + "\n" + declare3 + "\n");
  expect_corrupt(header + R"({"body":{},"kind":"teleport","seq":1})" "\n");
}

TEST_F(LogFile, WriterLockIsExclusive) {
  WriterLock first(path);
  try {
    WriterLock second(path);
    FAIL();
  } catch (const SubstrateError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kLockHeld);
  }
}

TEST_F(LogFile, WriterLockIsReleasedOnDestruction) {
  { WriterLock first(path); }
  EXPECT_NO_THROW(WriterLock again(path));
}

}  // namespace
}  // namespace substrate
