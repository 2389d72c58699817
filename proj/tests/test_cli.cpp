#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <string>

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
  std::string cmd = std::string(ACS_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void dump(const fs::path& p, const std::string& data) {
  std::ofstream(p, std::ios::binary) << data;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir = fs::temp_directory_path() / ("acs_cli_" + std::to_string(::getpid()) + "_" +
                                       ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir);
    std::mt19937 rng(1);
    std::string text;
    for (int i = 0; i < 20000; ++i) text += char('a' + rng() % 7);
    dump(dir / "in", text);
  }
  void TearDown() override { fs::remove_all(dir); }
  std::string p(const char* name) const { return (dir / name).string(); }
  fs::path dir;
};

}  // namespace

TEST_F(Cli, RoundTripEveryMode) {
  for (const char* mode : {"static", "adaptive", "tree", "binary", "periodic", "optimal"})
    for (const char* D : {"2", "16", "256"}) {
      std::string P = std::string(D) == "2" ? "24" : "4";
      ASSERT_EQ(run("compress " + p("in") + " " + p("c") + " -m " + mode + " -D " + D + " -P " + P), 0);
      ASSERT_EQ(run("decompress " + p("c") + " " + p("out")), 0);
      EXPECT_EQ(slurp(p("out")), slurp(p("in"))) << mode << " D=" << D;
    }
}

TEST_F(Cli, SearchOptionsAndInfo) {
  ASSERT_EQ(run("compress " + p("in") + " " + p("c") + " -m static"), 0);
  for (const char* s : {"sequential", "sorted", "bisection", "optimal", "quantile", "lookup"}) {
    ASSERT_EQ(run("decompress " + p("c") + " " + p("out") + " --search " + s), 0);
    EXPECT_EQ(slurp(p("out")), slurp(p("in")));
  }
  ASSERT_EQ(run("decompress " + p("c") + " " + p("out") + " --lookup 64"), 0);
  EXPECT_EQ(slurp(p("out")), slurp(p("in")));
  EXPECT_EQ(run("info " + p("c")), 0);
}

TEST_F(Cli, StdinStdout) {
  std::string cmd = std::string(ACS_CLI_PATH) + " compress - < " + p("in") + " | " + ACS_CLI_PATH +
                    " decompress - > " + p("out");
  ASSERT_EQ(std::system(cmd.c_str()), 0);
  EXPECT_EQ(slurp(p("out")), slurp(p("in")));
}

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(run(""), 1);
  EXPECT_EQ(run("frobnicate"), 1);
  EXPECT_EQ(run("compress " + p("in") + " " + p("c") + " -D 3"), 1);
  EXPECT_EQ(run("compress " + p("in") + " " + p("c") + " -D 256 -P 5"), 1);
  EXPECT_EQ(run("compress " + p("missing") + " " + p("c")), 3);
  EXPECT_EQ(run("decompress " + p("missing") + " " + p("out")), 3);
  EXPECT_EQ(run("compress " + p("in") + " " + (dir / "no" / "such" / "dir").string()), 3);

  dump(p("junk"), "not a container at all");
  EXPECT_EQ(run("decompress " + p("junk") + " " + p("out")), 2);
  EXPECT_EQ(run("info " + p("junk")), 2);

  ASSERT_EQ(run("compress " + p("in") + " " + p("c")), 0);
  std::string c = slurp(p("c"));
  dump(p("short"), c.substr(0, c.size() - 40));
  EXPECT_EQ(run("decompress " + p("short") + " " + p("out")), 2);
  dump(p("long"), c + "xyz");
  EXPECT_EQ(run("decompress " + p("long") + " " + p("out")), 2);
}

TEST_F(Cli, EmptyFile) {
  dump(p("empty"), "");
  ASSERT_EQ(run("compress " + p("empty") + " " + p("c")), 0);
  EXPECT_EQ(fs::file_size(p("c")), 19u);
  ASSERT_EQ(run("decompress " + p("c") + " " + p("out")), 0);
  EXPECT_EQ(fs::file_size(p("out")), 0u);
}
