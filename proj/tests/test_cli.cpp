#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run dmg(const std::string& args) {
  const std::string cmd = std::string(DMG_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf{};
  while (auto n = fread(buf.data(), 1, buf.size(), p)) r.out.append(buf.data(), n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string read(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("dmg_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  std::string gen(const std::string& family, int param) {
    const auto f = path(family + std::to_string(param) + ".txt");
    EXPECT_EQ(dmg("gen --family " + family + " --param " + std::to_string(param) + " --out " + f).code, 0);
    return f;
  }
  fs::path dir_;
};

}  // namespace

TEST_F(Cli, GenStarToStdout) {
  const auto r = dmg("gen --family star --param 5");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.substr(0, 4), "6 5\n");
}

TEST_F(Cli, GenGPrimeWritesSidecar) {
  const auto f = gen("gprime", 4);
  EXPECT_EQ(read(f).substr(0, 6), "26 28\n");
  const auto side = path("gprime4.landmarks.json");
  ASSERT_TRUE(fs::exists(side));
  const auto j = nlohmann::json::parse(read(side));
  EXPECT_EQ(j.at("paths").size(), 4u);
}

TEST_F(Cli, GenRejectsOddG) {
  EXPECT_EQ(dmg("gen --family g --param 3").code, 2);
  EXPECT_EQ(dmg("gen --family moebius --param 3").code, 2);
}

TEST_F(Cli, Solve) {
  auto r = dmg("solve --graph " + gen("star", 3) + " --robbers 2");
  ASSERT_EQ(r.code, 0);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j.at("value"), 1);
  for (const char* k : {"value", "optimal_cop_start", "explored_states", "class_count", "peak_memo_entries"})
    EXPECT_TRUE(j.contains(k)) << k;
  r = dmg("solve --graph " + gen("path", 2) + " --robbers 5");
  EXPECT_EQ(nlohmann::json::parse(r.out).at("value"), 0);
  r = dmg("solve --graph " + gen("gprime", 2) + " --robbers 2");
  EXPECT_EQ(nlohmann::json::parse(r.out).at("value"), 12);
}

TEST_F(Cli, SolveBudgetAndBadInput) {
  const auto r = dmg("solve --graph " + gen("gprime", 2) + " --robbers 2 --limit-states 500");
  EXPECT_EQ(r.code, 3);
  EXPECT_TRUE(nlohmann::json::parse(r.out).at("value").is_null());
  std::ofstream(path("bad.txt")) << "3 2\n0 1\n";
  EXPECT_EQ(dmg("solve --graph " + path("bad.txt") + " --robbers 2").code, 2);
  EXPECT_EQ(dmg("solve --graph " + path("missing.txt") + " --robbers 2").code, 2);
  EXPECT_EQ(dmg("solve --robbers 2").code, 2);
}

TEST_F(Cli, PlayGuardOnStar) {
  const auto r = dmg("play --graph " + gen("star", 5) + " --robbers 3 --cop guard:0 --robber-team optimal");
  ASSERT_EQ(r.code, 0);
  unsigned damaged = 0, saved = 0;
  ASSERT_EQ(std::sscanf(r.out.c_str(), "damaged=%u saved=%u", &damaged, &saved), 2);
  EXPECT_GE(saved, 3u);
}

TEST_F(Cli, PlayScriptIsDeterministic) {
  const auto g = gen("gprime", 4);
  const auto cmd = "play --graph " + g + " --robbers 3 --cop guard:0 --robber-team script:gprime --seed 5";
  const auto a = dmg(cmd + " --transcript " + path("a.json"));
  const auto b = dmg(cmd + " --transcript " + path("b.json"));
  ASSERT_EQ(a.code, 0);
  unsigned damaged = 0;
  ASSERT_EQ(std::sscanf(a.out.c_str(), "damaged=%u", &damaged), 1);
  EXPECT_GE(damaged, 24u);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(read(path("a.json")), read(path("b.json")));
  const auto t = nlohmann::json::parse(read(path("a.json")));
  EXPECT_EQ(t.at("damage"), damaged);
}

TEST_F(Cli, PlayRejectsBadSpecs) {
  const auto g = gen("gprime", 4);
  EXPECT_EQ(dmg("play --graph " + g + " --robbers 3 --cop guard:99 --robber-team stationary").code, 2);
  EXPECT_EQ(dmg("play --graph " + g + " --robbers 3 --cop greedy --robber-team script:g").code, 2);
  // Without the sidecar the graph has no landmarks.
  fs::remove(path("gprime4.landmarks.json"));
  EXPECT_EQ(dmg("play --graph " + g + " --robbers 3 --cop greedy --robber-team script:gprime").code, 2);
}

TEST_F(Cli, BestResponse) {
  auto r = dmg("best-response --graph " + gen("star", 3) + " --robbers 2 --cop guard:0 --transcript " + path("w.json"));
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(nlohmann::json::parse(r.out).at("value"), 1);
  EXPECT_TRUE(fs::exists(path("w.json")));
  r = dmg("best-response --graph " + gen("path", 4) + " --robbers 2 --robber-team stationary --horizon 10");
  ASSERT_EQ(r.code, 0);
  EXPECT_FALSE(nlohmann::json::parse(r.out).at("horizon_capped").get<bool>());
}

TEST_F(Cli, Verify) {
  auto r = dmg("verify --claim star-lemma-s3");
  ASSERT_EQ(r.code, 0);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j.at(0).at("status"), "PASS");
  EXPECT_LE(j.at(0).at("measured").at("damage").get<int>(), 3);
  r = dmg("verify --claim c14-exact");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(nlohmann::json::parse(r.out).at(0).at("measured").at("value"), 12);
  EXPECT_EQ(dmg("verify --claim unknown").code, 2);
}

TEST_F(Cli, VerifyIsReproducible) {
  auto strip = [](const std::string& out) {
    auto j = nlohmann::json::parse(out);
    for (auto& c : j) c.erase("seconds");
    return j;
  };
  for (const char* id : {"structure", "determinism-replay", "cycle-attack", "gprime-script-s3"}) {
    const auto a = dmg(std::string("verify --claim ") + id);
    const auto b = dmg(std::string("verify --claim ") + id);
    EXPECT_EQ(a.code, b.code);
    EXPECT_EQ(strip(a.out), strip(b.out)) << id;
  }
}
