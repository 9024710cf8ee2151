#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "sdet/boundary.hpp"
#include "sdet/io.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(SDET_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("sdet_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

}  // namespace

TEST_F(Cli, BoundaryPrintsValue) {
  const auto r = run("boundary --family idj --r 0.25");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "0.75\n");
}

TEST_F(Cli, BadRangeIsDomainError) { EXPECT_EQ(run("boundary --family idj --r -1").code, 3); }

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(run("boundary --no-such-flag").code, 2);
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("simulate --r-grid 0.3 --beta-grid 0.6 --n-list 1000").code, 2);
}

TEST_F(Cli, ShortSampleIsDomainError) {
  const auto path = dir_ / "sample.csv";
  std::ofstream(path) << "0.1\n0.2\n0.3\n0.4\n0.5\n-0.1\n-0.2\n-0.3\n-0.4\n-0.5\n1\n-1\n2\n-2\n0\n";
  EXPECT_EQ(run("hc --input " + path.string() + " --null gaussian --delta 0.1").code, 3);
  EXPECT_EQ(run("hc --input " + (dir_ / "missing.csv").string()).code, 4);
}

TEST_F(Cli, JsonRoundTripReproducesBits) {
  const std::vector<std::pair<std::string, sdet::Family>> cases{
      {"--family idj --r 0.37", sdet::Family::idj},
      {"--family hetero --r 0.2 --sigma2 1.7", sdet::Family::hetero},
      {"--family ggconv --tau 1.5 --r 3", sdet::Family::gen_gaussian_conv},
      {"--family gglocation --tau 3 --r 0.41", sdet::Family::gen_gaussian_location},
  };
  for (const auto& [flags, family] : cases) {
    const auto r = run("boundary " + flags + " --format json");
    ASSERT_EQ(r.code, 0) << flags;
    const auto j = nlohmann::json::parse(r.out);
    const auto params = sdet::io::params_from_json(j.at("params"));
    const double again = sdet::boundary_closed_form(family, params);
    EXPECT_EQ(sdet::io::fmt12(again), sdet::io::fmt12(j.at("beta").get<double>())) << flags;
    EXPECT_EQ(sdet::io::number12(again), j.at("beta")) << flags;
  }
}

TEST_F(Cli, SimulateIsByteReproducible) {
  const std::string args = "simulate --family idj --r-grid 0.2,0.6 --beta-grid 0.55:0.75:0.1 --n-list 1000 "
                           "--replicates 30 --seed 99 --output ";
  const auto a = dir_ / "a.csv";
  const auto b = dir_ / "b.csv";
  ASSERT_EQ(run(args + a.string()).code, 0);
  ASSERT_EQ(run(args + b.string() + " --workers 3").code, 0);
  EXPECT_EQ(slurp(a), slurp(b));
  EXPECT_TRUE(fs::exists(dir_ / "a.csv.manifest.json"));
  const auto m = nlohmann::json::parse(slurp(dir_ / "a.csv.manifest.json"));
  EXPECT_EQ(m.at("seed"), 99);
}

TEST_F(Cli, ConfigFileWithInlineOverride) {
  const auto cfg = dir_ / "cfg.json";
  std::ofstream(cfg) << R"({"family": "idj", "beta_grid": [0.6], "r_grid": [0.5], "n_list": [100],
                           "replicates": 5, "tests": ["lr"], "seed": 1})";
  const auto r = run("simulate --config " + cfg.string() + " --n-list 200");
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("\n0.6,0.5,200,lr,"), std::string::npos);
}
