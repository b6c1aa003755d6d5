#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(GEONUM_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  std::string out;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  const int status = pclose(pipe);
  return {WEXITSTATUS(status), out};
}

}  // namespace

TEST(Cli, Count) {
  const auto r = run("count --basis \"1,0;0,1\" --region disk:r=2.5");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "16\n");
}

TEST(Cli, Minima) {
  const auto r = run("minima --basis \"1,0;0,1\" --body ball:p=2");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "1 1\n");
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run("minima --basis \"1,2;2,4\" --body ball:p=2").code, 2);
  EXPECT_EQ(run("minima --basis \"1,0;0,1\" --body hyperbola").code, 2);
  EXPECT_EQ(run("minima --basis \"1,0;0,1000\" --body ball:p=2 --budget 10").code, 3);
  EXPECT_EQ(run("count --basis \"1,0;0,1\" --region disk:r=100000").code, 3);
  EXPECT_EQ(run("frobnicate").code, 1);
  EXPECT_EQ(run("count --basis \"1,0;0,1\"").code, 1);
}

TEST(Cli, JsonEnvelope) {
  const auto r = run("minima --basis \"1,0;0,1\" --body box --json --seed 4");
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j.at("seed"), 4);
  EXPECT_EQ(j.at("command"), "minima");
  EXPECT_TRUE(j.contains("version"));
  EXPECT_EQ(j.at("config_hash").get<std::string>().size(), 16u);
  EXPECT_EQ(j.at("result").at("values"), nlohmann::json::parse("[1.0, 1.0]"));
}

TEST(Cli, SampleLines) {
  const auto r = run("sample --count 5 --json");
  std::istringstream in(r.out);
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    const auto j = nlohmann::json::parse(line);
    EXPECT_EQ(j.at("index"), n);
    EXPECT_EQ(j.at("basis").size(), 2u);
    ++n;
  }
  EXPECT_EQ(n, 5);
}

TEST(Cli, CsvHasHeader) {
  const auto r = run("theorem2 --samples 5 --budgets 5,10 --csv");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "budget,median,frac_below_1,frac_below_0.5,frac_below_0.2");
}

TEST(Cli, OutFile) {
  const auto path = std::filesystem::temp_directory_path() / "geonum_cli_test.json";
  const auto r = run("count --basis \"1,0;0,1\" --region disk:r=2.5 --json --out " + path.string());
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  const auto j = nlohmann::json::parse(in);
  EXPECT_EQ(j.at("result").at("count"), 16);
  std::filesystem::remove(path);
}

TEST(Cli, ProbeConfig) {
  const auto path = std::filesystem::temp_directory_path() / "geonum_probe.json";
  std::ofstream(path) << R"({"body": "ball:p=2", "basis": "1,0;0,1", "n_max": 16,
                            "body_schedule": {"kind": "scale", "c": 1}})";
  const auto r = run("probe --json --config " + path.string());
  EXPECT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j.at("result").at("all_converge").get<bool>());
  EXPECT_EQ(j.at("result").at("rows").size(), 32u);
  std::filesystem::remove(path);
}

TEST(Cli, ThreadsDoNotChangeOutput) {
  for (const std::string cmd : {"rogers --samples 1000 --json", "theorem2 --samples 20 --budgets 5,20 --json",
                                "witness --shells 3 --samples 5000 --lattices 100 --json"}) {
    const auto a = run(cmd + " --threads 1");
    const auto b = run(cmd + " --threads 3");
    EXPECT_EQ(a.code, 0) << cmd;
    EXPECT_EQ(a.out, b.out) << cmd;
  }
}
