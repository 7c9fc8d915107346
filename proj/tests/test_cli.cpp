#include <gtest/gtest.h>

#include <unistd.h>

#include <cstdio>
#include <sys/wait.h>

#include "qe/io.hpp"

namespace fs = std::filesystem;
using qe::io::Json;

namespace {

struct Run {
  int code = -1;
  std::string output;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(QE_TOOL_PATH) + " " + args + " 2>&1";
  Run r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t got;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.output.append(buf, got);
  const int status = ::pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("qe-cli-" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  return p;
}

Json load(const fs::path& p) { return qe::io::load_json(p); }

void expect_same_outputs(const fs::path& a, const fs::path& b) {
  std::size_t compared = 0;
  for (const auto& e : fs::directory_iterator(a)) {
    const auto name = e.path().filename().string();
    if (name == "manifest.json") continue;
    ASSERT_TRUE(fs::exists(b / name)) << name;
    EXPECT_EQ(qe::io::read_file(e.path()), qe::io::read_file(b / name)) << name;
    ++compared;
  }
  EXPECT_GT(compared, 0u);
}

}  // namespace

TEST(Cli, HelpAndBadFlags) {
  EXPECT_EQ(run("--help").code, 0);
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("build --group cyclic:5 --bogus").code, 2);
  EXPECT_EQ(run("deloc --group cyclic:2").code, 2);  // --p required
}

TEST(Cli, BuildAbelianIsExact) {
  const auto dir = scratch("abelian");
  const auto r = run("build --group cyclic:12 --gens 1,11 --seed 7 --out " + dir.string());
  ASSERT_EQ(r.code, 0) << r.output;
  const auto rep = load(dir / "report.json");
  EXPECT_LE(rep["mean_deviation"].get<double>(), 1e-12);
  EXPECT_LE(rep["sup_estimate"].get<double>(), 1e-12);
  EXPECT_EQ(load(dir / "basis.json")["gens"], Json::array({1, 11}));
  const auto csv = qe::io::read_file(dir / "report.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 21);
  const auto m = load(dir / "manifest.json");
  EXPECT_EQ(m["seed"].get<std::uint64_t>(), 7u);
  EXPECT_EQ(m["command"], "build");
}

TEST(Cli, BuildProductBelowPrediction) {
  const auto dir = scratch("s3s3");
  const auto r = run("build --group product:symmetric:3,symmetric:3 --seed 1 --out " + dir.string());
  ASSERT_EQ(r.code, 0) << r.output;
  const auto rep = load(dir / "report.json");
  EXPECT_LT(rep["sup_estimate"].get<double>(), rep["predicted_bound"].get<double>());
  EXPECT_EQ(rep["order"].get<int>(), 36);
  EXPECT_LE(rep["gram_deviation"].get<double>(), 1e-9);
}

TEST(Cli, NonGeneratingSetFails) {
  const auto r = run("build --group cyclic:12 --gens 2,10 --seed 1 --out " + scratch("ng").string());
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.output.find("NotGenerating"), std::string::npos) << r.output;
}

TEST(Cli, SecondMomentPreset) {
  const auto dir = scratch("sm");
  const auto r = run("concentration --preset smA-d3 --seed 3 --lipschitz-pairs 2000 --out " + dir.string());
  ASSERT_EQ(r.code, 0) << r.output;
  const auto csv = qe::io::read_file(dir / "second_moment.csv");
  EXPECT_EQ(csv.find("false"), std::string::npos) << csv;
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
  EXPECT_EQ(qe::io::read_file(dir / "lipschitz.csv").find("false"), std::string::npos);
}

TEST(Cli, TailPreset) {
  const auto dir = scratch("tail");
  const auto r = run("concentration --preset tail-sum60 --beta 2,3 --seed 5 --lipschitz-pairs 200 --out " + dir.string());
  ASSERT_EQ(r.code, 0) << r.output;
  const auto j = load(dir / "concentration.json");
  const auto& rows = j["tail"]["rows"];
  ASSERT_EQ(rows.size(), 2u);
  for (const auto& row : rows) {
    EXPECT_LE(row["frequency"].get<double>(), row["bound"].get<double>() + 3.0 * row["stderr"].get<double>());
    EXPECT_TRUE(row["asserted"].get<bool>());
  }
  EXPECT_EQ(j["trials"].get<int>(), 10000);
  EXPECT_EQ(run("concentration --preset tail-sum60 --trials 0 --out " + dir.string()).code, 2);
  EXPECT_EQ(run("concentration --preset nosuch --out " + dir.string()).code, 2);
}

TEST(Cli, DelocInstances) {
  const auto dir = scratch("deloc");
  const auto r = run("deloc --group symmetric:3 --p 7 --seed 2 --out " + dir.string());
  ASSERT_EQ(r.code, 0) << r.output;
  const auto s = load(dir / "spectrum.json");
  EXPECT_TRUE(s["collisions"].empty());
  EXPECT_EQ(s["accounted"].get<int>(), 42);
  const auto d = load(dir / "deloc.json");
  EXPECT_GE(d["M"].get<double>(), 1.0 - 1e-12);
  EXPECT_EQ(d["witness_basis"], "representations");

  const auto bad = run("deloc --group symmetric:3 --p 4 --out " + dir.string());
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.output.find("NotPrime"), std::string::npos);

  const auto z2 = scratch("deloc-z2");
  ASSERT_EQ(run("deloc --base cyclic:2 --p 5 --seed 1 --out " + z2.string()).code, 0);
  for (const auto& e : load(z2 / "deloc.json")["entries"]) EXPECT_NEAR(e["ratio_bound"].get<double>(), 1.0, 1e-9);
  EXPECT_NEAR(load(z2 / "deloc.json")["qe_lower_witness"].get<double>(), 0.0, 1e-12);
}

TEST(Cli, UnwritableOutputIsIoError) {
  const auto r = run("build --group cyclic:5 --seed 1 --out /dev/null/sub");
  EXPECT_EQ(r.code, 3) << r.output;
}

TEST(Cli, ImportedGroupWithBundle) {
  const auto dir = scratch("export");
  ASSERT_EQ(run("export --group dihedral:5 --out " + dir.string()).code, 0);
  const auto out = scratch("imported");
  const auto r = run("build --group " + (dir / "group.json").string() + " --irreps " + (dir / "irreps.json").string() +
                     " --seed 4 --out " + out.string());
  ASSERT_EQ(r.code, 0) << r.output;
  const auto rep = load(out / "report.json");
  EXPECT_EQ(rep["order"].get<int>(), 10);
}

TEST(Cli, ReplayIsByteIdentical) {
  for (const std::string args : {"build --group symmetric:4 --seed 11 --restarts 10 --random-samples 100",
                                 "concentration --preset tail-d2 --seed 4 --trials 2000 --lipschitz-pairs 100",
                                 "deloc --group dihedral:4 --p 5 --seed 9"}) {
    const auto a = scratch("replay-a"), b = scratch("replay-b");
    ASSERT_EQ(run(args + " --out " + a.string()).code, 0) << args;
    const auto r = run("replay " + (a / "manifest.json").string() + " --out " + b.string());
    ASSERT_EQ(r.code, 0) << r.output;
    expect_same_outputs(a, b);
  }
}

TEST(Cli, MissingSeedIsRecorded) {
  const auto a = scratch("noseed-a"), b = scratch("noseed-b");
  ASSERT_EQ(run("build --group dihedral:3 --out " + a.string()).code, 0);
  const auto m = load(a / "manifest.json");
  ASSERT_TRUE(m["seed"].is_number_unsigned());
  EXPECT_EQ(m["config"]["seed"], m["seed"]);
  ASSERT_EQ(run("replay " + (a / "manifest.json").string() + " --out " + b.string()).code, 0);
  expect_same_outputs(a, b);
}
