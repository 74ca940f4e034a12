#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <gtest/gtest.h>

namespace {

struct CliResult {
  int code = -1;
  std::string out;
};

CliResult run(const std::string& args) {
  const std::string cmd = std::string(CSLS_CLI) + " " + args + " 2>/dev/null";
  CliResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

const std::string kExample = std::string(CSLS_SOURCE_DIR) + "/configs/example1.cfg";

TEST(Cli, Validate) {
  const CliResult r = run("validate --config " + kExample);
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "ok: n=2 nodes=4 edges=9 labels=4\n");
}

TEST(Cli, ConfigErrorsExitWithOne) {
  EXPECT_EQ(run("validate --config /nonexistent.cfg").code, 1);
  const auto bad = std::filesystem::temp_directory_path() / "csls_cli_bad.cfg";
  std::ofstream(bad) << "dimension 1\nmatrix 1 0.5\nedge a b 1\n";
  EXPECT_EQ(run("validate --config " + bad.string()).code, 1);
  EXPECT_EQ(run("bounds --samples 100 --level 1.5").code, 1);
  EXPECT_EQ(run("sweep --n-list 5,3 --out /tmp/csls_cli_unused").code, 1);
  std::filesystem::remove(bad);
}

TEST(Cli, SampleIsReproducible) {
  const CliResult a = run("sample --samples 25 --seed 3");
  const CliResult b = run("sample --samples 25 --seed 3");
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out.substr(0, a.out.find('\n')), "idx,u,v,x_1,x_2,y_1,y_2");
  EXPECT_NE(a.out, run("sample --samples 25 --seed 4").out);
}

TEST(Cli, SolveFromExportedSamples) {
  const auto csv = std::filesystem::temp_directory_path() / "csls_cli_samples.csv";
  ASSERT_EQ(run("sample --samples 300 --seed 2 --out " + csv.string()).code, 0);
  const CliResult from_file = run("solve --input " + csv.string());
  const CliResult direct = run("solve --samples 300 --seed 2");
  EXPECT_EQ(from_file.code, 0);
  EXPECT_EQ(from_file.out, direct.out);
  EXPECT_NE(direct.out.find("certified true"), std::string::npos);
  EXPECT_NE(direct.out.find("constraint_violations 0"), std::string::npos);
  std::filesystem::remove(csv);
}

TEST(Cli, BoundsRow) {
  const CliResult r = run("bounds --samples 2000 --level 0.95 --config " + kExample);
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("N,level,beta,", 0), 0u);
  EXPECT_NE(r.out.find("\n2000,0.95,0.975,0.975,"), std::string::npos);
  const CliResult c = run("bounds --samples 2000 --level 0.95 --corollary-form");
  EXPECT_EQ(c.code, 0);
  EXPECT_NE(c.out, r.out);
}

TEST(Cli, WhiteboxAndCycles) {
  const CliResult w = run("whitebox --grid 360");
  EXPECT_EQ(w.code, 0);
  EXPECT_NE(w.out.find("gamma_certified="), std::string::npos);
  const CliResult c = run("cycles --max-length 8");
  EXPECT_EQ(c.code, 0);
  EXPECT_NE(c.out.find("lower_bound=0.48740859896"), std::string::npos);
}

TEST(Cli, SweepWritesOutputs) {
  const auto dir = std::filesystem::temp_directory_path() / "csls_cli_sweep";
  std::filesystem::remove_all(dir);
  const CliResult r = run("sweep --n-list 20,500 --levels 0.95 --out " + dir.string());
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("level 0.95: first certified N = "), std::string::npos);
  for (const char* f : {"sweep.csv", "summary.csv", "plot_bounds.gp", "bounds.svg"}) {
    EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
  }
  std::filesystem::remove_all(dir);
}

}  // namespace
