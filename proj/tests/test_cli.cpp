#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "json.hpp"

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args, const std::string& env = {}) {
  const std::string cmd = env + (env.empty() ? "" : " ") + JCSPEC_CLI_PATH + std::string(" ") + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

}  // namespace

TEST(Cli, SpectrumExample) {
  const auto r = run("spectrum --variant h2 --omega 1 --omega0 1 --g 0 --m-max 3");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "index,eigenvalue\n0,2\n1,2\n2,4\n3,4\n");
}

TEST(Cli, GlobalFlagsBeforeSubcommand) {
  const auto r = run("--omega 1 --omega0 1 --g 0 spectrum --variant h2 --m-max 3");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "index,eigenvalue\n0,2\n1,2\n2,4\n3,4\n");
}

TEST(Cli, ArgumentErrors) {
  EXPECT_EQ(run("spectrum --variant h2 --omega 0 --omega0 1 --g 0 --m-max 3").code, 2);
  EXPECT_EQ(run("spectrum --variant h2 --omega 1 --omega0 1 --g -1 --m-max 3").code, 2);
  EXPECT_EQ(run("spectrum --variant h9 --omega0 1 --g 0 --m-max 3").code, 2);
  EXPECT_EQ(run("spectrum --omega0 1 --g 0").code, 2);
  EXPECT_EQ(run("--omega0 1 --g 0").code, 2);
  EXPECT_EQ(run("spectrum --omega0 1 --g 0 --m-max 3 --format xml").code, 2);
  EXPECT_EQ(run("spectrum --omega0 1 --g 0 --m-max 3 --args-from /nonexistent/file").code, 2);
}

TEST(Cli, ComputationalErrors) {
  EXPECT_EQ(run("spectrum --omega0 0.2 --g 0.5 --m-max 100 --max-n 256").code, 1);
  EXPECT_EQ(run("spectrum --omega0 0.2 --g 0.5 --m-max 100", "JC_SPECTRA_MAX_N=256").code, 1);
  EXPECT_EQ(run("spectrum --omega0 0.2 --g 0.5 --m-max 10", "JC_SPECTRA_MAX_N=256").code, 0);
  EXPECT_EQ(run("spectrum --omega0 0.2 --g 0.5 --m-max 10", "JC_SPECTRA_MAX_N=abc").code, 2);
}

TEST(Cli, PerturbExampleWithinBound) {
  const auto r = run("perturb --variant h2 --omega 1 --omega0 0.2 --g 0.5 --m 60 --order 4 --format json");
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["meta"]["command"], "perturb");
  ASSERT_FALSE(j["meta"]["m0_certificate"].is_null());
  for (int n : {3, 4}) {
    const auto& row = j["rows"][n];
    EXPECT_LE(row["residual"].get<double>(), row["remainder_bound"].get<double>());
  }
  EXPECT_TRUE(j["rows"][2]["remainder_bound"].is_null());
}

TEST(Cli, SplittingHasRwaColumn) {
  const auto r = run("splitting --variant h2 --omega 1 --omega0 1 --g 0.5 --m-max 10");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "m,lo_index,hi_index,lambda_lo,lambda_hi,delta,rwa_delta");
  const auto off = run("splitting --variant h2 --omega 1 --omega0 0.5 --g 0.5 --m-max 2");
  ASSERT_EQ(off.code, 0);
  EXPECT_NE(off.out.find(",\n"), std::string::npos);  // empty RWA cells off resonance
}

TEST(Cli, ArgsFromFileAndOutput) {
  const auto dir = std::filesystem::temp_directory_path() / "jcspec_cli_test";
  std::filesystem::create_directories(dir);
  const auto args = dir / "args.txt";
  const auto out = dir / "out.csv";
  {
    std::ofstream f(args);
    f << "# parameters\n--omega 1\n--omega0=1\n\n--g 0\n";
  }
  const auto r = run("spectrum --variant h2 --m-max 3 --args-from " + args.string() + " --output " + out.string());
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream f(out);
  const std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  EXPECT_EQ(text, "index,eigenvalue\n0,2\n1,2\n2,4\n3,4\n");
  std::filesystem::remove_all(dir);
}

TEST(Cli, DeterministicOutput) {
  const std::string cmd = "asymptotics --variant h1 --omega0 0.2 --g 0.5 --m-list 10,20 --order 3 --format json";
  const auto a = run(cmd);
  const auto b = run(cmd);
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, OtherCommands) {
  const auto o = run("overlaps --omega0 0 --g 0.8 --m 4 --n-max 6");
  EXPECT_EQ(o.code, 0);
  EXPECT_EQ(o.out.substr(0, o.out.find('\n')), "m,n,overlap,contour,contour_residual");
  const auto p = run("projectors --variant p1 --omega0 0.2 --g 1 --k 0 --m 0 --format json");
  ASSERT_EQ(p.code, 0);
  const auto j = nlohmann::json::parse(p.out);
  EXPECT_NEAR(j["rows"][0]["closed_form"].get<double>(), 0.5 - 0.5 * std::exp(-2.0), 1e-14);
}

TEST(Cli, ValidateExitCode) {
  const auto r = run("validate --omega 1 --omega0 0.2 --g 0.5");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.find("false"), std::string::npos);
}
