#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string command = std::string(EXPMOMENT_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(command.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string data(const std::string& name) { return std::string(EXPMOMENT_DATA_DIR) + "/" + name; }

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST(Cli, MomentTwoTone) {
  const auto r = run("moment --instance " + data("two_tone.json") + " --q 1 --T 3.14159");
  ASSERT_EQ(r.code, 0) << r.out;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["value"].get<double>(), 2.0, 1e-5);
  EXPECT_EQ(j["engine"], "spectral");
}

TEST(Cli, MomentInlineSingleTone) {
  const auto r = run("moment --inline 'a=1;phi=0' --q 5 --T 1");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(nlohmann::json::parse(r.out)["value"].get<double>(), 1.0);
}

TEST(Cli, MomentBothEnginesReportDisagreement) {
  const auto r = run("moment --inline 'a=1,0.5;phi=0,2.5' --q 2 --T 7 --engine both");
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  ASSERT_TRUE(j.contains("disagreement"));
  EXPECT_LT(j["disagreement"].get<double>(), 1e-8);
  EXPECT_TRUE(j.contains("spectral"));
  EXPECT_TRUE(j.contains("quadrature"));
  const auto csv = run("moment --inline 'a=1,0.5;phi=0,2.5' --q 2 --T 7 --engine both --format csv");
  ASSERT_EQ(csv.code, 0);
  EXPECT_NE(lines(csv.out).at(0).find("disagreement"), std::string::npos);
}

TEST(Cli, SeventeenDigitOutput) {
  const auto r = run("moment --inline 'a=1,1;phi=0,1' --q 1 --T 1 --format csv");
  ASSERT_EQ(r.code, 0);
  std::istringstream row(lines(r.out).at(1));
  std::vector<std::string> cells;
  for (std::string c; std::getline(row, c, ',');) cells.push_back(c);
  ASSERT_GE(cells.size(), 5u);
  // Mean of 2 + 2 cos t over [-1, 1] is 2 + 2 sin 1.
  EXPECT_NEAR(std::stod(cells[4]), 2 + 2 * std::sin(1.0), 1e-15);
  // %.17g drops trailing zeros, so compare against the canonical form.
  char canonical[40];
  std::snprintf(canonical, sizeof canonical, "%.17g", std::stod(cells[4]));
  EXPECT_EQ(cells[4], canonical);
  std::size_t digits = 0;
  for (char ch : cells[4]) digits += ch >= '0' && ch <= '9';
  EXPECT_GE(digits, 16u) << cells[4];
}

TEST(Cli, InvalidInputs) {
  EXPECT_EQ(run("moment --inline 'a=-1;phi=0' --T 1").code, 2);
  EXPECT_EQ(run("moment --instance /nonexistent.json --T 1").code, 2);
  EXPECT_EQ(run("moment --inline 'a=1;phi=0' --T 1 --q 0").code, 2);
  EXPECT_EQ(run("moment --inline 'a=1;phi=0' --T 1 --engine magic").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("moment --T 1").code, 2);
}

TEST(Cli, BudgetAndConvergenceCodes) {
  std::string a = "a=", phi = "phi=";
  for (int n = 0; n < 40; ++n) {
    a += (n ? "," : "") + std::to_string(1);
    phi += (n ? "," : "") + std::to_string(n);
  }
  EXPECT_EQ(run("moment --inline '" + a + ";" + phi + "' --q 6 --T 1 --engine spectral").code, 4);
  EXPECT_EQ(run("zeta --nu 5 --N 100 --T 10").code, 4);
}

TEST(Cli, VerifyCampaignAllPass) {
  const auto r = run("verify theorem1 --random 30 --seed 42");
  ASSERT_EQ(r.code, 0);
  const auto rows = lines(r.out);
  ASSERT_EQ(rows.size(), 30u);
  for (const auto& row : rows) {
    const auto j = nlohmann::json::parse(row);
    for (const char* key : {"check", "lhs", "rhs", "margin", "passed", "engine", "seed"}) EXPECT_TRUE(j.contains(key));
    EXPECT_TRUE(j["passed"].get<bool>());
    EXPECT_EQ(j["seed"], 42);
  }
  EXPECT_EQ(run("verify theorem1 --random 30 --seed 42").out, r.out);
}

TEST(Cli, VerifyKernelMajorizationInstance) {
  const auto r = run("verify eq45 --instance " + data("integer_tones.json") + " --H 50 --T 10 --q 2");
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j["passed"].get<bool>());
  EXPECT_EQ(j["check"], "eq45");
}

TEST(Cli, VerifySingleChecks) {
  const auto two = data("two_tone.json");
  EXPECT_EQ(run("verify ingham --instance " + two).code, 0);
  EXPECT_EQ(run("verify sup-chain --instance " + two + " --Ts 10,100").code, 0);
  EXPECT_EQ(run("verify lemma --instance " + two + " --T0 40 --phases 0.5,1").code, 0);
  EXPECT_EQ(run("verify bohr --inline 'a=1,1;phi=1,2' --index 2").code, 0);
  EXPECT_EQ(run("verify corollary --nu 1 --N 10 --T 1000").code, 0);
  EXPECT_EQ(run("verify ingham --instance " + two + " --gamma 2").code, 2);
  EXPECT_EQ(run("verify nonsense").code, 2);
}

TEST(Cli, VerifyAllQuick) {
  const auto r = run("verify all --quick --seed 3");
  EXPECT_EQ(r.code, 0);
  EXPECT_GT(lines(r.out).size(), 100u);
}

TEST(Cli, ZetaRows) {
  const auto single = run("zeta --nu 2 --N 50 --T 1e4");
  ASSERT_EQ(single.code, 0);
  ASSERT_EQ(lines(single.out).size(), 1u);
  EXPECT_TRUE(nlohmann::json::parse(single.out)["passed"].get<bool>());

  const auto sweep = run("zeta --nu 1 --sweep 10:100:10 --T 1e3 --format csv");
  ASSERT_EQ(sweep.code, 0);
  const auto rows = lines(sweep.out);
  ASSERT_EQ(rows.size(), 11u);
  EXPECT_EQ(rows[0], "N,nu,T,lhs,rhs,margin,divisor_sum,passed");
  double harmonic = 0;
  for (int n = 1; n <= 10; ++n) harmonic += 1.0 / n;
  EXPECT_NE(rows[1].find("10,1,"), std::string::npos);
  std::istringstream first(rows[1]);
  std::vector<std::string> cells;
  for (std::string c; std::getline(first, c, ',');) cells.push_back(c);
  EXPECT_NEAR(std::stod(cells[4]), harmonic, 0.01);
  EXPECT_NEAR(std::stod(cells[6]), harmonic, 1e-14);
  EXPECT_EQ(run("zeta --nu 1 --sweep 10:5:1").code, 2);
}

TEST(Cli, ZetaDivisorSumOnly) {
  const auto r = run("zeta --nu 2 --divisor-sum-only --x 1e5");
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["target"].get<double>(), 4.0);
  EXPECT_GT(j["slope"].get<double>(), 2.5);
}

TEST(Cli, PlotData) {
  const auto r = run("plotdata --instance " + data("two_tone.json") + " --q 1 --points 1001");
  ASSERT_EQ(r.code, 0);
  const auto rows = lines(r.out);
  ASSERT_EQ(rows.size(), 1002u);
  EXPECT_EQ(rows[0], "t,value");
  EXPECT_EQ(rows[501], "0,4");
  for (std::size_t i = 1; i <= 500; ++i) {
    const double left = std::stod(rows[i].substr(rows[i].find(',') + 1));
    const double right = std::stod(rows[1002 - i].substr(rows[1002 - i].find(',') + 1));
    EXPECT_NEAR(left, right, 1e-12);
    EXPECT_LE(left, 4.0);
  }
  const auto z = run("plotdata --zeta-N 100 --q 1 --tmin 0 --tmax 1 --points 2");
  ASSERT_EQ(z.code, 0);
  double s0 = 0;
  for (int n = 1; n <= 100; ++n) s0 += 1 / std::sqrt(n);
  const auto row = lines(z.out).at(1);
  EXPECT_NEAR(std::stod(row.substr(row.find(',') + 1)), s0 * s0, 1e-10 * s0 * s0);
  EXPECT_EQ(run("plotdata --instance " + data("two_tone.json") + " --points 0").code, 2);
}

TEST(Cli, ExpandCsv) {
  const auto r = run("expand --instance " + data("two_tone.json") + " --q 1");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "omega,coeff_re,coeff_im\n-1,1,0\n0,2,0\n1,1,0\n");
  EXPECT_EQ(run("expand --inline 'a=1;phi=0.5' --rational").code, 2);
}
