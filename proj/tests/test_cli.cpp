#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "qent/cli.hpp"

namespace {

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  args.insert(args.begin(), "qent");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  CliRun r;
  r.code = qent::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string temp_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << content;
  return path.string();
}

double result(const nlohmann::json& report, const std::string& label) {
  for (const auto& r : report["results"])
    if (r["label"] == label) return r["value"].get<double>();
  ADD_FAILURE() << "no result " << label;
  return NAN;
}

std::vector<std::string> csv_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

TEST(CliMeasure, SingletWithEr) {
  const auto path = temp_file("qent_cli_w1.json", qent::state_to_json(qent::werner_state(1.0)));
  const CliRun r = run({"measure", path, "--q", "0.5", "--with-er", "--no-timestamp"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["command"], "measure");
  EXPECT_NEAR(result(j, "E^M"), 1.3862943611198906, 1e-6);
  EXPECT_NEAR(result(j, "E^R"), 0.6931471805599453, 2e-3);
  EXPECT_NEAR(result(j, "S"), 0.0, 1e-12);
  EXPECT_FALSE(j.contains("timestamp"));
  EXPECT_TRUE(j["failures"].empty());
}

TEST(CliMeasure, ProductStateMeasuresVanish) {
  const auto prod = qent::product_state(qent::random_density(2, 1), qent::random_density(2, 2));
  const auto path = temp_file("qent_cli_prod.json", qent::state_to_json(prod));
  const CliRun r = run({"measure", path, "--q", "0.5", "--with-er", "--format", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto lines = csv_lines(r.out);
  EXPECT_EQ(lines.front(), "label,value");
  for (std::size_t i = 2; i < lines.size(); ++i) {  // skip header and S
    const double v = std::stod(lines[i].substr(lines[i].find(',') + 1));
    EXPECT_LT(std::abs(v), 1e-3) << lines[i];
  }
}

TEST(CliMeasure, MalformedJsonIsInputError) {
  const auto path = temp_file("qent_cli_bad.json", "{\"dims\": [2, 2], \"re\": [[");
  const CliRun r = run({"measure", path});
  EXPECT_EQ(r.code, 2);
  EXPECT_TRUE(r.out.empty());
  EXPECT_NE(r.err.find("ParseError"), std::string::npos);
}

TEST(CliMeasure, SingleSystemFileRejected) {
  const auto path = temp_file("qent_cli_single.json", qent::state_to_json(qent::random_density(2, 3)));
  EXPECT_EQ(run({"measure", path}).code, 2);
  EXPECT_EQ(run({"entropy", path, "--q", "2"}).code, 0);
}

TEST(CliEntropy, RelativeEntropies) {
  const auto rho = temp_file("qent_cli_mixed.json", R"({"dims":[2],"re":[[0.5,0],[0,0.5]],"im":[[0,0],[0,0]]})");
  const auto sigma = temp_file("qent_cli_sigma.json", R"({"dims":[2],"re":[[0.25,0],[0,0.75]],"im":[[0,0],[0,0]]})");
  const CliRun r = run({"entropy", rho, "--q", "0.5", "--relative-to", sigma});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(result(j, "U"), 0.14384103622589046, 1e-14);
  EXPECT_NEAR(result(j, "D_q"), 0.068148347421863427, 1e-14);
  EXPECT_NEAR(result(j, "S"), 0.6931471805599453, 1e-14);
}

TEST(CliWerner, FigureSweepCsv) {
  const CliRun r = run({"werner", "--sweep", "0.5:1.0:0.005", "--q", "0.35"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto lines = csv_lines(r.out);
  EXPECT_EQ(lines.front(), "F,e_tsallis,e_rel,e_mutual");
  std::vector<double> crossings;
  for (const auto& l : lines)
    if (l.rfind("# crossing F=", 0) == 0) crossings.push_back(std::stod(l.substr(13)));
  ASSERT_EQ(crossings.size(), 2u);
  EXPECT_NEAR(crossings[0], 0.9, 0.05);
  EXPECT_NEAR(crossings[1], 0.98, 0.02);
  EXPECT_EQ(lines.size(), 1u + 101u + 2u);
}

TEST(CliWerner, LowerBranchAndZeroOrder) {
  auto column = [](const std::string& text, std::size_t col) {
    std::vector<double> v;
    for (const auto& l : csv_lines(text)) {
      if (l.empty() || l[0] == '#' || l[0] == 'F') continue;
      std::istringstream in(l);
      std::string cell;
      for (std::size_t c = 0; c <= col; ++c) std::getline(in, cell, ',');
      v.push_back(std::stod(cell));
    }
    return v;
  };
  const CliRun low = run({"werner", "--sweep", "0.0:0.5:0.1", "--q", "0.35"});
  ASSERT_EQ(low.code, 0);
  const auto e_rel = column(low.out, 2);
  EXPECT_EQ(e_rel.size(), 6u);
  for (double v : e_rel) EXPECT_EQ(v, 0.0);
  const CliRun zero = run({"werner", "--sweep", "0.5:1.0:0.05", "--q", "0"});
  for (double v : column(zero.out, 1)) EXPECT_EQ(v, 0.0);
}

TEST(CliWerner, TwelveSignificantDigits) {
  const CliRun r = run({"werner", "--sweep", "0.9:1.0:0.1", "--q", "0.35"});
  const auto lines = csv_lines(r.out);
  EXPECT_EQ(lines[1], "0.9,0.366270830093,0.368064207168,0.951350158862");
}

TEST(CliWerner, JsonAndOutFile) {
  const auto path = (std::filesystem::temp_directory_path() / "qent_cli_sweep.json").string();
  const CliRun r = run({"werner", "--sweep", "0.5:1.0:0.005", "--q", "0.35", "--format", "json", "--out", path});
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  const auto j = nlohmann::json::parse(in);
  EXPECT_EQ(j["details"]["rows"].size(), 101u);
  EXPECT_EQ(j["details"]["crossings"].size(), 2u);
  EXPECT_TRUE(j.contains("timestamp"));
}

TEST(CliWerner, PlotData) {
  const CliRun r = run({"werner", "--sweep", "0.5:1.0:0.25", "--q", "0.35", "--plot-data"});
  ASSERT_EQ(r.code, 0);
  const auto lines = csv_lines(r.out);
  EXPECT_EQ(lines[0], "# series e_tsallis");
  EXPECT_EQ(lines[1].find(' '), lines[1].rfind(' '));  // two columns
  EXPECT_EQ(std::count(lines.begin(), lines.end(), ""), 2);
}

TEST(CliWerner, BadRange) {
  EXPECT_EQ(run({"werner", "--sweep", "1.0:0.5:0.1"}).code, 2);
  EXPECT_EQ(run({"werner", "--sweep", "0.5:1.0"}).code, 2);
  EXPECT_EQ(run({"werner", "--sweep", "0.5:1.0:0.1", "--q", "1.0"}).code, 2);
}

TEST(CliMatchQ, Examples) {
  const CliRun fig = run({"match-q", "--werner", "0.9", "--target-er", "closed-form"});
  ASSERT_EQ(fig.code, 0) << fig.err;
  const auto j = nlohmann::json::parse(fig.out);
  EXPECT_GE(result(j, "q_star"), 0.30);
  EXPECT_LE(result(j, "q_star"), 0.40);
  EXPECT_LT(result(j, "residual"), 1e-6);
  EXPECT_FALSE(j["details"]["brackets"].empty());

  const CliRun zero = run({"match-q", "--werner", "0.25", "--target-er", "0"});
  ASSERT_EQ(zero.code, 0);
  EXPECT_EQ(result(nlohmann::json::parse(zero.out), "q_star"), 0.0);

  EXPECT_EQ(run({"match-q", "--werner", "0.9", "--target-er", "10"}).code, 4);
}

TEST(CliMatchQ, InputErrors) {
  EXPECT_EQ(run({"match-q", "--werner", "0.9", "--target-er", "abc"}).code, 2);
  EXPECT_EQ(run({"match-q", "--werner", "0.9"}).code, 2);
  EXPECT_EQ(run({"match-q", "--target-er", "0.1"}).code, 2);
  const auto path = temp_file("qent_cli_w9.json", qent::state_to_json(qent::werner_state(0.9)));
  EXPECT_EQ(run({"match-q", path, "--target-er", "closed-form"}).code, 2);
  EXPECT_EQ(run({"match-q", path, "--target-er", "0.368064207168"}).code, 0);
}

TEST(CliVerify, NonnegativityPasses) {
  const CliRun r = run({"verify", "--suite", "nonnegativity", "--trials", "200", "--seed", "7"});
  EXPECT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["failure_count"], 0);
}

TEST(CliVerify, PseudoadditivityResidual) {
  const CliRun r = run({"verify", "--suite", "pseudoadditivity", "--trials", "100", "--seed", "7"});
  EXPECT_EQ(r.code, 0);
  EXPECT_GT(result(nlohmann::json::parse(r.out), "pseudoadditivity/pseudoadditivity-residual/worst_slack"), 0.0);
}

TEST(CliVerify, LemmaBoundsAsStated) {
  const CliRun r = run({"verify", "--suite", "lemma-bounds", "--trials", "200", "--seed", "7"});
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_GE(result(j, "lemma-bounds/D_q-above-trace-distance/worst_slack"), -1e-9);
  EXPECT_EQ(r.code, 0);
}

TEST(CliVerify, ViolationExitsOneWithReproductionInfo) {
  // a zero continuity tolerance cannot be met
  const CliRun r = run({"verify", "--suite", "q-continuity", "--trials", "3", "--seed", "4", "--tol", "continuity=0",
                     "--max-failures", "2"});
  EXPECT_EQ(r.code, 1);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_GT(j["failure_count"].get<int>(), 2);
  ASSERT_EQ(j["failures"].size(), 2u);
  const auto& f = j["failures"][0];
  EXPECT_EQ(f["suite"], "q-continuity");
  EXPECT_EQ(f["trial"], 0);
  EXPECT_EQ(f["seed"], 4);
  EXPECT_LT(f["slack"].get<double>(), 0.0);
}

TEST(CliVerify, ByteIdenticalWithoutTimestamp) {
  const std::vector<std::string> args{"verify", "--suite", "unitary-invariance", "--trials", "10", "--seed", "3",
                                      "--no-timestamp"};
  const CliRun a = run(args), b = run(args);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out.find("timestamp"), std::string::npos);
  EXPECT_EQ(a.out.find("elapsed"), std::string::npos);
}

TEST(CliVerify, SeedFromEnvironment) {
  setenv("QENT_SEED", "11", 1);
  const CliRun env = run({"verify", "--suite", "werner", "--trials", "1", "--no-timestamp"});
  unsetenv("QENT_SEED");
  const CliRun flag = run({"verify", "--suite", "werner", "--trials", "1", "--seed", "11", "--no-timestamp"});
  EXPECT_EQ(env.out, flag.out);
  EXPECT_EQ(nlohmann::json::parse(env.out)["inputs"]["seed"], 11);
  setenv("QENT_SEED", "not-a-number", 1);
  EXPECT_EQ(run({"verify", "--suite", "werner", "--trials", "1"}).code, 2);
  unsetenv("QENT_SEED");
}

TEST(CliVerify, QGridAndToleranceParsing) {
  EXPECT_EQ(run({"verify", "--suite", "werner", "--trials", "1", "--q-grid", "0.2,0.4"}).code, 0);
  EXPECT_EQ(run({"verify", "--suite", "werner", "--trials", "1", "--q-grid", "0.1:0.9:0.2"}).code, 0);
  EXPECT_EQ(run({"verify", "--suite", "werner", "--q-grid", "0.1,x"}).code, 2);
  EXPECT_EQ(run({"verify", "--suite", "werner", "--tol", "bogus=1"}).code, 2);
  EXPECT_EQ(run({"verify", "--suite", "werner", "--tol", "slack"}).code, 2);
  EXPECT_EQ(run({"verify", "--suite", "nope"}).code, 2);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"measure"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(ParseQGrid, Forms) {
  EXPECT_EQ(qent::parse_q_grid("0.5,1.5"), (std::vector<double>{0.5, 1.5}));
  const auto r = qent::parse_q_grid("0.1:0.5:0.2");
  ASSERT_EQ(r.size(), 3u);
  EXPECT_NEAR(r.back(), 0.5, 1e-15);
}

}  // namespace
