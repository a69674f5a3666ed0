#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "nevai/errors.hpp"
#include "nevai/transfer.hpp"
#include "nevai_cli/config.hpp"
#include "nevai_cli/runner.hpp"

using namespace nevai;
using namespace nevai::cli;

namespace {

std::vector<std::vector<std::string>> data_rows(const std::string& csv) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(csv);
  bool header_seen = false;
  for (std::string line; std::getline(in, line);) {
    if (line.starts_with('#')) continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    std::vector<std::string> fields;
    std::istringstream ls(line);
    for (std::string f; std::getline(ls, f, ',');) fields.push_back(f);
    rows.push_back(fields);
  }
  return rows;
}

double num(const std::string& s) { return std::stod(s); }

ExperimentConfig parse(const std::string& text, Experiment e) { return parse_config(text, e, "t.toml"); }

std::string config_error(const std::string& text, Experiment e) {
  try {
    parse(text, e);
  } catch (const ConfigError& err) {
    return err.what();
  }
  return "<no error>";
}

std::filesystem::path temp_file(const std::string& name, const std::string& contents) {
  const auto p = std::filesystem::temp_directory_path() / ("nevai_cli_test_" + name);
  std::ofstream(p) << contents;
  return p;
}

int run_exe(const std::string& args) {
  const std::string cmd = std::string(NEVAI_CLI_EXE) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST(CliRun, FreeNevaiRatioDecays) {
  const auto cfg = parse("[model]\nkind = \"free\"\n[run]\nx0 = 0.0\nN = 10000\nstride = 100\n", Experiment::nevai);
  const auto rows = data_rows(run(cfg));
  ASSERT_EQ(rows.size(), 101u);
  EXPECT_EQ(rows.back()[0], "10000");
  EXPECT_LT(num(rows.back()[4]), 3e-4);
  // r_n = p_n^2 / K_n with the mantissa and scale columns
  for (const auto& r : rows) {
    const double p = num(r[1]) * std::exp(num(r[2]));
    EXPECT_NEAR(num(r[4]), p * p / num(r[3]), 1e-12);
  }
}

TEST(CliRun, ConstantLyapunovIsLog2) {
  const auto cfg = parse("[model]\nkind = \"constant\"\n[run]\nx0 = 2.5\nN = 100000\n", Experiment::lyapunov);
  const auto rows = data_rows(run(cfg));
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0][1], "100000");
  EXPECT_NEAR(num(rows[0][2]), std::log(2.0), 0.01);
}

TEST(CliRun, BoundsDeterministicBytes) {
  const auto cfg_path = temp_file("bounds.toml", "seed = 17\n[run]\nsamples = 100000\n");
  const auto a = std::filesystem::temp_directory_path() / "nevai_cli_test_bounds_a.csv";
  const auto b = std::filesystem::temp_directory_path() / "nevai_cli_test_bounds_b.csv";
  ASSERT_EQ(run_exe("bounds --config " + cfg_path.string() + " --out " + a.string()), 0);
  ASSERT_EQ(run_exe("bounds --config " + cfg_path.string() + " --out " + b.string() + " --threads 1"), 0);
  const std::string sa = slurp(a), sb = slurp(b);
  EXPECT_FALSE(sa.empty());
  EXPECT_EQ(sa, sb);
  const auto rows = data_rows(sa);
  ASSERT_EQ(rows.size(), 4u);
  for (const auto& r : rows) {
    EXPECT_EQ(r[1], "100000");
    EXPECT_EQ(r[2], "0") << r[0];
  }
}

TEST(CliRun, OutputIndependentOfThreadCount) {
  auto cfg = parse("[model]\nkind = \"anderson\"\n[run]\ndiagnostic = \"lyapunov\"\nN = 2000\n"
                   "grid = { start = -1.5, stop = 1.5, count = 13 }\n",
                   Experiment::sweep);
  cfg.threads = 1;
  const std::string one = run(cfg);
  cfg.threads = 5;
  EXPECT_EQ(run(cfg), one);
  cfg.threads = 64;
  EXPECT_EQ(run(cfg), one);
}

TEST(CliRun, SeedChangesRandomModel) {
  auto cfg = parse("[model]\nkind = \"anderson\"\n[run]\nx0 = 0.3\nN = 50\n", Experiment::nevai);
  const std::string a = run(cfg);
  cfg.seed = 2;
  EXPECT_NE(data_rows(run(cfg)).back(), data_rows(a).back());
  cfg.model.seed = 1;  // explicit model seed wins over the run seed
  EXPECT_EQ(data_rows(run(cfg)), data_rows(a));
}

TEST(CliRun, ProvenanceHeader) {
  const auto cfg = parse("seed = 9\n[model]\nkind = \"szwarc\"\nbeta = 0.25\n[run]\nx0 = 0.5\nN = 20\n", Experiment::eval);
  const std::string csv = run(cfg);
  std::istringstream in(csv);
  std::string line, body;
  std::getline(in, line);
  EXPECT_EQ(line, "# nevai-cli " + std::string(tool_version()));
  std::getline(in, line);
  EXPECT_EQ(line, "# experiment: eval");
  std::getline(in, line);
  const std::string hash_line = line;
  std::getline(in, line);
  EXPECT_EQ(line, "# seed: 9");
  while (std::getline(in, line) && line.starts_with("#|")) body += (line.size() > 3 ? line.substr(3) : "") + "\n";
  EXPECT_EQ(line, csv_header(cfg));
  EXPECT_EQ(body, to_toml(cfg));
  char want[64];
  std::snprintf(want, sizeof want, "# config_hash: fnv1a64:%016llx", static_cast<unsigned long long>(fnv1a64(body)));
  EXPECT_EQ(hash_line, want);
}

TEST(CliRun, GreenResidualsSmall) {
  const auto cfg = parse("[model]\nkind = \"free\"\n[run]\nN = 200\nz = [0.5, 0.1]\ncolumn = 7\n", Experiment::green);
  const auto rows = data_rows(run(cfg));
  ASSERT_EQ(rows.size(), 200u);
  for (const auto& r : rows) EXPECT_LT(num(r[3]), 1e-12);
}

TEST(CliRun, MomentsOfFreeTruncation) {
  const auto cfg = parse("[model]\nkind = \"free\"\n[run]\nm = 10\nK = 8\n", Experiment::moments);
  const auto rows = data_rows(run(cfg));
  const double catalan[] = {1, 0, 1, 0, 2, 0, 5, 0, 14};
  ASSERT_EQ(rows.size(), 9u);
  for (int k = 0; k <= 8; ++k) EXPECT_NEAR(num(rows[k][1]), catalan[k], 1e-10);
}

TEST(CliRun, EtaDefaultsToCentralMoments) {
  const auto cfg = parse("[model]\nkind = \"free\"\n[run]\nx0 = 0.3\nn = 40\nk_max = 2\n", Experiment::eta);
  const auto rows = data_rows(run(cfg));
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(num(rows[0][1]), 1.0);
}

TEST(CliRun, PruferColumns) {
  const auto cfg = parse("[model]\nkind = \"block51\"\n[run]\nx0 = 0.5\nN = 1000\nstride = 10\n", Experiment::prufer);
  const auto rows = data_rows(run(cfg));
  ASSERT_EQ(rows.size(), 100u);
  for (const auto& r : rows) {
    ASSERT_EQ(r.size(), 6u);
    EXPECT_GT(num(r[1]), 0.0);
    EXPECT_GT(num(r[3]), 0.0);
    EXPECT_LT(num(r[3]), M_PI);
  }
}

TEST(CliSweep, SinglePointEqualsRun) {
  const auto sweep = parse("[model]\nkind = \"szwarc\"\nbeta = 0.5\n[run]\ndiagnostic = \"nevai_ratio\"\nN = 5000\n"
                           "grid = { start = 0.3, stop = 0.3, count = 1 }\n",
                           Experiment::sweep);
  const auto single = parse("[model]\nkind = \"szwarc\"\nbeta = 0.5\n[run]\nx0 = 0.3\nN = 5000\nstride = 5000\n",
                            Experiment::nevai);
  const auto s = data_rows(run(sweep));
  const auto r = data_rows(run(single));
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0][0], "0.3");
  EXPECT_EQ(s[0][1], r.back()[4]);

  const auto ly_sweep = parse("[model]\nkind = \"constant\"\n[run]\ndiagnostic = \"lyapunov\"\nN = 4000\nx0 = [2.5]\n",
                              Experiment::sweep);
  const auto ly = parse("[model]\nkind = \"constant\"\n[run]\nx0 = 2.5\nN = 4000\n", Experiment::lyapunov);
  EXPECT_EQ(data_rows(run(ly_sweep))[0][1], data_rows(run(ly))[0][2]);
}

TEST(CliSweep, FreeNevaiRatioUniformOnCompact) {
  const auto cfg = parse("[model]\nkind = \"free\"\n[run]\ndiagnostic = \"nevai_ratio\"\nN = 10000\n"
                         "grid = { start = -1.9, stop = 1.9, count = 77 }\n",
                         Experiment::sweep);
  const auto rows = data_rows(run(cfg));
  ASSERT_EQ(rows.size(), 77u);
  for (const auto& r : rows) EXPECT_LT(num(r[1]), 1e-3) << "x0=" << r[0];
}

// Block 4.1 through C_3 at n = 20297. growth_test takes the minimum over
// [N/2, N], which lies almost entirely in A_3 where nothing grows, so the
// reported values sit just above 1. The exponential rate shows up in the
// per-block slope across C_3 instead.
TEST(CliSweep, Block41GrowthAndSlopes) {
  const std::string grid = "grid = { start = 1.059, stop = 1.941, count = 50 }\n";
  const auto growth = parse("[model]\nkind = \"block41\"\n[run]\ndiagnostic = \"growth_test\"\nN = 20297\n" + grid,
                            Experiment::sweep);
  for (const auto& r : data_rows(run(growth))) {
    EXPECT_GT(num(r[1]), 1.0) << r[0];
    EXPECT_LT(num(r[1]), 1.01) << r[0];
  }
  const auto slope = parse("[model]\nkind = \"block41\"\n[run]\ndiagnostic = \"block_slope\"\nblock_j = 3\n" + grid,
                           Experiment::sweep);
  const auto rows = data_rows(run(slope));
  ASSERT_EQ(rows.size(), 50u);
  int close = 0;
  for (const auto& r : rows) {
    const double eta = *hyperbolic_rate(num(r[0])).eta;
    if (std::abs(num(r[1]) - eta) <= 0.15 * eta) ++close;
  }
  EXPECT_GE(close, 40);
}

TEST(CliConfig, RoundTripThroughArtifact) {
  const std::vector<std::pair<Experiment, std::string>> cases = {
      {Experiment::eval, "seed = 5\n[model]\nkind = \"periodic\"\na = [1.0, 0.5]\nb = [0.1, -0.1]\n"
                         "perturb_a = { amplitude = 0.3, exponent = 1.5 }\n[run]\nx0 = 0.1\nN = 30\nstride = 7\n"},
      {Experiment::nevai, "[model]\nkind = \"block41\"\ngrowth = { type = \"table\", a = [3, 9], c = [2, 4] }\n"
                          "[run]\nx0 = 1.25\nN = 40\n"},
      {Experiment::lyapunov, "[model]\nkind = \"fibonacci\"\ntheta = 0.1\n[run]\nx0 = 0.7\nN = 1000\nwindows = 4\n"},
      {Experiment::eta, "[model]\nkind = \"constant\"\na = 0.8\nb = 0.2\n[run]\nx0 = 0.1\nn = 12\nk_max = 4\ncenter = 0.05\n"},
      {Experiment::spectrum, "[model]\nkind = \"szwarc\"\nbeta = 0.3\n[run]\nm = 12\ncoordinate = 4\n"},
      {Experiment::moments, "[model]\nkind = \"anderson\"\nseed = 99\n[run]\nm = 12\nK = 5\n"},
      {Experiment::green, "[model]\nkind = \"free\"\n[run]\nN = 30\nz = [0.25, 0.5]\ncolumn = 3\nrows = 10\n"},
      {Experiment::prufer, "[model]\nkind = \"block51\"\ngrowth = { type = \"power\", a_base = 2, c_base = 2, "
                           "exponent = 1, b_exponent = 2 }\n[run]\nx0 = 0.2\nN = 60\ntheta0 = 0.4\nstride = 3\n"},
      {Experiment::bounds, "seed = 123\n[run]\nsamples = 100\nchecks = [\"lemma64\", \"ntz\"]\n"},
      {Experiment::sweep, "[model]\nkind = \"free\"\n[run]\ndiagnostic = \"nevai_ratio\"\nN = 100\nx0 = [0.1, 0.2, 0.7]\n"},
  };
  for (const auto& [e, text] : cases) {
    const ExperimentConfig cfg = parse(text, e);
    const std::string csv = run(cfg);
    const ExperimentConfig back = config_from_artifact(csv);
    EXPECT_EQ(to_toml(back), to_toml(cfg)) << to_string(e);
    EXPECT_EQ(run(back), csv) << to_string(e);
  }
}

TEST(CliConfig, ExactDoublesSurviveRoundTrip) {
  auto cfg = default_config(Experiment::eval);
  cfg.run.x0 = 0.1 + 0.2;
  cfg.run.N = 3;
  const ExperimentConfig back = config_from_artifact(run(cfg));
  EXPECT_EQ(back.run.x0, 0.1 + 0.2);
}

TEST(CliConfig, UnknownKeysCarryLocation) {
  const std::string e1 = config_error("seed = 1\n[run]\nx0 = 0.5\nbogus = 3\n", Experiment::nevai);
  EXPECT_NE(e1.find("t.toml:4:1:"), std::string::npos) << e1;
  EXPECT_NE(e1.find("bogus"), std::string::npos) << e1;
  // valid for another experiment is still unknown here
  const std::string e2 = config_error("[run]\nwindows = 3\n", Experiment::nevai);
  EXPECT_NE(e2.find("t.toml:2:1:"), std::string::npos) << e2;
  const std::string e3 = config_error("[model]\nkind = \"szwarc\"\na = 2.0\n", Experiment::nevai);
  EXPECT_NE(e3.find("t.toml:3:1:"), std::string::npos) << e3;
  const std::string e4 = config_error("colour = \"red\"\n", Experiment::nevai);
  EXPECT_NE(e4.find("t.toml:1:1:"), std::string::npos) << e4;
}

TEST(CliConfig, TypeAndSyntaxErrors) {
  EXPECT_NE(config_error("[run]\nN = \"many\"\n", Experiment::nevai).find("t.toml:2:"), std::string::npos);
  EXPECT_NE(config_error("[run]\nN = 1.5\n", Experiment::nevai).find("integer"), std::string::npos);
  EXPECT_NE(config_error("[run\n", Experiment::nevai).find("t.toml:1:"), std::string::npos);
  EXPECT_NE(config_error("[model]\nkind = \"cantor\"\n", Experiment::nevai).find("t.toml:2:"), std::string::npos);
  EXPECT_NE(config_error("experiment = \"lyapunov\"\n", Experiment::nevai).find("subcommand"), std::string::npos);
  EXPECT_NO_THROW(parse("experiment = \"nevai\"\n", Experiment::nevai));
  EXPECT_NE(config_error("[run]\nchecks = [\"ntz\", \"nope\"]\n", Experiment::bounds).find("nope"), std::string::npos);
}

TEST(CliConfig, RangeChecks) {
  const std::vector<std::pair<Experiment, std::string>> bad = {
      {Experiment::nevai, "[run]\nN = 0\n"},
      {Experiment::nevai, "[run]\nstride = 0\n"},
      {Experiment::lyapunov, "[run]\nN = 999\n"},
      {Experiment::eta, "[run]\nk_max = 31\n"},
      {Experiment::spectrum, "[run]\nm = 5\ncoordinate = 6\n"},
      {Experiment::green, "[run]\nz = [0.0, 0.0]\n"},
      {Experiment::green, "[run]\nz = [0.0, 1.0, 2.0]\n"},
      {Experiment::green, "[run]\nN = 10\ncolumn = 11\n"},
      {Experiment::bounds, "[run]\nchecks = []\n"},
      {Experiment::sweep, "[run]\nx0 = [0.2, 0.1]\n"},
      {Experiment::sweep, "[run]\nx0 = []\n"},
      {Experiment::sweep, "[run]\ngrid = { start = 1.0, stop = 0.0, count = 3 }\n"},
      {Experiment::sweep, "[run]\nx0 = [0.1]\ngrid = { start = 0.0, stop = 1.0, count = 3 }\n"},
      {Experiment::sweep, "[model]\nkind = \"free\"\n[run]\ndiagnostic = \"block_slope\"\nx0 = [1.5]\n"},
      {Experiment::nevai, "[model]\nkind = \"constant\"\na = -1.0\n"},
      {Experiment::nevai, "[model]\nkind = \"periodic\"\na = [1.0]\nb = [0.0, 0.0]\n"},
      {Experiment::nevai, "[model]\nkind = \"fibonacci\"\ntheta = 1.0\n"},
      {Experiment::nevai, "seed = -1\n"},
  };
  for (const auto& [e, text] : bad) EXPECT_THROW(parse(text, e), ConfigError) << text;
}

TEST(CliExit, StatusMapping) {
  EXPECT_EQ(exit_status(ConfigError("x")), 2);
  EXPECT_EQ(exit_status(DomainError("x")), 3);
  EXPECT_EQ(exit_status(DegenerateInputError("x")), 3);
  EXPECT_EQ(exit_status(ConditioningError("x")), 3);
  EXPECT_EQ(exit_status(ConvergenceError("x", 0)), 4);
  EXPECT_EQ(exit_status(std::runtime_error("x")), 1);
}

TEST(CliExit, ProcessStatus) {
  EXPECT_EQ(run_exe("nevai --seed 3"), 0);
  EXPECT_EQ(run_exe("--version"), 0);
  EXPECT_EQ(run_exe(""), 2);
  EXPECT_EQ(run_exe("nevai --frobnicate"), 2);
  EXPECT_EQ(run_exe("nevai --config /nonexistent/cfg.toml"), 2);
  EXPECT_EQ(run_exe("nevai --config " + temp_file("unknown.toml", "[run]\nbogus = 1\n").string()), 2);
  // elliptic regime needed for Pruefer variables
  EXPECT_EQ(run_exe("prufer --config " + temp_file("hyp.toml", "[run]\nx0 = 2.5\nN = 10\n").string()), 3);
  EXPECT_EQ(run_exe("nevai --out /nonexistent/dir/out.csv"), 1);
}
