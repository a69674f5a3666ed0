#pragma once

// Experiment configuration: TOML in, validated struct out, and back to TOML
// for the provenance header.
//
//   experiment = "nevai"      # optional; must match the subcommand
//   seed = 1
//   threads = 0               # 0 = all cores
//   output = "run.csv"
//
//   [model]
//   kind = "block41"
//   growth = "default"          # or { type = "power", ... } / { type = "table", ... }
//
//   [run]
//   x0 = 1.5
//   N = 20000

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nevai/models.hpp"

namespace nevai::cli {

/// Bad or unknown configuration (exit status 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Experiment { eval, nevai, lyapunov, eta, spectrum, moments, green, prufer, bounds, sweep };

std::string_view to_string(Experiment e);
std::optional<Experiment> parse_experiment(std::string_view name);
const std::vector<Experiment>& all_experiments();

struct GrowthSpec {
  std::string type = "default";  // default | power | table
  // power: #A_j = a_base^(j^exponent), #C_j = c_base^(j^exponent), #B_j = j^b_exponent - 1
  std::int64_t a_base = 3;
  std::int64_t c_base = 2;
  std::int64_t exponent = 2;
  std::int64_t b_exponent = 6;
  // table: sizes per generation, the last entry repeats
  std::vector<std::int64_t> a, c, b;
};

struct DecaySpec {
  double amplitude = 0.0;
  double exponent = 1.0;
};

struct ModelSpec {
  std::string kind = "free";  // free constant szwarc anderson block41 block51 fibonacci periodic
  double a = 1.0;             // constant
  double b = 0.0;             // constant
  double beta = 0.0;          // szwarc
  double theta = 0.0;         // fibonacci
  std::optional<std::uint64_t> seed;  // anderson; defaults to the run seed
  std::vector<double> a_list{1.0}, b_list{0.0};  // periodic
  std::optional<DecaySpec> perturb_a, perturb_b;  // periodic
  GrowthSpec growth;                              // block41 / block51
};

struct GridSpec {
  double start = 0.0;
  double stop = 0.0;
  std::int64_t count = 0;
};

/// Union of the per-experiment knobs; only the keys listed for the chosen
/// experiment are accepted in [run].
struct RunSpec {
  double x0 = 0.0;
  std::int64_t N = 10000;
  std::int64_t stride = 1;
  std::int64_t windows = 10;
  std::int64_t n = 10;
  std::int64_t k_max = 8;
  std::optional<double> center;
  std::int64_t m = 50;
  std::int64_t coordinate = 1;
  std::int64_t K = 8;
  double z_re = 0.0;
  double z_im = 1.0;
  std::int64_t column = 1;
  std::int64_t rows = 0;  // 0 = all N rows
  double theta0 = 1.5707963267948966;
  std::int64_t samples = 100000;
  std::vector<std::string> checks{"ntz", "matrix_power", "lemma64", "cosine_sum"};
  std::string diagnostic = "growth_test";
  std::vector<double> x0_list;
  std::optional<GridSpec> grid;
  std::int64_t block_j = 3;
};

struct ExperimentConfig {
  Experiment experiment = Experiment::eval;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  std::string output;  // empty = stdout
  ModelSpec model;
  RunSpec run;

  /// x0 grid for sweeps (explicit list or expanded grid).
  std::vector<double> sweep_points() const;
};

/// Parses and validates. Diagnostics read "<source>:<line>:<col>: <message>".
ExperimentConfig parse_config(std::string_view text, Experiment experiment, std::string_view source = "config");
ExperimentConfig load_config(const std::filesystem::path& path, Experiment experiment);
/// Defaults for a run without a config file.
ExperimentConfig default_config(Experiment experiment);

/// Range checks that apply after command line overrides.
void validate(const ExperimentConfig& cfg);

/// Effective configuration as TOML (threads and output excluded: they never
/// change the numbers).
std::string to_toml(const ExperimentConfig& cfg);

std::uint64_t fnv1a64(std::string_view bytes);

JacobiSequence build_model(const ModelSpec& spec, std::uint64_t run_seed);

}  // namespace nevai::cli
