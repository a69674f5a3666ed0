#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>

#include "nevai_cli/config.hpp"
#include "nevai_cli/runner.hpp"

namespace {

using namespace nevai::cli;

struct Flags {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
};

void execute(Experiment e, const Flags& f) {
  ExperimentConfig cfg = f.config.empty() ? default_config(e) : load_config(f.config, e);
  if (f.seed) cfg.seed = *f.seed;
  if (f.threads) cfg.threads = *f.threads;
  if (!f.out.empty()) cfg.output = f.out;
  validate(cfg);

  const std::string csv = run(cfg);
  if (cfg.output.empty() || cfg.output == "-") {
    std::cout << csv << std::flush;
    return;
  }
  std::ofstream out(cfg.output, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file '" + cfg.output + "'");
  out << csv;
  if (!out.flush()) throw std::runtime_error("failed writing '" + cfg.output + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Orthogonal polynomial and Jacobi operator experiments; CSV on stdout or --out."};
  app.name(std::string(kToolName));
  app.set_version_flag("--version", std::string(tool_version()));
  app.require_subcommand(1);

  Flags flags;
  std::optional<Experiment> chosen;
  for (Experiment e : all_experiments()) {
    CLI::App* sub = app.add_subcommand(std::string(to_string(e)));
    sub->add_option("--config", flags.config, "TOML experiment config");
    sub->add_option("--out", flags.out, "CSV output path (default stdout)");
    sub->add_option("--seed", flags.seed, "64-bit seed (overrides the config)");
    sub->add_option("--threads", flags.threads, "worker threads, 0 = all cores");
    sub->callback([&chosen, e] { chosen = e; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& s) {
    return app.exit(s);
  } catch (const CLI::ParseError& err) {
    app.exit(err);
    return 2;
  }

  try {
    execute(*chosen, flags);
    return 0;
  } catch (const std::exception& err) {
    std::cerr << kToolName << ": " << err.what() << '\n';
    return exit_status(err);
  }
}
