#include "nevai_cli/runner.hpp"

#include <atomic>
#include <charconv>
#include <complex>
#include <cstdio>
#include <exception>
#include <functional>
#include <mutex>
#include <sstream>
#include <thread>

#include "nevai/bounds.hpp"
#include "nevai/errors.hpp"
#include "nevai/green.hpp"
#include "nevai/prufer.hpp"
#include "nevai/recurrence.hpp"
#include "nevai/spectral.hpp"
#include "nevai/transfer.hpp"

#ifndef NEVAI_CLI_VERSION
#define NEVAI_CLI_VERSION "0.0.0"
#endif

namespace nevai::cli {

namespace {

class Csv {
 public:
  Csv& field(double v) {
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return raw(std::string_view(buf, static_cast<std::size_t>(end - buf)));
  }
  Csv& field(std::uint64_t v) {
    char buf[32];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return raw(std::string_view(buf, static_cast<std::size_t>(end - buf)));
  }
  Csv& field(std::string_view s) { return raw(s); }
  void end_row() {
    out_ += '\n';
    first_ = true;
  }
  std::string take() { return std::move(out_); }

 private:
  Csv& raw(std::string_view s) {
    if (!first_) out_ += ',';
    out_ += s;
    first_ = false;
    return *this;
  }
  std::string out_;
  bool first_ = true;
};

unsigned thread_count(const ExperimentConfig& cfg, std::size_t tasks) {
  unsigned t = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::size_t>(t, std::max<std::size_t>(tasks, 1)));
}

// Runs task(i) for i < count on a small pool; slot i receives the rows for
// task i so the joined output never depends on scheduling.
std::string parallel_rows(std::size_t count, unsigned threads, const std::function<std::string(std::size_t)>& task) {
  std::vector<std::string> slots(count);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::size_t failed_at = count;
  std::mutex mu;
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < count;) {
      try {
        slots[i] = task(i);
      } catch (...) {
        std::lock_guard lock(mu);
        // keep the lowest failing index so the error is deterministic too
        if (i < failed_at) {
          failed_at = i;
          failure = std::current_exception();
        }
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }
  if (failure) std::rethrow_exception(failure);
  std::string out;
  for (auto& s : slots) out += s;
  return out;
}

bool on_stride(Index n, Index N, std::int64_t stride) {
  return n % static_cast<Index>(stride) == 0 || n == N;
}

std::string run_recurrence(const ExperimentConfig& cfg, const JacobiSequence& seq) {
  const Index N = static_cast<Index>(cfg.run.N);
  OrthoStream s(seq, cfg.run.x0);
  Csv csv;
  for (Index n = 0;; ++n) {
    const OrthoEval& st = s.state();
    if (on_stride(n, N, cfg.run.stride)) {
      csv.field(static_cast<std::uint64_t>(n)).field(st.p_scaled()).field(st.log_scale()).field(st.kernel()).field(st.nevai_ratio());
      csv.end_row();
    }
    if (n == N) break;
    s.step();
  }
  return csv.take();
}

std::string run_lyapunov(const ExperimentConfig& cfg, const JacobiSequence& seq) {
  const auto est = lyapunov_estimate(seq, cfg.run.x0, static_cast<Index>(cfg.run.N), static_cast<unsigned>(cfg.run.windows));
  Csv csv;
  csv.field(est.x0).field(static_cast<std::uint64_t>(est.N)).field(est.gamma_hat).field(est.last_window_slope);
  csv.end_row();
  return csv.take();
}

std::string run_eta(const ExperimentConfig& cfg, const JacobiSequence& seq) {
  const double center = cfg.run.center.value_or(cfg.run.x0);
  Csv csv;
  for (std::int64_t k = 0; k <= cfg.run.k_max; ++k) {
    csv.field(static_cast<std::uint64_t>(k))
        .field(eta_moment_k(seq, cfg.run.x0, static_cast<Index>(cfg.run.n), static_cast<unsigned>(k), center));
    csv.end_row();
  }
  return csv.take();
}

FiniteSpectralMeasure measure(const ExperimentConfig& cfg, const JacobiSequence& seq) {
  return spectral_measure_at(truncate(seq, static_cast<Index>(cfg.run.m)), static_cast<std::size_t>(cfg.run.coordinate));
}

std::string run_spectrum(const ExperimentConfig& cfg, const JacobiSequence& seq) {
  const FiniteSpectralMeasure mu = measure(cfg, seq);
  Csv csv;
  for (std::size_t i = 0; i < mu.atoms.size(); ++i) {
    csv.field(mu.atoms[i]).field(mu.weights[i]);
    csv.end_row();
  }
  return csv.take();
}

std::string run_moments(const ExperimentConfig& cfg, const JacobiSequence& seq) {
  const FiniteSpectralMeasure mu = measure(cfg, seq);
  Csv csv;
  for (std::int64_t k = 0; k <= cfg.run.K; ++k) {
    csv.field(static_cast<std::uint64_t>(k)).field(mu.moment(static_cast<unsigned>(k)));
    csv.end_row();
  }
  return csv.take();
}

std::string run_green(const ExperimentConfig& cfg, const JacobiSequence& seq) {
  const Index N = static_cast<Index>(cfg.run.N);
  const Index m = static_cast<Index>(cfg.run.column);
  const Complex z(cfg.run.z_re, cfg.run.z_im);
  const std::vector<Complex> G = green_column(seq, N, z, m);
  const Index rows = cfg.run.rows == 0 ? N : static_cast<Index>(cfg.run.rows);
  Csv csv;
  for (Index i = 1; i <= rows; ++i) {
    // row i of (J_N - z) G - e_m
    Complex r = (seq.b(i) - z) * G[i - 1] - (i == m ? 1.0 : 0.0);
    if (i > 1) r += seq.a(i - 1) * G[i - 2];
    if (i < N) r += seq.a(i) * G[i];
    csv.field(static_cast<std::uint64_t>(i)).field(G[i - 1].real()).field(G[i - 1].imag()).field(std::abs(r));
    csv.end_row();
  }
  return csv.take();
}

std::string run_prufer(const ExperimentConfig& cfg, const JacobiSequence& seq) {
  const Index N = static_cast<Index>(cfg.run.N);
  const PruferTrace tr = x_sequence(seq, cfg.run.x0, N, cfg.run.theta0);
  Csv csv;
  for (Index n = 1; n <= N; ++n) {
    if (!on_stride(n, N, cfg.run.stride)) continue;
    const PruferState& s = tr.states[n - 1];
    csv.field(static_cast<std::uint64_t>(n)).field(s.R).field(s.theta).field(s.k).field(tr.X[n - 1]).field(tr.partial[n - 1]);
    csv.end_row();
  }
  return csv.take();
}

std::string run_bounds(const ExperimentConfig& cfg) {
  // Seeds are keyed on the check, not its position in the list, so subsets
  // reproduce the rows of a full run.
  static const std::pair<std::string_view, FuzzSummary (*)(std::uint64_t, std::uint64_t)> fuzzers[] = {
      {"ntz", fuzz_ntz}, {"matrix_power", fuzz_matrix_power}, {"lemma64", fuzz_lemma64}, {"cosine_sum", fuzz_cosine_sum}};
  const auto& checks = cfg.run.checks;
  return parallel_rows(checks.size(), thread_count(cfg, checks.size()), [&](std::size_t i) {
    std::uint64_t offset = 0;
    for (; offset < std::size(fuzzers); ++offset) {
      if (fuzzers[offset].first == checks[i]) break;
    }
    const FuzzSummary f = fuzzers[offset].second(static_cast<std::uint64_t>(cfg.run.samples), cfg.seed + offset);
    Csv csv;
    csv.field(f.check).field(f.samples).field(f.violations).field(f.min_slack).field(f.min_ratio);
    csv.end_row();
    return csv.take();
  });
}

double sweep_value(const ExperimentConfig& cfg, const JacobiSequence& seq, double x0) {
  const Index N = static_cast<Index>(cfg.run.N);
  const std::string& d = cfg.run.diagnostic;
  if (d == "growth_test") return growth_test(seq, x0, N);
  if (d == "lyapunov") return lyapunov_estimate(seq, x0, N).gamma_hat;
  if (d == "nevai_ratio") {
    OrthoStream s(seq, x0);
    return s.advance_to(N).nevai_ratio();
  }
  const Block c = seq.block_layout()->block(BlockKind::C, static_cast<int>(cfg.run.block_j));
  return block_log_slope(seq, x0, c);
}

std::string run_sweep(const ExperimentConfig& cfg, const JacobiSequence& seq) {
  const std::vector<double> pts = cfg.sweep_points();
  return parallel_rows(pts.size(), thread_count(cfg, pts.size()), [&](std::size_t i) {
    Csv csv;
    csv.field(pts[i]).field(sweep_value(cfg, seq, pts[i]));
    csv.end_row();
    return csv.take();
  });
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

std::string_view tool_version() { return NEVAI_CLI_VERSION; }

std::string csv_header(const ExperimentConfig& cfg) {
  switch (cfg.experiment) {
    case Experiment::eval:
    case Experiment::nevai: return "n,p_n,log_scale,K_n,r_n";
    case Experiment::lyapunov: return "x0,N,gamma_hat,last_window_slope";
    case Experiment::eta: return "k,value";
    case Experiment::spectrum: return "atom,weight";
    case Experiment::moments: return "k,value";
    case Experiment::green: return "index,re,im,residual";
    case Experiment::prufer: return "n,R,theta,k,X,partial_sum";
    case Experiment::bounds: return "check,samples,violations,min_slack,min_ratio";
    case Experiment::sweep: return "x0," + cfg.run.diagnostic;
  }
  return {};
}

std::string run(const ExperimentConfig& cfg) {
  validate(cfg);
  const std::string effective = to_toml(cfg);

  std::string body;
  if (cfg.experiment == Experiment::bounds) {
    body = run_bounds(cfg);
  } else {
    const JacobiSequence seq = build_model(cfg.model, cfg.seed);
    switch (cfg.experiment) {
      case Experiment::eval:
      case Experiment::nevai: body = run_recurrence(cfg, seq); break;
      case Experiment::lyapunov: body = run_lyapunov(cfg, seq); break;
      case Experiment::eta: body = run_eta(cfg, seq); break;
      case Experiment::spectrum: body = run_spectrum(cfg, seq); break;
      case Experiment::moments: body = run_moments(cfg, seq); break;
      case Experiment::green: body = run_green(cfg, seq); break;
      case Experiment::prufer: body = run_prufer(cfg, seq); break;
      case Experiment::sweep: body = run_sweep(cfg, seq); break;
      case Experiment::bounds: break;
    }
  }

  std::ostringstream os;
  os << "# " << kToolName << ' ' << tool_version() << '\n';
  os << "# experiment: " << to_string(cfg.experiment) << '\n';
  os << "# config_hash: fnv1a64:" << hex64(fnv1a64(effective)) << '\n';
  os << "# seed: " << cfg.seed << '\n';
  std::istringstream lines(effective);
  for (std::string line; std::getline(lines, line);) os << (line.empty() ? "#|" : "#| ") << line << '\n';
  os << csv_header(cfg) << '\n' << body;
  return os.str();
}

int exit_status(const std::exception& err) {
  if (dynamic_cast<const ConfigError*>(&err)) return 2;
  if (dynamic_cast<const ConvergenceError*>(&err)) return 4;
  if (dynamic_cast<const DomainError*>(&err) || dynamic_cast<const ConditioningError*>(&err)) return 3;
  return 1;
}

ExperimentConfig config_from_artifact(std::string_view csv) {
  std::string toml;
  std::optional<Experiment> experiment;
  std::istringstream in{std::string(csv)};
  for (std::string line; std::getline(in, line);) {
    if (line.starts_with("#| ")) {
      toml += line.substr(3);
      toml += '\n';
    } else if (line == "#|") {
      toml += '\n';
    } else if (line.starts_with("# experiment: ")) {
      experiment = parse_experiment(line.substr(14));
    } else if (!line.starts_with('#')) {
      break;
    }
  }
  if (!experiment) throw ConfigError("artifact has no '# experiment:' line");
  return parse_config(toml, *experiment, "<artifact>");
}

}  // namespace nevai::cli
