#include "nevai_cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <toml.hpp>

namespace nevai::cli {

namespace {

constexpr std::pair<Experiment, std::string_view> kNames[] = {
    {Experiment::eval, "eval"},         {Experiment::nevai, "nevai"},   {Experiment::lyapunov, "lyapunov"},
    {Experiment::eta, "eta"},           {Experiment::spectrum, "spectrum"}, {Experiment::moments, "moments"},
    {Experiment::green, "green"},       {Experiment::prufer, "prufer"}, {Experiment::bounds, "bounds"},
    {Experiment::sweep, "sweep"},
};

const std::set<std::string, std::less<>> kChecks{"ntz", "matrix_power", "lemma64", "cosine_sum"};
const std::set<std::string, std::less<>> kDiagnostics{"growth_test", "lyapunov", "nevai_ratio", "block_slope"};

std::set<std::string, std::less<>> run_keys(Experiment e) {
  switch (e) {
    case Experiment::eval:
    case Experiment::nevai: return {"x0", "N", "stride"};
    case Experiment::lyapunov: return {"x0", "N", "windows"};
    case Experiment::eta: return {"x0", "n", "k_max", "center"};
    case Experiment::spectrum: return {"m", "coordinate"};
    case Experiment::moments: return {"m", "coordinate", "K"};
    case Experiment::green: return {"N", "z", "column", "rows"};
    case Experiment::prufer: return {"x0", "N", "theta0", "stride"};
    case Experiment::bounds: return {"samples", "checks"};
    case Experiment::sweep: return {"diagnostic", "N", "x0", "grid", "block_j"};
  }
  return {};
}

std::set<std::string, std::less<>> model_keys(std::string_view kind) {
  if (kind == "free") return {"kind"};
  if (kind == "constant") return {"kind", "a", "b"};
  if (kind == "szwarc") return {"kind", "beta"};
  if (kind == "anderson") return {"kind", "seed"};
  if (kind == "fibonacci") return {"kind", "theta"};
  if (kind == "periodic") return {"kind", "a", "b", "perturb_a", "perturb_b"};
  if (kind == "block41" || kind == "block51") return {"kind", "growth"};
  return {};
}

class Reader {
 public:
  explicit Reader(std::string_view source) : source_(source) {}

  [[noreturn]] void fail(const toml::source_region& where, const std::string& msg) const {
    std::ostringstream os;
    os << source_ << ':' << where.begin.line << ':' << where.begin.column << ": " << msg;
    throw ConfigError(os.str());
  }

  void reject_unknown(const toml::table& tbl, const std::set<std::string, std::less<>>& allowed,
                      const std::string& where) const {
    for (auto&& [key, node] : tbl) {
      if (!allowed.contains(key.str())) {
        fail(key.source(), "unknown key '" + std::string(key.str()) + "' in " + where);
      }
    }
  }

  double number(const toml::node& node, const std::string& field) const {
    if (auto v = node.value<double>(); v && node.is_number()) return *v;
    fail(node.source(), "field '" + field + "' must be a number");
  }

  std::int64_t integer(const toml::node& node, const std::string& field) const {
    if (auto v = node.as_integer()) return v->get();
    fail(node.source(), "field '" + field + "' must be an integer");
  }

  std::uint64_t unsigned_integer(const toml::node& node, const std::string& field) const {
    const std::int64_t v = integer(node, field);
    if (v < 0) fail(node.source(), "field '" + field + "' must be non-negative");
    return static_cast<std::uint64_t>(v);
  }

  std::string string(const toml::node& node, const std::string& field) const {
    if (auto v = node.as_string()) return v->get();
    fail(node.source(), "field '" + field + "' must be a string");
  }

  const toml::table& table(const toml::node& node, const std::string& field) const {
    if (auto t = node.as_table()) return *t;
    fail(node.source(), "field '" + field + "' must be a table");
  }

  std::vector<double> numbers(const toml::node& node, const std::string& field) const {
    const auto* arr = node.as_array();
    if (!arr) fail(node.source(), "field '" + field + "' must be an array of numbers");
    std::vector<double> out;
    for (const toml::node& v : *arr) out.push_back(number(v, field));
    return out;
  }

  std::vector<std::int64_t> integers(const toml::node& node, const std::string& field) const {
    const auto* arr = node.as_array();
    if (!arr) fail(node.source(), "field '" + field + "' must be an array of integers");
    std::vector<std::int64_t> out;
    for (const toml::node& v : *arr) out.push_back(integer(v, field));
    return out;
  }

  std::vector<std::string> strings(const toml::node& node, const std::string& field) const {
    const auto* arr = node.as_array();
    if (!arr) fail(node.source(), "field '" + field + "' must be an array of strings");
    std::vector<std::string> out;
    for (const toml::node& v : *arr) out.push_back(string(v, field));
    return out;
  }

 private:
  std::string source_;
};

void read_growth(const Reader& rd, const toml::node& node, bool five_one, GrowthSpec& g) {
  if (node.is_string()) {
    g.type = rd.string(node, "model.growth");
    if (g.type != "default") rd.fail(node.source(), "model.growth must be \"default\" or a table");
    return;
  }
  const toml::table& t = rd.table(node, "model.growth");
  const toml::node* type = t.get("type");
  if (!type) rd.fail(node.source(), "model.growth table needs a 'type' (power | table)");
  g.type = rd.string(*type, "model.growth.type");
  if (g.type == "power") {
    std::set<std::string, std::less<>> keys{"type", "a_base", "c_base", "exponent"};
    if (five_one) keys.insert("b_exponent");
    rd.reject_unknown(t, keys, "[model.growth]");
    if (auto* v = t.get("a_base")) g.a_base = rd.integer(*v, "model.growth.a_base");
    if (auto* v = t.get("c_base")) g.c_base = rd.integer(*v, "model.growth.c_base");
    if (auto* v = t.get("exponent")) g.exponent = rd.integer(*v, "model.growth.exponent");
    if (auto* v = t.get("b_exponent")) g.b_exponent = rd.integer(*v, "model.growth.b_exponent");
  } else if (g.type == "table") {
    std::set<std::string, std::less<>> keys{"type", "a", "c"};
    if (five_one) keys.insert("b");
    rd.reject_unknown(t, keys, "[model.growth]");
    for (const char* k : {"a", "c"}) {
      if (!t.get(k)) rd.fail(node.source(), std::string("model.growth table needs '") + k + "'");
    }
    g.a = rd.integers(*t.get("a"), "model.growth.a");
    g.c = rd.integers(*t.get("c"), "model.growth.c");
    if (five_one) {
      if (!t.get("b")) rd.fail(node.source(), "model.growth table needs 'b'");
      g.b = rd.integers(*t.get("b"), "model.growth.b");
    }
  } else {
    rd.fail(type->source(), "model.growth.type must be \"power\" or \"table\"");
  }
}

std::optional<DecaySpec> read_decay(const Reader& rd, const toml::node& node, const std::string& field) {
  const toml::table& t = rd.table(node, field);
  rd.reject_unknown(t, {"amplitude", "exponent"}, "[" + field + "]");
  DecaySpec d;
  if (auto* v = t.get("amplitude")) d.amplitude = rd.number(*v, field + ".amplitude");
  if (auto* v = t.get("exponent")) d.exponent = rd.number(*v, field + ".exponent");
  return d;
}

void read_model(const Reader& rd, const toml::table& t, ModelSpec& m) {
  if (auto* k = t.get("kind")) {
    m.kind = rd.string(*k, "model.kind");
    if (model_keys(m.kind).empty()) rd.fail(k->source(), "unknown model kind '" + m.kind + "'");
  }
  rd.reject_unknown(t, model_keys(m.kind), "[model] for kind '" + m.kind + "'");
  if (m.kind == "constant") {
    if (auto* v = t.get("a")) m.a = rd.number(*v, "model.a");
    if (auto* v = t.get("b")) m.b = rd.number(*v, "model.b");
  } else if (m.kind == "szwarc") {
    if (auto* v = t.get("beta")) m.beta = rd.number(*v, "model.beta");
  } else if (m.kind == "anderson") {
    if (auto* v = t.get("seed")) m.seed = rd.unsigned_integer(*v, "model.seed");
  } else if (m.kind == "fibonacci") {
    if (auto* v = t.get("theta")) m.theta = rd.number(*v, "model.theta");
  } else if (m.kind == "periodic") {
    if (auto* v = t.get("a")) m.a_list = rd.numbers(*v, "model.a");
    if (auto* v = t.get("b")) m.b_list = rd.numbers(*v, "model.b");
    if (auto* v = t.get("perturb_a")) m.perturb_a = read_decay(rd, *v, "model.perturb_a");
    if (auto* v = t.get("perturb_b")) m.perturb_b = read_decay(rd, *v, "model.perturb_b");
  } else if (m.kind == "block41" || m.kind == "block51") {
    if (auto* v = t.get("growth")) read_growth(rd, *v, m.kind == "block51", m.growth);
  }
}

void read_run(const Reader& rd, const toml::table& t, Experiment e, RunSpec& r) {
  rd.reject_unknown(t, run_keys(e), "[run] for experiment '" + std::string(to_string(e)) + "'");
  auto num = [&](const char* key, double& out) {
    if (auto* v = t.get(key)) out = rd.number(*v, std::string("run.") + key);
  };
  auto integer = [&](const char* key, std::int64_t& out) {
    if (auto* v = t.get(key)) out = rd.integer(*v, std::string("run.") + key);
  };
  integer("N", r.N);
  integer("stride", r.stride);
  integer("windows", r.windows);
  integer("n", r.n);
  integer("k_max", r.k_max);
  integer("m", r.m);
  integer("coordinate", r.coordinate);
  integer("K", r.K);
  integer("column", r.column);
  integer("rows", r.rows);
  integer("samples", r.samples);
  integer("block_j", r.block_j);
  num("theta0", r.theta0);
  if (auto* v = t.get("center")) r.center = rd.number(*v, "run.center");
  if (auto* v = t.get("z")) {
    const std::vector<double> z = rd.numbers(*v, "run.z");
    if (z.size() != 2) rd.fail(v->source(), "field 'run.z' must be [re, im]");
    r.z_re = z[0];
    r.z_im = z[1];
  }
  if (auto* v = t.get("checks")) {
    r.checks = rd.strings(*v, "run.checks");
    for (const std::string& c : r.checks) {
      if (!kChecks.contains(c)) rd.fail(v->source(), "unknown check '" + c + "' in run.checks");
    }
  }
  if (auto* v = t.get("diagnostic")) {
    r.diagnostic = rd.string(*v, "run.diagnostic");
    if (!kDiagnostics.contains(r.diagnostic)) rd.fail(v->source(), "unknown diagnostic '" + r.diagnostic + "'");
  }
  if (auto* v = t.get("x0")) {
    if (e == Experiment::sweep) {
      r.x0_list = rd.numbers(*v, "run.x0");
    } else {
      r.x0 = rd.number(*v, "run.x0");
    }
  }
  if (auto* v = t.get("grid")) {
    const toml::table& g = rd.table(*v, "run.grid");
    rd.reject_unknown(g, {"start", "stop", "count"}, "[run.grid]");
    GridSpec spec;
    for (const char* k : {"start", "stop", "count"}) {
      if (!g.get(k)) rd.fail(v->source(), std::string("run.grid needs '") + k + "'");
    }
    spec.start = rd.number(*g.get("start"), "run.grid.start");
    spec.stop = rd.number(*g.get("stop"), "run.grid.stop");
    spec.count = rd.integer(*g.get("count"), "run.grid.count");
    r.grid = spec;
  }
  if (e == Experiment::sweep && t.get("x0") && t.get("grid")) {
    rd.fail(t.get("grid")->source(), "run.x0 and run.grid are mutually exclusive");
  }
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError("invalid config: " + msg);
}

toml::array to_array(const auto& values) {
  toml::array arr;
  for (const auto& v : values) arr.push_back(v);
  return arr;
}

}  // namespace

std::string_view to_string(Experiment e) {
  for (const auto& [k, name] : kNames) {
    if (k == e) return name;
  }
  return "unknown";
}

std::optional<Experiment> parse_experiment(std::string_view name) {
  for (const auto& [k, n] : kNames) {
    if (n == name) return k;
  }
  return std::nullopt;
}

const std::vector<Experiment>& all_experiments() {
  static const std::vector<Experiment> all = [] {
    std::vector<Experiment> v;
    for (const auto& [k, n] : kNames) v.push_back(k);
    return v;
  }();
  return all;
}

std::vector<double> ExperimentConfig::sweep_points() const {
  if (!run.grid) return run.x0_list;
  const GridSpec& g = *run.grid;
  std::vector<double> pts;
  if (g.count == 1) return {g.start};
  for (std::int64_t i = 0; i < g.count; ++i) {
    pts.push_back(g.start + (g.stop - g.start) * static_cast<double>(i) / static_cast<double>(g.count - 1));
  }
  return pts;
}

ExperimentConfig default_config(Experiment experiment) {
  ExperimentConfig cfg;
  cfg.experiment = experiment;
  return cfg;
}

ExperimentConfig parse_config(std::string_view text, Experiment experiment, std::string_view source) {
  toml::table root;
  try {
    root = toml::parse(text, source);
  } catch (const toml::parse_error& err) {
    std::ostringstream os;
    os << source << ':' << err.source().begin.line << ':' << err.source().begin.column << ": "
       << err.description();
    throw ConfigError(os.str());
  }
  const Reader rd(source);
  rd.reject_unknown(root, {"experiment", "seed", "threads", "output", "model", "run"}, "the top level");

  ExperimentConfig cfg = default_config(experiment);
  if (auto* v = root.get("experiment")) {
    const std::string name = rd.string(*v, "experiment");
    const auto parsed = parse_experiment(name);
    if (!parsed) rd.fail(v->source(), "unknown experiment '" + name + "'");
    if (*parsed != experiment) {
      rd.fail(v->source(), "config is for experiment '" + name + "' but the subcommand is '" +
                               std::string(to_string(experiment)) + "'");
    }
  }
  if (auto* v = root.get("seed")) cfg.seed = rd.unsigned_integer(*v, "seed");
  if (auto* v = root.get("threads")) cfg.threads = static_cast<unsigned>(rd.unsigned_integer(*v, "threads"));
  if (auto* v = root.get("output")) cfg.output = rd.string(*v, "output");
  if (auto* v = root.get("model")) read_model(rd, rd.table(*v, "model"), cfg.model);
  if (auto* v = root.get("run")) read_run(rd, rd.table(*v, "run"), experiment, cfg.run);
  validate(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path, Experiment experiment) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), experiment, path.string());
}

void validate(const ExperimentConfig& cfg) {
  const ModelSpec& m = cfg.model;
  if (m.kind == "constant") require(m.a > 0.0 && std::isfinite(m.a) && std::isfinite(m.b), "model.a must be > 0");
  if (m.kind == "fibonacci") require(m.theta >= 0.0 && m.theta < 1.0, "model.theta must lie in [0, 1)");
  if (m.kind == "szwarc") require(std::isfinite(m.beta), "model.beta must be finite");
  if (m.kind == "periodic") {
    require(!m.a_list.empty() && m.a_list.size() == m.b_list.size(), "model.a and model.b need equal nonzero length");
    for (double a : m.a_list) require(a > 0.0, "model.a entries must be > 0");
    for (const auto& d : {m.perturb_a, m.perturb_b}) {
      if (d) require(d->exponent > 0.0, "perturbation exponents must be > 0");
    }
  }
  if (m.kind == "block41" || m.kind == "block51") {
    const GrowthSpec& g = m.growth;
    if (g.type == "power") {
      require(g.a_base >= 1 && g.c_base >= 1 && g.exponent >= 1, "growth bases and exponent must be >= 1");
      require(g.b_exponent >= 0, "growth.b_exponent must be >= 0");
    }
    if (g.type == "table") {
      require(!g.a.empty() && !g.c.empty(), "growth tables must be nonempty");
      for (auto v : g.a) require(v >= 1, "growth.a entries must be >= 1");
      for (auto v : g.c) require(v >= 1, "growth.c entries must be >= 1");
      if (m.kind == "block51") {
        require(!g.b.empty(), "growth.b must be nonempty");
        for (auto v : g.b) require(v >= 0, "growth.b entries must be >= 0");
      }
    }
  }

  const RunSpec& r = cfg.run;
  require(std::isfinite(r.x0), "run.x0 must be finite");
  switch (cfg.experiment) {
    case Experiment::eval:
    case Experiment::nevai:
    case Experiment::prufer:
      require(r.N >= 1, "run.N must be >= 1");
      require(r.stride >= 1, "run.stride must be >= 1");
      break;
    case Experiment::lyapunov:
      require(r.N >= 1000, "run.N must be >= 1000");
      require(r.windows >= 1, "run.windows must be >= 1");
      break;
    case Experiment::eta:
      require(r.n >= 0, "run.n must be >= 0");
      require(r.k_max >= 0 && r.k_max <= 30, "run.k_max must lie in [0, 30]");
      break;
    case Experiment::spectrum:
    case Experiment::moments:
      require(r.m >= 1, "run.m must be >= 1");
      require(r.coordinate >= 1 && r.coordinate <= r.m, "run.coordinate must lie in [1, m]");
      require(r.K >= 1, "run.K must be >= 1");
      break;
    case Experiment::green:
      require(r.N >= 1, "run.N must be >= 1");
      require(r.z_im > 0.0, "run.z must have a positive imaginary part");
      require(r.column >= 1 && r.column <= r.N, "run.column must lie in [1, N]");
      require(r.rows >= 0 && r.rows <= r.N, "run.rows must lie in [0, N]");
      break;
    case Experiment::bounds:
      require(r.samples >= 1, "run.samples must be >= 1");
      require(!r.checks.empty(), "run.checks must be nonempty");
      break;
    case Experiment::sweep: {
      require(r.N >= 1000 || r.diagnostic == "nevai_ratio" || r.diagnostic == "block_slope",
              "run.N must be >= 1000 for this diagnostic");
      require(r.N >= 1, "run.N must be >= 1");
      if (r.grid) {
        require(r.grid->count >= 1, "run.grid.count must be >= 1");
        require(r.grid->count == 1 || r.grid->start < r.grid->stop, "run.grid needs start < stop");
      }
      const std::vector<double> pts = cfg.sweep_points();
      require(!pts.empty(), "sweep needs run.x0 = [...] or run.grid");
      for (std::size_t i = 1; i < pts.size(); ++i) require(pts[i - 1] < pts[i], "sweep grid must be strictly increasing");
      if (r.diagnostic == "block_slope") {
        require(m.kind == "block41" || m.kind == "block51", "block_slope needs a block model");
        require(r.block_j >= 1, "run.block_j must be >= 1");
      }
      break;
    }
  }
}

std::string to_toml(const ExperimentConfig& cfg) {
  toml::table root;
  root.insert("experiment", std::string(to_string(cfg.experiment)));
  root.insert("seed", static_cast<std::int64_t>(cfg.seed));

  const ModelSpec& m = cfg.model;
  toml::table model;
  model.insert("kind", m.kind);
  if (m.kind == "constant") {
    model.insert("a", m.a);
    model.insert("b", m.b);
  } else if (m.kind == "szwarc") {
    model.insert("beta", m.beta);
  } else if (m.kind == "anderson") {
    model.insert("seed", static_cast<std::int64_t>(m.seed.value_or(cfg.seed)));
  } else if (m.kind == "fibonacci") {
    model.insert("theta", m.theta);
  } else if (m.kind == "periodic") {
    model.insert("a", to_array(m.a_list));
    model.insert("b", to_array(m.b_list));
    auto decay = [](const DecaySpec& d) { return toml::table{{"amplitude", d.amplitude}, {"exponent", d.exponent}}; };
    if (m.perturb_a) model.insert("perturb_a", decay(*m.perturb_a));
    if (m.perturb_b) model.insert("perturb_b", decay(*m.perturb_b));
  } else if (m.kind == "block41" || m.kind == "block51") {
    const GrowthSpec& g = m.growth;
    const bool five_one = m.kind == "block51";
    if (g.type == "default") {
      model.insert("growth", "default");
    } else if (g.type == "power") {
      toml::table t{{"type", "power"}, {"a_base", g.a_base}, {"c_base", g.c_base}, {"exponent", g.exponent}};
      if (five_one) t.insert("b_exponent", g.b_exponent);
      model.insert("growth", std::move(t));
    } else {
      toml::table t{{"type", "table"}, {"a", to_array(g.a)}, {"c", to_array(g.c)}};
      if (five_one) t.insert("b", to_array(g.b));
      model.insert("growth", std::move(t));
    }
  }
  root.insert("model", std::move(model));

  const RunSpec& r = cfg.run;
  toml::table run;
  for (const std::string& key : run_keys(cfg.experiment)) {
    if (key == "x0") {
      if (cfg.experiment == Experiment::sweep) {
        if (!r.grid) run.insert("x0", to_array(r.x0_list));
      } else {
        run.insert("x0", r.x0);
      }
    } else if (key == "grid") {
      if (r.grid) run.insert("grid", toml::table{{"start", r.grid->start}, {"stop", r.grid->stop}, {"count", r.grid->count}});
    } else if (key == "center") {
      if (r.center) run.insert("center", *r.center);
    } else if (key == "z") {
      run.insert("z", toml::array{r.z_re, r.z_im});
    } else if (key == "checks") {
      run.insert("checks", to_array(r.checks));
    } else if (key == "diagnostic") {
      run.insert("diagnostic", r.diagnostic);
    } else if (key == "theta0") {
      run.insert("theta0", r.theta0);
    } else if (key == "block_j") {
      if (r.diagnostic == "block_slope") run.insert("block_j", r.block_j);
    } else {
      const std::pair<const char*, std::int64_t> ints[] = {
          {"N", r.N},         {"stride", r.stride}, {"windows", r.windows}, {"n", r.n},       {"k_max", r.k_max},
          {"m", r.m},         {"coordinate", r.coordinate}, {"K", r.K},   {"column", r.column}, {"rows", r.rows},
          {"samples", r.samples},
      };
      for (const auto& [name, value] : ints) {
        if (key == name) run.insert(name, value);
      }
    }
  }
  root.insert("run", std::move(run));

  std::ostringstream os;
  os << root << '\n';
  return os.str();
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

JacobiSequence build_model(const ModelSpec& m, std::uint64_t run_seed) {
  if (m.kind == "free") return make_free();
  if (m.kind == "constant") return make_constant(m.a, m.b);
  if (m.kind == "szwarc") return make_szwarc(m.beta);
  if (m.kind == "anderson") return make_anderson(m.seed.value_or(run_seed));
  if (m.kind == "fibonacci") return make_fibonacci(m.theta);
  if (m.kind == "periodic") {
    Perturbation p;
    if (m.perturb_a) p.on_a = PowerDecay{m.perturb_a->amplitude, m.perturb_a->exponent};
    if (m.perturb_b) p.on_b = PowerDecay{m.perturb_b->amplitude, m.perturb_b->exponent};
    return make_periodic(m.a_list, m.b_list, p);
  }
  const GrowthSpec g = m.growth;
  auto pick = [](const std::vector<std::int64_t>& v, int j) {
    return static_cast<Index>(v[std::min<std::size_t>(static_cast<std::size_t>(j - 1), v.size() - 1)]);
  };
  auto power = [](std::int64_t base, std::int64_t exponent, int j) {
    return saturating_pow(static_cast<Index>(base), saturating_pow(static_cast<Index>(j), static_cast<Index>(exponent)));
  };
  if (m.kind == "block41") {
    if (g.type == "default") return make_block41();
    if (g.type == "power") {
      return make_block41([g, power](int j) { return BlockSizes41{power(g.a_base, g.exponent, j), power(g.c_base, g.exponent, j)}; });
    }
    return make_block41([g, pick](int j) { return BlockSizes41{pick(g.a, j), pick(g.c, j)}; });
  }
  if (m.kind == "block51") {
    if (g.type == "default") return make_block51();
    if (g.type == "power") {
      return make_block51([g, power](int j) {
        return BlockSizes51{power(g.a_base, g.exponent, j), power(g.c_base, g.exponent, j),
                            saturating_pow(static_cast<Index>(j), static_cast<Index>(g.b_exponent)) - 1};
      });
    }
    return make_block51([g, pick](int j) { return BlockSizes51{pick(g.a, j), pick(g.c, j), pick(g.b, j)}; });
  }
  throw ConfigError("unknown model kind '" + m.kind + "'");
}

}  // namespace nevai::cli
