#include "nevai/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "nevai/errors.hpp"

namespace nevai {

namespace {

constexpr Index kIndexMax = std::numeric_limits<Index>::max();
// Tabulate generations until the next A-block would start past this index.
constexpr Index kTableIndexCap = Index{1} << 62;
constexpr std::size_t kTableGenerationCap = 1 << 16;

Index sat_add(Index x, Index y) { return (x > kIndexMax - y) ? kIndexMax : x + y; }

Index sat_mul(Index x, Index y) {
  if (x != 0 && y > kIndexMax / x) return kIndexMax;
  return x * y;
}

// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

bool is_square(Index n) {
  auto r = static_cast<Index>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r * r == n;
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::constant: return "constant";
    case ModelKind::szwarc: return "szwarc";
    case ModelKind::anderson: return "anderson";
    case ModelKind::block41: return "block41";
    case ModelKind::block51: return "block51";
    case ModelKind::fibonacci: return "fibonacci";
    case ModelKind::periodic: return "periodic";
  }
  return "unknown";
}

char to_char(BlockKind kind) {
  switch (kind) {
    case BlockKind::A: return 'A';
    case BlockKind::B: return 'B';
    case BlockKind::C: return 'C';
    case BlockKind::D: return 'D';
  }
  return '?';
}

Index saturating_pow(Index base, Index exponent) {
  Index result = 1;
  for (Index i = 0; i < exponent; ++i) {
    result = sat_mul(result, base);
    if (result == kIndexMax) break;
  }
  return result;
}

Growth41 default_growth41() {
  return [](int j) {
    const auto jj = static_cast<Index>(j) * static_cast<Index>(j);
    return BlockSizes41{saturating_pow(3, jj), saturating_pow(2, jj)};
  };
}

Growth51 default_growth51() {
  return [](int j) {
    const auto jj = static_cast<Index>(j) * static_cast<Index>(j);
    return BlockSizes51{saturating_pow(3, jj), saturating_pow(2, jj),
                        saturating_pow(static_cast<Index>(j), 6) - 1};
  };
}

double PowerDecay::operator()(Index n) const {
  return amplitude * std::pow(static_cast<double>(n), -exponent);
}

double counter_uniform(std::uint64_t seed, Index n) {
  const std::uint64_t h = mix64(mix64(seed) ^ (n * 0xd1b54a32d192ed03ULL));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

// ---------------------------------------------------------------------------
// BlockLayout

BlockLayout::BlockLayout(Scheme scheme, std::function<Generation(int)> sizes)
    : scheme_(scheme), sizes_(std::move(sizes)) {
  Index start = 1;
  for (int j = 1; table_.size() < kTableGenerationCap; ++j) {
    Generation g = sizes_(j);
    g.start = start;
    table_.push_back(g);
    start = sat_add(sat_add(sat_add(sat_add(start, g.a), g.b), g.c), g.d);
    if (start > kTableIndexCap) break;
  }
}

std::shared_ptr<const BlockLayout> BlockLayout::make41(Growth41 growth) {
  if (!growth) throw DomainError("block41: empty growth function");
  auto sizes = [growth = std::move(growth)](int j) {
    const BlockSizes41 s = growth(j);
    if (s.a == 0 || s.c == 0) {
      throw DomainError("block41: growth function returned an empty block at j=" +
                        std::to_string(j));
    }
    return Generation{s.a, 0, s.c, 0, 0, 0.25};
  };
  return std::shared_ptr<const BlockLayout>(new BlockLayout(Scheme::four_one, sizes));
}

std::shared_ptr<const BlockLayout> BlockLayout::make51(Growth51 growth) {
  if (!growth) throw DomainError("block51: empty growth function");
  auto sizes = [growth = std::move(growth)](int j) {
    const BlockSizes51 s = growth(j);
    if (s.a == 0 || s.c == 0) {
      throw DomainError("block51: growth function returned an empty A or C block at j=" +
                        std::to_string(j));
    }
    if (s.b == kIndexMax) {
      throw DomainError("block51: interpolation block size overflows at j=" + std::to_string(j));
    }
    // c_j^{#B_j + 1} = 1/4 so that a^2 runs from 1 to 1/4 in #B_j + 1 equal ratios.
    const double ratio = std::pow(0.25, 1.0 / (static_cast<double>(s.b) + 1.0));
    return Generation{s.a, s.b, s.c, s.b, 0, ratio};
  };
  return std::shared_ptr<const BlockLayout>(new BlockLayout(Scheme::five_one, sizes));
}

BlockLayout::Generation BlockLayout::generation(int j) const {
  if (j < 1) throw DomainError("block generation must be >= 1");
  const auto idx = static_cast<std::size_t>(j - 1);
  if (idx < table_.size()) return table_[idx];
  Generation g = table_.back();
  for (auto k = table_.size(); k <= idx; ++k) {
    const Index next = sat_add(sat_add(sat_add(sat_add(g.start, g.a), g.b), g.c), g.d);
    g = sizes_(static_cast<int>(k + 1));
    g.start = next;
  }
  return g;
}

Block BlockLayout::block_in(const Generation& g, int j, BlockKind kind) const {
  Index first = g.start;
  const Index sizes[4] = {g.a, g.b, g.c, g.d};
  const int which = static_cast<int>(kind);
  for (int k = 0; k < which; ++k) first = sat_add(first, sizes[k]);
  const Index size = sizes[which];
  return Block{kind, j, first, size == 0 ? first - 1 : first + size - 1};
}

Block BlockLayout::locate(const Generation& g, int j, Index n) const {
  for (BlockKind kind : {BlockKind::A, BlockKind::B, BlockKind::C, BlockKind::D}) {
    const Block blk = block_in(g, j, kind);
    if (blk.size() != 0 && blk.contains(n)) return blk;
  }
  throw DomainError("block index arithmetic is inconsistent");
}

Block BlockLayout::block_of(Index n) const {
  if (n < 1) throw DomainError("block_of: index must be >= 1");
  // Last tabulated generation whose A-block starts at or before n.
  auto it = std::upper_bound(table_.begin(), table_.end(), n,
                             [](Index value, const Generation& g) { return value < g.start; });
  auto j = static_cast<int>(it - table_.begin());
  Generation g = table_[static_cast<std::size_t>(j - 1)];
  if (it == table_.end()) {
    for (;;) {
      const Index next = sat_add(sat_add(sat_add(sat_add(g.start, g.a), g.b), g.c), g.d);
      if (n < next || next == kIndexMax) break;
      ++j;
      g = sizes_(j);
      g.start = next;
    }
  }
  return locate(g, j, n);
}

Block BlockLayout::block(BlockKind kind, int j) const {
  if (scheme_ == Scheme::four_one && (kind == BlockKind::B || kind == BlockKind::D)) {
    throw DomainError("block41 layouts have no B or D blocks");
  }
  return block_in(generation(j), j, kind);
}

double BlockLayout::ratio(int j) const { return generation(j).ratio; }

double BlockLayout::a_at(Index n) const {
  const Block blk = block_of(n);
  switch (blk.kind) {
    case BlockKind::A: return 1.0;
    case BlockKind::C: return 0.5;
    case BlockKind::B: {
      // a_n^2 / a_{n-1}^2 = c_j, starting from a^2 = 1 on the last A site.
      const double c = ratio(blk.j);
      return std::pow(c, 0.5 * static_cast<double>(n - blk.first + 1));
    }
    case BlockKind::D: {
      // a_{n-1}^2 / a_n^2 = c_j, starting from a^2 = 1/4 on the last C site.
      const double c = ratio(blk.j);
      return 0.5 * std::pow(c, -0.5 * static_cast<double>(n - blk.first + 1));
    }
  }
  return 1.0;
}

// ---------------------------------------------------------------------------
// JacobiSequence

JacobiSequence::JacobiSequence(Model model, SequenceBounds bounds)
    : model_(std::move(model)), bounds_(bounds) {}

JacobiParams JacobiSequence::params_at(Index n) const {
  return std::visit(
      overloaded{
          [](const Constant& m) { return JacobiParams{m.a, m.b}; },
          [n](const Szwarc& m) {
            if (n == 1) return JacobiParams{1.0, m.beta};
            return JacobiParams{1.0, is_square(n) ? 1.5 : 0.0};
          },
          [n](const Anderson& m) {
            return JacobiParams{0.5, 2.0 * counter_uniform(m.seed, n) - 1.0};
          },
          [n](const Fibonacci& m) {
            const double t = static_cast<double>(n) * kGoldenAlpha + m.theta;
            const double frac = t - std::floor(t);
            return JacobiParams{1.0, frac >= 1.0 - kGoldenAlpha ? 1.0 : 0.0};
          },
          [n](const Periodic& m) {
            const auto r = static_cast<std::size_t>((n - 1) % m.a.size());
            double a = m.a[r];
            double b = m.b[r];
            if (m.perturbation.on_a) a *= 1.0 + (*m.perturbation.on_a)(n);
            if (m.perturbation.on_b) b += (*m.perturbation.on_b)(n);
            return JacobiParams{a, b};
          },
          [n](const Blocks& m) { return JacobiParams{m.layout->a_at(n), 0.0}; },
      },
      model_);
}

ModelKind JacobiSequence::kind() const {
  return std::visit(overloaded{
                        [](const Constant&) { return ModelKind::constant; },
                        [](const Szwarc&) { return ModelKind::szwarc; },
                        [](const Anderson&) { return ModelKind::anderson; },
                        [](const Fibonacci&) { return ModelKind::fibonacci; },
                        [](const Periodic&) { return ModelKind::periodic; },
                        [](const Blocks& m) {
                          return m.layout->scheme() == BlockLayout::Scheme::four_one
                                     ? ModelKind::block41
                                     : ModelKind::block51;
                        },
                    },
                    model_);
}

const BlockLayout* JacobiSequence::block_layout() const {
  if (const auto* blocks = std::get_if<Blocks>(&model_)) return blocks->layout.get();
  return nullptr;
}

std::string JacobiSequence::describe() const {
  std::ostringstream os;
  os.precision(17);
  std::visit(overloaded{
                 [&](const Constant& m) { os << "constant(a=" << m.a << ", b=" << m.b << ")"; },
                 [&](const Szwarc& m) { os << "szwarc(beta=" << m.beta << ")"; },
                 [&](const Anderson& m) { os << "anderson(seed=" << m.seed << ")"; },
                 [&](const Fibonacci& m) { os << "fibonacci(theta=" << m.theta << ")"; },
                 [&](const Periodic& m) { os << "periodic(period=" << m.a.size() << ")"; },
                 [&](const Blocks&) { os << to_string(kind()); },
             },
             model_);
  return os.str();
}

JacobiSequence make_constant(double a, double b) {
  if (!(a > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw DomainError("constant model requires a > 0 and finite b");
  }
  return JacobiSequence(JacobiSequence::Constant{a, b}, {a, a, std::abs(b)});
}

JacobiSequence make_free() { return make_constant(1.0, 0.0); }

JacobiSequence make_szwarc(double beta) {
  if (!std::isfinite(beta)) throw DomainError("szwarc: beta must be finite");
  return JacobiSequence(JacobiSequence::Szwarc{beta}, {1.0, 1.0, std::max(1.5, std::abs(beta))});
}

JacobiSequence make_anderson(std::uint64_t seed) {
  return JacobiSequence(JacobiSequence::Anderson{seed}, {0.5, 0.5, 1.0});
}

JacobiSequence make_block41(Growth41 growth) {
  return JacobiSequence(JacobiSequence::Blocks{BlockLayout::make41(std::move(growth))},
                        {0.5, 1.0, 0.0});
}

JacobiSequence make_block51(Growth51 growth) {
  return JacobiSequence(JacobiSequence::Blocks{BlockLayout::make51(std::move(growth))},
                        {0.5, 1.0, 0.0});
}

JacobiSequence make_fibonacci(double theta) {
  if (!(theta >= 0.0 && theta < 1.0)) throw DomainError("fibonacci: theta must lie in [0, 1)");
  return JacobiSequence(JacobiSequence::Fibonacci{theta}, {1.0, 1.0, 1.0});
}

JacobiSequence make_periodic(std::vector<double> a_list, std::vector<double> b_list,
                             Perturbation perturbation) {
  if (a_list.empty() || a_list.size() != b_list.size()) {
    throw DomainError("periodic: a and b lists must have equal positive length");
  }
  for (double a : a_list) {
    if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("periodic: a entries must be > 0");
  }
  for (double b : b_list) {
    if (!std::isfinite(b)) throw DomainError("periodic: b entries must be finite");
  }
  for (const auto* p : {&perturbation.on_a, &perturbation.on_b}) {
    if (*p && !((*p)->exponent > 0.0 && std::isfinite((*p)->amplitude))) {
      throw DomainError("periodic: perturbation must decay (exponent > 0)");
    }
  }
  const auto [a_lo, a_hi] = std::minmax_element(a_list.begin(), a_list.end());
  double b_max = 0.0;
  for (double b : b_list) b_max = std::max(b_max, std::abs(b));

  // |amplitude * n^{-exponent}| <= |amplitude| for n >= 1.
  const double da = perturbation.on_a ? std::abs(perturbation.on_a->amplitude) : 0.0;
  const double db = perturbation.on_b ? std::abs(perturbation.on_b->amplitude) : 0.0;
  if (da >= 1.0) throw DomainError("periodic: multiplicative perturbation must keep a_n > 0");
  SequenceBounds bounds{*a_lo * (1.0 - da), *a_hi * (1.0 + da), b_max + db};
  return JacobiSequence(
      JacobiSequence::Periodic{std::move(a_list), std::move(b_list), perturbation}, bounds);
}

}  // namespace nevai
