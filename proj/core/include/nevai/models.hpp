#pragma once

// Jacobi parameter generators.
//
// Every model is a JacobiSequence: a value type answering params_at(n) for
// n >= 1 with the convention
//
//     x p_n(x) = a_{n+1} p_{n+1}(x) + b_{n+1} p_n(x) + a_n p_{n-1}(x),
//
// so a_n couples sites n and n+1 of the Jacobi matrix and b_n sits on the
// diagonal at site n. Sequences are immutable once built and may be shared
// freely between threads.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace nevai {

using Index = std::uint64_t;

struct JacobiParams {
  double a;
  double b;

  friend bool operator==(const JacobiParams&, const JacobiParams&) = default;
};

/// Declared uniform bounds: A_minus <= a_n <= A_plus, |b_n| <= B_plus.
struct SequenceBounds {
  double a_minus;
  double a_plus;
  double b_plus;
};

enum class ModelKind { constant, szwarc, anderson, block41, block51, fibonacci, periodic };

std::string to_string(ModelKind kind);

// ---------------------------------------------------------------------------
// Block layouts (A_1, [B_1,] C_1, [D_1,] A_2, ...)

enum class BlockKind { A, B, C, D };

char to_char(BlockKind kind);

struct Block {
  BlockKind kind;
  int j;        // 1-based generation
  Index first;  // first index in the block
  Index last;   // last index in the block (first - 1 for an empty block)

  Index size() const { return last + 1 - first; }
  bool contains(Index n) const { return n >= first && n <= last; }
  /// Midpoint, or one half unit before it for even sizes.
  Index center() const { return first + (size() - 1) / 2; }
};

struct BlockSizes41 {
  Index a;
  Index c;
};

struct BlockSizes51 {
  Index a;
  Index c;
  Index b;  // #B_j == #D_j, may be zero
};

using Growth41 = std::function<BlockSizes41(int j)>;
using Growth51 = std::function<BlockSizes51(int j)>;

/// (3^{j^2}, 2^{j^2}), saturating at the largest representable index.
Growth41 default_growth41();
/// (3^{j^2}, 2^{j^2}, j^6 - 1).
Growth51 default_growth51();

/// Saturating integer power used by the growth helpers.
Index saturating_pow(Index base, Index exponent);

class BlockLayout;

// ---------------------------------------------------------------------------

struct PowerDecay {
  double amplitude = 0.0;
  double exponent = 1.0;  // amplitude * n^{-exponent}

  double operator()(Index n) const;
};

/// Decaying perturbation of a periodic base: b_n += on_b(n), a_n *= 1 + on_a(n).
struct Perturbation {
  std::optional<PowerDecay> on_a;
  std::optional<PowerDecay> on_b;
};

class JacobiSequence {
 public:
  struct Constant {
    double a;
    double b;
  };
  struct Szwarc {
    double beta;
  };
  struct Anderson {
    std::uint64_t seed;
  };
  struct Fibonacci {
    double theta;
  };
  struct Periodic {
    std::vector<double> a;
    std::vector<double> b;
    Perturbation perturbation;
  };
  struct Blocks {
    std::shared_ptr<const BlockLayout> layout;
  };

  using Model = std::variant<Constant, Szwarc, Anderson, Fibonacci, Periodic, Blocks>;

  JacobiSequence(Model model, SequenceBounds bounds);

  /// Parameters (a_n, b_n); n must be >= 1.
  JacobiParams params_at(Index n) const;
  double a(Index n) const { return params_at(n).a; }
  double b(Index n) const { return params_at(n).b; }

  ModelKind kind() const;
  const SequenceBounds& bounds() const { return bounds_; }
  const Model& model() const { return model_; }

  /// Block structure for block41 / block51 models, nullptr otherwise.
  const BlockLayout* block_layout() const;

  /// Short human readable description, e.g. "szwarc(beta=0.7)".
  std::string describe() const;

 private:
  Model model_;
  SequenceBounds bounds_;
};

JacobiSequence make_free();
JacobiSequence make_constant(double a, double b);
JacobiSequence make_szwarc(double beta);
JacobiSequence make_anderson(std::uint64_t seed);
JacobiSequence make_block41(Growth41 growth = default_growth41());
JacobiSequence make_block51(Growth51 growth = default_growth51());
JacobiSequence make_fibonacci(double theta);
JacobiSequence make_periodic(std::vector<double> a_list, std::vector<double> b_list,
                             Perturbation perturbation = {});

/// The uniform [0,1) variate behind make_anderson, keyed on (seed, n).
double counter_uniform(std::uint64_t seed, Index n);

/// Golden mean (sqrt 5 - 1)/2 used by the Fibonacci model.
inline constexpr double kGoldenAlpha = 0.6180339887498948482;

// ---------------------------------------------------------------------------

/// Prefix-sum table of block boundaries. Blocks are generated eagerly up to
/// an index cap; indices past the cap are resolved by walking the growth
/// function from the last tabulated block.
class BlockLayout {
 public:
  enum class Scheme { four_one, five_one };

  static std::shared_ptr<const BlockLayout> make41(Growth41 growth);
  static std::shared_ptr<const BlockLayout> make51(Growth51 growth);

  Scheme scheme() const { return scheme_; }

  /// Block containing index n (n >= 1). Empty blocks are never returned.
  Block block_of(Index n) const;
  /// Block of the given kind and generation (may be empty for B/D).
  Block block(BlockKind kind, int j) const;

  double a_at(Index n) const;
  /// Interpolation ratio c_j with c_j^{#B_j + 1} = 1/4 (five_one only).
  double ratio(int j) const;

 private:
  struct Generation {
    Index a, b, c, d;  // sizes
    Index start;       // first index of A_j
    double ratio;      // c_j
  };

  BlockLayout(Scheme scheme, std::function<Generation(int)> sizes);
  Generation generation(int j) const;
  Block block_in(const Generation& g, int j, BlockKind kind) const;
  Block locate(const Generation& g, int j, Index n) const;

  Scheme scheme_;
  std::function<Generation(int)> sizes_;
  std::vector<Generation> table_;
};

}  // namespace nevai
