#pragma once

// Streaming evaluation of the orthonormal polynomials p_n(x0), the
// Christoffel-Darboux kernel, Christoffel functions and moments of the
// measures K_n(x, x0)^2 drho(x) / K_n(x0, x0).

#include <span>
#include <vector>

#include "nevai/models.hpp"

namespace nevai {

/// Signed sum kept as mantissa * e^{log_scale}, so terms spanning hundreds of
/// orders of magnitude can be accumulated without overflow.
class ScaledAccumulator {
 public:
  void add(double mantissa, double log_scale);

  double mantissa() const { return mantissa_; }
  double log_scale() const { return log_scale_; }
  /// log of the (positive) sum; -inf for an empty sum.
  double log() const;
  /// The sum itself; may overflow to +-inf.
  double value() const;

 private:
  double mantissa_ = 0.0;
  double log_scale_ = 0.0;
};

/// Recurrence state at index n: (p_{n-1}(x0), p_n(x0)) and K_n(x0, x0).
///
/// With rescaling on, the stored pair is e^{-s} times the true pair and is
/// renormalized whenever p_{n-1}^2 + p_n^2 leaves [1e-6, 1e6]. The kernel
/// diagonal is accumulated separately and never overflows.
class OrthoEval {
 public:
  static constexpr double kRescaleLow = 1e-6;
  static constexpr double kRescaleHigh = 1e6;

  explicit OrthoEval(bool rescale = true);

  Index index() const { return n_; }
  bool rescaling() const { return rescale_; }

  double p_scaled() const { return p_; }
  double p_prev_scaled() const { return p_prev_; }
  double log_scale() const { return log_scale_; }

  /// True values; these overflow once log|p_n| exceeds ~709.
  double p() const;
  double p_prev() const;
  double log_abs_p() const;
  /// log(p_{n-1}^2 + p_n^2).
  double log_pair_sq() const;

  double kernel() const { return kernel_.value(); }
  double log_kernel() const { return kernel_.log(); }
  /// K_n e^{-2s}, the kernel in the units of the stored pair.
  double kernel_scaled() const;
  /// p_n^2 / K_n, in [0, 1].
  double nevai_ratio() const;

  friend OrthoEval advance(const OrthoEval& state, double a_n, double a_next, double b_next,
                           double x0);

 private:
  Index n_ = 0;
  double p_prev_ = 0.0;
  double p_ = 1.0;
  double log_scale_ = 0.0;
  ScaledAccumulator kernel_;
  bool rescale_ = true;
};

/// One step p_n -> p_{n+1}:
///   p_{n+1} = ((x0 - b_{n+1}) p_n - a_n p_{n-1}) / a_{n+1}.
/// At n = 0 the value of a_n is irrelevant since p_{-1} = 0.
OrthoEval advance(const OrthoEval& state, double a_n, double a_next, double b_next, double x0);

/// OrthoEval bound to a sequence and an evaluation point.
class OrthoStream {
 public:
  OrthoStream(const JacobiSequence& seq, double x0, bool rescale = true);

  const OrthoEval& state() const { return state_; }
  double x0() const { return x0_; }
  /// a_n at the current index (a_0 := 1).
  double a_current() const { return a_n_; }

  const OrthoEval& step();
  const OrthoEval& advance_to(Index n);

 private:
  const JacobiSequence* seq_;
  double x0_;
  double a_n_ = 1.0;
  OrthoEval state_;
};

/// K_n(x, y) = sum_{j<=n} p_j(x) p_j(y), summed directly.
double cd_kernel_direct(const JacobiSequence& seq, double x, double y, Index n);

/// K_n(x, y) from the two-term Christoffel-Darboux quotient
///   a_{n+1} [p_{n+1}(x) p_n(y) - p_n(x) p_{n+1}(y)] / (x - y).
/// Throws DegenerateInputError when |x - y| < 1e-12 max(1, |x|, |y|).
double cd_kernel_formula(const JacobiSequence& seq, double x, double y, Index n);

/// lambda_n(x0) = 1 / K_n(x0, x0).
double christoffel(const JacobiSequence& seq, double x0, Index n);

/// Christoffel function from the variational principle: minimizes
/// int |Q|^2 drho over deg Q <= n, Q(x0) = 1, as a quadratic form in the
/// Hankel matrix of moments about x0 (computed from operator moments of a
/// truncation, in quad precision). Independent of the three-term recurrence.
/// Requires n <= 12; throws ConditioningError if the estimated relative
/// error of the solve exceeds 1e-10.
double christoffel_via_moments(const JacobiSequence& seq, double x0, Index n);

inline constexpr Index kMaxMomentOracleDegree = 12;

struct EtaMoments {
  Index n;
  double x0;
  double first;   // int (x - x0) d eta_n
  double second;  // int (x - x0)^2 d eta_n
};

/// Closed-form first and second moments about x0 of eta_n^{(x0)}:
///   first  = -a_{n+1} p_n p_{n+1} / K_n
///   second =  a_{n+1}^2 (p_n^2 + p_{n+1}^2) / K_n
EtaMoments eta_moments(const JacobiSequence& seq, double x0, Index n);

/// int (x - center)^k d eta_n^{(x0)} computed as <v, (J - center)^k v> with
/// v_j = p_j(x0) / sqrt(K_n) on a truncation of size n + 1 + ceil(k/2).
/// Requires k <= 30.
double eta_moment_k(const JacobiSequence& seq, double x0, Index n, unsigned k,
                    double center = 0.0);

inline constexpr unsigned kMaxEtaMomentOrder = 30;

/// r_n = p_n(x0)^2 / K_n(x0, x0) for n = 0..N (r_0 = 1).
std::vector<double> nevai_ratio_stream(const JacobiSequence& seq, double x0, Index N);

/// The five equivalent diagnostics for a nonnegative sequence c_n with
/// partial sums S_n; entry n refers to index n = 0..len-2.
struct RatioPanel {
  std::vector<double> c_over_s;        // c_n / S_n
  std::vector<double> s_over_s_next;   // S_n / S_{n+1}
  std::vector<double> c_next_over_s;   // c_{n+1} / S_n
  std::vector<double> forward_pair;    // (c_n + c_{n+1}) / S_n
  std::vector<double> backward_pair;   // (c_{n-1} + c_n) / S_n, c_{-1} = 0
};

RatioPanel seq_ratio_panel(std::span<const double> c);
/// Same panel from log c_n, for sequences like e^{n^2} that overflow.
RatioPanel seq_ratio_panel_log(std::span<const double> log_c);

/// a_n / (n C_n) with C_n = (1/n) sum_{j<=n} a_j; a[0] holds a_1.
/// Throws DomainError naming the first index where C_n = 0.
std::vector<double> cesaro_ratio(std::span<const double> a);

}  // namespace nevai
