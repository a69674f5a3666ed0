#pragma once

// One-step and n-step transfer matrices, Lyapunov exponent estimates and the
// exponential growth test for p_n(x0).

#include <array>
#include <optional>
#include <vector>

#include "nevai/models.hpp"

namespace nevai {

/// A real 2x2 matrix of determinant one, stored as e^{s} * M with the largest
/// entry of M scaled to magnitude one. Products of any length stay finite.
class Mat2Log {
 public:
  Mat2Log() = default;  // identity

  /// Normalizes the entries; the caller promises det = 1.
  static Mat2Log from_entries(double m00, double m01, double m10, double m11);

  /// Entry of the normalized matrix.
  double operator()(int row, int col) const { return m_[static_cast<std::size_t>(2 * row + col)]; }
  double log_scale() const { return s_; }

  /// log of the Frobenius norm of the true matrix.
  double log_norm() const;
  /// det of the true matrix. Only meaningful while e^{2s} stays moderate.
  double det() const;
  /// True entry; may overflow.
  double entry(int row, int col) const;

  /// this <- lhs * this.
  void left_multiply(const Mat2Log& lhs);
  friend Mat2Log operator*(const Mat2Log& lhs, const Mat2Log& rhs);

 private:
  void normalize();

  std::array<double, 4> m_{1.0, 0.0, 0.0, 1.0};
  double s_ = 0.0;
};

/// A_j(x0) = a_j^{-1} [[x0 - b_j, -1], [a_j^2, 0]]. Throws DomainError for a_j <= 0.
Mat2Log step_matrix(double a, double b, double x0);

/// T_n(x0) = A_n(x0) ... A_1(x0); T_n (1, 0)^T = (p_n, a_n p_{n-1})^T.
Mat2Log transfer_product(const JacobiSequence& seq, double x0, Index n);

/// log ||T_n(x0)||_F for n = 0..N.
std::vector<double> transfer_log_norms(const JacobiSequence& seq, double x0, Index N);

struct LyapunovEstimate {
  double x0;
  Index N;
  double gamma_hat;              // log ||T_N||_F / N
  double last_window_slope;      // slope of log ||T_n|| over n in [N/2, N]
  std::vector<double> window_slopes;  // slopes over equal consecutive windows
};

/// Requires N >= 1000. Convergence is reported through the slopes, never asserted.
LyapunovEstimate lyapunov_estimate(const JacobiSequence& seq, double x0, Index N,
                                   unsigned windows = 10);

inline constexpr Index kMinLyapunovLength = 1000;

/// min over n in [N/2, N] of (p_n^2 + p_{n+1}^2)^{1/n}, evaluated in log space.
/// Values above one flag exponential growth, so subexponential decay fails.
/// Requires N >= 1000.
double growth_test(const JacobiSequence& seq, double x0, Index N);

struct HyperbolicRate {
  std::optional<double> theta;  // 2 cos(theta) = x0, |x0| <= 2
  std::optional<double> eta;    // cosh(eta) = |x0|, |x0| >= 1
};

HyperbolicRate hyperbolic_rate(double x0);

/// (log ||T_last|| - log ||T_{first-1}||) / size over a block of indices.
double block_log_slope(const JacobiSequence& seq, double x0, const Block& block);

}  // namespace nevai
