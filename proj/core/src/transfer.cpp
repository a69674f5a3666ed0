#include "nevai/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nevai/errors.hpp"
#include "nevai/recurrence.hpp"

namespace nevai {

Mat2Log Mat2Log::from_entries(double m00, double m01, double m10, double m11) {
  Mat2Log out;
  out.m_ = {m00, m01, m10, m11};
  out.s_ = 0.0;
  out.normalize();
  return out;
}

void Mat2Log::normalize() {
  const double big = std::max({std::abs(m_[0]), std::abs(m_[1]), std::abs(m_[2]), std::abs(m_[3])});
  if (big == 0.0 || !std::isfinite(big)) return;
  if (big < 0.5 || big > 2.0) {
    for (double& v : m_) v /= big;
    s_ += std::log(big);
  }
  // Pull det(M) back onto e^{-2s} along the cofactor direction so that
  // rounding does not accumulate into the determinant over long products.
  const double target = std::exp(-2.0 * s_);
  const double det = m_[0] * m_[3] - m_[1] * m_[2];
  const double g = m_[0] * m_[0] + m_[1] * m_[1] + m_[2] * m_[2] + m_[3] * m_[3];
  const double delta = (target - det) / g;
  const std::array<double, 4> cofactor{m_[3], -m_[2], -m_[1], m_[0]};
  for (std::size_t i = 0; i < 4; ++i) m_[i] += delta * cofactor[i];
}

double Mat2Log::log_norm() const {
  const double f = m_[0] * m_[0] + m_[1] * m_[1] + m_[2] * m_[2] + m_[3] * m_[3];
  return s_ + 0.5 * std::log(f);
}

double Mat2Log::det() const { return (m_[0] * m_[3] - m_[1] * m_[2]) * std::exp(2.0 * s_); }

double Mat2Log::entry(int row, int col) const { return (*this)(row, col) * std::exp(s_); }

void Mat2Log::left_multiply(const Mat2Log& lhs) {
  const auto& a = lhs.m_;
  const auto& b = m_;
  const std::array<double, 4> c{a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
                                a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
  m_ = c;
  s_ += lhs.s_;
  normalize();
}

Mat2Log operator*(const Mat2Log& lhs, const Mat2Log& rhs) {
  Mat2Log out = rhs;
  out.left_multiply(lhs);
  return out;
}

Mat2Log step_matrix(double a, double b, double x0) {
  if (!(a > 0.0)) throw DomainError("step_matrix: a_j must be positive");
  return Mat2Log::from_entries((x0 - b) / a, -1.0 / a, a, 0.0);
}

Mat2Log transfer_product(const JacobiSequence& seq, double x0, Index n) {
  Mat2Log t;
  for (Index j = 1; j <= n; ++j) {
    const JacobiParams p = seq.params_at(j);
    t.left_multiply(step_matrix(p.a, p.b, x0));
  }
  return t;
}

std::vector<double> transfer_log_norms(const JacobiSequence& seq, double x0, Index N) {
  std::vector<double> out;
  out.reserve(N + 1);
  Mat2Log t;
  out.push_back(t.log_norm());
  for (Index j = 1; j <= N; ++j) {
    const JacobiParams p = seq.params_at(j);
    t.left_multiply(step_matrix(p.a, p.b, x0));
    out.push_back(t.log_norm());
  }
  return out;
}

LyapunovEstimate lyapunov_estimate(const JacobiSequence& seq, double x0, Index N, unsigned windows) {
  if (N < kMinLyapunovLength) throw DomainError("lyapunov_estimate: N must be >= 1000");
  if (windows == 0) windows = 1;
  const Index half = N / 2;
  const Index width = N / windows;

  LyapunovEstimate est{x0, N, 0.0, 0.0, {}};
  Mat2Log t;
  double log_half = 0.0;
  double log_window_start = 0.0;
  Index window_start = 0;
  for (Index j = 1; j <= N; ++j) {
    const JacobiParams p = seq.params_at(j);
    t.left_multiply(step_matrix(p.a, p.b, x0));
    if (j == half) log_half = t.log_norm();
    if (width > 0 && j - window_start == width && est.window_slopes.size() < windows) {
      const double now = t.log_norm();
      est.window_slopes.push_back((now - log_window_start) / static_cast<double>(width));
      log_window_start = now;
      window_start = j;
    }
  }
  const double log_end = t.log_norm();
  est.gamma_hat = log_end / static_cast<double>(N);
  est.last_window_slope = (log_end - log_half) / static_cast<double>(N - half);
  return est;
}

double growth_test(const JacobiSequence& seq, double x0, Index N) {
  if (N < kMinLyapunovLength) throw DomainError("growth_test: N must be >= 1000");
  const Index start = (N + 1) / 2;
  OrthoStream s(seq, x0);
  s.advance_to(start);
  double best = std::numeric_limits<double>::infinity();
  for (Index n = start; n <= N; ++n) {
    // After the step the state holds (p_n, p_{n+1}).
    const double log_pair = s.step().log_pair_sq();
    best = std::min(best, log_pair / static_cast<double>(n));
  }
  return std::exp(best);
}

HyperbolicRate hyperbolic_rate(double x0) {
  HyperbolicRate r;
  const double ax = std::abs(x0);
  if (ax <= 2.0) r.theta = std::acos(x0 / 2.0);
  if (ax >= 1.0) r.eta = std::acosh(ax);
  return r;
}

double block_log_slope(const JacobiSequence& seq, double x0, const Block& block) {
  if (block.size() == 0) throw DomainError("block_log_slope: empty block");
  Mat2Log t;
  double log_before = 0.0;
  for (Index j = 1; j <= block.last; ++j) {
    const JacobiParams p = seq.params_at(j);
    t.left_multiply(step_matrix(p.a, p.b, x0));
    if (j + 1 == block.first) log_before = t.log_norm();
  }
  return (t.log_norm() - log_before) / static_cast<double>(block.size());
}

}  // namespace nevai
