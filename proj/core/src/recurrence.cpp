#include "nevai/recurrence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "nevai/errors.hpp"

namespace nevai {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double log_sum_exp(double x, double y) {
  if (x == -kInf) return y;
  if (y == -kInf) return x;
  const double hi = std::max(x, y);
  return hi + std::log1p(std::exp(std::min(x, y) - hi));
}

}  // namespace

// ---------------------------------------------------------------------------

void ScaledAccumulator::add(double mantissa, double log_scale) {
  if (mantissa == 0.0) return;
  if (mantissa_ == 0.0) {
    mantissa_ = mantissa;
    log_scale_ = log_scale;
  } else if (log_scale > log_scale_) {
    mantissa_ = mantissa_ * std::exp(log_scale_ - log_scale) + mantissa;
    log_scale_ = log_scale;
  } else if (log_scale == log_scale_) {
    mantissa_ += mantissa;
  } else {
    mantissa_ += mantissa * std::exp(log_scale - log_scale_);
  }
  const double mag = std::abs(mantissa_);
  if (mag != 0.0 && (mag > 1e150 || mag < 1e-150)) {
    log_scale_ += std::log(mag);
    mantissa_ = std::copysign(1.0, mantissa_);
  }
}

double ScaledAccumulator::log() const {
  if (mantissa_ <= 0.0) return mantissa_ == 0.0 ? -kInf : std::numeric_limits<double>::quiet_NaN();
  return std::log(mantissa_) + log_scale_;
}

double ScaledAccumulator::value() const {
  if (log_scale_ == 0.0) return mantissa_;
  return mantissa_ * std::exp(log_scale_);
}

// ---------------------------------------------------------------------------

OrthoEval::OrthoEval(bool rescale) : rescale_(rescale) { kernel_.add(1.0, 0.0); }

double OrthoEval::p() const { return log_scale_ == 0.0 ? p_ : p_ * std::exp(log_scale_); }

double OrthoEval::p_prev() const {
  return log_scale_ == 0.0 ? p_prev_ : p_prev_ * std::exp(log_scale_);
}

double OrthoEval::log_abs_p() const { return std::log(std::abs(p_)) + log_scale_; }

double OrthoEval::log_pair_sq() const {
  return std::log(p_prev_ * p_prev_ + p_ * p_) + 2.0 * log_scale_;
}

double OrthoEval::kernel_scaled() const { return std::exp(kernel_.log() - 2.0 * log_scale_); }

double OrthoEval::nevai_ratio() const {
  if (p_ == 0.0) return 0.0;
  const double r = std::exp(2.0 * (std::log(std::abs(p_)) + log_scale_) - kernel_.log());
  return std::min(r, 1.0);
}

OrthoEval advance(const OrthoEval& state, double a_n, double a_next, double b_next, double x0) {
  OrthoEval next = state;
  const double p_next = ((x0 - b_next) * state.p_ - a_n * state.p_prev_) / a_next;
  next.p_prev_ = state.p_;
  next.p_ = p_next;
  next.n_ = state.n_ + 1;
  if (next.rescale_) {
    const double norm_sq = next.p_prev_ * next.p_prev_ + next.p_ * next.p_;
    if (norm_sq > 0.0 && (norm_sq < OrthoEval::kRescaleLow || norm_sq > OrthoEval::kRescaleHigh)) {
      const double f = std::sqrt(norm_sq);
      next.p_prev_ /= f;
      next.p_ /= f;
      next.log_scale_ += std::log(f);
    }
  }
  next.kernel_.add(next.p_ * next.p_, 2.0 * next.log_scale_);
  return next;
}

OrthoStream::OrthoStream(const JacobiSequence& seq, double x0, bool rescale)
    : seq_(&seq), x0_(x0), state_(rescale) {}

const OrthoEval& OrthoStream::step() {
  const JacobiParams next = seq_->params_at(state_.index() + 1);
  state_ = advance(state_, a_n_, next.a, next.b, x0_);
  a_n_ = next.a;
  return state_;
}

const OrthoEval& OrthoStream::advance_to(Index n) {
  while (state_.index() < n) step();
  return state_;
}

// ---------------------------------------------------------------------------

double cd_kernel_direct(const JacobiSequence& seq, double x, double y, Index n) {
  OrthoStream sx(seq, x);
  OrthoStream sy(seq, y);
  ScaledAccumulator sum;
  sum.add(1.0, 0.0);
  for (Index j = 1; j <= n; ++j) {
    const OrthoEval& ex = sx.step();
    const OrthoEval& ey = sy.step();
    sum.add(ex.p_scaled() * ey.p_scaled(), ex.log_scale() + ey.log_scale());
  }
  return sum.value();
}

double cd_kernel_formula(const JacobiSequence& seq, double x, double y, Index n) {
  const double scale = std::max({1.0, std::abs(x), std::abs(y)});
  if (std::abs(x - y) < 1e-12 * scale) {
    throw DegenerateInputError("cd_kernel_formula: |x - y| below 1e-12 relative; use the direct sum");
  }
  OrthoStream sx(seq, x);
  OrthoStream sy(seq, y);
  const OrthoEval& ex = sx.advance_to(n + 1);
  const OrthoEval& ey = sy.advance_to(n + 1);
  const double a_next = seq.a(n + 1);
  const double numerator = ex.p_scaled() * ey.p_prev_scaled() - ex.p_prev_scaled() * ey.p_scaled();
  return a_next * numerator / (x - y) * std::exp(ex.log_scale() + ey.log_scale());
}

double christoffel(const JacobiSequence& seq, double x0, Index n) {
  OrthoStream s(seq, x0);
  return std::exp(-s.advance_to(n).log_kernel());
}

// ---------------------------------------------------------------------------
// Variational oracle. Quad precision keeps the Hankel solve meaningful up to
// condition numbers ~1e24.

namespace {

__extension__ typedef __float128 quad;

quad qabs(quad v) { return v < 0 ? -v : v; }

// <e_1, (J - x0)^k e_1> for k = 0..kmax, exact for a truncation of size kmax/2 + 2.
std::vector<quad> shifted_moments(const JacobiSequence& seq, double x0, std::size_t kmax) {
  const std::size_t size = kmax + 2;
  std::vector<quad> diag(size), off(size);
  for (std::size_t i = 0; i < size; ++i) {
    const JacobiParams p = seq.params_at(i + 1);
    diag[i] = static_cast<quad>(p.b) - static_cast<quad>(x0);
    off[i] = p.a;
  }
  std::vector<quad> v(size, 0), w(size, 0);
  v[0] = 1;
  std::vector<quad> moments(kmax + 1);
  for (std::size_t k = 0; k <= kmax; ++k) {
    moments[k] = v[0];
    for (std::size_t i = 0; i < size; ++i) {
      quad acc = diag[i] * v[i];
      if (i > 0) acc += off[i - 1] * v[i - 1];
      if (i + 1 < size) acc += off[i] * v[i + 1];
      w[i] = acc;
    }
    std::swap(v, w);
  }
  return moments;
}

}  // namespace

double christoffel_via_moments(const JacobiSequence& seq, double x0, Index n) {
  if (n > kMaxMomentOracleDegree) {
    throw DomainError("christoffel_via_moments: degree " + std::to_string(n) +
                      " exceeds the Hankel limit of " + std::to_string(kMaxMomentOracleDegree));
  }
  const std::size_t dim = n + 1;
  const std::vector<quad> m = shifted_moments(seq, x0, 2 * n);

  // H_{ij} = int (x - x0)^{i+j} drho; minimize c^T H c subject to c_0 = 1.
  std::vector<quad> h(dim * dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) h[i * dim + j] = m[i + j];

  // LDL^T factorization.
  std::vector<quad> l(dim * dim, 0), d(dim, 0);
  for (std::size_t j = 0; j < dim; ++j) {
    quad dj = h[j * dim + j];
    for (std::size_t k = 0; k < j; ++k) dj -= l[j * dim + k] * l[j * dim + k] * d[k];
    if (!(dj > 0)) throw ConditioningError("christoffel_via_moments: Hankel matrix is not positive definite");
    d[j] = dj;
    l[j * dim + j] = 1;
    for (std::size_t i = j + 1; i < dim; ++i) {
      quad lij = h[i * dim + j];
      for (std::size_t k = 0; k < j; ++k) lij -= l[i * dim + k] * l[j * dim + k] * d[k];
      l[i * dim + j] = lij / dj;
    }
  }
  auto solve = [&](std::vector<quad> rhs) {
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t k = 0; k < i; ++k) rhs[i] -= l[i * dim + k] * rhs[k];
    for (std::size_t i = 0; i < dim; ++i) rhs[i] /= d[i];
    for (std::size_t ii = dim; ii-- > 0;)
      for (std::size_t k = ii + 1; k < dim; ++k) rhs[ii] -= l[k * dim + ii] * rhs[k];
    return rhs;
  };

  // 1-norm condition number from the explicit inverse.
  quad norm_h = 0, norm_inv = 0, inv00 = 0;
  for (std::size_t j = 0; j < dim; ++j) {
    std::vector<quad> e(dim, 0);
    e[j] = 1;
    const std::vector<quad> col = solve(e);
    if (j == 0) inv00 = col[0];
    quad col_inv = 0, col_h = 0;
    for (std::size_t i = 0; i < dim; ++i) {
      col_inv += qabs(col[i]);
      col_h += qabs(h[i * dim + j]);
    }
    norm_inv = std::max(norm_inv, col_inv);
    norm_h = std::max(norm_h, col_h);
  }
  const double cond = static_cast<double>(norm_h * norm_inv);
  constexpr double kQuadEpsilon = 1.0 / 10384593717069655257060992658440192.0;  // 2^-113
  if (!(cond * kQuadEpsilon <= 1e-10)) {
    throw ConditioningError("christoffel_via_moments: moment matrix condition number " +
                            std::to_string(cond) + " loses more than 6 of 16 digits");
  }
  return static_cast<double>(1 / inv00);
}

// ---------------------------------------------------------------------------

EtaMoments eta_moments(const JacobiSequence& seq, double x0, Index n) {
  OrthoStream s(seq, x0);
  s.advance_to(n);
  const double log_k = s.state().log_kernel();
  const OrthoEval& e = s.step();  // holds (p_n, p_{n+1})
  const double a_next = seq.a(n + 1);
  // Scaled pair times e^{2 s - log K_n}.
  const double factor = std::exp(2.0 * e.log_scale() - log_k);
  const double pn = e.p_prev_scaled();
  const double pn1 = e.p_scaled();
  return EtaMoments{n, x0, -a_next * pn * pn1 * factor, a_next * a_next * (pn * pn + pn1 * pn1) * factor};
}

double eta_moment_k(const JacobiSequence& seq, double x0, Index n, unsigned k, double center) {
  if (k > kMaxEtaMomentOrder) throw DomainError("eta_moment_k: order exceeds 30");
  if (k == 0) return 1.0;  // eta_n is a probability measure
  const std::size_t size = n + 1 + (k + 1) / 2;

  // v_j = p_j(x0) / sqrt(K_n), j = 0..n.
  std::vector<double> mant(n + 1), scale(n + 1);
  OrthoStream s(seq, x0);
  mant[0] = 1.0;
  scale[0] = 0.0;
  for (Index j = 1; j <= n; ++j) {
    const OrthoEval& e = s.step();
    mant[j] = e.p_scaled();
    scale[j] = e.log_scale();
  }
  const double half_log_k = 0.5 * s.state().log_kernel();
  std::vector<double> v(size, 0.0);
  for (Index j = 0; j <= n; ++j) v[j] = mant[j] * std::exp(scale[j] - half_log_k);

  std::vector<double> diag(size), off(size);
  for (std::size_t i = 0; i < size; ++i) {
    const JacobiParams p = seq.params_at(i + 1);
    diag[i] = p.b - center;
    off[i] = p.a;
  }
  auto apply = [&](const std::vector<double>& in) {
    std::vector<double> out(size);
    for (std::size_t i = 0; i < size; ++i) {
      double acc = diag[i] * in[i];
      if (i > 0) acc += off[i - 1] * in[i - 1];
      if (i + 1 < size) acc += off[i] * in[i + 1];
      out[i] = acc;
    }
    return out;
  };

  // <v, M^k v> = <M^{floor(k/2)} v, M^{k - floor(k/2)} v>.
  std::vector<double> left = v;
  for (unsigned i = 0; i < k / 2; ++i) left = apply(left);
  std::vector<double> right = (k % 2 == 1) ? apply(left) : left;
  double dot = 0.0;
  for (std::size_t i = 0; i < size; ++i) dot += left[i] * right[i];
  return dot;
}

std::vector<double> nevai_ratio_stream(const JacobiSequence& seq, double x0, Index N) {
  std::vector<double> r;
  r.reserve(N + 1);
  OrthoStream s(seq, x0);
  r.push_back(s.state().nevai_ratio());
  for (Index n = 1; n <= N; ++n) r.push_back(s.step().nevai_ratio());
  return r;
}

// ---------------------------------------------------------------------------

RatioPanel seq_ratio_panel_log(std::span<const double> log_c) {
  if (log_c.size() < 2) throw DomainError("seq_ratio_panel: need at least two terms");
  if (!(log_c[0] > -kInf)) throw DomainError("seq_ratio_panel: c_0 must be positive");
  for (double v : log_c) {
    if (std::isnan(v) || v == kInf) throw DomainError("seq_ratio_panel: terms must be finite and >= 0");
  }
  const std::size_t len = log_c.size();
  std::vector<double> log_s(len);
  log_s[0] = log_c[0];
  for (std::size_t n = 1; n < len; ++n) log_s[n] = log_sum_exp(log_s[n - 1], log_c[n]);

  RatioPanel panel;
  for (std::size_t n = 0; n + 1 < len; ++n) {
    panel.c_over_s.push_back(std::exp(log_c[n] - log_s[n]));
    panel.s_over_s_next.push_back(std::exp(log_s[n] - log_s[n + 1]));
    panel.c_next_over_s.push_back(std::exp(log_c[n + 1] - log_s[n]));
    panel.forward_pair.push_back(std::exp(log_sum_exp(log_c[n], log_c[n + 1]) - log_s[n]));
    const double prev = n == 0 ? -kInf : log_c[n - 1];
    panel.backward_pair.push_back(std::exp(log_sum_exp(prev, log_c[n]) - log_s[n]));
  }
  return panel;
}

RatioPanel seq_ratio_panel(std::span<const double> c) {
  bool any_positive = false;
  std::vector<double> log_c;
  log_c.reserve(c.size());
  for (double v : c) {
    if (!(v >= 0.0)) throw DomainError("seq_ratio_panel: terms must be nonnegative");
    any_positive = any_positive || v > 0.0;
    log_c.push_back(v == 0.0 ? -kInf : std::log(v));
  }
  if (!any_positive) throw DomainError("seq_ratio_panel: all-zero input");
  return seq_ratio_panel_log(log_c);
}

std::vector<double> cesaro_ratio(std::span<const double> a) {
  std::vector<double> out;
  out.reserve(a.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sum += a[i];
    if (sum == 0.0) {
      throw DomainError("cesaro_ratio: C_n = 0 at n = " + std::to_string(i + 1));
    }
    // a_n / (n C_n) = a_n / sum_{j<=n} a_j
    out.push_back(a[i] / sum);
  }
  return out;
}

}  // namespace nevai
