#include "nevai/green.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nevai/errors.hpp"

namespace nevai {

namespace {

struct SignedLog {
  double sign;
  double log_abs;
};

// w^{-a} - w^{a} = -w^a (1 - w^{-2a}) for |w| > 1.
SignedLog power_difference(double w, Index a) {
  const double log_w = std::log(std::abs(w));
  const double odd = (w < 0.0 && a % 2 == 1) ? -1.0 : 1.0;
  const double ad = static_cast<double>(a);
  return SignedLog{-odd, ad * log_w + std::log1p(-std::exp(-2.0 * ad * log_w))};
}

void require_upper_half_plane(Complex z, const char* who) {
  if (!(z.imag() > 0.0)) throw DomainError(std::string(who) + ": requires Im z > 0");
}

struct Truncation {
  std::vector<Complex> diag;
  std::vector<double> off;
};

Truncation truncation(const JacobiSequence& seq, Index N, Complex z) {
  Truncation t;
  t.diag.resize(N);
  t.off.resize(N > 0 ? N - 1 : 0);
  for (Index i = 0; i < N; ++i) {
    const JacobiParams p = seq.params_at(i + 1);
    t.diag[i] = Complex(p.b, 0.0) - z;
    if (i + 1 < N) t.off[i] = p.a;
  }
  return t;
}

std::vector<Complex> unit_vector(Index size, Index at) {
  std::vector<Complex> e(size, Complex(0.0, 0.0));
  e[at - 1] = 1.0;
  return e;
}

}  // namespace

double solve_w(double x0) {
  if (!(std::abs(x0) > 1.0)) throw DomainError("solve_w: requires |x0| > 1");
  return x0 + std::copysign(std::sqrt(x0 * x0 - 1.0), x0);
}

double middle_green(Index k, Index m, Index n, double x0) {
  if (m > n) std::swap(m, n);
  if (k < 1 || m < 1 || n > k) throw DomainError("middle_green: requires 1 <= m <= n <= k");
  const double w = solve_w(x0);
  const SignedLog num_left = power_difference(w, m);
  const SignedLog num_right = power_difference(w, k + 1 - n);
  const SignedLog den_left = power_difference(w, 1);
  const SignedLog den_right = power_difference(w, k + 1);
  const double sign = -num_left.sign * num_right.sign * den_left.sign * den_right.sign;
  const double log_abs = std::log(2.0) + num_left.log_abs + num_right.log_abs - den_left.log_abs -
                         den_right.log_abs;
  return sign * std::exp(log_abs);
}

std::vector<Complex> solve_complex_tridiagonal(std::span<const Complex> diag,
                                               std::span<const double> off,
                                               std::span<const Complex> rhs) {
  const std::size_t n = diag.size();
  if (rhs.size() != n || off.size() + 1 != std::max<std::size_t>(n, 1)) {
    throw DomainError("solve_complex_tridiagonal: inconsistent sizes");
  }
  auto eliminate = [&](std::span<const Complex> b) {
    std::vector<Complex> c_prime(n), x(n);
    Complex pivot = diag[0];
    if (std::abs(pivot) < 1e-300) throw ConditioningError("tridiagonal solve: pivot below 1e-300 at row 1");
    x[0] = b[0] / pivot;
    for (std::size_t i = 1; i < n; ++i) {
      c_prime[i - 1] = off[i - 1] / pivot;
      pivot = diag[i] - off[i - 1] * c_prime[i - 1];
      if (std::abs(pivot) < 1e-300) {
        throw ConditioningError("tridiagonal solve: pivot below 1e-300 at row " + std::to_string(i + 1));
      }
      x[i] = (b[i] - off[i - 1] * x[i - 1]) / pivot;
    }
    for (std::size_t i = n - 1; i-- > 0;) x[i] -= c_prime[i] * x[i + 1];
    return x;
  };
  auto residual = [&](const std::vector<Complex>& x) {
    std::vector<Complex> r(n);
    for (std::size_t i = 0; i < n; ++i) {
      Complex acc = diag[i] * x[i];
      if (i > 0) acc += off[i - 1] * x[i - 1];
      if (i + 1 < n) acc += off[i] * x[i + 1];
      r[i] = rhs[i] - acc;
    }
    return r;
  };

  std::vector<Complex> x = eliminate(rhs);
  const std::vector<Complex> r = residual(x);
  const std::vector<Complex> dx = eliminate(r);
  for (std::size_t i = 0; i < n; ++i) x[i] += dx[i];
  return x;
}

std::vector<Complex> green_column(const JacobiSequence& seq, Index N, Complex z, Index m) {
  require_upper_half_plane(z, "green_column");
  if (m < 1 || m > N) throw DomainError("green_column: index outside the truncation");
  const Truncation t = truncation(seq, N, z);
  return solve_complex_tridiagonal(t.diag, t.off, unit_vector(N, m));
}

Complex green_numeric(const JacobiSequence& seq, Index N, Complex z, Index n, Index m) {
  if (n < 1 || n > N) throw DomainError("green_numeric: index outside the truncation");
  return green_column(seq, N, z, m)[n - 1];
}

double green_truncation_drift(const JacobiSequence& seq, Index N, Complex z, Index n, Index m) {
  return std::abs(green_numeric(seq, N, z, n, m) - green_numeric(seq, 2 * N, z, n, m));
}

double weyl_wronskian_residual(const JacobiSequence& seq, Index N, Complex z, Index n) {
  if (n + 1 > N) throw DomainError("weyl_wronskian_residual: requires n + 1 <= N");
  const std::vector<Complex> column = green_column(seq, N, z, 1);
  auto u = [&](Index j) { return j == 0 ? Complex(-1.0, 0.0) : column[j - 1]; };

  // p_{n-1}(z), p_n(z) by the recurrence.
  Complex p_prev(0.0, 0.0), p(1.0, 0.0);
  double a_prev = 1.0;
  for (Index j = 0; j < n; ++j) {
    const JacobiParams next = seq.params_at(j + 1);
    const Complex p_next = ((z - next.b) * p - a_prev * p_prev) / next.a;
    p_prev = p;
    p = p_next;
    a_prev = next.a;
  }
  const double a_n = n == 0 ? 1.0 : seq.a(n);
  return std::abs(a_n * (u(n + 1) * p_prev - u(n) * p) - 1.0);
}

double decoupling_residual(const JacobiSequence& seq, Index N, Complex z, Index k, Index l,
                           Index n) {
  if (!(k >= 1 && k + 1 <= n && n <= l && l < N)) {
    throw DomainError("decoupling_residual: requires 1 < k + 1 <= n <= l < N");
  }
  const std::vector<Complex> g1 = green_column(seq, N, z, 1);

  // Middle block k+1..l of the decoupled matrix.
  const Truncation full = truncation(seq, N, z);
  const Index size = l - k;
  std::span<const Complex> diag(full.diag.data() + k, size);
  std::span<const double> off(full.off.data() + k, size - 1);
  const std::vector<Complex> middle = solve_complex_tridiagonal(diag, off, unit_vector(size, n - k));
  const Complex g_tilde_first = middle.front();  // G~_{k+1, n}
  const Complex g_tilde_last = middle.back();    // G~_{l, n}

  const Complex lhs = g1[n - 1];
  const Complex rhs = -seq.a(k) * g1[k - 1] * g_tilde_first - seq.a(l) * g1[l] * g_tilde_last;
  return std::abs(lhs - rhs) / std::abs(lhs);
}

BoundaryProbe boundary_value_probe(const JacobiSequence& seq, Index N, double x0, Index n,
                                   std::span<const double> eps_schedule) {
  if (eps_schedule.empty()) throw DomainError("boundary_value_probe: empty schedule");
  for (std::size_t i = 0; i < eps_schedule.size(); ++i) {
    if (!(eps_schedule[i] > 0.0)) throw DomainError("boundary_value_probe: eps must be positive");
    if (i > 0 && !(eps_schedule[i] < eps_schedule[i - 1])) {
      throw DomainError("boundary_value_probe: schedule must be strictly decreasing");
    }
  }
  if (eps_schedule.back() < 1e-6) throw DomainError("boundary_value_probe: last eps must be >= 1e-6");

  BoundaryProbe probe{{eps_schedule.begin(), eps_schedule.end()}, {}, Stabilization::not_assessed};
  for (double eps : eps_schedule) probe.values.push_back(green_numeric(seq, N, Complex(x0, eps), n, 1));
  if (probe.values.size() >= 2) {
    const Complex last = probe.values.back();
    const Complex before = probe.values[probe.values.size() - 2];
    const double change = std::abs(last - before) / std::max(std::abs(last), 1e-300);
    probe.flag = change < 1e-2 ? Stabilization::stable : Stabilization::unstable;
  }
  return probe;
}

std::vector<double> green_tail_measure(const JacobiSequence& seq, Index N, Index n, double eps,
                                       double lo, double hi, std::size_t points,
                                       std::span<const double> thresholds) {
  if (points == 0 || !(hi > lo)) throw DomainError("green_tail_measure: empty grid");
  const double h = (hi - lo) / static_cast<double>(points);
  std::vector<std::size_t> counts(thresholds.size(), 0);
  for (std::size_t i = 0; i < points; ++i) {
    const double x = lo + (static_cast<double>(i) + 0.5) * h;
    const double mag = std::abs(green_numeric(seq, N, Complex(x, eps), n, 1));
    for (std::size_t t = 0; t < thresholds.size(); ++t)
      if (mag > thresholds[t]) ++counts[t];
  }
  std::vector<double> measure;
  for (std::size_t c : counts) measure.push_back(static_cast<double>(c) * h);
  return measure;
}

}  // namespace nevai
