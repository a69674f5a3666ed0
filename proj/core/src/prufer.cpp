#include "nevai/prufer.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "nevai/errors.hpp"

namespace nevai {

namespace {

// Representative of x modulo pi in (-pi/2, pi/2].
double wrap_half_turn(double x) {
  double r = std::remainder(x, std::numbers::pi);
  if (r <= -std::numbers::pi / 2) r += std::numbers::pi;
  return r;
}

}  // namespace

double local_wavenumber(double x0, double a) {
  if (!(a > 0.0)) throw DomainError("prufer: a_n must be positive");
  const double t = x0 / a;
  if (!(std::abs(t) <= 2.0 - kEllipticMargin)) {
    throw DomainError("prufer: |x0 / a_n| = " + std::to_string(std::abs(t)) +
                      " is outside the elliptic regime");
  }
  return std::acos(t / 2.0);
}

PruferState to_prufer(double u_n, double u_next, double a_n, double x0, Index n) {
  const double k = local_wavenumber(x0, a_n);
  if (u_n == 0.0 && u_next == 0.0) throw DomainError("to_prufer: zero solution");
  const double s = a_n * u_n * std::sin(k);
  const double c = a_n * (u_next - u_n * std::cos(k));
  return PruferState{n, std::hypot(s, c), std::atan2(s, c), k, a_n};
}

std::pair<double, double> from_prufer(const PruferState& st) {
  const double sk = std::sin(st.k);
  const double u = st.R * std::sin(st.theta) / (st.a * sk);
  const double u_next = st.R * std::sin(st.theta + st.k) / (st.a * sk);
  return {u, u_next};
}

double x_term(const PruferState& st, double a_next) {
  const double s = std::sin(st.theta + st.k);
  const double sk = std::sin(st.k);
  return (a_next * a_next - st.a * st.a) * s * s / (st.a * st.a * sk * sk);
}

PruferState prufer_step(const PruferState& st, double a_next, double x0) {
  const double k_next = local_wavenumber(x0, a_next);
  const double phi = st.theta + st.k;
  const double rho = a_next * std::sin(k_next) / (st.a * std::sin(st.k));
  const double ratio_sq = 1.0 + x_term(st, a_next);
  const double theta_next = phi + wrap_half_turn(std::atan2(rho * std::sin(phi), std::cos(phi)) - phi);
  return PruferState{st.n + 1, st.R * std::sqrt(ratio_sq), theta_next, k_next, a_next};
}

PruferTrace x_sequence(const JacobiSequence& seq, double x0, Index N, double theta0) {
  PruferTrace trace;
  trace.states.reserve(N);
  trace.X.reserve(N);
  trace.partial.reserve(N);

  // Step 0 -> 1 uses a_0 = 1 with u_0 = cos theta0, u_1 = sin theta0.
  PruferState st = to_prufer(std::cos(theta0), std::sin(theta0), 1.0, x0, 0);
  double a_next = seq.a(1);
  st = prufer_step(st, a_next, x0);
  double sum = 0.0;
  for (Index n = 1; n <= N; ++n) {
    const JacobiParams p = seq.params_at(n);
    if (p.b != 0.0) throw DomainError("x_sequence: the transform requires b_n = 0 (n = " + std::to_string(n) + ")");
    a_next = seq.a(n + 1);
    const double X = x_term(st, a_next);
    sum += X;
    trace.states.push_back(st);
    trace.X.push_back(X);
    trace.partial.push_back(sum);
    if (n < N) st = prufer_step(st, a_next, x0);
  }
  return trace;
}

CosineSum cosine_sum_bound_check(double q, double theta, Index M) {
  if (!(q > 0.0 && q < 2.0 * std::numbers::pi)) throw DomainError("cosine_sum_bound_check: q must lie in (0, 2 pi)");
  if (M < 1) throw DomainError("cosine_sum_bound_check: M must be >= 1");
  // Rotate the pair (cos, sin) of q l + theta by q each step.
  const double cq = std::cos(q), sq = std::sin(q);
  double c = std::cos(q + theta), s = std::sin(q + theta);
  double sum = 0.0;
  for (Index l = 1; l <= M; ++l) {
    sum += c;
    const double c_next = c * cq - s * sq;
    s = s * cq + c * sq;
    c = c_next;
  }
  return CosineSum{sum, 1.0 / std::sin(q / 2.0)};
}

}  // namespace nevai
