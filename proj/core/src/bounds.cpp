#include "nevai/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "nevai/errors.hpp"
#include "nevai/prufer.hpp"

namespace nevai {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// |1 - r e^{i psi}|^2 from the pair (cos psi, sin psi).
double gap_sq(double r, double c, double s) {
  const double re = 1.0 - r * c;
  const double im = r * s;
  return re * re + im * im;
}

class Tally {
 public:
  explicit Tally(const char* name) { summary_.check = name; summary_.min_ratio = std::numeric_limits<double>::infinity(); }

  // Records a sample of the inequality big >= small.
  void record(double big, double small) {
    ++summary_.samples;
    const double scale = std::max(std::abs(big), std::abs(small));
    const double slack = scale > 0.0 ? (big - small) / scale : 0.0;
    summary_.min_slack = std::min(summary_.min_slack, slack);
    if (slack < -kBoundsSlack) ++summary_.violations;
    if (small > 0.0) summary_.min_ratio = std::min(summary_.min_ratio, big / small);
  }

  FuzzSummary result() const { return summary_; }

 private:
  FuzzSummary summary_;
};

}  // namespace

UnimodularElliptic::UnimodularElliptic(double m00, double m01, double m10, double m11)
    : m_{m00, m01, m10, m11} {
  if (!(std::abs(det() - 1.0) <= 1e-12)) throw DomainError("UnimodularElliptic: det differs from 1 by more than 1e-12");
  if (!(std::abs(trace()) <= 2.0 + 1e-12)) throw DomainError("UnimodularElliptic: |trace| exceeds 2");
}

UnimodularElliptic UnimodularElliptic::conjugated_rotation(double angle, double alpha, double s) {
  if (!(s > 0.0)) throw DomainError("conjugated_rotation: s must be positive");
  // C = R(alpha) diag(s, 1/s) R(-alpha), C^{-1} = R(alpha) diag(1/s, s) R(-alpha).
  const double ca = std::cos(alpha), sa = std::sin(alpha);
  const double ct = std::cos(angle), st = std::sin(angle);
  const std::array<double, 4> R{ca, -sa, sa, ca};
  const std::array<double, 4> Rt{ca, sa, -sa, ca};
  auto mul = [](const std::array<double, 4>& x, const std::array<double, 4>& y) {
    return std::array<double, 4>{x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3],
                                 x[2] * y[0] + x[3] * y[2], x[2] * y[1] + x[3] * y[3]};
  };
  const std::array<double, 4> C = mul(mul(R, {s, 0.0, 0.0, 1.0 / s}), Rt);
  const std::array<double, 4> Cinv = mul(mul(R, {1.0 / s, 0.0, 0.0, s}), Rt);
  const std::array<double, 4> Rot{ct, -st, st, ct};
  std::array<double, 4> M = mul(mul(C, Rot), Cinv);
  // Project det back onto 1 along the cofactor direction.
  const double det = M[0] * M[3] - M[1] * M[2];
  const double g = M[0] * M[0] + M[1] * M[1] + M[2] * M[2] + M[3] * M[3];
  const double delta = (1.0 - det) / g;
  const std::array<double, 4> cof{M[3], -M[2], -M[1], M[0]};
  for (std::size_t i = 0; i < 4; ++i) M[i] += delta * cof[i];
  return UnimodularElliptic(M[0], M[1], M[2], M[3]);
}

InequalityValues ntz_check(double r, double theta, double phi, std::uint64_t L) {
  if (!(r > 0.0)) throw DomainError("ntz_check: r must be positive");
  if (L < 1) throw DomainError("ntz_check: L must be >= 1");
  const double ct = std::cos(theta), st = std::sin(theta);
  double c = std::cos(phi), s = std::sin(phi);
  const double rhs = gap_sq(r, c, s);
  double sum = 0.0;
  for (std::uint64_t j = 0; j < L; ++j) {
    sum += gap_sq(r, c, s);
    const double c_next = c * ct - s * st;
    s = s * ct + c * st;
    c = c_next;
  }
  return InequalityValues{12.0 / static_cast<double>(L) * sum, rhs};
}

InequalityValues matrix_power_check(const UnimodularElliptic& A, std::array<double, 2> v,
                                    std::uint64_t L) {
  if (L < 1) throw DomainError("matrix_power_check: L must be >= 1");
  double sum = 0.0;
  double last = 0.0;
  for (std::uint64_t j = 0; j < L; ++j) {
    last = v[0] * v[0];
    sum += last;
    v = {A(0, 0) * v[0] + A(0, 1) * v[1], A(1, 0) * v[0] + A(1, 1) * v[1]};
  }
  return InequalityValues{last, 12.0 / static_cast<double>(L) * sum};
}

double lemma64_check(double r, double phi, double eta) {
  if (!(r > 0.0)) throw DomainError("lemma64_check: r must be positive");
  if (!(std::abs(eta) <= std::numbers::pi && std::abs(phi / 2.0) <= std::abs(eta))) {
    throw DomainError("lemma64_check: requires |phi/2| <= |eta| <= pi");
  }
  const double den = std::sqrt(gap_sq(r, std::cos(phi), std::sin(phi)));
  if (den < 1e-15) throw DegenerateInputError("lemma64_check: |1 - r e^{i phi}| below 1e-15");
  return std::sqrt(gap_sq(r, std::cos(eta), std::sin(eta))) / den;
}

FuzzSummary fuzz_ntz(std::uint64_t samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> radius(0.0, 10.0), angle(0.0, kTwoPi);
  std::uniform_int_distribution<std::uint64_t> length(1, 1000);
  Tally tally("ntz");
  for (std::uint64_t i = 0; i < samples; ++i) {
    double r = radius(rng);
    if (r == 0.0) r = 1.0;
    const double theta = angle(rng), phi = angle(rng);
    const InequalityValues v = ntz_check(r, theta, phi, length(rng));
    tally.record(v.lhs, v.rhs);
  }
  return tally.result();
}

FuzzSummary fuzz_matrix_power(std::uint64_t samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi), stretch(1.0, 4.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_int_distribution<std::uint64_t> length(1, 200);
  Tally tally("matrix_power");
  for (std::uint64_t i = 0; i < samples; ++i) {
    const double rot = angle(rng), alpha = angle(rng) / 2.0, s = stretch(rng);
    const UnimodularElliptic A = UnimodularElliptic::conjugated_rotation(rot, alpha, s);
    const std::array<double, 2> v{gauss(rng), gauss(rng)};
    const InequalityValues val = matrix_power_check(A, v, length(rng));
    tally.record(val.rhs, val.lhs);
  }
  return tally.result();
}

FuzzSummary fuzz_lemma64(std::uint64_t samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> log_radius(std::log(1e-3), std::log(1e3));
  std::uniform_real_distribution<double> phase(-kTwoPi, kTwoPi), unit(0.0, 1.0);
  Tally tally("lemma64");
  std::uint64_t drawn = 0;
  while (drawn < samples) {
    const double r = std::exp(log_radius(rng));
    const double phi = phase(rng);
    const double lo = std::abs(phi) / 2.0;
    double eta = lo + (std::numbers::pi - lo) * unit(rng);
    if (unit(rng) < 0.5) eta = -eta;
    if (std::sqrt(gap_sq(r, std::cos(phi), std::sin(phi))) < 1e-15) continue;
    tally.record(lemma64_check(r, phi, eta), 0.5);
    ++drawn;
  }
  return tally.result();
}

FuzzSummary fuzz_cosine_sum(std::uint64_t samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  std::uniform_int_distribution<std::uint64_t> length(1, 1000);
  Tally tally("cosine_sum");
  std::uint64_t drawn = 0;
  while (drawn < samples) {
    const double q = angle(rng);
    if (q == 0.0) continue;
    const CosineSum c = cosine_sum_bound_check(q, angle(rng), length(rng));
    tally.record(c.bound, std::abs(c.sum));
    ++drawn;
  }
  return tally.result();
}

}  // namespace nevai
