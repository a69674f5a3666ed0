#pragma once

// Checkers for the averaged inequalities behind the NTZ argument and the
// cosine-sum estimate, plus seeded fuzzers over admissible inputs.

#include <array>
#include <cstdint>
#include <random>
#include <string>

namespace nevai {

/// 2x2 real matrix with det = 1 (within 1e-12) and |trace| <= 2.
class UnimodularElliptic {
 public:
  /// Throws DomainError when the matrix is not admissible.
  UnimodularElliptic(double m00, double m01, double m10, double m11);

  double operator()(int row, int col) const { return m_[static_cast<std::size_t>(2 * row + col)]; }
  double trace() const { return m_[0] + m_[3]; }
  double det() const { return m_[0] * m_[3] - m_[1] * m_[2]; }

  /// C Rot(angle) C^{-1} with C = R(alpha) diag(s, 1/s) R(-alpha).
  static UnimodularElliptic conjugated_rotation(double angle, double alpha, double s);

 private:
  std::array<double, 4> m_;
};

struct InequalityValues {
  double lhs;
  double rhs;
};

/// lhs = (12/L) sum_{j<L} |1 - r e^{i(j theta + phi)}|^2, rhs = |1 - r e^{i phi}|^2.
/// The inequality is lhs >= rhs.
InequalityValues ntz_check(double r, double theta, double phi, std::uint64_t L);

/// lhs = |(A^{L-1} v)_1|^2, rhs = (12/L) sum_{j<L} |(A^j v)_1|^2. The inequality is lhs <= rhs.
InequalityValues matrix_power_check(const UnimodularElliptic& A, std::array<double, 2> v,
                                    std::uint64_t L);

/// |1 - r e^{i eta}| / |1 - r e^{i phi}|, which is >= 1/2 when
/// |phi/2| <= |eta| <= pi. DegenerateInputError when the denominator is below
/// 1e-15, DomainError outside the admissible range.
double lemma64_check(double r, double phi, double eta);

/// Relative slack used when counting violations.
inline constexpr double kBoundsSlack = 1e-12;

struct FuzzSummary {
  std::string check;
  std::uint64_t samples = 0;
  std::uint64_t violations = 0;
  /// Smallest relative margin (big - small) / big over all samples; negative
  /// beyond -kBoundsSlack means a violation.
  double min_slack = 1.0;
  /// Smallest big / small ratio seen (the tightness probe).
  double min_ratio = 0.0;
};

FuzzSummary fuzz_ntz(std::uint64_t samples, std::uint64_t seed);
FuzzSummary fuzz_matrix_power(std::uint64_t samples, std::uint64_t seed);
FuzzSummary fuzz_lemma64(std::uint64_t samples, std::uint64_t seed);
FuzzSummary fuzz_cosine_sum(std::uint64_t samples, std::uint64_t seed);

}  // namespace nevai
