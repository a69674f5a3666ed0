#pragma once

// Resolvent entries G_nm(z) = <delta_n, (J - z)^{-1} delta_m>, the Weyl
// solution u+_n = G_1n and the closed-form resolvent of the constant-1/2 block.

#include <complex>
#include <span>
#include <vector>

#include "nevai/models.hpp"

namespace nevai {

using Complex = std::complex<double>;

/// Root of w^2 - 2 x0 w + 1 = 0 with |w| > 1 (sign(w) = sign(x0)).
/// Throws DomainError for |x0| <= 1.
double solve_w(double x0);

/// Entry (m, n) of (J^{(k)} - x0)^{-1}, where J^{(k)} is the k x k matrix with
/// zero diagonal and 1/2 on both off-diagonals. Closed form in w = solve_w(x0):
///
///   G_mn = -2 (w^{-m} - w^m)(w^{-(k+1-n)} - w^{k+1-n})
///          / ((w^{-1} - w)(w^{-(k+1)} - w^{k+1})),   m <= n,
///
/// evaluated in log space. The leading minus sign makes the value the
/// resolvent (J^{(k)} - x0)^{-1}; without it the expression is (x0 - J^{(k)})^{-1}.
double middle_green(Index k, Index m, Index n, double x0);

/// Tridiagonal system (diag, off) with off[i] coupling rows i and i+1.
/// Solves (M) x = rhs by elimination without pivoting and one refinement
/// step. Throws ConditioningError on a pivot below 1e-300.
std::vector<Complex> solve_complex_tridiagonal(std::span<const Complex> diag,
                                               std::span<const double> off,
                                               std::span<const Complex> rhs);

/// Column m of (J_N - z)^{-1} for the N x N truncation; entry i-1 is G_im.
std::vector<Complex> green_column(const JacobiSequence& seq, Index N, Complex z, Index m);

/// G_nm(z) on the N x N truncation. Requires Im z > 0 and 1 <= n, m <= N.
Complex green_numeric(const JacobiSequence& seq, Index N, Complex z, Index n, Index m);

/// |G^{(N)}_nm - G^{(2N)}_nm|, the doubling self-check for truncation effects.
double green_truncation_drift(const JacobiSequence& seq, Index N, Complex z, Index n, Index m);

/// |a_n (u_{n+1} p_{n-1}(z) - u_n p_n(z)) - 1| with u_j = G_1j(z), u_0 = -1.
double weyl_wronskian_residual(const JacobiSequence& seq, Index N, Complex z, Index n);

/// Relative residual of
///   G_1n = -a_k G_1k G~_{k+1,n} - a_l G_{1,l+1} G~_{l,n},
/// where G~ is the resolvent with a_k and a_l set to zero.
/// Requires 1 < k + 1 <= n <= l < N.
double decoupling_residual(const JacobiSequence& seq, Index N, Complex z, Index k, Index l,
                           Index n);

enum class Stabilization { stable, unstable, not_assessed };

struct BoundaryProbe {
  std::vector<double> eps;
  std::vector<Complex> values;  // G_1n(x0 + i eps)
  Stabilization flag;
};

/// G_1n(x0 + i eps) along a decreasing eps schedule (last eps >= 1e-6).
/// Stable when the last two values differ by less than 1e-2 relative.
BoundaryProbe boundary_value_probe(const JacobiSequence& seq, Index N, double x0, Index n,
                                   std::span<const double> eps_schedule);

/// Lebesgue measure of {x in [lo, hi] : |G_1n(x + i eps)| > M} on a uniform
/// grid, one entry per threshold.
std::vector<double> green_tail_measure(const JacobiSequence& seq, Index N, Index n, double eps,
                                       double lo, double hi, std::size_t points,
                                       std::span<const double> thresholds);

}  // namespace nevai
