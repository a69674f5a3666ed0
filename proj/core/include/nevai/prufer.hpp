#pragma once

// Modified Prufer (EFGP) variables for b == 0 and x0 in the elliptic regime:
//
//   R_n sin(theta_n) = a_n u_n sin(k_n)
//   R_n cos(theta_n) = a_n (u_{n+1} - u_n cos(k_n)),    2 cos(k_n) = x0 / a_n,
//
// for solutions of a_n u_{n+1} + a_{n-1} u_{n-1} = x0 u_n. With u_0 = 0 and
// u_1 = 1 one has u_n = p_{n-1}(x0).

#include <utility>
#include <vector>

#include "nevai/models.hpp"

namespace nevai {

struct PruferState {
  Index n;
  double R;      // > 0
  double theta;  // continuous branch
  double k;      // in (0, pi)
  double a;      // a_n
};

/// |x0 / a| must stay below 2 - 1e-9.
inline constexpr double kEllipticMargin = 1e-9;

/// k in (0, pi) with 2 cos k = x0 / a; DomainError outside the elliptic regime.
double local_wavenumber(double x0, double a);

/// theta in (-pi, pi]. DomainError for a zero solution.
PruferState to_prufer(double u_n, double u_next, double a_n, double x0, Index n = 0);

/// (u_n, u_{n+1}) recovered from the state.
std::pair<double, double> from_prufer(const PruferState& state);

/// One step n -> n+1. The radius follows
///   R_{n+1}^2 / R_n^2 = 1 + (a_{n+1}^2 - a_n^2) sin^2(theta_n + k_n) / (a_n^2 sin^2 k_n)
/// and theta_{n+1} solves tan(theta_{n+1}) = rho tan(theta_n + k_n),
/// rho = a_{n+1} sin(k_{n+1}) / (a_n sin(k_n)), on the branch nearest theta_n + k_n.
PruferState prufer_step(const PruferState& state, double a_next, double x0);

/// X_n = (a_{n+1}^2 - a_n^2) sin^2(theta_n + k_n) / (a_n^2 sin^2 k_n).
double x_term(const PruferState& state, double a_next);

struct PruferTrace {
  std::vector<PruferState> states;  // n = 1..N
  std::vector<double> X;            // X_1..X_N
  std::vector<double> partial;      // sum_{j <= n} X_j
};

/// Runs the transform along seq from (u_0, u_1) = (cos theta0, sin theta0)
/// with a_0 = 1. theta0 = pi/2 follows p_{n-1}(x0). Requires b == 0.
PruferTrace x_sequence(const JacobiSequence& seq, double x0, Index N, double theta0 = 1.5707963267948966);

struct CosineSum {
  double sum;    // sum_{l=1}^M cos(q l + theta)
  double bound;  // 1 / sin(q / 2)
};

/// DomainError unless 0 < q < 2 pi and M >= 1.
CosineSum cosine_sum_bound_check(double q, double theta, Index M);

}  // namespace nevai
