#pragma once

// Truncated Jacobi matrices, their eigen-decomposition and the finite
// spectral measures, zeros and moments built from it.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "nevai/models.hpp"

namespace nevai {

/// Symmetric tridiagonal matrix with diagonal b_1..b_m and strictly positive
/// off-diagonal a_1..a_{m-1}.
class TridiagonalMatrix {
 public:
  TridiagonalMatrix(std::vector<double> diag, std::vector<double> off);

  std::size_t size() const { return diag_.size(); }
  const std::vector<double>& diag() const { return diag_; }
  const std::vector<double>& off() const { return off_; }

  /// max_i (|b_i| + a_{i-1} + a_i), an upper bound for the operator norm.
  double norm_bound() const;

 private:
  std::vector<double> diag_;
  std::vector<double> off_;
};

/// Leading m x m block of the Jacobi matrix of seq. The optional corner
/// replaces b_m.
TridiagonalMatrix truncate(const JacobiSequence& seq, Index m,
                           std::optional<double> corner_b = std::nullopt);

/// Number of eigenvalues strictly below x (Sturm count).
std::size_t sturm_count(const TridiagonalMatrix& M, double x);

struct EigenResult {
  std::vector<double> values;            // ascending
  std::vector<std::size_t> coordinates;  // 1-based, as requested
  /// components[j * coordinates.size() + c] = v_j(coordinates[c]) for the
  /// normalized eigenvector v_j of values[j].
  std::vector<double> components;

  double component(std::size_t j, std::size_t c) const {
    return components[j * coordinates.size() + c];
  }
};

/// Eigenvalues by bisection on the Sturm count and eigenvectors by inverse
/// iteration. Vectors whose eigenvalues sit within 1e-8 relative spacing are
/// re-orthogonalized against each other. Every pair meets
/// ||M v - lambda v|| <= 1e-10 ||M||, otherwise ConvergenceError carries the
/// offending eigenvalue index.
EigenResult eigen_tridiag(const TridiagonalMatrix& M, std::span<const std::size_t> coordinates);

/// Eigenvalues only.
std::vector<double> eigenvalues(const TridiagonalMatrix& M);

struct FiniteSpectralMeasure {
  std::vector<double> atoms;  // ascending
  std::vector<double> weights;

  double total_mass() const;
  double moment(unsigned k) const;
};

/// Atoms are the eigenvalues, weights the squared eigenvector components at
/// the (1-based) coordinate.
FiniteSpectralMeasure spectral_measure_at(const TridiagonalMatrix& M, std::size_t coordinate);

/// Zeros of p_degree, i.e. the eigenvalues of the degree x degree truncation.
std::vector<double> zeros_of_p(const JacobiSequence& seq, Index degree);

/// <delta_1, J^k delta_1>, exact on a (k + 2)-truncation.
double operator_moment(const JacobiSequence& seq, unsigned k);

/// max over 0 <= k <= K of |int x^k dmu - operator_moment(seq, k)|.
double moment_distance(const FiniteSpectralMeasure& mu, const JacobiSequence& seq, unsigned K);

/// (a_1 ... a_n)^{1/n} for n = 1..N, accumulated in log space.
std::vector<double> regularity_sequence(const JacobiSequence& seq, Index N);

}  // namespace nevai
