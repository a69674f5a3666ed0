#include "nevai/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "nevai/errors.hpp"

namespace nevai {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kClusterSpacing = 1e-8;
constexpr double kResidualTarget = 1e-10;
constexpr int kMaxInverseIterations = 6;

// Gershgorin interval.
std::pair<double, double> gershgorin(const TridiagonalMatrix& M) {
  const auto& d = M.diag();
  const auto& e = M.off();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < d.size(); ++i) {
    double r = 0.0;
    if (i > 0) r += e[i - 1];
    if (i < e.size()) r += e[i];
    lo = std::min(lo, d[i] - r);
    hi = std::max(hi, d[i] + r);
  }
  return {lo, hi};
}

double bisect(const TridiagonalMatrix& M, std::size_t j, double lo, double hi, double abs_tol) {
  // Invariant: count(lo) <= j < count(hi).
  while (true) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (hi - lo <= std::max(2.0 * kEps * std::max(std::abs(lo), std::abs(hi)), abs_tol)) break;
    if (sturm_count(M, mid) > j) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// LU of (M - lambda) with partial pivoting; rows carry up to two entries
// right of the diagonal after a swap.
class ShiftedLU {
 public:
  ShiftedLU(const TridiagonalMatrix& M, double lambda, double tiny)
      : n_(M.size()), u0_(n_), u1_(n_, 0.0), u2_(n_, 0.0), mult_(n_, 0.0), swap_(n_, false) {
    const auto& d = M.diag();
    const auto& e = M.off();
    double c0 = d[0] - lambda;
    double c1 = n_ > 1 ? e[0] : 0.0;
    double c2 = 0.0;
    for (std::size_t i = 0; i + 1 < n_; ++i) {
      double r0 = e[i];
      double r1 = d[i + 1] - lambda;
      double r2 = i + 2 < n_ ? e[i + 1] : 0.0;
      if (std::abs(r0) > std::abs(c0)) {
        std::swap(c0, r0);
        std::swap(c1, r1);
        std::swap(c2, r2);
        swap_[i] = true;
      }
      if (std::abs(c0) < tiny) c0 = std::copysign(tiny, c0 == 0.0 ? 1.0 : c0);
      const double m = r0 / c0;
      mult_[i] = m;
      u0_[i] = c0;
      u1_[i] = c1;
      u2_[i] = c2;
      c0 = r1 - m * c1;
      c1 = r2 - m * c2;
      c2 = 0.0;
    }
    if (std::abs(c0) < tiny) c0 = std::copysign(tiny, c0 == 0.0 ? 1.0 : c0);
    u0_[n_ - 1] = c0;
    u1_[n_ - 1] = c1;
  }

  void solve(std::vector<double>& x) const {
    for (std::size_t i = 0; i + 1 < n_; ++i) {
      if (swap_[i]) std::swap(x[i], x[i + 1]);
      x[i + 1] -= mult_[i] * x[i];
    }
    for (std::size_t i = n_; i-- > 0;) {
      double acc = x[i];
      if (i + 1 < n_) acc -= u1_[i] * x[i + 1];
      if (i + 2 < n_) acc -= u2_[i] * x[i + 2];
      x[i] = acc / u0_[i];
    }
  }

 private:
  std::size_t n_;
  std::vector<double> u0_, u1_, u2_, mult_;
  std::vector<bool> swap_;
};

double dot(const std::vector<double>& x, const std::vector<double>& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

void normalize(std::vector<double>& x) {
  const double scale = *std::max_element(x.begin(), x.end(), [](double a, double b) {
    return std::abs(a) < std::abs(b);
  });
  const double s = std::abs(scale);
  if (s == 0.0 || !std::isfinite(s)) return;
  for (double& v : x) v /= s;
  const double norm = std::sqrt(dot(x, x));
  for (double& v : x) v /= norm;
}

double residual_norm(const TridiagonalMatrix& M, double lambda, const std::vector<double>& v) {
  const auto& d = M.diag();
  const auto& e = M.off();
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    double r = (d[i] - lambda) * v[i];
    if (i > 0) r += e[i - 1] * v[i - 1];
    if (i + 1 < v.size()) r += e[i] * v[i + 1];
    s += r * r;
  }
  return std::sqrt(s);
}

// Deterministic start vector with no structure shared with the matrix.
std::vector<double> start_vector(std::size_t n, std::size_t j) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = 0.5 + counter_uniform(0x51f15eedULL + j, i + 1);
  return x;
}

std::vector<double> sorted_eigenvalues(const TridiagonalMatrix& M) {
  const std::size_t n = M.size();
  auto [lo, hi] = gershgorin(M);
  const double pad = kEps * std::max({1.0, std::abs(lo), std::abs(hi)}) * static_cast<double>(n + 1);
  lo -= pad;
  hi += pad;
  const double abs_tol = kEps * M.norm_bound();
  std::vector<double> values(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double start = j > 0 ? std::max(lo, values[j - 1] - 4.0 * abs_tol) : lo;
    double left = sturm_count(M, start) <= j ? start : lo;
    values[j] = bisect(M, j, left, hi, abs_tol);
  }
  return values;
}

}  // namespace

TridiagonalMatrix::TridiagonalMatrix(std::vector<double> diag, std::vector<double> off)
    : diag_(std::move(diag)), off_(std::move(off)) {
  if (diag_.empty()) throw DomainError("TridiagonalMatrix: size must be >= 1");
  if (off_.size() + 1 != diag_.size()) throw DomainError("TridiagonalMatrix: off-diagonal must have size m - 1");
  for (std::size_t i = 0; i < off_.size(); ++i) {
    if (!(off_[i] > 0.0)) {
      throw DomainError("TridiagonalMatrix: off-diagonal entry " + std::to_string(i + 1) + " is not positive");
    }
  }
}

double TridiagonalMatrix::norm_bound() const {
  double best = 0.0;
  for (std::size_t i = 0; i < diag_.size(); ++i) {
    double r = std::abs(diag_[i]);
    if (i > 0) r += off_[i - 1];
    if (i < off_.size()) r += off_[i];
    best = std::max(best, r);
  }
  return best;
}

TridiagonalMatrix truncate(const JacobiSequence& seq, Index m, std::optional<double> corner_b) {
  if (m < 1) throw DomainError("truncate: m must be >= 1");
  std::vector<double> diag(m), off(m - 1);
  for (Index i = 1; i <= m; ++i) {
    const JacobiParams p = seq.params_at(i);
    diag[i - 1] = p.b;
    if (i < m) off[i - 1] = p.a;
  }
  if (corner_b) diag.back() = *corner_b;
  return TridiagonalMatrix(std::move(diag), std::move(off));
}

std::size_t sturm_count(const TridiagonalMatrix& M, double x) {
  const auto& d = M.diag();
  const auto& e = M.off();
  const double pivmin = std::numeric_limits<double>::min() * 1e4;
  std::size_t count = 0;
  double q = d[0] - x;
  if (std::abs(q) < pivmin) q = -pivmin;
  if (q < 0.0) ++count;
  for (std::size_t i = 1; i < d.size(); ++i) {
    q = d[i] - x - e[i - 1] * (e[i - 1] / q);
    if (std::abs(q) < pivmin) q = -pivmin;
    if (q < 0.0) ++count;
  }
  return count;
}

std::vector<double> eigenvalues(const TridiagonalMatrix& M) { return sorted_eigenvalues(M); }

EigenResult eigen_tridiag(const TridiagonalMatrix& M, std::span<const std::size_t> coordinates) {
  const std::size_t n = M.size();
  for (std::size_t c : coordinates) {
    if (c < 1 || c > n) throw DomainError("eigen_tridiag: coordinate outside [1, m]");
  }
  EigenResult out;
  out.values = sorted_eigenvalues(M);
  out.coordinates.assign(coordinates.begin(), coordinates.end());
  out.components.resize(n * coordinates.size());

  const double norm = std::max(M.norm_bound(), std::numeric_limits<double>::min());
  const double tiny = kEps * norm;
  const double target = kResidualTarget * norm;

  std::vector<std::vector<double>> cluster;
  for (std::size_t j = 0; j < n; ++j) {
    const double lambda = out.values[j];
    if (j == 0 || lambda - out.values[j - 1] > kClusterSpacing * norm) cluster.clear();

    const ShiftedLU lu(M, lambda, tiny);
    std::vector<double> x = start_vector(n, j);
    bool converged = false;
    for (int it = 0; it < kMaxInverseIterations; ++it) {
      lu.solve(x);
      for (int pass = 0; pass < 2; ++pass) {
        for (const auto& q : cluster) {
          const double proj = dot(x, q);
          for (std::size_t i = 0; i < n; ++i) x[i] -= proj * q[i];
        }
      }
      normalize(x);
      if (residual_norm(M, lambda, x) <= target && it > 0) {
        converged = true;
        break;
      }
    }
    if (!converged) {
      throw ConvergenceError("eigen_tridiag: inverse iteration did not reach the residual target for eigenvalue " +
                                 std::to_string(j),
                             j);
    }
    for (std::size_t c = 0; c < coordinates.size(); ++c) {
      out.components[j * coordinates.size() + c] = x[coordinates[c] - 1];
    }
    cluster.push_back(std::move(x));
  }
  return out;
}

double FiniteSpectralMeasure::total_mass() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

double FiniteSpectralMeasure::moment(unsigned k) const {
  double s = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    double p = 1.0;
    for (unsigned e = 0; e < k; ++e) p *= atoms[i];
    s += weights[i] * p;
  }
  return s;
}

FiniteSpectralMeasure spectral_measure_at(const TridiagonalMatrix& M, std::size_t coordinate) {
  const std::size_t coords[] = {coordinate};
  const EigenResult eig = eigen_tridiag(M, coords);
  FiniteSpectralMeasure mu;
  mu.atoms = eig.values;
  mu.weights.resize(eig.values.size());
  for (std::size_t j = 0; j < eig.values.size(); ++j) {
    const double v = eig.component(j, 0);
    mu.weights[j] = v * v;
  }
  return mu;
}

std::vector<double> zeros_of_p(const JacobiSequence& seq, Index degree) {
  if (degree < 1) throw DomainError("zeros_of_p: degree must be >= 1");
  return eigenvalues(truncate(seq, degree));
}

double operator_moment(const JacobiSequence& seq, unsigned k) {
  const TridiagonalMatrix M = truncate(seq, k + 2);
  const auto& d = M.diag();
  const auto& e = M.off();
  std::vector<double> v(M.size(), 0.0), w(M.size());
  v[0] = 1.0;
  for (unsigned step = 0; step < k; ++step) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      double r = d[i] * v[i];
      if (i > 0) r += e[i - 1] * v[i - 1];
      if (i + 1 < v.size()) r += e[i] * v[i + 1];
      w[i] = r;
    }
    std::swap(v, w);
  }
  return v[0];
}

double moment_distance(const FiniteSpectralMeasure& mu, const JacobiSequence& seq, unsigned K) {
  if (K < 1) throw DomainError("moment_distance: K must be >= 1");
  double worst = 0.0;
  for (unsigned k = 0; k <= K; ++k) worst = std::max(worst, std::abs(mu.moment(k) - operator_moment(seq, k)));
  return worst;
}

std::vector<double> regularity_sequence(const JacobiSequence& seq, Index N) {
  if (N < 1) throw DomainError("regularity_sequence: N must be >= 1");
  std::vector<double> out(N);
  double log_sum = 0.0;
  for (Index n = 1; n <= N; ++n) {
    log_sum += std::log(seq.a(n));
    out[n - 1] = std::exp(log_sum / static_cast<double>(n));
  }
  return out;
}

}  // namespace nevai
