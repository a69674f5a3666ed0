#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "nevai/errors.hpp"
#include "nevai/recurrence.hpp"
#include "support/oracles.hpp"

using namespace nevai;
using nevai::testing::rel_err;

TEST(Advance, FreeAtZero) {
  const auto seq = make_free();
  OrthoStream s(seq, 0.0);
  const double want[] = {1.0, 0.0, -1.0, 0.0, 1.0};
  EXPECT_EQ(s.state().p(), 1.0);
  for (int n = 1; n <= 4; ++n) EXPECT_NEAR(s.step().p(), want[n], 1e-15);
  EXPECT_NEAR(s.state().kernel(), 3.0, 1e-14);
}

TEST(Advance, FreeAtTwoIsLinear) {
  const auto seq = make_free();
  OrthoStream s(seq, 2.0);
  for (Index n = 1; n <= 2000; ++n) {
    const double p = s.step().p();
    ASSERT_LE(rel_err(p, static_cast<double>(n + 1)), 1e-12) << n;
  }
}

TEST(Advance, KernelIsMonotoneAndAtLeastOne) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> x(-3.0, 3.0);
  for (int t = 0; t < 20; ++t) {
    const auto seq = nevai::testing::random_model(rng);
    OrthoStream s(seq, x(rng));
    double last = s.state().log_kernel();
    EXPECT_GE(s.state().kernel(), 1.0);
    for (int n = 0; n < 3000; ++n) {
      const double now = s.step().log_kernel();
      ASSERT_GE(now, last);
      ASSERT_GE(now, 0.0);
      last = now;
    }
  }
}

TEST(Advance, RescalingKeepsPairInWindow) {
  const auto seq = make_constant(1.0, 0.0);
  OrthoStream s(seq, 2.5);
  for (int n = 0; n < 5000; ++n) {
    const OrthoEval& st = s.step();
    const double pair = st.p_scaled() * st.p_scaled() + st.p_prev_scaled() * st.p_prev_scaled();
    ASSERT_GE(pair, OrthoEval::kRescaleLow);
    ASSERT_LE(pair, OrthoEval::kRescaleHigh);
  }
  // p_n(5/2) = (2/3) (2^{n+1} - 2^{-n-1}) for the free model.
  EXPECT_NEAR(s.state().log_abs_p(), 5001.0 * std::log(2.0) + std::log(2.0 / 3.0), 1e-8);
  EXPECT_NEAR(s.state().nevai_ratio(), 0.75, 1e-12);
}

TEST(Advance, RescaledAgreesWithPlain) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> x(-2.5, 2.5);
  for (int t = 0; t < 30; ++t) {
    const auto seq = nevai::testing::random_model(rng);
    const double x0 = x(rng);
    OrthoStream scaled(seq, x0, true), plain(seq, x0, false);
    for (int n = 0; n < 200; ++n) {
      const double a = scaled.step().p(), b = plain.step().p();
      ASSERT_NEAR(a, b, 1e-10 * std::max(1.0, std::abs(b)));
    }
    EXPECT_LE(rel_err(scaled.state().kernel(), plain.state().kernel()), 1e-12);
  }
}

TEST(Advance, KernelRecursionAndDomination) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> x(-3.0, 3.0);
  for (int t = 0; t < 40; ++t) {
    const auto seq = nevai::testing::random_model(rng);
    const double x0 = x(rng);
    const SequenceBounds b = seq.bounds();
    const double K = (b.a_plus + std::abs(x0) + b.b_plus) / b.a_minus;
    const auto p = nevai::testing::plain_polys(seq, x0, 60);
    OrthoStream s(seq, x0, false);
    double k_prev = 1.0;
    for (Index n = 1; n <= 60; ++n) {
      const OrthoEval& st = s.step();
      EXPECT_LE(rel_err(st.kernel(), k_prev + p[n] * p[n]), 1e-13);
      k_prev = st.kernel();
      if (n >= 2) {
        EXPECT_LE(p[n] * p[n], 2.0 * K * K * (p[n - 2] * p[n - 2] + p[n - 1] * p[n - 1]) * (1 + 1e-12));
      }
    }
  }
}

TEST(CdKernel, HandExamples) {
  const auto seq = make_free();
  EXPECT_NEAR(cd_kernel_direct(seq, 0.3, -0.7, 1), 1.0 + 0.3 * -0.7, 1e-15);
  EXPECT_NEAR(cd_kernel_direct(seq, 0.0, 2.0, 2), -2.0, 1e-14);
  EXPECT_NEAR(cd_kernel_formula(seq, 0.0, 1.0, 1), 1.0, 1e-14);
  EXPECT_NEAR(cd_kernel_direct(seq, 0.4, 0.4, 30), [&] {
    OrthoStream s(seq, 0.4);
    return s.advance_to(30).kernel();
  }(), 1e-12);
}

TEST(CdKernel, FormulaMatchesDirect) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> x(-2.5, 2.5);
  std::uniform_int_distribution<Index> deg(0, 200);
  for (int t = 0; t < 500; ++t) {
    const auto seq = nevai::testing::random_model(rng);
    double u = x(rng), v = x(rng);
    if (std::abs(u - v) < 1e-3) v = u + 0.25;
    const Index n = deg(rng);
    const double direct = cd_kernel_direct(seq, u, v, n);
    const double formula = cd_kernel_formula(seq, u, v, n);
    const double scale = std::sqrt(cd_kernel_direct(seq, u, u, n) * cd_kernel_direct(seq, v, v, n));
    ASSERT_LE(std::abs(direct - formula) / scale, 1e-10) << seq.describe() << " n=" << n;
    ASSERT_LE(std::abs(formula - cd_kernel_formula(seq, v, u, n)), 1e-12 * scale);
  }
}

TEST(CdKernel, RejectsCoincidentPoints) {
  const auto seq = make_free();
  EXPECT_THROW(cd_kernel_formula(seq, 0.5, 0.5, 10), DegenerateInputError);
  EXPECT_THROW(cd_kernel_formula(seq, 0.5, 0.5 + 1e-14, 10), DegenerateInputError);
  EXPECT_NO_THROW(cd_kernel_formula(seq, 0.5, 0.5 + 1e-6, 10));
}

TEST(Christoffel, ValuesAndMonotonicity) {
  const auto seq = make_free();
  EXPECT_EQ(christoffel(seq, 0.7, 0), 1.0);
  EXPECT_NEAR(christoffel(seq, 0.0, 4), 1.0 / 3.0, 1e-15);
  std::mt19937_64 rng(19);
  for (int t = 0; t < 20; ++t) {
    const auto m = nevai::testing::random_model(rng);
    double last = 1.0;
    for (Index n = 1; n < 100; ++n) {
      const double now = christoffel(m, 0.3, n);
      ASSERT_GT(now, 0.0);
      ASSERT_LE(now, last);
      last = now;
    }
  }
}

TEST(Christoffel, VariationalOracle) {
  const auto seq = make_free();
  EXPECT_NEAR(christoffel_via_moments(seq, 0.0, 0), 1.0, 1e-14);
  EXPECT_NEAR(christoffel_via_moments(seq, 0.0, 4), 1.0 / 3.0, 1e-12);
  EXPECT_LE(rel_err(christoffel_via_moments(seq, 1.5, 8), christoffel(seq, 1.5, 8)), 1e-8);
  EXPECT_THROW(christoffel_via_moments(seq, 0.0, 13), DomainError);
  std::mt19937_64 rng(23);
  for (int t = 0; t < 10; ++t) {
    const auto m = nevai::testing::random_model(rng);
    for (Index n = 0; n <= 6; ++n) {
      try {
        EXPECT_LE(rel_err(christoffel_via_moments(m, 0.2, n), christoffel(m, 0.2, n)), 1e-8) << m.describe();
      } catch (const ConditioningError&) {
      }
    }
  }
}

TEST(EtaMoments, HandExamples) {
  const auto seq = make_free();
  const EtaMoments m = eta_moments(seq, 0.0, 4);
  EXPECT_NEAR(m.second, 1.0 / 3.0, 1e-15);
  EXPECT_EQ(m.first, 0.0);
  EXPECT_EQ(eta_moment_k(seq, 0.0, 4, 0), 1.0);
  EXPECT_NEAR(eta_moment_k(seq, 0.0, 4, 2), 1.0 / 3.0, 1e-14);
}

TEST(EtaMoments, SecondMomentDecaysForFreeModel) {
  const auto seq = make_free();
  for (double x0 : {-1.5, 0.0, 0.9}) {
    EXPECT_LT(eta_moments(seq, x0, 20000).second, 1e-3);
    EXPECT_LT(eta_moments(seq, x0, 20000).second, eta_moments(seq, x0, 200).second);
  }
}

TEST(EtaMoments, ClosedFormsMatchOperatorMoments) {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> x(-2.5, 2.5);
  std::uniform_int_distribution<Index> deg(0, 300);
  for (int t = 0; t < 60; ++t) {
    const auto seq = nevai::testing::random_model(rng);
    const double x0 = x(rng);
    const Index n = deg(rng);
    const EtaMoments m = eta_moments(seq, x0, n);
    EXPECT_GE(m.second, 0.0);
    EXPECT_GE(m.second * (1 + 1e-12), m.first * m.first);
    EXPECT_EQ(eta_moment_k(seq, x0, n, 0, x0), 1.0);
    const double scale = std::max(1.0, m.second);
    EXPECT_NEAR(eta_moment_k(seq, x0, n, 1, x0), m.first, 1e-10 * scale);
    EXPECT_NEAR(eta_moment_k(seq, x0, n, 2, x0), m.second, 1e-10 * scale);
    // Raw moments about 0.
    const double raw1 = eta_moment_k(seq, x0, n, 1);
    const double raw2 = eta_moment_k(seq, x0, n, 2);
    EXPECT_NEAR(raw1 - x0, m.first, 1e-10 * std::max(1.0, std::abs(x0)));
    EXPECT_NEAR(raw2 - raw1 * raw1, m.second - m.first * m.first, 1e-9 * std::max(1.0, x0 * x0));
  }
}

TEST(EtaMoments, BoundedByNormPowers) {
  const auto seq = make_anderson(9);
  const double norm = 2.0 * seq.bounds().a_plus + seq.bounds().b_plus;
  for (unsigned k = 0; k <= 30; ++k) {
    EXPECT_LE(std::abs(eta_moment_k(seq, 0.1, 50, k)), std::pow(norm, k) * (1 + 1e-12));
  }
  EXPECT_THROW(eta_moment_k(seq, 0.1, 50, 31), DomainError);
}

TEST(NevaiRatio, FreeModel) {
  const auto r = nevai_ratio_stream(make_free(), 0.0, 1000);
  ASSERT_EQ(r.size(), 1001u);
  EXPECT_EQ(r[0], 1.0);
  for (Index n = 1; n <= 1000; ++n) {
    if (n % 2 == 1) {
      EXPECT_NEAR(r[n], 0.0, 1e-20);
    } else {
      EXPECT_NEAR(r[n], 1.0 / static_cast<double>(n / 2 + 1), 1e-12);
    }
  }
}

TEST(NevaiRatio, ConstantModelAboveSpectrum) {
  const auto r = nevai_ratio_stream(make_constant(1.0, 0.0), 2.5, 200);
  EXPECT_NEAR(r.back(), 0.75, 1e-12);
}

TEST(NevaiRatio, StaysInUnitIntervalForHugePolynomials) {
  // p_n(5/2) ~ 2^n leaves the double range near n = 1024.
  const auto seq = make_constant(1.0, 0.0);
  OrthoStream s(seq, 2.5);
  s.advance_to(2000);
  EXPECT_GT(s.state().log_abs_p(), 709.0);
  const auto r = nevai_ratio_stream(seq, 2.5, 2000);
  for (double v : r) {
    ASSERT_GE(v, 0.0);
    ASSERT_LE(v, 1.0);
  }
  EXPECT_NEAR(r.back(), 0.75, 1e-12);
  // Block41 through C_3 at the top of the hyperbolic band.
  const auto blocks = make_block41();
  const Block c3 = blocks.block_layout()->block(BlockKind::C, 3);
  for (double v : nevai_ratio_stream(blocks, 1.95, c3.last)) {
    ASSERT_GE(v, 0.0);
    ASSERT_LE(v, 1.0);
  }
}

TEST(RatioPanel, Examples) {
  std::vector<double> ones(100001, 1.0);
  const RatioPanel flat = seq_ratio_panel(ones);
  EXPECT_LT(flat.c_over_s.back(), 1e-4);
  EXPECT_NEAR(flat.s_over_s_next.back(), 1.0, 1e-4);

  std::vector<double> log_sq(60), log_geo(200);
  for (std::size_t n = 0; n < log_sq.size(); ++n) log_sq[n] = static_cast<double>(n * n);
  for (std::size_t n = 0; n < log_geo.size(); ++n) log_geo[n] = static_cast<double>(n) * std::log(2.0);
  const RatioPanel sq = seq_ratio_panel_log(log_sq);
  EXPECT_NEAR(sq.c_over_s.back(), 1.0, 1e-12);
  // c_{n-1} / S_n -> 0 while the pair (c_{n-1} + c_n) / S_n -> 1.
  EXPECT_NEAR(sq.backward_pair.back() - sq.c_over_s.back(), 0.0, 1e-12);
  const RatioPanel geo = seq_ratio_panel_log(log_geo);
  EXPECT_NEAR(geo.c_over_s.back(), 0.5, 1e-12);

  EXPECT_THROW(seq_ratio_panel(std::vector<double>(5, 0.0)), DomainError);
  EXPECT_THROW(seq_ratio_panel(std::vector<double>{0.0, 1.0}), DomainError);
}

TEST(RatioPanel, CoConvergence) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::size_t N = 100000;
  for (int t = 0; t < 100; ++t) {
    std::vector<double> log_c(N + 1);
    const bool polynomial = t % 2 == 0;
    const double alpha = 3.0 * u(rng), rho = 1.05 + u(rng);
    for (std::size_t n = 0; n <= N; ++n) {
      const double nd = static_cast<double>(n);
      log_c[n] = polynomial ? alpha * std::log1p(nd) + 0.5 * std::sin(nd) : nd * std::log(rho);
    }
    const RatioPanel p = seq_ratio_panel_log(log_c);
    const std::size_t last = p.c_over_s.size() - 1;
    const bool converged[] = {p.c_over_s[last] < 1e-2, std::abs(p.s_over_s_next[last] - 1.0) < 1e-2,
                              p.c_next_over_s[last] < 1e-2, p.forward_pair[last] < 1e-2,
                              p.backward_pair[last] < 1e-2};
    for (bool c : converged) EXPECT_EQ(c, polynomial) << "trial " << t;
  }
}

TEST(Cesaro, Examples) {
  std::vector<double> ones(50, 1.0), lin(50);
  for (std::size_t i = 0; i < lin.size(); ++i) lin[i] = static_cast<double>(i + 1);
  const auto r1 = cesaro_ratio(ones);
  for (std::size_t i = 0; i < r1.size(); ++i) EXPECT_NEAR(r1[i], 1.0 / static_cast<double>(i + 1), 1e-15);
  const auto r2 = cesaro_ratio(lin);
  for (std::size_t i = 0; i < r2.size(); ++i) {
    const double n = static_cast<double>(i + 1);
    EXPECT_NEAR(r2[i], 2.0 / (n + 1.0), 1e-14);
    // a_n / (n C_n) = (C_n - C_{n-1} + C_{n-1} / n) / C_n with C_n = (n+1)/2.
    const double c = (n + 1) / 2, cp = n / 2;
    EXPECT_NEAR(r2[i], (c - cp + cp / n) / c, 1e-12);
  }
  std::vector<double> alt{-1.0, 1.0, -1.0, 1.0};
  try {
    cesaro_ratio(alt);
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("n = 2"), std::string::npos);
  }
}
