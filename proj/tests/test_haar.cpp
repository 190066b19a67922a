#include "dsmreg/haar.hpp"
#include "dsmreg/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include <gtest/gtest.h>

using namespace dsmreg;

TEST(HaarIndex, LevelOffsetRoundTrip) {
  for (int j = 2; j <= 1024; ++j) {
    const HaarIndex idx(j);
    EXPECT_GE(idx.level(), 1);
    EXPECT_GE(idx.offset(), 1);
    EXPECT_LE(idx.offset(), 1 << (idx.level() - 1));
    EXPECT_EQ(HaarIndex::from_level_offset(idx.level(), idx.offset()).j(), j);
  }
  EXPECT_EQ(HaarIndex(2).level(), 1);
  EXPECT_EQ(HaarIndex(3).level(), 2);
  EXPECT_EQ(HaarIndex(3).offset(), 1);
  EXPECT_EQ(HaarIndex(8).level(), 3);
  EXPECT_EQ(HaarIndex(8).offset(), 4);
  EXPECT_THROW(HaarIndex(0), std::invalid_argument);
  EXPECT_THROW(HaarIndex::from_level_offset(2, 3), std::invalid_argument);
}

TEST(HaarEval, PointValues) {
  EXPECT_EQ(haar_eval(HaarIndex(1), 0.3), 1.0);
  EXPECT_EQ(haar_eval(HaarIndex(2), 0.25), 1.0);
  EXPECT_EQ(haar_eval(HaarIndex(2), 0.75), -1.0);
  EXPECT_EQ(haar_eval(HaarIndex(3), 0.6), 0.0);
  EXPECT_DOUBLE_EQ(haar_eval(HaarIndex(4), 0.6), std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(haar_eval(HaarIndex(4), 0.8), -std::sqrt(2.0));
}

TEST(HaarEval, RightOpenCellsAndLeftLimitAtOne) {
  EXPECT_EQ(haar_eval(HaarIndex(2), 0.5), -1.0);
  EXPECT_EQ(haar_eval(HaarIndex(2), 0.0), 1.0);
  EXPECT_EQ(haar_eval(HaarIndex(2), 1.0), -1.0);
  EXPECT_EQ(haar_eval(HaarIndex(3), 1.0), 0.0);
  EXPECT_DOUBLE_EQ(haar_eval(HaarIndex(4), 1.0), -std::sqrt(2.0));
  EXPECT_THROW(haar_eval(HaarIndex(2), -0.1), std::invalid_argument);
  EXPECT_THROW(haar_eval(HaarIndex(2), 1.5), std::invalid_argument);
}

TEST(ExpHaarInner, ClosedFormValues) {
  EXPECT_DOUBLE_EQ(exp_haar_inner(0.0, HaarIndex(1)), 1.0);
  for (int j = 2; j <= 64; ++j) EXPECT_EQ(exp_haar_inner(0.0, HaarIndex(j)), 0.0);
  EXPECT_NEAR(exp_haar_inner(1.0, HaarIndex(1)), 1.0 - std::exp(-1.0), 1e-15);
  EXPECT_NEAR(exp_haar_inner(1.0, HaarIndex(1)), 0.6321205588, 1e-10);
}

TEST(ExpHaarInner, SmallArgumentBranchIsContinuous) {
  // Straddle the series switch c*h = 1e-6 and compare to Gauss-Legendre.
  for (double c : {1e-9, 5e-7, 9.99e-7, 1.001e-6, 2e-6, 1e-3}) {
    for (int j : {1, 2, 5, 17}) {
      const HaarIndex idx(j);
      double ref = 0.0;
      std::array<HaarIndex::Piece, 2> pc{};
      const int n = idx.pieces(pc);
      for (int i = 0; i < n; ++i) {
        ref += pc[i].value *
               gauss_legendre4([c](double t) { return std::exp(-c * t); }, pc[i].lo, pc[i].hi);
      }
      EXPECT_NEAR(exp_haar_inner(c, idx), ref, 1e-15) << "c=" << c << " j=" << j;
    }
  }
}

TEST(TexpIntegral, MatchesQuadratureAcrossRegimes) {
  for (double c : {0.0, 1e-8, 1e-3, 0.3, 0.99, 1.0, 5.0, 200.0}) {
    for (auto [a, b] : {std::pair{0.0, 1.0}, std::pair{0.25, 0.5}, std::pair{0.9, 0.90001}}) {
      double ref = 0.0;
      // Keep c * width small so the reference itself is accurate to roundoff.
      const int pieces = std::max(64, static_cast<int>(std::ceil(16.0 * c * (b - a))));
      for (int k = 0; k < pieces; ++k) {
        const double lo = a + (b - a) * k / pieces;
        const double hi = a + (b - a) * (k + 1) / pieces;
        ref += gauss_legendre4([c](double t) { return t * std::exp(-c * t); }, lo, hi);
      }
      EXPECT_NEAR(texp_integral(c, a, b), ref, 1e-15 + 1e-13 * std::abs(ref)) << "c=" << c << " a=" << a;
    }
  }
}

TEST(HaarBasis, AnalyticGramIsIdentity) {
  // <Phi_i, Phi_j> from the constant pieces of both functions.
  const int m = 8;
  const int n = 1 << m;
  double worst = 0.0;
  for (int i = 1; i <= n; ++i) {
    std::array<HaarIndex::Piece, 2> pi{};
    const int ni = HaarIndex(i).pieces(pi);
    for (int j = i; j <= n; ++j) {
      std::array<HaarIndex::Piece, 2> pj{};
      const int nj = HaarIndex(j).pieces(pj);
      double g = 0.0;
      for (int a = 0; a < ni; ++a) {
        for (int b = 0; b < nj; ++b) {
          const double lo = std::max(pi[a].lo, pj[b].lo);
          const double hi = std::min(pi[a].hi, pj[b].hi);
          if (hi > lo) g += pi[a].value * pj[b].value * (hi - lo);
        }
      }
      worst = std::max(worst, std::abs(g - (i == j ? 1.0 : 0.0)));
    }
  }
  EXPECT_LE(worst, 1e-12);
}

TEST(Project, ConstantAndBasisFunction) {
  const auto one = project([](double) { return 1.0; }, 3);
  ASSERT_EQ(one.size(), 8u);
  EXPECT_NEAR(one.values[0], 1.0, 1e-14);
  for (int j = 1; j < 8; ++j) EXPECT_NEAR(one.values[j], 0.0, 1e-14);

  const auto phi5 = project([](double x) { return haar_eval(HaarIndex(5), x); }, 3);
  for (int j = 0; j < 8; ++j) EXPECT_NEAR(phi5.values[j], j == 4 ? 1.0 : 0.0, 1e-12);
}

TEST(Project, LinearFunctionLevelOne) {
  // int_0^1 t dt = 1/2; int_0^{1/2} t dt - int_{1/2}^1 t dt = 1/8 - 3/8 = -1/4.
  const auto c = project([](double t) { return t; }, 1);
  EXPECT_NEAR(c.values[0], 0.5, 1e-15);
  EXPECT_NEAR(c.values[1], -0.25, 1e-15);
}

TEST(Project, SampledDataAndCoarseGridRejected) {
  const auto samples = SampledFunction::sample([](double t) { return t; }, 64);
  const auto c = project(samples, 1);
  EXPECT_NEAR(c.values[0], 0.5, 1e-15);
  EXPECT_NEAR(c.values[1], -0.25, 1e-15);
  EXPECT_NO_THROW(project(samples, 3));
  EXPECT_THROW(project(samples, 4), std::invalid_argument);
  EXPECT_THROW(project(SampledFunction::sample([](double t) { return t; }, 60), 3), std::invalid_argument);
}

TEST(Project, ParsevalOnAlignedPiecewiseConstants) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  for (int m = 1; m <= 8; ++m) {
    const int n = 1 << m;
    std::vector<double> heights(static_cast<std::size_t>(n));
    for (double& h : heights) h = dist(rng);
    std::vector<double> cells(heights.size());
    double norm2 = 0.0;
    for (std::size_t k = 0; k < heights.size(); ++k) {
      cells[k] = heights[k] / n;
      norm2 += heights[k] * heights[k] / n;
    }
    const Eigen::VectorXd coeffs = haar_analysis(cells);
    EXPECT_NEAR(coeffs.squaredNorm(), norm2, 1e-12 * std::max(1.0, norm2)) << "m=" << m;

    // Synthesis reproduces the step heights.
    const HaarCoefficients u{m, coeffs};
    for (int k = 0; k < n; ++k) {
      EXPECT_NEAR(u.evaluate((k + 0.5) / n), heights[static_cast<std::size_t>(k)], 1e-12);
    }
  }
}

TEST(HaarCoefficients, EmbeddingPreservesValues) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  HaarCoefficients u = HaarCoefficients::zeros(3);
  for (auto& v : u.values) v = dist(rng);
  const auto big = u.embedded(7);
  EXPECT_EQ(big.size(), 128u);
  for (int k = 0; k <= 1000; ++k) {
    const double x = k / 1000.0;
    EXPECT_NEAR(u.evaluate(x), big.evaluate(x), 1e-14);
  }
  EXPECT_THROW(big.embedded(3), std::invalid_argument);
}

TEST(HaarCoefficients, EvaluateMatchesBasisSum) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  HaarCoefficients u = HaarCoefficients::zeros(5);
  for (auto& v : u.values) v = dist(rng);
  for (double x : {0.0, 0.01, 0.3, 0.5, 0.77, 0.99, 1.0}) {
    double sum = 0.0;
    for (int j = 1; j <= 32; ++j) sum += u.values[j - 1] * haar_eval(HaarIndex(j), x);
    EXPECT_NEAR(u.evaluate(x), sum, 1e-14) << "x=" << x;
  }
}

TEST(Project, ApproximationErrorDecreasesWithLevel) {
  // ||P_m t - t||^2 = 1/3 - ||P_m t||^2 = 1/(12 * 4^m).
  double prev = 1.0;
  for (int m = 1; m <= 8; ++m) {
    const auto c = project([](double t) { return t; }, m);
    const double err = std::sqrt(std::max(0.0, 1.0 / 3.0 - c.values.squaredNorm()));
    EXPECT_LE(err, prev);
    EXPECT_NEAR(err, std::sqrt(1.0 / (12.0 * std::ldexp(1.0, 2 * m))), 1e-7);
    prev = err;
  }
  EXPECT_LT(prev, 2e-3);
}
