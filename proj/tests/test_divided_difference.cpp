#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "levysmile/divided_difference.hpp"
#include "oracles.hpp"

using namespace levysmile;
using cplx = std::complex<double>;

TEST(DividedDifference, SingleNode) {
  const std::vector<cplx> z{{-0.3, 0.7}};
  EXPECT_LT(std::abs(divided_diff_exp(1.7, z) - std::exp(1.7 * z[0])), 1e-15);
}

TEST(DividedDifference, ConfluentPair) {
  const cplx phi{-0.4, 0.25};
  const std::vector<cplx> z{phi, phi};
  const double t = 0.8;
  EXPECT_LT(std::abs(divided_diff_exp(t, z) - t * std::exp(t * phi)), 1e-15);
}

TEST(DividedDifference, UnitInterval) {
  const std::vector<cplx> z{0.0, 1.0};
  EXPECT_NEAR(divided_diff_exp(1.0, z).real(), std::exp(1.0) - 1.0, 1e-15);
}

TEST(DividedDifference, FullyConfluentLimit) {
  const cplx phi{-1.1, 2.0};
  const double t = 0.6;
  for (std::size_t n = 1; n <= 12; ++n) {
    const std::vector<cplx> z(n + 1, phi);
    const double fact = std::tgamma(static_cast<double>(n) + 1.0);
    const cplx expected = std::pow(t, static_cast<double>(n)) * std::exp(t * phi) / fact;
    EXPECT_LT(std::abs(divided_diff_exp(t, z) - expected), 1e-14 * std::abs(expected)) << n;
  }
}

TEST(DividedDifference, MatchesPartialFractionsForSeparatedNodes) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<cplx> z;
    for (int i = 0; i < 6; ++i) z.push_back({u(rng) + 7.0 * i, u(rng)});
    const double t = 0.5;
    const auto all = exp_divided_differences(t, z);
    for (std::size_t n = 0; n < z.size(); ++n) {
      const std::vector<cplx> prefix(z.begin(), z.begin() + static_cast<long>(n) + 1);
      const cplx ref = oracle::divided_difference_distinct(t, prefix);
      EXPECT_LT(std::abs(all[n] - ref), 1e-11 * (std::abs(ref) + 1e-3)) << trial << " " << n;
    }
  }
}

TEST(DividedDifference, MatchesContourIntegralNearConfluence) {
  const double t = 0.5;
  for (double gap : {1e-3, 1e-6, 1e-9, 1e-12}) {
    const std::vector<cplx> z{{-0.2, 0.1}, {-0.2 + gap, 0.1}, {-0.7, -0.4}, {-0.2, 0.1 + gap}};
    const cplx ref = oracle::divided_difference_contour(t, z);
    EXPECT_LT(std::abs(divided_diff_exp(t, z) - ref), 1e-13) << gap;
  }
}

TEST(DividedDifference, LargeSpreadAgainstContour) {
  // shifted symbols at large Fourier arguments have big negative real parts
  const double t = 1.0;
  const std::vector<cplx> z{{-40.0, 3.0}, {-38.0, 5.0}, {-36.5, 7.0}, {-35.0, 9.0}};
  const cplx ref = oracle::divided_difference_contour(t, z, 1 << 14);
  const cplx got = divided_diff_exp(t, z);
  EXPECT_LT(std::abs(got - ref), 1e-10 * std::abs(ref));
}

TEST(DividedDifference, SymmetricInNodeOrder) {
  const double t = 0.9;
  std::vector<cplx> z{{0.1, 0.2}, {-0.5, 0.0}, {0.3, -0.7}, {-1.0, 1.0}, {0.0, 0.0}};
  const cplx a = divided_diff_exp(t, z);
  std::reverse(z.begin(), z.end());
  const cplx b = divided_diff_exp(t, z);
  EXPECT_LT(std::abs(a - b), 1e-14);
}

TEST(DividedDifference, RejectsEmpty) {
  const std::vector<cplx> z;
  EXPECT_THROW(divided_diff_exp(1.0, z), std::invalid_argument);
}
