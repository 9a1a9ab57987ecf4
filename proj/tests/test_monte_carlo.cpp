#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "levysmile/monte_carlo.hpp"
#include "oracles.hpp"

using namespace levysmile;

namespace {

ModelParams impvol() {
  return {0.2, 0.1, 0.0, 0.0, 1.0, -1.25, {1.0, -0.2, 0.2}, {1.0, -0.1, 0.1}};
}

McConfig config(std::size_t paths, double dt, std::uint64_t seed = 42) {
  McConfig c;
  c.n_paths = paths;
  c.dt = dt;
  c.seed = seed;
  return c;
}

}  // namespace

TEST(MonteCarlo, DegenerateModelStaysPut) {
  ModelParams p;
  const auto out = simulate_terminal(p, 1.0, 0.3, config(100, 0.01));
  ASSERT_EQ(out.size(), 100u);
  for (const auto& o : out) {
    EXPECT_EQ(o.y, 0.3);
    EXPECT_FALSE(o.defaulted);
  }
  const auto est = mc_price(p, {1.0, 0.3, 0.0}, config(1000, 0.1));
  EXPECT_DOUBLE_EQ(est.price, std::exp(0.3) - 1.0);
  EXPECT_EQ(est.std_error, 0.0);
}

TEST(MonteCarlo, MartingaleUnderDiffusion) {
  ModelParams p;
  p.a0 = 0.3;
  const PathPayoff spot = [](const PathOutcome& o) { return std::exp(o.y); };
  const auto est = mc_expectations(p, 1.0, 0.1, std::span(&spot, 1), config(100000, 1.0)).front();
  EXPECT_NEAR(est.price, std::exp(0.1), 3.0 * est.std_error);
}

TEST(MonteCarlo, MartingaleAcrossParameterDraws) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const PathPayoff spot = [](const PathOutcome& o) { return std::exp(o.y); };
  for (int trial = 0; trial < 4; ++trial) {
    ModelParams p;
    p.a0 = 0.1 + 0.3 * u(rng);
    p.a1 = 0.3 * u(rng);
    p.eps = u(rng);
    p.beta = -1.5 + 3.0 * u(rng);
    p.nu0 = {2.0 * u(rng), -0.3 + 0.6 * u(rng), 0.05 + 0.2 * u(rng)};
    p.nu1 = {2.0 * u(rng), -0.3 + 0.6 * u(rng), 0.05 + 0.2 * u(rng)};
    const auto est = mc_expectations(p, 0.25, 0.0, std::span(&spot, 1), config(20000, 5e-3, 7 + trial)).front();
    EXPECT_NEAR(est.price, 1.0, 4.0 * est.std_error) << trial;
  }
}

TEST(MonteCarlo, ConstantHazardDefaultFraction) {
  ModelParams p;
  p.a0 = 0.2;
  p.c0 = 0.009;
  const std::size_t n = 100000;
  const auto est = mc_price(p, {1.0, 0.0, 0.0}, config(n, 0.1));
  const double q = 1.0 - std::exp(-0.009);
  EXPECT_NEAR(est.default_fraction(), q, 3.0 * std::sqrt(q * (1.0 - q) / n));
}

TEST(MonteCarlo, BlackScholesCall) {
  ModelParams p;
  p.a0 = 0.25;
  // constant coefficients make a single Euler step exact
  const auto est = mc_price(p, {0.5, 0.0, 0.05}, config(1000000, 0.5));
  EXPECT_NEAR(est.price, oracle::bs_call(0.25, 0.5, 0.0, 0.05), 3.0 * est.std_error);
}

TEST(MonteCarlo, DefaultablePutMatchesParity) {
  ModelParams p;
  p.a0 = 0.2;
  p.c0 = 0.5;
  const OptionSpec put{1.0, 0.0, 0.0, OptionKind::Put};
  const auto est = mc_price(p, put, config(200000, 0.05));
  EXPECT_NEAR(est.price, defaultable_value(p, put, 0), 3.0 * est.std_error);
  EXPECT_GT(est.default_fraction(), 0.3);
}

TEST(MonteCarlo, SeedDeterminismAndThreadIndependence) {
  const auto p = impvol();
  auto cfg = config(5000, 5e-3, 123);
  cfg.n_threads = 1;
  const auto a = mc_price(p, {0.25, -0.1, -0.05}, cfg);
  const auto b = mc_price(p, {0.25, -0.1, -0.05}, cfg);
  cfg.n_threads = 3;
  const auto c = mc_price(p, {0.25, -0.1, -0.05}, cfg);
  EXPECT_EQ(a.price, b.price);
  EXPECT_EQ(a.std_error, b.std_error);
  EXPECT_EQ(a.price, c.price);
  EXPECT_EQ(a.std_error, c.std_error);
  cfg.seed = 124;
  EXPECT_NE(mc_price(p, {0.25, -0.1, -0.05}, cfg).price, a.price);
}

TEST(MonteCarlo, MultiStrikeMatchesSingle) {
  const auto p = impvol();
  const auto cfg = config(4000, 1e-2);
  const std::vector<double> ks{-0.2, 0.0, 0.1};
  const auto batch = mc_price(p, 0.25, 0.0, ks, OptionKind::Call, cfg);
  for (std::size_t i = 0; i < ks.size(); ++i) {
    EXPECT_EQ(batch[i].price, mc_price(p, {0.25, 0.0, ks[i]}, cfg).price);
  }
}

TEST(MonteCarlo, StepRefinement) {
  const auto p = impvol();
  const OptionSpec opt{0.25, -0.1, -0.1};
  const auto coarse = mc_price(p, opt, config(100000, 2e-3, 1));
  const auto fine = mc_price(p, opt, config(100000, 1e-3, 2));
  const double se = std::hypot(coarse.std_error, fine.std_error);
  EXPECT_LT(std::abs(coarse.price - fine.price), 2.0 * se);
}

TEST(MonteCarlo, FloorAbsorbsAndDefaults) {
  ModelParams p;
  p.a0 = 1.0;
  auto cfg = config(2000, 1e-2);
  cfg.y_floor = -0.5;
  const auto out = simulate_terminal(p, 1.0, 0.0, cfg);
  std::size_t absorbed = 0;
  for (const auto& o : out) {
    if (o.absorbed) {
      ++absorbed;
      EXPECT_TRUE(o.defaulted);
    }
  }
  EXPECT_GT(absorbed, 0u);
}

TEST(MonteCarlo, ConfigValidation) {
  ModelParams p;
  p.a0 = 0.2;
  EXPECT_THROW(mc_price(p, {0.5, 0.0, 0.0}, config(0, 1e-3)), std::invalid_argument);
  EXPECT_THROW(mc_price(p, {0.5, 0.0, 0.0}, config(10, 1.0)), std::invalid_argument);
  EXPECT_THROW(mc_price(p, {0.5, 0.0, 0.0}, config(10, -1e-3)), std::invalid_argument);
}
