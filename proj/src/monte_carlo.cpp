#include "levysmile/monte_carlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <stdexcept>
#include <thread>

namespace levysmile {

namespace {

constexpr std::size_t kBlock = 2048;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

class PathSimulator {
 public:
  PathSimulator(const ModelParams& p, double t, double y0, const McConfig& cfg)
      : p_(p), y0_(y0), floor_(cfg.y_floor), seed_(cfg.seed) {
    steps_ = static_cast<std::size_t>(std::ceil(t / cfg.dt - 1e-9));
    h_ = t / static_cast<double>(steps_);
    sqrt_h_ = std::sqrt(h_);
    comp0_ = p.nu0.exp_compensator();
    comp1_ = p.nu1.exp_compensator();
  }

  PathOutcome run(std::size_t path) const {
    std::mt19937_64 rng(splitmix64(seed_ ^ splitmix64(path)));
    std::normal_distribution<double> gauss;
    std::poisson_distribution<int> poisson;
    std::exponential_distribution<double> expo;

    const double barrier = expo(rng);
    double hazard = 0.0;
    double y = y0_;
    for (std::size_t i = 0; i < steps_; ++i) {
      const double w = p_.eps * std::exp(p_.beta * y);
      const double var = p_.a0 * p_.a0 + w * p_.a1 * p_.a1;
      const double kill = p_.c0 + w * p_.c1;
      const double alpha = kill - 0.5 * var - comp0_ - w * comp1_;

      hazard += kill * h_;
      double next = y + alpha * h_ + std::sqrt(var) * sqrt_h_ * gauss(rng);
      next += jump_sum(p_.nu0, p_.nu0.intensity * h_, rng, gauss, poisson);
      next += jump_sum(p_.nu1, w * p_.nu1.intensity * h_, rng, gauss, poisson);
      next -= h_ * (p_.nu0.first_moment() + w * p_.nu1.first_moment());
      y = next;

      if (hazard >= barrier) return {y, true, false};
      if (y <= floor_) return {floor_, true, true};
    }
    return {y, false, false};
  }

 private:
  static double jump_sum(const GaussianJumpMeasure& m, double mean_count, std::mt19937_64& rng,
                         std::normal_distribution<double>& gauss,
                         std::poisson_distribution<int>& poisson) {
    if (!(mean_count > 0.0)) return 0.0;
    const int count = poisson(rng, std::poisson_distribution<int>::param_type(mean_count));
    if (count == 0) return 0.0;
    return count * m.mean + std::sqrt(static_cast<double>(count)) * m.std * gauss(rng);
  }

  const ModelParams& p_;
  double y0_;
  double floor_;
  std::uint64_t seed_;
  std::size_t steps_ = 0;
  double h_ = 0.0;
  double sqrt_h_ = 0.0;
  double comp0_ = 0.0;
  double comp1_ = 0.0;
};

// Welford accumulator; merging equal-valued samples keeps m2 exactly zero.
struct Moments {
  double n = 0.0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    n += 1.0;
    const double d = x - mean;
    mean += d / n;
    m2 += d * (x - mean);
  }
  void merge(const Moments& o) {
    if (o.n == 0.0) return;
    const double total = n + o.n;
    const double d = o.mean - mean;
    mean += d * o.n / total;
    m2 += o.m2 + d * d * n * o.n / total;
    n = total;
  }
};

struct BlockResult {
  std::vector<Moments> moments;
  std::size_t defaulted = 0;
  std::size_t absorbed = 0;
};

unsigned thread_count(const McConfig& cfg, std::size_t blocks) {
  unsigned n = cfg.n_threads != 0 ? cfg.n_threads : std::max(1U, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(blocks, 1)));
}

// Runs `body(block_index)` for every block on a small worker pool.
template <typename Body>
void for_each_block(std::size_t blocks, unsigned threads, Body&& body) {
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t b = next++; b < blocks; b = next++) body(b);
  };
  if (threads <= 1) {
    worker();
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(threads - 1);
  for (unsigned i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
}

}  // namespace

void McConfig::validate(double t) const {
  if (n_paths < 1) throw std::invalid_argument("n_paths must be >= 1");
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be > 0");
  if (!(t > 0.0)) throw std::invalid_argument("t must be > 0");
  if (dt > t) throw std::invalid_argument("dt must not exceed the maturity");
}

std::vector<PathOutcome> simulate_terminal(const ModelParams& params, double t, double y,
                                           const McConfig& cfg) {
  params.validate();
  cfg.validate(t);
  const PathSimulator sim(params, t, y, cfg);
  std::vector<PathOutcome> out(cfg.n_paths);
  const std::size_t blocks = (cfg.n_paths + kBlock - 1) / kBlock;
  for_each_block(blocks, thread_count(cfg, blocks), [&](std::size_t b) {
    const std::size_t end = std::min(cfg.n_paths, (b + 1) * kBlock);
    for (std::size_t i = b * kBlock; i < end; ++i) out[i] = sim.run(i);
  });
  return out;
}

std::vector<McEstimate> mc_expectations(const ModelParams& params, double t, double y,
                                        std::span<const PathPayoff> payoffs, const McConfig& cfg) {
  params.validate();
  cfg.validate(t);
  const PathSimulator sim(params, t, y, cfg);
  const std::size_t blocks = (cfg.n_paths + kBlock - 1) / kBlock;
  std::vector<BlockResult> results(blocks);
  for_each_block(blocks, thread_count(cfg, blocks), [&](std::size_t b) {
    BlockResult& r = results[b];
    r.moments.resize(payoffs.size());
    const std::size_t end = std::min(cfg.n_paths, (b + 1) * kBlock);
    for (std::size_t i = b * kBlock; i < end; ++i) {
      const PathOutcome o = sim.run(i);
      r.defaulted += o.defaulted ? 1 : 0;
      r.absorbed += o.absorbed ? 1 : 0;
      for (std::size_t j = 0; j < payoffs.size(); ++j) r.moments[j].add(payoffs[j](o));
    }
  });

  // merge in block order so the sums do not depend on scheduling
  std::vector<Moments> total(payoffs.size());
  std::size_t defaulted = 0;
  std::size_t absorbed = 0;
  for (const BlockResult& r : results) {
    for (std::size_t j = 0; j < payoffs.size(); ++j) total[j].merge(r.moments[j]);
    defaulted += r.defaulted;
    absorbed += r.absorbed;
  }

  std::vector<McEstimate> out(payoffs.size());
  for (std::size_t j = 0; j < payoffs.size(); ++j) {
    McEstimate& e = out[j];
    e.n_paths = cfg.n_paths;
    e.n_defaulted = defaulted;
    e.n_absorbed = absorbed;
    e.price = total[j].mean;
    e.std_error = cfg.n_paths > 1
                      ? std::sqrt(total[j].m2 / (total[j].n - 1.0) / total[j].n)
                      : 0.0;
  }
  return out;
}

std::vector<McEstimate> mc_price(const ModelParams& params, double t, double y,
                                 std::span<const double> strikes, OptionKind kind,
                                 const McConfig& cfg) {
  std::vector<PathPayoff> payoffs;
  payoffs.reserve(strikes.size());
  for (double k : strikes) {
    OptionSpec{t, y, k, kind}.validate();
    const double strike = std::exp(k);
    if (kind == OptionKind::Call) {
      payoffs.emplace_back([strike](const PathOutcome& o) {
        return o.defaulted ? 0.0 : std::max(std::exp(o.y) - strike, 0.0);
      });
    } else {
      payoffs.emplace_back([strike](const PathOutcome& o) {
        return o.defaulted ? strike : std::max(strike - std::exp(o.y), 0.0);
      });
    }
  }
  return mc_expectations(params, t, y, payoffs, cfg);
}

McEstimate mc_price(const ModelParams& params, const OptionSpec& opt, const McConfig& cfg) {
  const double k[] = {opt.k};
  return mc_price(params, opt.t, opt.y, k, opt.kind, cfg).front();
}

}  // namespace levysmile
