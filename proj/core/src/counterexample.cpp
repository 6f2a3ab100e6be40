#include "snc/counterexample.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "snc/error.hpp"
#include "snc/parallel.hpp"
#include "snc/rng.hpp"

namespace snc {

double poisson_service_rate(double mean, double theta) {
  // ln E[e^{-theta s}] = mean (e^{-theta} - 1)
  return -mean * std::expm1(-theta) / theta;
}

double brute_force_supremum(const std::vector<double>& s, double rho) {
  double best = 0.0;
  for (std::size_t a = 0; a <= s.size(); ++a) {
    double sum = 0.0;
    for (std::size_t b = a; b < s.size(); ++b) {
      sum += s[b];
      best = std::max(best, rho * static_cast<double>(b + 1 - a) - sum);
    }
  }
  return best;
}

double online_supremum(const std::vector<double>& s, double rho) {
  double n = 0.0, best = 0.0;
  for (double v : s) {
    n = std::max(n + rho - v, 0.0);
    best = std::max(best, n);
  }
  return best;
}

std::vector<CounterexampleRow> run_counterexample(const CounterexampleConfig& in) {
  auto cfg = in;
  if (!(cfg.service_mean > 0.0) || !(cfg.theta_star > 0.0))
    throw InvalidModel("service mean and theta must be > 0");
  if (cfg.horizons.empty()) throw InvalidModel("need at least one horizon");
  if (cfg.trials < 10'000) throw InvalidModel("need at least 10000 trials");
  if (cfg.x_grid.empty())
    for (int k = 0; k <= 20; ++k) cfg.x_grid.push_back(0.5 * k);
  std::sort(cfg.horizons.begin(), cfg.horizons.end());
  if (cfg.horizons.front() == 0) throw InvalidModel("horizons must be positive");

  const double rho = poisson_service_rate(cfg.service_mean, cfg.theta_star);
  const auto H = cfg.horizons.size();
  const auto X = cfg.x_grid.size();

  // Trials are split into fixed chunks, one stream each, merged in order.
  constexpr std::uint64_t kChunk = 10'000;
  const auto chunks = static_cast<std::size_t>((cfg.trials + kChunk - 1) / kChunk);
  std::vector<std::vector<std::uint64_t>> hit_sup(chunks), hit_end(chunks);
  parallel_for(chunks, [&](std::size_t c) {
    PhiloxStream rng(cfg.seed, 0, static_cast<std::uint32_t>(c));
    std::poisson_distribution<long long> draw(cfg.service_mean);
    auto& hs = hit_sup[c];
    auto& he = hit_end[c];
    hs.assign(H * X, 0);
    he.assign(H * X, 0);
    const auto begin = c * kChunk;
    const auto end = std::min<std::uint64_t>(cfg.trials, begin + kChunk);
    for (auto trial = begin; trial < end; ++trial) {
      double n = 0.0, best = 0.0;
      std::size_t t = 0;
      for (std::size_t h = 0; h < H; ++h) {
        for (; t < cfg.horizons[h]; ++t) {
          n = std::max(n + rho - static_cast<double>(draw(rng)), 0.0);
          best = std::max(best, n);
        }
        for (std::size_t k = 0; k < X; ++k) {
          if (best >= cfg.x_grid[k]) ++hs[h * X + k];
          if (n >= cfg.x_grid[k]) ++he[h * X + k];
        }
      }
    }
  });

  std::vector<CounterexampleRow> rows;
  const double N = static_cast<double>(cfg.trials);
  for (std::size_t h = 0; h < H; ++h) {
    for (std::size_t k = 0; k < X; ++k) {
      std::uint64_t sup = 0, endc = 0;
      for (std::size_t c = 0; c < chunks; ++c) {
        sup += hit_sup[c][h * X + k];
        endc += hit_end[c][h * X + k];
      }
      CounterexampleRow r;
      r.x = cfg.x_grid[k];
      r.horizon = cfg.horizons[h];
      r.empirical = static_cast<double>(sup) / N;
      r.std_error = std::sqrt(r.empirical * (1.0 - r.empirical) / N);
      r.sound_empirical = static_cast<double>(endc) / N;
      r.sound_std_error = std::sqrt(r.sound_empirical * (1.0 - r.sound_empirical) / N);
      r.claimed_bound = std::exp(1.0 - cfg.theta_star * r.x);
      r.sound_bound = std::exp(-cfg.theta_star * r.x);
      rows.push_back(r);
    }
  }
  return rows;
}

}  // namespace snc
