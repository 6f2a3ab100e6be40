#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace snc {

/// Poisson service of mean `service_mean` observed at `theta_star`; the
/// claimed bound e * exp(-theta x) on the running supremum is compared with
/// simulation, next to the sound bound exp(-theta x) on the supremum over
/// windows ending at the horizon.
struct CounterexampleConfig {
  double service_mean = 1.0;
  double theta_star = 0.5;
  std::vector<std::size_t> horizons{50, 100, 200};
  std::vector<double> x_grid;  // default 0, 0.5, ..., 10
  std::uint64_t trials = 100'000;
  std::uint64_t seed = 1;
};

struct CounterexampleRow {
  double x = 0.0;
  std::size_t horizon = 0;
  double empirical = 0.0;  // P(sup over all windows >= x)
  double std_error = 0.0;
  double claimed_bound = 0.0;
  double sound_bound = 0.0;
  double sound_empirical = 0.0;  // P(sup over windows ending at the horizon >= x)
  double sound_std_error = 0.0;
};

/// rho = -ln E[exp(-theta s)] / theta for s ~ Poisson(mean).
double poisson_service_rate(double mean, double theta);

/// Rows ordered by horizon, then x. Throws InvalidModel on an invalid config.
std::vector<CounterexampleRow> run_counterexample(const CounterexampleConfig& cfg);

/// Supremum over 0 <= a <= b <= s.size() of rho (b - a) - sum s[a..b), by
/// brute force. Test oracle for the online recursion.
double brute_force_supremum(const std::vector<double>& s, double rho);

/// Same supremum via N <- max(N + rho - s_t, 0), tracking the running max.
double online_supremum(const std::vector<double>& s, double rho);

}  // namespace snc
