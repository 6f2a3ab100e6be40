#pragma once

#include <cstddef>
#include <functional>

#include "snc/network.hpp"

namespace snc {

struct OptimizeOptions {
  std::size_t grid_points = 200;
  std::size_t golden_iterations = 60;
};

struct OptimumTheta {
  double theta = 0.0;
  double log_value = 0.0;
};

/// Minimizes a log-scale objective over the domain: a grid of log-spaced
/// points plus points crowding the upper end, then golden-section search
/// around the best grid point. Non-finite values and DivergenceError /
/// DomainError are skipped. Throws DomainError if no point is finite.
OptimumTheta optimize_theta(const std::function<double(double)>& log_objective,
                            const ThetaDomain& domain, const OptimizeOptions& opts = {});

/// The grid used by optimize_theta, ascending.
std::vector<double> theta_grid(const ThetaDomain& domain, std::size_t points);

inline constexpr std::size_t kQuantileCap = 1'000'000;

/// Least T with bound(T) <= epsilon, for a nonincreasing bound, by
/// exponential then binary search. Throws DomainError past kQuantileCap.
std::size_t delay_quantile(const std::function<double(std::size_t)>& bound, double epsilon);

}  // namespace snc
