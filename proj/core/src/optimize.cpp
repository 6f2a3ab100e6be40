#include "snc/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "snc/error.hpp"

namespace snc {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double safe_eval(const std::function<double(double)>& f, double theta) {
  try {
    const double v = f(theta);
    return std::isnan(v) ? kInf : v;
  } catch (const DivergenceError&) {
    return kInf;
  } catch (const DomainError&) {
    return kInf;
  }
}

}  // namespace

std::vector<double> theta_grid(const ThetaDomain& domain, std::size_t points) {
  const double hi = std::min(domain.hi, kThetaCap);
  const double top = std::isinf(domain.hi) ? hi : domain.eval_hi();
  std::vector<double> g;
  if (!(top > 0.0)) return g;
  const std::size_t half = std::max<std::size_t>(points / 2, 2);
  const double lo = top * 1e-4;
  for (std::size_t k = 0; k < half; ++k)
    g.push_back(lo * std::pow(top / lo, static_cast<double>(k) / static_cast<double>(half - 1)));
  // hi (1 - 10^-s) for s in (0.3, 9]
  const std::size_t rest = points > half ? points - half : 0;
  for (std::size_t k = 1; k <= rest; ++k) {
    const double s = 0.3 + 8.7 * static_cast<double>(k) / static_cast<double>(rest);
    const double t = hi * (1.0 - std::pow(10.0, -s));
    if (t > 0.0 && t <= top) g.push_back(t);
  }
  g.push_back(top);
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  return g;
}

OptimumTheta optimize_theta(const std::function<double(double)>& log_objective,
                            const ThetaDomain& domain, const OptimizeOptions& opts) {
  const auto grid = theta_grid(domain, opts.grid_points);
  std::vector<double> vals(grid.size());
  std::size_t best = grid.size();
  for (std::size_t k = 0; k < grid.size(); ++k) {
    vals[k] = safe_eval(log_objective, grid[k]);
    if (vals[k] < kInf && (best == grid.size() || vals[k] < vals[best])) best = k;
  }
  if (best == grid.size())
    throw DomainError("objective is not finite anywhere on the theta domain");

  OptimumTheta out{grid[best], vals[best]};
  double a = best > 0 ? grid[best - 1] : grid[best] * 0.5;
  double b = best + 1 < grid.size() ? grid[best + 1] : grid[best];
  if (!(b > a)) return out;

  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = safe_eval(log_objective, x1), f2 = safe_eval(log_objective, x2);
  for (std::size_t it = 0; it < opts.golden_iterations; ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = safe_eval(log_objective, x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = safe_eval(log_objective, x2);
    }
    if (b - a <= 1e-12 * b) break;
  }
  if (f1 < out.log_value) out = {x1, f1};
  if (f2 < out.log_value) out = {x2, f2};
  return out;
}

std::size_t delay_quantile(const std::function<double(std::size_t)>& bound, double epsilon) {
  if (bound(0) <= epsilon) return 0;
  std::size_t lo = 0, hi = 1;  // bound(lo) > epsilon
  while (bound(hi) > epsilon) {
    lo = hi;
    if (hi >= kQuantileCap)
      throw DomainError("bound stays above epsilon up to T = " + std::to_string(kQuantileCap));
    hi = std::min(2 * hi, kQuantileCap);
  }
  while (hi - lo > 1) {
    const auto mid = lo + (hi - lo) / 2;
    if (bound(mid) <= epsilon)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

}  // namespace snc
