#include "snc/analyzer.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <mutex>

#include "snc/error.hpp"
#include "snc/parallel.hpp"

namespace snc {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void finish_curve(BoundCurve& c) {
  double run = std::numeric_limits<double>::infinity();
  for (auto& e : c.entries) {
    run = std::min(run, e.raw);
    e.probability = std::min(1.0, run);
  }
}

}  // namespace

std::string Method::label() const {
  return kind == Kind::Pmoo ? "pmoo" : "martingale";
}

Analyzer::Analyzer(TandemNetwork net, OptimizeOptions opts)
    : net_(std::move(net)), opts_(opts) {
  for (std::size_t j = 1; j <= net_.n_servers(); ++j) stars_.push_back(theta_star(net_, j));
}

std::vector<std::size_t> Analyzer::admissible_sites() const {
  std::vector<std::size_t> out;
  for (std::size_t h = 1; h <= net_.n_servers(); ++h)
    if (check_martingale_site(net_, h).ok) out.push_back(h);
  return out;
}

std::shared_ptr<const NetworkChar> Analyzer::characterization(double theta) const {
  const auto key = std::bit_cast<std::uint64_t>(theta);
  {
    std::shared_lock lock(cache_mutex_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
  }
  auto ch = std::make_shared<const NetworkChar>(characterize_network(net_, theta));
  std::unique_lock lock(cache_mutex_);
  return cache_.emplace(key, std::move(ch)).first->second;
}

BoundValue Analyzer::pmoo(Metric metric, std::size_t value) const {
  auto f = [&](double theta) {
    const auto ch = characterization(theta);
    return metric == Metric::Delay ? log_pmoo_delay(net_, *ch, value)
                                   : log_pmoo_backlog(net_, *ch, static_cast<double>(value));
  };
  const auto opt = optimize_theta(f, pmoo_domain(stars_), opts_);
  BoundValue v;
  v.raw = std::exp(opt.log_value);
  v.theta = opt.theta;
  v.theta2 = kNaN;
  v.term1 = v.raw;
  return v;
}

BoundValue Analyzer::martingale(std::size_t h, Metric metric, std::size_t value) const {
  auto report = check_martingale_site(net_, h);
  if (!report.ok)
    throw AssumptionViolation("server " + std::to_string(h) + " is not a valid martingale site",
                              std::move(report.violations));
  const auto dom1 = martingale_domain(stars_, h);
  BoundValue v;
  v.theta2 = kNaN;
  if (metric == Metric::Backlog) {
    const auto opt = optimize_theta(
        [&](double theta) {
          return log_mart_backlog(net_, *characterization(theta), h, static_cast<double>(value));
        },
        dom1, opts_);
    v.raw = v.term1 = std::exp(opt.log_value);
    v.theta = opt.theta;
    return v;
  }
  const auto o1 = optimize_theta(
      [&](double theta) { return log_mart_delay_p1(net_, *characterization(theta), h, value); },
      dom1, opts_);
  v.theta = o1.theta;
  v.term1 = std::exp(o1.log_value);
  if (value > 0) {
    const auto o2 = optimize_theta(
        [&](double theta) { return log_mart_delay_p2(net_, *characterization(theta), h, value); },
        martingale_theta2_domain(stars_, h), opts_);
    v.theta2 = o2.theta;
    v.term2 = std::exp(o2.log_value);
  }
  v.raw = v.term1 + v.term2;
  return v;
}

BoundValue Analyzer::bound(const Method& method, Metric metric, std::size_t value) const {
  return method.kind == Method::Kind::Pmoo ? pmoo(metric, value)
                                           : martingale(method.site, metric, value);
}

BoundCurve Analyzer::curve(const Method& method, Metric metric, std::size_t lo,
                           std::size_t hi) const {
  BoundCurve c;
  c.metric = metric;
  c.method = method.label();
  c.site = method.kind == Method::Kind::Martingale ? method.site : 0;
  if (hi < lo) return c;
  c.entries.resize(hi - lo + 1);
  parallel_for(c.entries.size(), [&](std::size_t k) {
    const auto b = bound(method, metric, lo + k);
    c.entries[k] = BoundPoint{lo + k, 0.0, b.raw, b.theta, b.theta2, c.site};
  });
  finish_curve(c);
  return c;
}

BoundCurve envelope(const std::vector<BoundCurve>& curves) {
  if (curves.empty()) throw DomainError("envelope of no curves");
  BoundCurve best = curves.front();
  for (const auto& c : curves)
    for (std::size_t k = 0; k < c.entries.size(); ++k)
      if (c.entries[k].raw < best.entries[k].raw) best.entries[k] = c.entries[k];
  best.method = "martingale_best";
  best.site = 0;
  finish_curve(best);
  return best;
}

BoundCurve Analyzer::martingale_best(Metric metric, std::size_t lo, std::size_t hi) const {
  const auto sites = admissible_sites();
  if (sites.empty()) throw AssumptionViolation("no admissible martingale site", {});
  std::vector<BoundCurve> curves;
  for (auto h : sites) curves.push_back(curve(Method::martingale(h), metric, lo, hi));
  return envelope(curves);
}

std::size_t Analyzer::quantile(const Method& method, double epsilon) const {
  return delay_quantile(
      [&](std::size_t T) { return std::min(1.0, bound(method, Metric::Delay, T).raw); },
      epsilon);
}

}  // namespace snc
