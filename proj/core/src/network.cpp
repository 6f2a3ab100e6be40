#include "snc/network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>

#include "snc/error.hpp"

namespace snc {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kBracketStart = 1e-3;
constexpr double kBisectRelWidth = 1e-9;

void check_index(const TandemNetwork& net, std::size_t j) {
  if (j < 1 || j > net.n_servers())
    throw std::out_of_range("server index " + std::to_string(j) + " outside 1.." +
                            std::to_string(net.n_servers()));
}

}  // namespace

TandemNetwork::TandemNetwork(std::vector<ServiceModel> servers, std::vector<FlowSpec> flows)
    : servers_(std::move(servers)), flows_(std::move(flows)) {
  if (servers_.empty()) throw InvalidModel("network has no servers");
  for (const auto& s : servers_) validate(s);
  const auto n = servers_.size();

  std::set<int> ids;
  for (const auto& f : flows_) {
    if (!ids.insert(f.id).second)
      throw InvalidModel("duplicate flow id " + std::to_string(f.id));
    if (f.first < 1 || f.first > f.last || f.last > n)
      throw InvalidModel("flow " + std::to_string(f.id) + " path [" +
                         std::to_string(f.first) + ", " + std::to_string(f.last) +
                         "] is not an interval of 1.." + std::to_string(n));
  }
  auto it = std::find_if(flows_.begin(), flows_.end(), [](const FlowSpec& f) { return f.id == 1; });
  if (it == flows_.end()) throw InvalidModel("flow 1 (the flow of interest) is missing");
  if (it->first != 1 || it->last != n)
    throw InvalidModel("flow 1 must cross every server (first=1, last=" + std::to_string(n) + ")");
  std::rotate(flows_.begin(), it, it + 1);
}

std::vector<std::size_t> flows_at(const TandemNetwork& net, std::size_t j) {
  check_index(net, j);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < net.n_flows(); ++i) {
    const auto& f = net.flows()[i];
    if (f.first <= j && j <= f.last) out.push_back(i);
  }
  return out;
}

std::vector<int> flow_ids_at(const TandemNetwork& net, std::size_t j) {
  std::vector<int> out;
  for (auto i : flows_at(net, j)) out.push_back(net.flows()[i].id);
  return out;
}

std::vector<std::size_t> h_only_flows(const TandemNetwork& net, std::size_t h) {
  check_index(net, h);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < net.n_flows(); ++i) {
    const auto& f = net.flows()[i];
    if (f.first == h && f.last == h) out.push_back(i);
  }
  return out;
}

double stability_margin(const TandemNetwork& net, std::size_t j, double theta) {
  double g = characterize_service(net.server(j), theta).rho;
  for (auto i : flows_at(net, j)) g -= characterize_arrival(net.flows()[i].arrival, theta).rho;
  return g;
}

ThetaStar theta_star(const TandemNetwork& net, std::size_t j) {
  check_index(net, j);
  const auto at = flows_at(net, j);

  double mean_in = 0.0;
  double max_in = 0.0;
  for (auto i : at) {
    const auto& arrival = net.flows()[i].arrival;
    mean_in += arrival.mean_rate();
    double m = 0.0;
    for (const auto& e : arrival.emissions()) m = std::max(m, support_bounds(e).max);
    max_in += m;
  }
  const double mean_out = mean_rate(net.server(j));
  if (!(mean_in < mean_out))
    throw InstabilityError("server " + std::to_string(j) + " is unstable: mean arrivals " +
                               std::to_string(mean_in) + " >= mean service " +
                               std::to_string(mean_out),
                           j);

  double min_out = kInf;
  for (const auto& s : state_supports(net.server(j))) min_out = std::min(min_out, s.min);
  if (max_in < min_out) return ThetaStar{kInf, true, false};

  auto g = [&](double theta) { return stability_margin(net, j, theta); };
  double lo = 0.0;
  double hi = kBracketStart;
  if (g(hi) > 0.0) {
    lo = hi;
    while (true) {
      hi = 2.0 * lo;
      if (hi > kThetaCap) {
        if (g(kThetaCap) > 0.0) return ThetaStar{kThetaCap, false, true};
        hi = kThetaCap;
        break;
      }
      if (!(g(hi) > 0.0)) break;
      lo = hi;
    }
  }
  while (hi - lo > kBisectRelWidth * hi) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return ThetaStar{lo, false, false};
}

double ThetaDomain::eval_hi() const { return hi_inclusive ? hi : (1.0 - 1e-9) * hi; }

ThetaDomain pmoo_domain(const std::vector<ThetaStar>& stars) {
  ThetaDomain d;
  d.hi = kInf;
  for (const auto& s : stars) d.hi = std::min(d.hi, s.value);
  d.hi_inclusive = false;
  return d;
}

ThetaDomain martingale_domain(const std::vector<ThetaStar>& stars, std::size_t h) {
  double others = kInf;
  for (std::size_t j = 0; j < stars.size(); ++j)
    if (j + 1 != h) others = std::min(others, stars[j].value);
  const double own = stars.at(h - 1).value;
  ThetaDomain d;
  if (own < others) {
    d.hi = own;
    d.hi_inclusive = true;
  } else {
    d.hi = others;
    d.hi_inclusive = false;
  }
  return d;
}

ThetaDomain martingale_theta2_domain(const std::vector<ThetaStar>& stars, std::size_t h) {
  ThetaDomain d;
  d.hi = stars.at(h - 1).value;
  d.hi_inclusive = true;
  return d;
}

SiteReport check_martingale_site(const TandemNetwork& net, std::size_t h) {
  check_index(net, h);
  SiteReport r;
  r.h = h;
  for (std::size_t j = 1; j < h; ++j) {
    if (!is_constant_rate(net.server(j)))
      r.violations.push_back("H6: server " + std::to_string(j) + " before site " +
                             std::to_string(h) + " is not constant-rate");
  }
  for (const auto& f : net.flows()) {
    if (f.first <= h && f.last < h)
      r.violations.push_back("H7: flow " + std::to_string(f.id) + " (first=" +
                             std::to_string(f.first) + ", last=" + std::to_string(f.last) +
                             ") leaves before server " + std::to_string(h));
  }
  r.ok = r.violations.empty();
  return r;
}

ReducedNetwork remove_server(const TandemNetwork& net, std::size_t h) {
  check_index(net, h);
  ReducedNetwork out;
  out.removed = h;
  for (std::size_t j = 1; j <= net.n_servers(); ++j)
    if (j != h) out.servers.push_back(j);

  auto shift = [h](std::size_t j) { return j > h ? j - 1 : j; };
  for (std::size_t i = 0; i < net.n_flows(); ++i) {
    const auto& f = net.flows()[i];
    if (f.first == h && f.last == h) continue;
    std::size_t first = f.first == h ? h + 1 : f.first;
    std::size_t last = f.last == h ? h - 1 : f.last;
    out.flows.push_back({i, shift(first), shift(last)});
  }
  // Flow 1 of a one-server network has an empty path.
  if (net.n_servers() == 1) out.flows.push_back({0, 1, 0});
  return out;
}

}  // namespace snc
