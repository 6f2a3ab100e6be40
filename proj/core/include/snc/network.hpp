#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "snc/mmp.hpp"
#include "snc/service.hpp"

namespace snc {

/// Flow crossing servers first..last (1-based, inclusive).
struct FlowSpec {
  int id = 1;
  std::size_t first = 1;
  std::size_t last = 1;
  Mmp arrival;
};

/// Servers 1..n in a line; flows()[0] is flow 1, which crosses every server.
class TandemNetwork {
 public:
  /// Reorders flows so that id 1 comes first. Throws InvalidModel on an empty
  /// server list, duplicate flow ids, a path outside 1..n or a missing or
  /// non-spanning flow 1.
  TandemNetwork(std::vector<ServiceModel> servers, std::vector<FlowSpec> flows);

  std::size_t n_servers() const { return servers_.size(); }
  std::size_t n_flows() const { return flows_.size(); }
  /// 1-based.
  const ServiceModel& server(std::size_t j) const { return servers_.at(j - 1); }
  const std::vector<ServiceModel>& servers() const { return servers_; }
  const std::vector<FlowSpec>& flows() const { return flows_; }

 private:
  std::vector<ServiceModel> servers_;
  std::vector<FlowSpec> flows_;
};

/// Positions in net.flows() of the flows crossing server j.
std::vector<std::size_t> flows_at(const TandemNetwork& net, std::size_t j);

/// Flow ids crossing server j.
std::vector<int> flow_ids_at(const TandemNetwork& net, std::size_t j);

/// Positions of the flows crossing only server h.
std::vector<std::size_t> h_only_flows(const TandemNetwork& net, std::size_t h);

/// g_j(theta) = rho_{S_j}(theta) - sum_{i in Fl(j)} rho_{A_i}(theta).
double stability_margin(const TandemNetwork& net, std::size_t j, double theta);

struct ThetaStar {
  double value = 0.0;       // +inf when certified
  bool infinite = false;    // arrivals bounded below the minimum service
  bool cap_reached = false; // g stayed positive up to the search cap
};

inline constexpr double kThetaCap = 1e4;

/// Supremum of theta with g_j(theta) > 0. Throws InstabilityError when the
/// mean arrival rate at j is not below the mean service rate.
ThetaStar theta_star(const TandemNetwork& net, std::size_t j);

/// Admissible theta interval [0, hi] or [0, hi).
struct ThetaDomain {
  double lo = 0.0;
  double hi = 0.0;
  bool hi_inclusive = false;

  /// Largest theta to evaluate: hi if inclusive, else (1 - 1e-9) hi.
  double eval_hi() const;
};

/// [0, min_j theta*_j), used by the PMOO bounds.
ThetaDomain pmoo_domain(const std::vector<ThetaStar>& stars);

/// [0, theta*_h] intersected with [0, min_{j != h} theta*_j). h is 1-based.
ThetaDomain martingale_domain(const std::vector<ThetaStar>& stars, std::size_t h);

/// (0, theta*_h], the domain of the second martingale delay term.
ThetaDomain martingale_theta2_domain(const std::vector<ThetaStar>& stars, std::size_t h);

struct SiteReport {
  std::size_t h = 1;
  bool ok = true;
  std::vector<std::string> violations;
};

/// Checks that servers before h are constant-rate and that no flow entering
/// at or before h leaves before h.
SiteReport check_martingale_site(const TandemNetwork& net, std::size_t h);

/// Tandem with server h removed. Flows crossing only h disappear, the rest
/// keep their arrival processes and are rerouted past the gap.
struct ReducedNetwork {
  struct Flow {
    std::size_t original = 0;  // position in the original flows()
    std::size_t first = 1;     // reduced 1-based server indices
    std::size_t last = 1;
  };
  std::size_t removed = 1;
  std::vector<std::size_t> servers;  // original 1-based indices, in order
  std::vector<Flow> flows;           // flow 1 first

  std::size_t n_servers() const { return servers.size(); }
};

ReducedNetwork remove_server(const TandemNetwork& net, std::size_t h);

}  // namespace snc
