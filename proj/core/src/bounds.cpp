#include "snc/bounds.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "snc/error.hpp"

namespace snc {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require_site(const TandemNetwork& net, std::size_t h) {
  auto report = check_martingale_site(net, h);
  if (!report.ok)
    throw AssumptionViolation("server " + std::to_string(h) + " is not a valid martingale site",
                              std::move(report.violations));
}

bool in_set(const std::vector<std::size_t>& set, std::size_t x) {
  for (auto v : set)
    if (v == x) return true;
  return false;
}

// ln prod_j 1/(1 - e^{-theta rho_j}) over servers j != skip.
double log_geometric_product(const TandemNetwork& net, const NetworkChar& ch, std::size_t skip) {
  double s = 0.0;
  for (std::size_t j = 1; j <= net.n_servers(); ++j) {
    if (j == skip) continue;
    const double rho = residual_rate(net, ch, j);
    if (!(rho > 0.0))
      throw DivergenceError("theta " + std::to_string(ch.theta) + " is not below theta* of server " +
                                std::to_string(j),
                            j - 1);
    s -= std::log1p(-std::exp(-ch.theta * rho));
  }
  return s;
}

double sum_arrival_sigma(const NetworkChar& ch, const std::vector<std::size_t>& flows) {
  double s = 0.0;
  for (auto i : flows) s += ch.arrival[i].sigma;
  return s;
}

}  // namespace

NetworkChar characterize_network(const TandemNetwork& net, double theta) {
  NetworkChar ch;
  ch.theta = theta;
  for (const auto& s : net.servers()) ch.service.push_back(characterize_service(s, theta));
  for (const auto& f : net.flows()) ch.arrival.push_back(characterize_arrival(f.arrival, theta));
  return ch;
}

double residual_rate(const TandemNetwork& net, const NetworkChar& ch, std::size_t j) {
  double r = ch.service[j - 1].rho;
  for (auto i : flows_at(net, j)) r -= ch.arrival[i].rho;
  return r;
}

double cross_residual_rate(const TandemNetwork& net, const NetworkChar& ch, std::size_t j) {
  double r = ch.service[j - 1].rho;
  for (auto i : flows_at(net, j))
    if (i != 0) r -= ch.arrival[i].rho;
  return r;
}

RationalGf pmoo_service_bgf(const TandemNetwork& net, const NetworkChar& ch) {
  const double theta = ch.theta;
  double log_c = 0.0;
  for (std::size_t i = 1; i < net.n_flows(); ++i) log_c += theta * ch.arrival[i].sigma;
  std::vector<double> poles;
  for (std::size_t j = 1; j <= net.n_servers(); ++j) {
    log_c += theta * ch.service[j - 1].sigma;
    poles.push_back(std::exp(-theta * cross_residual_rate(net, ch, j)));
  }
  return RationalGf(log_c, std::move(poles));
}

RationalGf reduced_service_bgf(const TandemNetwork& net, const NetworkChar& ch, std::size_t h) {
  const double theta = ch.theta;
  const auto reduced = remove_server(net, h);
  double log_c = 0.0;
  for (const auto& f : reduced.flows)
    if (f.original != 0) log_c += theta * ch.arrival[f.original].sigma;
  std::vector<double> poles;
  for (auto j : reduced.servers) {
    log_c += theta * ch.service[j - 1].sigma;
    poles.push_back(std::exp(-theta * cross_residual_rate(net, ch, j)));
  }
  return RationalGf(log_c, std::move(poles));
}

double log_pmoo_backlog(const TandemNetwork& net, const NetworkChar& ch, double b) {
  const double theta = ch.theta;
  const auto& a1 = ch.arrival[0];
  const auto gf = pmoo_service_bgf(net, ch);
  return -theta * b + theta * a1.sigma + gf.log_eval(std::exp(theta * a1.rho));
}

double log_pmoo_delay(const TandemNetwork& net, const NetworkChar& ch, std::size_t T) {
  const double theta = ch.theta;
  const auto& a1 = ch.arrival[0];
  const auto gf = pmoo_service_bgf(net, ch);
  return theta * (a1.sigma + a1.rho) + gf.log_tail_sum(std::exp(theta * a1.rho), T);
}

XiConstant xi_constant(const TandemNetwork& net, const NetworkChar& ch, std::size_t h) {
  const auto at = flows_at(net, h);
  XiConstant xi;
  xi.theta = ch.theta;
  xi.server = h;
  for (auto i : at) xi.flow_ids.push_back(net.flows()[i].id);

  // Mixed-radix enumeration: digits for each arrival, then the service.
  std::vector<std::vector<double>> log_nu;
  std::vector<std::vector<double>> reach;  // max emission per arrival state
  std::size_t total = 1;
  for (auto i : at) {
    const auto& mmp = net.flows()[i].arrival;
    std::vector<double> ln, mx;
    for (std::size_t x = 0; x < mmp.n_states(); ++x) {
      ln.push_back(std::log(ch.arrival[i].nu(static_cast<Eigen::Index>(x))));
      mx.push_back(support_bounds(mmp.emissions()[x]).max);
    }
    log_nu.push_back(std::move(ln));
    reach.push_back(std::move(mx));
    total *= mmp.n_states();
    if (total > kXiStateCap) break;
  }
  const auto svc_support = state_supports(net.server(h));
  std::vector<double> svc_log_nu;
  for (std::size_t x = 0; x < svc_support.size(); ++x)
    svc_log_nu.push_back(std::log(ch.service[h - 1].nu(static_cast<Eigen::Index>(x))));
  total *= svc_support.size();
  if (total > kXiStateCap)
    throw DomainError("joint state space at server " + std::to_string(h) + " exceeds " +
                      std::to_string(kXiStateCap) +
                      " states; use exp(theta (sigma_S + sum sigma_A)) instead");
  xi.joint_states = total;

  const std::size_t m = at.size();
  std::vector<std::size_t> digit(m, 0);
  double best = std::numeric_limits<double>::infinity();  // min ln nu over P
  bool any = false;
  for (std::size_t k = 0; k < total / svc_support.size(); ++k) {
    double ln = 0.0, in = 0.0;
    for (std::size_t d = 0; d < m; ++d) {
      ln += log_nu[d][digit[d]];
      in += reach[d][digit[d]];
    }
    for (std::size_t s = 0; s < svc_support.size(); ++s) {
      if (in > svc_support[s].min) {
        any = true;
        best = std::min(best, ln + svc_log_nu[s]);
      }
    }
    for (std::size_t d = 0; d < m; ++d) {
      if (++digit[d] < log_nu[d].size()) break;
      digit[d] = 0;
    }
  }
  if (!any) {
    xi.always_served = true;
    return xi;
  }
  xi.log_value = -best;
  xi.value = std::exp(xi.log_value);
  return xi;
}

double log_mart_backlog(const TandemNetwork& net, const NetworkChar& ch, std::size_t h,
                        double b, bool statement_form) {
  require_site(net, h);
  const double theta = ch.theta;
  const auto xi = xi_constant(net, ch, h);
  const auto at = flows_at(net, h);

  if (statement_form) {
    const auto only = h_only_flows(net, h);
    std::vector<std::size_t> kept;
    for (auto i : at)
      if (i == 0 || !in_set(only, i)) kept.push_back(i);
    const auto gf = reduced_service_bgf(net, ch, h);
    return xi.log_value - theta * ch.arrival[0].sigma - theta * sum_arrival_sigma(ch, kept) +
           gf.log_eval(std::exp(theta * ch.arrival[0].rho)) - theta * b;
  }

  double sig = 0.0;
  for (std::size_t j = h + 1; j <= net.n_servers(); ++j) sig += ch.service[j - 1].sigma;
  for (std::size_t i = 0; i < net.n_flows(); ++i)
    if (!in_set(at, i)) sig += ch.arrival[i].sigma;
  return xi.log_value + theta * sig - theta * b + log_geometric_product(net, ch, h);
}

double log_mart_delay_p1(const TandemNetwork& net, const NetworkChar& ch, std::size_t h,
                         std::size_t T) {
  require_site(net, h);
  const double theta = ch.theta;
  const auto xi = xi_constant(net, ch, h);
  // Fl(h) minus the flows crossing only h; flow 1 always stays.
  const auto only = h_only_flows(net, h);
  std::vector<std::size_t> kept;
  for (auto i : flows_at(net, h))
    if (i == 0 || !in_set(only, i)) kept.push_back(i);

  const auto& a1 = ch.arrival[0];
  const auto gf = reduced_service_bgf(net, ch, h);
  const double r = std::exp(theta * a1.rho);
  const double tail = gf.log_tail_sum(r, T);
  if (std::isinf(tail)) return kNegInf;
  return xi.log_value - theta * sum_arrival_sigma(ch, kept) + theta * (a1.sigma + a1.rho) + tail;
}

double log_mart_delay_p2(const TandemNetwork& net, const NetworkChar& ch, std::size_t h,
                         std::size_t T) {
  require_site(net, h);
  if (T == 0) return kNegInf;
  const double theta = ch.theta;
  const auto xi = xi_constant(net, ch, h);
  double sig = ch.service[h - 1].sigma;
  for (auto i : flows_at(net, h))
    if (i != 0) sig += ch.arrival[i].sigma;
  const auto gf = pmoo_service_bgf(net, ch);
  return xi.log_value - theta * residual_rate(net, ch, h) - theta * sig + gf.log_coeff(T - 1);
}

double pmoo_backlog(const TandemNetwork& net, double theta, double b) {
  return std::exp(log_pmoo_backlog(net, characterize_network(net, theta), b));
}

double pmoo_delay(const TandemNetwork& net, double theta, std::size_t T) {
  return std::exp(log_pmoo_delay(net, characterize_network(net, theta), T));
}

double mart_backlog(const TandemNetwork& net, std::size_t h, double theta, double b) {
  return std::exp(log_mart_backlog(net, characterize_network(net, theta), h, b));
}

double mart_delay(const TandemNetwork& net, std::size_t h, double theta1, double theta2,
                  std::size_t T) {
  const double p1 = std::exp(log_mart_delay_p1(net, characterize_network(net, theta1), h, T));
  const double p2 =
      T == 0 ? 0.0 : std::exp(log_mart_delay_p2(net, characterize_network(net, theta2), h, T));
  return p1 + p2;
}

}  // namespace snc
