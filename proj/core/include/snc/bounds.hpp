#pragma once

#include <cstddef>
#include <vector>

#include "snc/genfunc.hpp"
#include "snc/mmp.hpp"
#include "snc/network.hpp"

namespace snc {

/// Every process of a network characterized at one theta.
struct NetworkChar {
  double theta = 0.0;
  std::vector<SpectralChar> service;  // server j at index j - 1
  std::vector<SpectralChar> arrival;  // same order as net.flows()
};

NetworkChar characterize_network(const TandemNetwork& net, double theta);

/// rho_{S_j} minus the rho of every flow crossing j, flow 1 included.
double residual_rate(const TandemNetwork& net, const NetworkChar& ch, std::size_t j);

/// Same with flow 1 excluded.
double cross_residual_rate(const TandemNetwork& net, const NetworkChar& ch, std::size_t j);

/// End-to-end service bgf for flow 1: one pole exp(-theta rho'_j) per server
/// and prefactor exp(theta (sum_{i>=2} sigma_{A_i} + sum_j sigma_{S_j})).
RationalGf pmoo_service_bgf(const TandemNetwork& net, const NetworkChar& ch);

/// Service bgf of the network with server h removed.
RationalGf reduced_service_bgf(const TandemNetwork& net, const NetworkChar& ch, std::size_t h);

// All bounds below return ln of the raw (uncapped) bound and throw
// DivergenceError when theta is outside the domain of a generating function.

double log_pmoo_backlog(const TandemNetwork& net, const NetworkChar& ch, double b);
double log_pmoo_delay(const TandemNetwork& net, const NetworkChar& ch, std::size_t T);

struct XiConstant {
  double theta = 0.0;
  double value = 1.0;
  double log_value = 0.0;
  std::size_t server = 1;
  std::vector<int> flow_ids;
  bool always_served = false;  // no joint state can receive more than it serves
  std::size_t joint_states = 0;
};

inline constexpr std::size_t kXiStateCap = 1'000'000;

/// 1 / min nu over joint states of (arrivals at h, S_h) that can receive
/// more than they serve. Throws DomainError beyond kXiStateCap joint states;
/// exp(theta (sigma_S + sum sigma_A)) is always a valid replacement.
XiConstant xi_constant(const TandemNetwork& net, const NetworkChar& ch, std::size_t h);

/// Backlog bound with the martingale argument applied at server h.
/// `statement_form` selects the variant whose prefactor carries an extra
/// exp(-theta sigma_{A_1}); kept for comparison only.
double log_mart_backlog(const TandemNetwork& net, const NetworkChar& ch, std::size_t h,
                        double b, bool statement_form = false);

/// First delay term (no service at h after the arrival of the tagged bit).
double log_mart_delay_p1(const TandemNetwork& net, const NetworkChar& ch, std::size_t h,
                         std::size_t T);

/// Second delay term; -inf for T = 0.
double log_mart_delay_p2(const TandemNetwork& net, const NetworkChar& ch, std::size_t h,
                         std::size_t T);

// Linear-scale convenience forms computing the characterization on the fly.
double pmoo_backlog(const TandemNetwork& net, double theta, double b);
double pmoo_delay(const TandemNetwork& net, double theta, std::size_t T);
double mart_backlog(const TandemNetwork& net, std::size_t h, double theta, double b);
double mart_delay(const TandemNetwork& net, std::size_t h, double theta1, double theta2,
                  std::size_t T);

}  // namespace snc
