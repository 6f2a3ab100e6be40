#pragma once

// Independent reference computations shared by the unit and acceptance tests.

#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "snc/bounds.hpp"
#include "snc/mmp.hpp"
#include "snc/network.hpp"

namespace oracle {

/// Sum over all compositions k_1 + ... + k_n = k of prod a_j^{k_j}.
inline double composition_sum(const std::vector<double>& a, std::size_t k) {
  if (a.empty()) return k == 0 ? 1.0 : 0.0;
  std::function<double(std::size_t, std::size_t)> rec = [&](std::size_t j, std::size_t left) {
    if (j + 1 == a.size()) return std::pow(a[j], static_cast<double>(left));
    double s = 0.0;
    for (std::size_t kj = 0; kj <= left; ++kj)
      s += std::pow(a[j], static_cast<double>(kj)) * rec(j + 1, left - kj);
    return s;
  };
  return rec(0, k);
}

/// [z^k] 1 / ((1 - a z)(1 - b z)).
inline double two_pole_coeff(double a, double b, std::size_t k) {
  double s = 0.0;
  for (std::size_t i = 0; i <= k; ++i)
    s += std::pow(a, static_cast<double>(i)) * std::pow(b, static_cast<double>(k - i));
  return s;
}

inline snc::EmissionDist random_emission(std::mt19937_64& gen) {
  std::uniform_int_distribution<int> kind(0, 2);
  std::uniform_real_distribution<double> v(0.0, 4.0), p(0.0, 1.0);
  switch (kind(gen)) {
    case 0:
      return snc::Constant{std::round(v(gen))};
    case 1:
      return snc::ScaledBernoulli{std::round(v(gen)) + 1.0, p(gen)};
    default:
      return snc::Poisson{v(gen) + 0.1};
  }
}

inline snc::Mmp random_mmp(std::mt19937_64& gen, std::size_t n) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  snc::Matrix p(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    for (Eigen::Index j = 0; j < p.cols(); ++j) p(i, j) = u(gen);
    p.row(i) /= p.row(i).sum();
  }
  std::vector<snc::EmissionDist> em;
  for (std::size_t i = 0; i < n; ++i) em.push_back(random_emission(gen));
  return snc::Mmp(p, em);
}

inline double max_support(const snc::EmissionDist& e) {
  if (const auto* c = std::get_if<snc::Constant>(&e)) return c->value;
  if (const auto* b = std::get_if<snc::ScaledBernoulli>(&e)) return b->prob > 0.0 ? b->value : 0.0;
  return std::numeric_limits<double>::infinity();
}

inline double min_support(const snc::EmissionDist& e) {
  if (const auto* c = std::get_if<snc::Constant>(&e)) return c->value;
  if (const auto* b = std::get_if<snc::ScaledBernoulli>(&e)) return b->prob < 1.0 ? 0.0 : b->value;
  return 0.0;
}

/// xi at server h by walking every joint state of (arrivals at h, S_h).
inline double xi_enumerated(const snc::TandemNetwork& net, const snc::NetworkChar& ch,
                            std::size_t h) {
  const auto at = snc::flows_at(net, h);
  const auto& server = net.server(h);
  const bool constant = snc::is_constant_rate(server);
  std::vector<std::size_t> dims;
  for (auto i : at) dims.push_back(net.flows()[i].arrival.n_states());
  dims.push_back(constant ? 1 : std::get<snc::MarkovService>(server).mmp.n_states());
  std::vector<std::size_t> x(dims.size(), 0);
  double min_nu = std::numeric_limits<double>::infinity();
  bool any = false;
  while (true) {
    double in = 0.0, nu = 1.0;
    for (std::size_t k = 0; k < at.size(); ++k) {
      in += max_support(net.flows()[at[k]].arrival.emissions()[x[k]]);
      nu *= ch.arrival[at[k]].nu(static_cast<Eigen::Index>(x[k]));
    }
    const double out =
        constant ? std::get<snc::ConstantRate>(server).rate
                 : min_support(std::get<snc::MarkovService>(server).mmp.emissions()[x.back()]);
    nu *= ch.service[h - 1].nu(static_cast<Eigen::Index>(x.back()));
    if (in > out) {
      any = true;
      min_nu = std::min(min_nu, nu);
    }
    std::size_t k = 0;
    while (k < x.size() && ++x[k] == dims[k]) x[k++] = 0;
    if (k == x.size()) break;
  }
  return any ? 1.0 / min_nu : 1.0;
}

/// exp(theta (sigma_{S_h} + sum over arrivals at h of sigma_{A_i})).
inline double xi_fallback(const snc::TandemNetwork& net, const snc::NetworkChar& ch,
                          std::size_t h) {
  double s = ch.service[h - 1].sigma;
  for (auto i : snc::flows_at(net, h)) s += ch.arrival[i].sigma;
  return std::exp(ch.theta * s);
}

/// Single-server backlog bound from (sigma, rho).
inline double one_server_backlog(const snc::SpectralChar& a, const snc::SpectralChar& s,
                                 double theta, double b) {
  return std::exp(theta * (a.sigma + s.sigma - b)) / (1.0 - std::exp(-theta * (s.rho - a.rho)));
}

/// Single-server delay bound from (sigma, rho).
inline double one_server_delay(const snc::SpectralChar& a, const snc::SpectralChar& s,
                               double theta, std::size_t T) {
  return std::exp(theta * (a.sigma + s.sigma + a.rho - s.rho * static_cast<double>(T))) /
         (1.0 - std::exp(-theta * (s.rho - a.rho)));
}

/// Martingale backlog at h = 1 on a two-server line carrying flow 1 only.
inline double two_server_mart_backlog(const snc::NetworkChar& ch, double xi, double b) {
  const double th = ch.theta;
  const auto& a = ch.arrival[0];
  const auto& s2 = ch.service[1];
  return xi * std::exp(th * (s2.sigma - b)) / (1.0 - std::exp(-th * (s2.rho - a.rho)));
}

/// Two-term martingale delay at h = 1 on the same line.
inline double two_server_mart_delay(const snc::NetworkChar& c1, double xi1,
                                    const snc::NetworkChar& c2, double xi2, std::size_t T) {
  const double t1 = c1.theta, t2 = c2.theta;
  const auto &a1 = c1.arrival[0], &s21 = c1.service[1];
  const auto &a2 = c2.arrival[0], &s12 = c2.service[0], &s22 = c2.service[1];
  const double p1 = xi1 * std::exp(t1 * (s21.sigma + a1.rho - s21.rho * static_cast<double>(T))) /
                    (1.0 - std::exp(-t1 * (s21.rho - a1.rho)));
  if (T == 0) return p1;
  const double p2 = xi2 * std::exp(t2 * (s22.sigma + a2.rho - s12.rho)) *
                    two_pole_coeff(std::exp(-t2 * s12.rho), std::exp(-t2 * s22.rho), T - 1);
  return p1 + p2;
}

}  // namespace oracle
