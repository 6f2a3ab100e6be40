#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <random>

#include "snc/bounds.hpp"
#include "snc/corpus.hpp"
#include "snc/error.hpp"
#include "oracles.hpp"

using namespace snc;

namespace {

constexpr double kTol = 1e-12;

Mmp mmoo() { return Mmp::on_off(0.7, 0.1, Poisson{2.0}); }

ServiceModel bern(double v, double p) {
  return MarkovService{Mmp::single_state(ScaledBernoulli{v, p})};
}

ServiceModel markov_service() {
  Matrix p(2, 2);
  p << 0.9, 0.1, 0.2, 0.8;
  return MarkovService{Mmp(p, {ScaledBernoulli{6.0, 0.9}, Constant{2.0}})};
}

double rel(double a, double b) { return std::abs(a / b - 1.0); }

}  // namespace

// Single server: the PMOO bounds reduce to the one-server closed forms.
TEST(SingleServer, BacklogAndDelayClosedForms) {
  for (const auto& s : {bern(5.0, 0.5), markov_service()}) {
    const TandemNetwork net({s}, {{1, 1, 1, mmoo()}});
    const double th = 0.5 * theta_star(net, 1).value;
    const auto a = characterize_arrival(mmoo(), th);
    const auto sv = characterize_service(s, th);
    for (double b : {0.0, 3.0, 17.5, 60.0})
      EXPECT_LT(rel(pmoo_backlog(net, th, b), oracle::one_server_backlog(a, sv, th, b)), kTol) << b;
    for (std::size_t T : {0u, 1u, 9u, 40u})
      EXPECT_LT(rel(pmoo_delay(net, th, T), oracle::one_server_delay(a, sv, th, T)), kTol) << T;
  }
}

TEST(Pmoo, ServiceBgfShape) {
  const auto net = corpus::fig1b();
  const double th = 0.1;
  const auto ch = characterize_network(net, th);
  const auto gf = pmoo_service_bgf(net, ch);
  ASSERT_EQ(gf.pole_rates().size(), 3u);
  // flows() = {1, 2, 3}
  const auto& A = ch.arrival;
  const auto& S = ch.service;
  EXPECT_LT(rel(gf.pole_rates()[0], std::exp(-th * (S[0].rho - A[1].rho))), kTol);
  EXPECT_LT(rel(gf.pole_rates()[1], std::exp(-th * (S[1].rho - A[1].rho - A[2].rho))), kTol);
  EXPECT_LT(rel(gf.pole_rates()[2], std::exp(-th * (S[2].rho - A[2].rho))), kTol);
  EXPECT_LT(std::abs(gf.log_prefactor() - th * (A[1].sigma + A[2].sigma)), kTol);

  const auto a = corpus::fig1a();
  const auto cha = characterize_network(a, th);
  const auto ga = pmoo_service_bgf(a, cha);
  EXPECT_LT(std::abs(ga.log_prefactor() - th * (cha.service[0].sigma + cha.service[1].sigma)),
            kTol);
  EXPECT_LT(rel(ga.pole_rates()[0], std::exp(-th * cha.service[0].rho)), kTol);
}

// Two identical servers: a double pole, summed term by term.
TEST(Pmoo, IdenticalServersDoublePole) {
  const TandemNetwork net({bern(5.0, 0.5), bern(5.0, 0.5)}, {{1, 1, 2, mmoo()}});
  const double th = 0.1;
  const auto a = characterize_arrival(mmoo(), th);
  const auto s = characterize_service(bern(5.0, 0.5), th);
  double sum = 0.0;
  for (int k = 0; k < 20000; ++k)
    sum += (k + 1) * std::exp(th * (2 * s.sigma - (s.rho - a.rho) * k));
  for (double b : {0.0, 10.0, 30.0}) {
    const double expect = std::exp(-th * b) * std::exp(th * a.sigma) * sum;
    EXPECT_LT(rel(pmoo_backlog(net, th, b), expect), 1e-11);
  }
}

TEST(Pmoo, MonotoneInValueAndLoad) {
  const auto net = corpus::fig1b();
  const double th = 0.08;
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t T = 0; T < 80; ++T) {
    const double v = pmoo_delay(net, th, T);
    EXPECT_LE(v, prev);
    prev = v;
  }
  prev = std::numeric_limits<double>::infinity();
  for (double b = 0; b < 80; b += 0.5) {
    const double v = pmoo_backlog(net, th, b);
    EXPECT_LE(v, prev);
    prev = v;
  }
  const TandemNetwork lo({ConstantRate{5.0}}, {{1, 1, 1, Mmp::on_off(0.7, 0.1, Poisson{2.0})}});
  const TandemNetwork hi({ConstantRate{5.0}}, {{1, 1, 1, Mmp::on_off(0.7, 0.1, Poisson{2.2})}});
  EXPECT_LE(pmoo_delay(lo, 0.1, 10), pmoo_delay(hi, 0.1, 10));
  EXPECT_LE(pmoo_backlog(lo, 0.1, 10), pmoo_backlog(hi, 0.1, 10));
}

TEST(Pmoo, DivergesExactlyPastThetaStar) {
  const auto net = corpus::fig1a();
  const double t1 = theta_star(net, 1).value;
  EXPECT_NO_THROW(pmoo_backlog(net, t1 * (1 - 1e-6), 5.0));
  EXPECT_THROW(pmoo_backlog(net, t1 * (1 + 1e-6), 5.0), DivergenceError);
  EXPECT_THROW(pmoo_delay(net, t1 * (1 + 1e-6), 5), DivergenceError);
}

TEST(Xi, OneForIidProcesses) {
  const TandemNetwork net({bern(5.0, 0.5), ConstantRate{6.0}},
                          {{1, 1, 2, Mmp::single_state(Poisson{1.5})},
                           {2, 1, 1, Mmp::single_state(ScaledBernoulli{2.0, 0.3})}});
  for (double th : {0.05, 0.2, 0.6}) {
    const auto ch = characterize_network(net, th);
    EXPECT_EQ(xi_constant(net, ch, 1).value, 1.0);
    EXPECT_EQ(xi_constant(net, ch, 2).value, 1.0);
  }
}

// Off state emits 0 < 5, so only the On state is in P.
TEST(Xi, OnOffIntoConstantRateHandEnumeration) {
  const TandemNetwork net({ConstantRate{5.0}}, {{1, 1, 1, mmoo()}});
  const double th = 0.3;
  const auto ch = characterize_network(net, th);
  const auto xi = xi_constant(net, ch, 1);
  EXPECT_LT(rel(xi.value, 1.0 / ch.arrival[0].nu(1)), kTol);
  EXPECT_FALSE(xi.always_served);
  EXPECT_EQ(xi.joint_states, 2u);
  // the Off state has the smaller nu entry, so xi is strictly below the fallback
  EXPECT_LT(xi.value, std::exp(th * ch.arrival[0].sigma));
}

TEST(Xi, AlwaysServedWhenArrivalsBounded) {
  const TandemNetwork net({ConstantRate{5.0}},
                          {{1, 1, 1, Mmp::on_off(0.4, 0.4, ScaledBernoulli{4.0, 0.5})}});
  const auto ch = characterize_network(net, 0.2);
  const auto xi = xi_constant(net, ch, 1);
  EXPECT_TRUE(xi.always_served);
  EXPECT_EQ(xi.value, 1.0);
}


TEST(Xi, RandomInstancesMatchEnumerationAndFallback) {
  std::mt19937_64 gen(99);
  std::uniform_int_distribution<std::size_t> states(1, 3), flows(1, 3);
  std::uniform_real_distribution<double> th(0.02, 0.8), coin(0.0, 1.0);
  for (int t = 0; t < 200; ++t) {
    const auto m = flows(gen);
    std::vector<FlowSpec> fs;
    for (std::size_t i = 0; i < m; ++i)
      fs.push_back({static_cast<int>(i + 1), 1, 1, oracle::random_mmp(gen, states(gen))});
    const bool constant = coin(gen) < 0.3;
    const ServiceModel s = constant ? ServiceModel{ConstantRate{3.0}}
                                    : ServiceModel{MarkovService{oracle::random_mmp(gen, states(gen))}};
    const TandemNetwork net({s}, fs);
    const double theta = th(gen);
    const auto ch = characterize_network(net, theta);
    const auto xi = xi_constant(net, ch, 1);

    const double expect = oracle::xi_enumerated(net, ch, 1);
    EXPECT_LT(rel(xi.value, expect), kTol) << "instance " << t;

    EXPECT_LE(xi.value, oracle::xi_fallback(net, ch, 1) * (1 + kTol)) << "instance " << t;
  }
}

// h = 1 on the two-server tandem.
TEST(Martingale, TwoServerBacklogSiteOne) {
  const auto net = corpus::fig1a();
  for (double th : {0.05, 0.12, theta_star(net, 1).value}) {
    const auto ch = characterize_network(net, th);
    const double xi = xi_constant(net, ch, 1).value;
    const auto& a = ch.arrival[0];
    for (double b : {0.0, 5.0, 40.0}) {
      const double expect = oracle::two_server_mart_backlog(ch, xi, b);
      EXPECT_LT(rel(mart_backlog(net, 1, th, b), expect), kTol);
      // the statement variant carries exp(-theta sigma_A1) twice
      const double stmt = std::exp(log_mart_backlog(net, ch, 1, b, true));
      EXPECT_LT(rel(stmt, expect * std::exp(-2.0 * th * a.sigma)), kTol);
    }
  }
}

// h = 2 with a constant-rate first server.
TEST(Martingale, TwoServerBacklogSiteTwo) {
  const double c1 = 5.0;
  const TandemNetwork net({ConstantRate{c1}, bern(6.0, 0.5)}, {{1, 1, 2, mmoo()}});
  ASSERT_TRUE(check_martingale_site(net, 2).ok);
  const double th = 0.1;
  const auto ch = characterize_network(net, th);
  const double xi = xi_constant(net, ch, 2).value;
  for (double b : {0.0, 7.0, 33.0}) {
    const double expect =
        xi * std::exp(-th * b) / (1.0 - std::exp(-th * (c1 - ch.arrival[0].rho)));
    EXPECT_LT(rel(mart_backlog(net, 2, th, b), expect), kTol);
  }
}

// Two-term delay bound on the two-server tandem with independent theta1, theta2.
TEST(Martingale, TwoServerDelayTwoTerms) {
  const auto net = corpus::fig1a();
  const double t1 = 0.11, t2 = 0.16;
  const auto c1 = characterize_network(net, t1);
  const auto c2 = characterize_network(net, t2);
  const double xi1 = xi_constant(net, c1, 1).value;
  const double xi2 = xi_constant(net, c2, 1).value;
  for (std::size_t T : {0u, 1u, 2u, 10u, 37u, 80u}) {
    const double expect = oracle::two_server_mart_delay(c1, xi1, c2, xi2, T);
    const double p1 = oracle::two_server_mart_delay(c1, xi1, c1, xi1, 0) *
                      std::exp(-c1.theta * c1.service[1].rho * static_cast<double>(T));
    const double got = mart_delay(net, 1, t1, t2, T);
    EXPECT_LT(rel(got, expect), kTol) << "T=" << T;
    EXPECT_LT(rel(std::exp(log_mart_delay_p1(net, c1, 1, T)), p1), kTol);
    if (T == 0) EXPECT_TRUE(std::isinf(log_mart_delay_p2(net, c2, 1, T)));
  }
}

TEST(Martingale, RejectsInadmissibleSite) {
  const auto net = corpus::fig1b();
  const auto ch = characterize_network(net, 0.05);
  try {
    log_mart_backlog(net, ch, 3, 10.0);
    FAIL() << "expected AssumptionViolation";
  } catch (const AssumptionViolation& e) {
    ASSERT_FALSE(e.items().empty());
    EXPECT_NE(e.items()[0].find("flow 2"), std::string::npos);
  }
}

TEST(Martingale, NoFreeLunchAtZero) {
  const TandemNetwork net({ConstantRate{3.0}, ConstantRate{4.0}},
                          {{1, 1, 2, Mmp::single_state(Poisson{1.0})}});
  const double th = 0.3;
  const auto ch = characterize_network(net, th);
  const double prefactor = xi_constant(net, ch, 1).value;
  EXPECT_GE(mart_backlog(net, 1, th, 0.0), prefactor);
}

TEST(Martingale, DecaysInValue) {
  const auto net = corpus::fig1b();
  for (std::size_t h : {1u, 2u}) {
    double prev = std::numeric_limits<double>::infinity();
    for (std::size_t T = 0; T < 60; ++T) {
      const double v = mart_delay(net, h, 0.05, 0.05, T);
      EXPECT_LE(v, prev * (1 + 1e-12));
      prev = v;
    }
    EXPECT_LT(mart_delay(net, h, 0.05, 0.05, 2000), 1e-20);
  }
}
