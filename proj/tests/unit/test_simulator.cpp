#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "snc/corpus.hpp"
#include "snc/error.hpp"
#include "snc/rng.hpp"
#include "snc/simulator.hpp"

using namespace snc;

TEST(Philox, KnownAnswers) {
  using W = std::array<std::uint32_t, 4>;
  EXPECT_EQ(philox4x32({0, 0, 0, 0}, {0, 0}), (W{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
  EXPECT_EQ(philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}),
            (W{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
  EXPECT_EQ(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}),
            (W{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(Philox, StreamsReproducibleAndDistinct) {
  PhiloxStream a(5, 1, 0), b(5, 1, 0), c(5, 2, 0), d(5, 1, 1), e(6, 1, 0);
  int same_c = 0, same_d = 0, same_e = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto x = a();
    EXPECT_EQ(x, b());
    same_c += x == c();
    same_d += x == d();
    same_e += x == e();
  }
  EXPECT_LT(same_c + same_d + same_e, 3);
  PhiloxStream u(1, 0, 0);
  double sum = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double v = u.uniform();
    ASSERT_GE(v, 0.0);
    ASSERT_LT(v, 1.0);
    sum += v;
  }
  EXPECT_NEAR(sum / 100000, 0.5, 0.005);
}

TEST(Simulator, UnitScale) {
  const TandemNetwork a({ConstantRate{2.5}}, {{1, 1, 1, Mmp::single_state(Constant{1.0})}});
  EXPECT_EQ(unit_scale(a), 2u);
  const TandemNetwork b({ConstantRate{1.0}},
                        {{1, 1, 1, Mmp::single_state(ScaledBernoulli{1.0 / 3.0, 0.5})}});
  EXPECT_EQ(unit_scale(b), 3u);
  const TandemNetwork c({ConstantRate{1.0}}, {{1, 1, 1, Mmp::single_state(Constant{1e-4})}});
  EXPECT_THROW(unit_scale(c), InvalidModel);
  EXPECT_EQ(unit_scale(corpus::fig1a()), 1u);
}

TEST(Simulator, UnderloadedDeterministic) {
  const TandemNetwork net({ConstantRate{2.0}}, {{1, 1, 1, Mmp::single_state(Constant{1.0})}});
  SimConfig cfg;
  cfg.steps = 1000;
  const auto r = simulate(net, cfg);
  EXPECT_EQ(r.total.samples, 1000u);
  if (r.total.delay.size() > 2) EXPECT_EQ(r.total.delay[2], 0u);
  if (r.total.backlog.size() > 1) EXPECT_EQ(r.total.backlog[1], 0u);
}

// Single server with Bernoulli arrivals against a minimal Lindley recursion
// driven by the same stream.
TEST(Simulator, LindleyOracle) {
  const TandemNetwork net({ConstantRate{1.0}},
                          {{1, 1, 1, Mmp::single_state(ScaledBernoulli{2.0, 0.5})}});
  SimConfig cfg;
  cfg.steps = 200'000;
  cfg.seed = 42;
  const auto r = simulate(net, cfg);

  PhiloxStream rng(42, 0, 0);
  rng.uniform();  // initial state draw
  std::vector<std::uint64_t> a_cum, d_cum;
  std::uint64_t q = 0, A = 0, D = 0;
  std::vector<std::uint64_t> qhist;
  for (std::uint64_t t = 0; t < cfg.steps; ++t) {
    const std::uint64_t a = rng.uniform() < 0.5 ? 2 : 0;
    A += a;
    const std::uint64_t served = std::min<std::uint64_t>(q + a, 1);
    q = q + a - served;
    D += served;
    a_cum.push_back(A);
    d_cum.push_back(D);
    if (q >= qhist.size()) qhist.resize(q + 1, 0);
    ++qhist[q];
  }
  for (std::size_t b = 0; b < qhist.size(); ++b) {
    std::uint64_t tail = 0;
    for (std::size_t k = b; k < qhist.size(); ++k) tail += qhist[k];
    ASSERT_LT(b, r.total.backlog.size());
    EXPECT_EQ(r.total.backlog[b], tail) << "b=" << b;
  }
  EXPECT_EQ(r.total.backlog.size(), qhist.size());

  // virtual delay: first u >= t with D(u) >= A(t), censored at the horizon
  std::vector<std::uint64_t> dhist;
  std::size_t u = 0;
  for (std::size_t t = 0; t < cfg.steps; ++t) {
    u = std::max(u, t);
    while (u < cfg.steps && d_cum[u] < a_cum[t]) ++u;
    const auto d = u - t;
    if (d >= dhist.size()) dhist.resize(d + 1, 0);
    ++dhist[d];
  }
  ASSERT_EQ(r.total.delay.size(), dhist.size());
  std::uint64_t tail = 0;
  for (std::size_t d = dhist.size(); d-- > 0;) {
    tail += dhist[d];
    EXPECT_EQ(r.total.delay[d], tail) << "d=" << d;
  }
}

TEST(Simulator, ReproducibleAcrossThreadCounts) {
  SimConfig cfg;
  cfg.steps = 50'000;
  cfg.seed = 7;
  cfg.replications = 4;
  const auto net = corpus::fig1b();
  setenv("SNC_THREADS", "1", 1);
  const auto a = simulate(net, cfg);
  setenv("SNC_THREADS", "4", 1);
  const auto b = simulate(net, cfg);
  unsetenv("SNC_THREADS");
  EXPECT_EQ(a.total.delay, b.total.delay);
  EXPECT_EQ(a.total.backlog, b.total.backlog);
  ASSERT_EQ(a.replications.size(), 4u);
  std::vector<std::uint64_t> sum;
  for (const auto& rep : a.replications) {
    if (rep.delay.size() > sum.size()) sum.resize(rep.delay.size(), 0);
    for (std::size_t i = 0; i < rep.delay.size(); ++i) sum[i] += rep.delay[i];
  }
  EXPECT_EQ(sum, a.total.delay);
  cfg.seed = 8;
  EXPECT_NE(simulate(net, cfg).total.delay, a.total.delay);
}

TEST(Simulator, TailsNonincreasing) {
  SimConfig cfg;
  cfg.steps = 100'000;
  cfg.warmup = 1000;
  for (const auto& name : corpus::names()) {
    for (auto pol : {Policy::CrossPriority, Policy::FifoAggregate}) {
      cfg.policy = pol;
      const auto r = simulate(corpus::by_name(name), cfg);
      EXPECT_EQ(r.total.samples, 99'000u);
      EXPECT_EQ(r.total.delay.front(), r.total.samples);
      EXPECT_EQ(r.total.backlog.front(), r.total.samples);
      for (std::size_t i = 1; i < r.total.delay.size(); ++i)
        EXPECT_LE(r.total.delay[i], r.total.delay[i - 1]);
      for (std::size_t i = 1; i < r.total.backlog.size(); ++i)
        EXPECT_LE(r.total.backlog[i], r.total.backlog[i - 1]);
    }
  }
}

TEST(Simulator, CrossPriorityDominatesFifo) {
  SimConfig cfg;
  cfg.steps = 1'000'000;
  cfg.seed = 3;
  for (const auto& name : {"fig1b", "sinktree_up", "sinktree_down"}) {
    const auto net = corpus::by_name(name);
    cfg.policy = Policy::CrossPriority;
    const auto cross = empirical_tail(simulate(net, cfg), Metric::Delay, 40);
    cfg.policy = Policy::FifoAggregate;
    const auto fifo = empirical_tail(simulate(net, cfg), Metric::Delay, 40);
    for (std::size_t T = 1; T <= 40; ++T) {
      const auto& c = cross.entries[T];
      const auto& f = fifo.entries[T];
      EXPECT_GE(c.probability, f.probability - 3.0 * std::hypot(c.std_error, f.std_error))
          << name << " T=" << T;
    }
  }
}

TEST(Simulator, RejectsBadConfig) {
  SimConfig cfg;
  cfg.steps = 10;
  cfg.warmup = 11;
  EXPECT_THROW(simulate(corpus::fig1a(), cfg), InvalidModel);
  cfg.warmup = 0;
  cfg.replications = 0;
  EXPECT_THROW(simulate(corpus::fig1a(), cfg), InvalidModel);
  EXPECT_THROW(parse_policy("round-robin"), std::invalid_argument);
  EXPECT_EQ(parse_policy("fifo"), Policy::FifoAggregate);
  EXPECT_EQ(parse_policy("cross-priority"), Policy::CrossPriority);
}

TEST(EmpiricalTail, Frequencies) {
  SimResult r;
  r.total.delay = {100, 10, 1};
  r.total.backlog = {100};
  r.total.samples = 100;
  r.replications = {r.total};
  const auto c = empirical_tail(r, Metric::Delay, 4);
  ASSERT_EQ(c.entries.size(), 5u);
  EXPECT_DOUBLE_EQ(c.entries[0].probability, 1.0);
  EXPECT_DOUBLE_EQ(c.entries[1].probability, 0.1);
  EXPECT_DOUBLE_EQ(c.entries[2].probability, 0.01);
  EXPECT_DOUBLE_EQ(c.entries[1].std_error, std::sqrt(0.1 * 0.9 / 100));
  EXPECT_EQ(c.entries[3].probability, 0.0);
  EXPECT_DOUBLE_EQ(c.entries[3].upper95, 0.03);
  EXPECT_EQ(empirical_quantile(r, 0.05), 2u);
  SimResult empty;
  EXPECT_THROW(empirical_tail(empty, Metric::Delay, 3), DomainError);
}

TEST(EmpiricalTail, ReplicationSpread) {
  SimResult r;
  TailCounts a, b;
  a.delay = {10, 5};
  a.samples = 10;
  b.delay = {10, 1};
  b.samples = 10;
  r.replications = {a, b};
  r.total.delay = {20, 6};
  r.total.samples = 20;
  const auto c = empirical_tail(r, Metric::Delay, 1);
  EXPECT_DOUBLE_EQ(c.entries[1].rep_min, 0.1);
  EXPECT_DOUBLE_EQ(c.entries[1].rep_max, 0.5);
  EXPECT_DOUBLE_EQ(c.entries[1].probability, 0.3);
}
