#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "snc/analyzer.hpp"
#include "snc/network.hpp"

namespace snc {

enum class Policy {
  CrossPriority,  // cross traffic first (by flow order), then flow 1
  FifoAggregate,  // one FIFO queue per server across flows
};

std::string to_string(Policy p);

/// Accepts "cross-priority", "cross_priority", "fifo", "fifo_aggregate".
Policy parse_policy(const std::string& s);

struct SimConfig {
  std::uint64_t steps = 1'000'000;
  std::uint64_t seed = 1;
  Policy policy = Policy::CrossPriority;
  std::size_t replications = 1;
  std::uint64_t warmup = 0;
};

/// Tail counts: tail[v] = number of samples with value >= v; tail[0] = samples.
struct TailCounts {
  std::vector<std::uint64_t> delay;
  std::vector<std::uint64_t> backlog;
  std::uint64_t samples = 0;
  std::uint64_t censored = 0;  // delays still pending at the end, counted at their lower bound
};

struct SimResult {
  TailCounts total;
  std::vector<TailCounts> replications;
  /// Data are simulated in integer units of 1/scale so that every constant
  /// and Bernoulli value is integral; backlog tails are in original units.
  std::uint64_t scale = 1;
  SimConfig config;
};

/// Smallest K in 1..1000 making every non-Poisson emission value (and
/// constant rate) times K an integer. Throws InvalidModel if none.
std::uint64_t unit_scale(const TandemNetwork& net);

/// Slotted simulation of flow 1's virtual delay and end-to-end backlog.
/// Each slot: arrivals enqueue, then servers 1..n serve in order, a
/// server's departures reaching the next server in the same slot. Every
/// process starts from its stationary distribution; a slot's emission is
/// drawn from the current state before the chain moves. Replications run
/// in parallel and are merged in order, so results depend only on
/// (net, cfg).
SimResult simulate(const TandemNetwork& net, const SimConfig& cfg);

struct EmpiricalPoint {
  std::size_t value = 0;
  double probability = 0.0;
  double std_error = 0.0;   // binomial standard error
  double rep_min = 0.0;     // spread across replications
  double rep_max = 0.0;
  double upper95 = 0.0;     // 3 / samples when nothing was observed
};

struct EmpiricalCurve {
  Metric metric = Metric::Delay;
  std::uint64_t samples = 0;
  std::vector<EmpiricalPoint> entries;
};

/// Frequencies for values 0..max_value. Throws DomainError without samples.
EmpiricalCurve empirical_tail(const SimResult& result, Metric metric, std::size_t max_value);

/// Least T with empirical P(d >= T) <= epsilon.
std::size_t empirical_quantile(const SimResult& result, double epsilon);

struct MartingaleCheck {
  std::vector<double> mean;  // index tau
  std::vector<double> std_error;
};

/// Monte-Carlo means of M(theta, v - tau, v) = exp(theta A(v - tau, v) -
/// theta rho tau) nu_{X(v - tau)}, with X(v) ~ pi and the chain run
/// backwards through the reversed transition matrix.
MartingaleCheck martingale_empirical_check(const Mmp& mmp, double theta, std::size_t tau_max,
                                           std::uint64_t trials, std::uint64_t seed);

/// Monte-Carlo estimate of E[exp(theta A(t, t+k))] for k = 0..k_max over a
/// stationary path (theta may be negative, as for services), with standard
/// errors.
MartingaleCheck empirical_mgf(const Mmp& mmp, double theta, std::size_t k_max,
                              std::uint64_t trials, std::uint64_t seed);

}  // namespace snc
