#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "snc/analyzer.hpp"
#include "snc/counterexample.hpp"
#include "snc/network.hpp"
#include "snc/simulator.hpp"

namespace snc {

/// Human-readable status: theta* per server and the martingale site checks.
/// Returns the admissible sites.
std::vector<std::size_t> run_validate(const TandemNetwork& net, std::ostream& out);

struct AnalyzeSpec {
  Method::Kind method = Method::Kind::Pmoo;
  /// Martingale site; nullopt means every admissible site plus the envelope.
  std::optional<std::size_t> site;
  Metric metric = Metric::Delay;
  std::size_t lo = 0;
  std::size_t hi = 100;
  std::optional<double> epsilon;
};

struct QuantileRow {
  std::string method;
  std::size_t site = 0;
  std::size_t delay = 0;
};

/// CSV: metric,method,site,value,probability,raw,theta,theta2. Returns the
/// delay quantiles at epsilon when one is given.
std::vector<QuantileRow> run_analyze(const TandemNetwork& net, const AnalyzeSpec& spec,
                                     std::ostream& csv);

/// CSV: value,probability,stderr,method,seed,steps,metric,rep_min,rep_max
/// for delay and backlog values 0..max_value. Returns the result.
SimResult run_simulate(const TandemNetwork& net, const SimConfig& cfg, std::size_t max_value,
                       std::ostream& csv);

struct SweepSpec {
  std::string pointer;  // JSON pointer into the network document
  double lo = 0.0;
  double hi = 0.0;
  double step = 1.0;
  double epsilon = 1e-4;
  std::optional<SimConfig> simulation;
};

/// Parses "lo:hi:step". Throws std::invalid_argument.
void parse_sweep_range(const std::string& text, SweepSpec& spec);

/// Values lo, lo + step, ... up to hi (inclusive, with rounding slack).
std::vector<double> sweep_values(const SweepSpec& spec);

/// CSV: param,method,site,delay,reason. Failed points give delay=nan and a
/// reason; they do not stop the sweep.
void run_sweep(const std::string& network_json, const SweepSpec& spec, std::ostream& csv);

/// CSV: x,horizon,empirical,stderr,claimed_bound,sound_bound,sound_empirical,sound_stderr.
std::vector<CounterexampleRow> run_counterexample(const CounterexampleConfig& cfg,
                                                  std::ostream& csv);

/// Shortest round-trip decimal form; "nan" and "inf" spelled out.
std::string format_number(double v);

}  // namespace snc
