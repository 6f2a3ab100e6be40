#include "snc/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <random>

#include "snc/error.hpp"
#include "snc/parallel.hpp"
#include "snc/rng.hpp"

namespace snc {
namespace {

constexpr std::uint64_t kCounterLimit = std::uint64_t{1} << 62;

// Draws states and per-slot emissions (in integer units) of one process.
class ChainSampler {
 public:
  ChainSampler(const Mmp& mmp, std::uint64_t scale, PhiloxStream stream)
      : rng_(stream) {
    const auto n = mmp.n_states();
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> row(n);
      double acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        acc += mmp.transition()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        row[j] = acc;
      }
      cum_.push_back(std::move(row));
      emit_.push_back(make_emitter(mmp.emissions()[i], scale));
    }
    state_ = draw(mmp.stationary());
  }

  std::uint64_t emit() {
    auto& e = emit_[state_];
    switch (e.kind) {
      case Kind::Constant:
        return e.units;
      case Kind::Bernoulli:
        return rng_.uniform() < e.prob ? e.units : 0;
      case Kind::Poisson:
        return static_cast<std::uint64_t>(e.poisson(rng_)) * e.units;
    }
    return 0;
  }

  void step() {
    if (cum_.size() == 1) return;
    const auto& row = cum_[state_];
    const double u = rng_.uniform() * row.back();
    state_ = static_cast<std::size_t>(std::upper_bound(row.begin(), row.end() - 1, u) - row.begin());
  }

 private:
  enum class Kind { Constant, Bernoulli, Poisson };
  struct Emitter {
    Kind kind = Kind::Constant;
    std::uint64_t units = 0;
    double prob = 0.0;
    std::poisson_distribution<long long> poisson;
  };

  static Emitter make_emitter(const EmissionDist& d, std::uint64_t scale) {
    Emitter e;
    const auto k = static_cast<double>(scale);
    if (const auto* c = std::get_if<Constant>(&d)) {
      e.units = static_cast<std::uint64_t>(std::llround(c->value * k));
    } else if (const auto* b = std::get_if<ScaledBernoulli>(&d)) {
      e.kind = Kind::Bernoulli;
      e.units = static_cast<std::uint64_t>(std::llround(b->value * k));
      e.prob = b->prob;
    } else {
      e.kind = Kind::Poisson;
      e.units = scale;
      e.poisson = std::poisson_distribution<long long>(std::get<Poisson>(d).mean);
    }
    return e;
  }

  std::size_t draw(const Vector& p) {
    const double u = rng_.uniform();
    double acc = 0.0;
    for (Eigen::Index i = 0; i + 1 < p.size(); ++i) {
      acc += p(i);
      if (u < acc) return static_cast<std::size_t>(i);
    }
    return static_cast<std::size_t>(p.size() - 1);
  }

  PhiloxStream rng_;
  std::vector<std::vector<double>> cum_;
  std::vector<Emitter> emit_;
  std::size_t state_ = 0;
};

bool integral(double v, std::uint64_t k) {
  const double x = v * static_cast<double>(k);
  return std::abs(x - std::round(x)) <= 1e-9 * std::max(1.0, std::abs(x));
}

void bump(std::vector<std::uint64_t>& hist, std::uint64_t v) {
  if (v >= hist.size()) hist.resize(v + 1, 0);
  ++hist[v];
}

std::vector<std::uint64_t> suffix_sums(const std::vector<std::uint64_t>& hist) {
  std::vector<std::uint64_t> tail(hist.size() + 1, 0);
  for (std::size_t v = hist.size(); v-- > 0;) tail[v] = tail[v + 1] + hist[v];
  if (tail.size() > 1) tail.pop_back();
  return tail;
}

void add_into(std::vector<std::uint64_t>& acc, const std::vector<std::uint64_t>& x) {
  if (x.size() > acc.size()) acc.resize(x.size(), 0);
  for (std::size_t i = 0; i < x.size(); ++i) acc[i] += x[i];
}

struct Batch {
  std::size_t flow;
  std::uint64_t amount;
};

TailCounts run_replication(const TandemNetwork& net, const SimConfig& cfg, std::uint64_t scale,
                           std::uint32_t rep) {
  const auto n = net.n_servers();
  const auto m = net.n_flows();

  std::vector<ChainSampler> arrivals;
  for (std::size_t i = 0; i < m; ++i)
    arrivals.emplace_back(net.flows()[i].arrival, scale,
                          PhiloxStream(cfg.seed, static_cast<std::uint32_t>(i), rep));
  std::vector<ChainSampler> markov;
  std::vector<std::uint64_t> constant(n, 0);
  std::vector<int> markov_index(n, -1);
  for (std::size_t j = 0; j < n; ++j) {
    const auto& s = net.servers()[j];
    if (const auto* c = std::get_if<ConstantRate>(&s)) {
      constant[j] = static_cast<std::uint64_t>(std::llround(c->rate * static_cast<double>(scale)));
    } else {
      markov_index[j] = static_cast<int>(markov.size());
      markov.emplace_back(std::get<MarkovService>(s).mmp, scale,
                          PhiloxStream(cfg.seed, static_cast<std::uint32_t>(m + j), rep));
    }
  }

  // Service order per server (0-based): cross flows by position, flow 1 last.
  std::vector<std::vector<std::size_t>> order(n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 1; i < m; ++i)
      if (net.flows()[i].first <= j + 1 && j + 1 <= net.flows()[i].last) order[j].push_back(i);
    order[j].push_back(0);
  }
  std::vector<std::size_t> first(m), last(m);
  for (std::size_t i = 0; i < m; ++i) {
    first[i] = net.flows()[i].first - 1;
    last[i] = net.flows()[i].last - 1;
  }

  const bool fifo = cfg.policy == Policy::FifoAggregate;
  std::vector<std::vector<std::uint64_t>> queue(n, std::vector<std::uint64_t>(m, 0));
  std::vector<std::deque<Batch>> fifo_queue(n);

  auto enqueue = [&](std::size_t j, std::size_t i, std::uint64_t amount) {
    if (fifo) {
      auto& q = fifo_queue[j];
      if (!q.empty() && q.back().flow == i)
        q.back().amount += amount;
      else
        q.push_back({i, amount});
    } else {
      queue[j][i] += amount;
    }
  };

  std::uint64_t a1 = 0, d1 = 0;
  struct Pending {
    std::uint64_t t;
    std::uint64_t target;
  };
  std::deque<Pending> pending;
  std::vector<std::uint64_t> delay_hist, backlog_hist;
  std::vector<std::uint64_t> served(m, 0);
  TailCounts out;

  for (std::uint64_t t = 0; t < cfg.steps; ++t) {
    for (std::size_t i = 0; i < m; ++i) {
      const auto a = arrivals[i].emit();
      arrivals[i].step();
      if (a == 0) continue;
      enqueue(first[i], i, a);
      if (i == 0) a1 += a;
    }
    for (std::size_t j = 0; j < n; ++j) {
      std::uint64_t s;
      if (markov_index[j] >= 0) {
        auto& c = markov[static_cast<std::size_t>(markov_index[j])];
        s = c.emit();
        c.step();
      } else {
        s = constant[j];
      }
      std::fill(served.begin(), served.end(), 0);
      if (fifo) {
        auto& q = fifo_queue[j];
        while (s > 0 && !q.empty()) {
          auto& b = q.front();
          const auto take = std::min(s, b.amount);
          served[b.flow] += take;
          b.amount -= take;
          s -= take;
          if (b.amount == 0) q.pop_front();
        }
      } else {
        for (auto i : order[j]) {
          if (s == 0) break;
          const auto take = std::min(s, queue[j][i]);
          queue[j][i] -= take;
          served[i] += take;
          s -= take;
        }
      }
      for (auto i : order[j]) {
        if (served[i] == 0) continue;
        if (last[i] == j) {
          if (i == 0) d1 += served[i];
        } else {
          enqueue(j + 1, i, served[i]);
        }
      }
    }
    if (a1 >= kCounterLimit) throw Error("simulation counter overflow");

    const bool record = t >= cfg.warmup;
    if (record) {
      pending.push_back({t, a1});
      bump(backlog_hist, (a1 - d1) / scale);
    }
    while (!pending.empty() && pending.front().target <= d1) {
      bump(delay_hist, t - pending.front().t);
      pending.pop_front();
    }
  }
  for (const auto& p : pending) {
    bump(delay_hist, cfg.steps - p.t);
    ++out.censored;
  }

  out.samples = cfg.steps - std::min(cfg.warmup, cfg.steps);
  out.delay = suffix_sums(delay_hist);
  out.backlog = suffix_sums(backlog_hist);
  return out;
}

}  // namespace

std::string to_string(Policy p) {
  return p == Policy::CrossPriority ? "cross_priority" : "fifo_aggregate";
}

Policy parse_policy(const std::string& s) {
  if (s == "cross-priority" || s == "cross_priority") return Policy::CrossPriority;
  if (s == "fifo" || s == "fifo_aggregate" || s == "fifo-aggregate") return Policy::FifoAggregate;
  throw std::invalid_argument("unknown policy '" + s + "'");
}

std::uint64_t unit_scale(const TandemNetwork& net) {
  std::vector<double> values;
  auto collect = [&](const Mmp& mmp) {
    for (const auto& e : mmp.emissions()) {
      if (const auto* c = std::get_if<Constant>(&e)) values.push_back(c->value);
      if (const auto* b = std::get_if<ScaledBernoulli>(&e)) values.push_back(b->value);
    }
  };
  for (const auto& f : net.flows()) collect(f.arrival);
  for (const auto& s : net.servers()) {
    if (const auto* c = std::get_if<ConstantRate>(&s))
      values.push_back(c->rate);
    else
      collect(std::get<MarkovService>(s).mmp);
  }
  for (std::uint64_t k = 1; k <= 1000; ++k)
    if (std::all_of(values.begin(), values.end(), [k](double v) { return integral(v, k); }))
      return k;
  throw InvalidModel("emission values need a unit scale finer than 1/1000");
}

SimResult simulate(const TandemNetwork& net, const SimConfig& cfg) {
  if (cfg.replications == 0) throw InvalidModel("replications must be >= 1");
  if (cfg.warmup > cfg.steps) throw InvalidModel("warmup exceeds steps");
  SimResult r;
  r.config = cfg;
  r.scale = unit_scale(net);
  r.replications.resize(cfg.replications);
  parallel_for(cfg.replications, [&](std::size_t k) {
    r.replications[k] = run_replication(net, cfg, r.scale, static_cast<std::uint32_t>(k));
  });
  for (const auto& rep : r.replications) {
    add_into(r.total.delay, rep.delay);
    add_into(r.total.backlog, rep.backlog);
    r.total.samples += rep.samples;
    r.total.censored += rep.censored;
  }
  return r;
}

EmpiricalCurve empirical_tail(const SimResult& result, Metric metric, std::size_t max_value) {
  const auto& total = result.total;
  if (total.samples == 0) throw DomainError("simulation produced no samples");
  auto pick = [metric](const TailCounts& t) -> const std::vector<std::uint64_t>& {
    return metric == Metric::Delay ? t.delay : t.backlog;
  };
  auto freq = [&](const TailCounts& t, std::size_t v) {
    const auto& tail = pick(t);
    const std::uint64_t c = v < tail.size() ? tail[v] : 0;
    return t.samples ? static_cast<double>(c) / static_cast<double>(t.samples) : 0.0;
  };
  EmpiricalCurve curve;
  curve.metric = metric;
  curve.samples = total.samples;
  const double N = static_cast<double>(total.samples);
  for (std::size_t v = 0; v <= max_value; ++v) {
    EmpiricalPoint p;
    p.value = v;
    p.probability = freq(total, v);
    p.std_error = std::sqrt(p.probability * (1.0 - p.probability) / N);
    p.rep_min = std::numeric_limits<double>::infinity();
    p.rep_max = 0.0;
    for (const auto& rep : result.replications) {
      const double f = freq(rep, v);
      p.rep_min = std::min(p.rep_min, f);
      p.rep_max = std::max(p.rep_max, f);
    }
    if (p.probability == 0.0) p.upper95 = 3.0 / N;
    curve.entries.push_back(p);
  }
  return curve;
}

std::size_t empirical_quantile(const SimResult& result, double epsilon) {
  const auto& tail = result.total.delay;
  const double N = static_cast<double>(result.total.samples);
  for (std::size_t T = 0; T < tail.size(); ++T)
    if (static_cast<double>(tail[T]) / N <= epsilon) return T;
  return tail.size();
}

namespace {

struct RawSampler {
  const Mmp& mmp;
  PhiloxStream& rng;
  std::vector<std::poisson_distribution<long long>> poisson;

  RawSampler(const Mmp& m, PhiloxStream& r) : mmp(m), rng(r) {
    for (const auto& e : mmp.emissions())
      poisson.emplace_back(std::holds_alternative<Poisson>(e) ? std::get<Poisson>(e).mean : 1.0);
  }

  double emit(std::size_t x) {
    const auto& e = mmp.emissions()[x];
    if (const auto* c = std::get_if<Constant>(&e)) return c->value;
    if (const auto* b = std::get_if<ScaledBernoulli>(&e)) return rng.uniform() < b->prob ? b->value : 0.0;
    return static_cast<double>(poisson[x](rng));
  }

  std::size_t step(const Matrix& p, std::size_t x) {
    const double u = rng.uniform();
    double acc = 0.0;
    const auto n = static_cast<std::size_t>(p.cols());
    for (std::size_t j = 0; j + 1 < n; ++j) {
      acc += p(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(j));
      if (u < acc) return j;
    }
    return n - 1;
  }

  std::size_t stationary() {
    const double u = rng.uniform();
    double acc = 0.0;
    const auto& pi = mmp.stationary();
    for (Eigen::Index j = 0; j + 1 < pi.size(); ++j) {
      acc += pi(j);
      if (u < acc) return static_cast<std::size_t>(j);
    }
    return static_cast<std::size_t>(pi.size() - 1);
  }
};

MartingaleCheck finish(const std::vector<double>& sum, const std::vector<double>& sq,
                       std::uint64_t trials) {
  MartingaleCheck out;
  const double N = static_cast<double>(trials);
  for (std::size_t k = 0; k < sum.size(); ++k) {
    const double mean = sum[k] / N;
    const double var = std::max(0.0, sq[k] / N - mean * mean);
    out.mean.push_back(mean);
    out.std_error.push_back(std::sqrt(var / N));
  }
  return out;
}

}  // namespace

MartingaleCheck martingale_empirical_check(const Mmp& mmp, double theta, std::size_t tau_max,
                                           std::uint64_t trials, std::uint64_t seed) {
  const auto ch = characterize_arrival(mmp, theta);
  PhiloxStream rng(seed, 0, 0);
  RawSampler s(mmp, rng);
  std::vector<double> sum(tau_max + 1, 0.0), sq(tau_max + 1, 0.0);
  for (std::uint64_t k = 0; k < trials; ++k) {
    std::size_t x = s.stationary();
    double a = 0.0;
    for (std::size_t tau = 0;; ++tau) {
      const double m = std::exp(theta * a - theta * ch.rho * static_cast<double>(tau)) *
                       ch.nu(static_cast<Eigen::Index>(x));
      sum[tau] += m;
      sq[tau] += m * m;
      if (tau == tau_max) break;
      x = s.step(mmp.reversed(), x);
      a += s.emit(x);
    }
  }
  return finish(sum, sq, trials);
}

MartingaleCheck empirical_mgf(const Mmp& mmp, double theta, std::size_t k_max,
                              std::uint64_t trials, std::uint64_t seed) {
  PhiloxStream rng(seed, 0, 0);
  RawSampler s(mmp, rng);
  std::vector<double> sum(k_max + 1, 0.0), sq(k_max + 1, 0.0);
  for (std::uint64_t k = 0; k < trials; ++k) {
    std::size_t x = s.stationary();
    double a = 0.0;
    for (std::size_t len = 0;; ++len) {
      const double m = std::exp(theta * a);
      sum[len] += m;
      sq[len] += m * m;
      if (len == k_max) break;
      a += s.emit(x);
      x = s.step(mmp.transition(), x);
    }
  }
  return finish(sum, sq, trials);
}

}  // namespace snc
