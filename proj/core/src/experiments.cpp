#include "snc/experiments.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "snc/error.hpp"
#include "snc/network_json.hpp"
#include "snc/parallel.hpp"

namespace snc {
namespace {

const char* metric_name(Metric m) { return m == Metric::Delay ? "delay" : "backlog"; }

std::string site_field(std::size_t site) { return site ? std::to_string(site) : ""; }

void write_curve(const BoundCurve& c, std::ostream& csv) {
  for (const auto& e : c.entries)
    csv << metric_name(c.metric) << ',' << c.method << ',' << site_field(e.site) << ','
        << e.value << ',' << format_number(e.probability) << ',' << format_number(e.raw) << ','
        << format_number(e.theta) << ',' << format_number(e.theta2) << '\n';
}

std::string one_line(std::string s) {
  for (auto& ch : s)
    if (ch == '\n' || ch == ',') ch = ';';
  return s;
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::vector<std::size_t> run_validate(const TandemNetwork& net, std::ostream& out) {
  out << "servers: " << net.n_servers() << ", flows: " << net.n_flows() << '\n';
  for (const auto& f : net.flows())
    out << "flow " << f.id << ": servers " << f.first << ".." << f.last
        << ", mean rate " << format_number(f.arrival.mean_rate()) << '\n';
  for (std::size_t j = 1; j <= net.n_servers(); ++j) {
    out << "server " << j << ": " << (is_constant_rate(net.server(j)) ? "constant-rate" : "mmp")
        << ", mean rate " << format_number(mean_rate(net.server(j))) << ", theta* ";
    const auto s = theta_star(net, j);
    out << format_number(s.value) << (s.infinite ? " (arrivals bounded below service)" : "")
        << (s.cap_reached ? " (search cap reached)" : "") << '\n';
  }
  std::vector<std::size_t> sites;
  for (std::size_t h = 1; h <= net.n_servers(); ++h) {
    const auto r = check_martingale_site(net, h);
    out << "martingale site " << h << ": " << (r.ok ? "ok" : "not admissible") << '\n';
    for (const auto& v : r.violations) out << "  " << v << '\n';
    if (r.ok) sites.push_back(h);
  }
  out << "admissible sites: {";
  for (std::size_t k = 0; k < sites.size(); ++k) out << (k ? "," : "") << sites[k];
  out << "}\n";
  return sites;
}

std::vector<QuantileRow> run_analyze(const TandemNetwork& net, const AnalyzeSpec& spec,
                                     std::ostream& csv) {
  Analyzer a(net);
  std::vector<Method> methods;
  bool all_sites = false;
  if (spec.method == Method::Kind::Pmoo) {
    methods.push_back(Method::pmoo());
  } else if (spec.site) {
    const auto r = check_martingale_site(net, *spec.site);
    if (!r.ok)
      throw AssumptionViolation("server " + std::to_string(*spec.site) +
                                    " is not a valid martingale site",
                                r.violations);
    methods.push_back(Method::martingale(*spec.site));
  } else {
    for (auto h : a.admissible_sites()) methods.push_back(Method::martingale(h));
    all_sites = true;
  }

  csv << "metric,method,site,value,probability,raw,theta,theta2\n";
  std::vector<BoundCurve> curves;
  for (const auto& m : methods) {
    curves.push_back(a.curve(m, spec.metric, spec.lo, spec.hi));
    write_curve(curves.back(), csv);
  }
  if (all_sites && !curves.empty()) write_curve(envelope(curves), csv);

  std::vector<QuantileRow> out;
  if (spec.epsilon && spec.metric == Metric::Delay)
    for (const auto& m : methods) out.push_back({m.label(), m.site, a.quantile(m, *spec.epsilon)});
  return out;
}

SimResult run_simulate(const TandemNetwork& net, const SimConfig& cfg, std::size_t max_value,
                       std::ostream& csv) {
  const auto r = simulate(net, cfg);
  const auto method = "sim_" + to_string(cfg.policy);
  csv << "value,probability,stderr,method,seed,steps,metric,rep_min,rep_max\n";
  for (auto metric : {Metric::Delay, Metric::Backlog}) {
    const auto c = empirical_tail(r, metric, max_value);
    for (const auto& e : c.entries)
      csv << e.value << ',' << format_number(e.probability) << ',' << format_number(e.std_error)
          << ',' << method << ',' << cfg.seed << ',' << cfg.steps << ',' << metric_name(metric)
          << ',' << format_number(e.rep_min) << ',' << format_number(e.rep_max) << '\n';
  }
  return r;
}

void parse_sweep_range(const std::string& text, SweepSpec& spec) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size())
      throw std::invalid_argument("range '" + text + "' must be lo:hi:step");
    parts.push_back(v);
  }
  if (parts.size() != 3 || !(parts[2] > 0.0) || parts[1] < parts[0])
    throw std::invalid_argument("range '" + text + "' must be lo:hi:step with lo <= hi, step > 0");
  spec.lo = parts[0];
  spec.hi = parts[1];
  spec.step = parts[2];
}

std::vector<double> sweep_values(const SweepSpec& spec) {
  std::vector<double> v;
  for (std::size_t k = 0;; ++k) {
    const double x = spec.lo + static_cast<double>(k) * spec.step;
    if (x > spec.hi + 1e-9 * spec.step) break;
    v.push_back(x);
  }
  return v;
}

void run_sweep(const std::string& network_json, const SweepSpec& spec, std::ostream& csv) {
  get_number(network_json, spec.pointer);  // fail early on a bad pointer
  const auto values = sweep_values(spec);
  std::vector<std::string> blocks(values.size());
  parallel_for(values.size(), [&](std::size_t k) {
    std::ostringstream out;
    const auto param = format_number(values[k]);
    auto row = [&](const std::string& method, std::size_t site, double delay,
                   const std::string& reason) {
      out << param << ',' << method << ',' << site_field(site) << ',' << format_number(delay)
          << ',' << one_line(reason) << '\n';
    };
    std::optional<Analyzer> a;
    try {
      a.emplace(parse_network(set_number(network_json, spec.pointer, values[k])));
    } catch (const std::exception& e) {
      row("network", 0, NAN, e.what());
      blocks[k] = out.str();
      return;
    }
    auto quantile = [&](const Method& m) {
      try {
        row(m.label(), m.site, static_cast<double>(a->quantile(m, spec.epsilon)), "");
      } catch (const std::exception& e) {
        row(m.label(), m.site, NAN, e.what());
      }
    };
    quantile(Method::pmoo());
    for (auto h : a->admissible_sites()) quantile(Method::martingale(h));
    if (spec.simulation) {
      try {
        const auto r = simulate(a->network(), *spec.simulation);
        row("sim_" + to_string(spec.simulation->policy), 0,
            static_cast<double>(empirical_quantile(r, spec.epsilon)), "");
      } catch (const std::exception& e) {
        row("sim_" + to_string(spec.simulation->policy), 0, NAN, e.what());
      }
    }
    blocks[k] = out.str();
  });
  csv << "param,method,site,delay,reason\n";
  for (const auto& b : blocks) csv << b;
}

std::vector<CounterexampleRow> run_counterexample(const CounterexampleConfig& cfg,
                                                  std::ostream& csv) {
  auto rows = run_counterexample(cfg);
  csv << "x,horizon,empirical,stderr,claimed_bound,sound_bound,sound_empirical,sound_stderr\n";
  for (const auto& r : rows)
    csv << format_number(r.x) << ',' << r.horizon << ',' << format_number(r.empirical) << ','
        << format_number(r.std_error) << ',' << format_number(r.claimed_bound) << ','
        << format_number(r.sound_bound) << ',' << format_number(r.sound_empirical) << ','
        << format_number(r.sound_std_error) << '\n';
  return rows;
}

}  // namespace snc
