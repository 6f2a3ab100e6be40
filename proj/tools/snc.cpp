#include <chrono>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "snc/corpus.hpp"
#include "snc/error.hpp"
#include "snc/experiments.hpp"
#include "snc/network_json.hpp"

namespace {

// Exit codes: 0 success, 1 analysis or model error, 2 usage error.
constexpr int kFailure = 1;
constexpr int kUsage = 2;

snc::TandemNetwork resolve_network(const std::string& arg) {
  if (snc::corpus::is_name(arg)) return snc::corpus::by_name(arg);
  return snc::load_network(arg);
}

std::string resolve_document(const std::string& arg) {
  if (snc::corpus::is_name(arg)) return snc::network_to_json(snc::corpus::by_name(arg));
  std::ifstream in(arg);
  if (!in) throw snc::ParseError(snc::ParseError::Kind::Syntax, "", "cannot open " + arg);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// "A..B" with A <= B.
void parse_value_range(const std::string& text, std::size_t& lo, std::size_t& hi) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) throw std::invalid_argument("range '" + text + "' must be A..B");
  try {
    std::size_t used = 0;
    const auto a = text.substr(0, dots);
    const auto b = text.substr(dots + 2);
    lo = std::stoul(a, &used);
    if (used != a.size()) throw std::invalid_argument(a);
    hi = std::stoul(b, &used);
    if (used != b.size()) throw std::invalid_argument(b);
  } catch (const std::logic_error&) {
    throw std::invalid_argument("range '" + text + "' must be A..B with integers");
  }
  if (lo > hi) throw std::invalid_argument("range '" + text + "' has A > B");
}

std::vector<std::size_t> parse_horizons(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    const auto v = std::stoul(item, &used);
    if (used != item.size() || v == 0)
      throw std::invalid_argument("horizon '" + item + "' must be a positive integer");
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("no horizons given");
  return out;
}

// Writes to a file or to stdout for "-", with an optional timestamp line.
class Output {
 public:
  Output(const std::string& path, bool deterministic) {
    if (path != "-") {
      file_.open(path);
      if (!file_) throw std::runtime_error("cannot open " + path + " for writing");
    }
    if (!deterministic) {
      const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
      char buf[32];
      std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
      stream() << "# generated " << buf << '\n';
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }
  void close() {
    if (file_.is_open()) {
      file_.close();
      if (!file_) throw std::runtime_error("write failed");
    } else {
      std::cout.flush();
    }
  }

 private:
  std::ofstream file_;
};

struct SimOptions {
  std::uint64_t steps = 10'000'000;
  std::uint64_t seed = 1;
  std::string policy = "cross-priority";
  std::size_t replications = 1;
  std::uint64_t warmup = 0;

  snc::SimConfig config() const {
    snc::SimConfig c;
    c.steps = steps;
    c.seed = seed;
    c.policy = snc::parse_policy(policy);
    c.replications = replications;
    c.warmup = warmup;
    return c;
  }
};

void add_sim_options(CLI::App* cmd, SimOptions& o) {
  cmd->add_option("--steps", o.steps, "Time slots per replication")->capture_default_str();
  cmd->add_option("--seed", o.seed, "Base seed")->capture_default_str();
  cmd->add_option("--policy", o.policy, "cross-priority or fifo")->capture_default_str();
  cmd->add_option("--replications", o.replications, "Independent replications")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--warmup", o.warmup, "Slots discarded at the start")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic network calculus bounds and simulation for tandem networks"};
  app.require_subcommand(1);
  bool deterministic = true;
  app.add_flag("--deterministic,!--no-deterministic", deterministic,
               "Omit the timestamp header line (default on)");

  std::string network;
  std::string out_path = "-";
  const auto network_help = "Network JSON file or corpus name (" + [] {
    std::string s;
    for (const auto& n : snc::corpus::names()) s += (s.empty() ? "" : ", ") + n;
    return s;
  }() + ")";

  auto* validate = app.add_subcommand("validate", "Check a network and report admissible sites");
  validate->add_option("network", network, network_help)->required();

  std::string method = "pmoo";
  std::string site = "auto";
  std::string metric = "delay";
  std::string range = "0..100";
  std::optional<double> epsilon;
  auto* analyze = app.add_subcommand("analyze", "Optimized bound curves");
  analyze->add_option("network", network, network_help)->required();
  analyze->add_option("--method", method, "pmoo or martingale")
      ->check(CLI::IsMember({"pmoo", "martingale"}))
      ->capture_default_str();
  analyze->add_option("--at", site, "Martingale server h, or auto")->capture_default_str();
  analyze->add_option("--metric", metric, "delay or backlog")
      ->check(CLI::IsMember({"delay", "backlog"}))
      ->capture_default_str();
  analyze->add_option("--range", range, "Values A..B")->capture_default_str();
  analyze->add_option("--epsilon", epsilon, "Also print the delay quantile at epsilon");
  analyze->add_option("-o,--output", out_path, "CSV path, - for stdout")->capture_default_str();

  SimOptions sim;
  std::size_t max_value = 200;
  auto* simulate = app.add_subcommand("simulate", "Empirical delay and backlog tails of flow 1");
  simulate->add_option("network", network, network_help)->required();
  add_sim_options(simulate, sim);
  simulate->add_option("--max-value", max_value, "Largest tabulated value")->capture_default_str();
  simulate->add_option("-o,--output", out_path, "CSV path, - for stdout")->capture_default_str();

  std::string param;
  std::string sweep_range;
  double sweep_epsilon = 1e-4;
  bool with_sim = false;
  SimOptions sweep_sim;
  auto* sweep = app.add_subcommand("sweep", "Delay quantile as a network parameter varies");
  sweep->add_option("network", network, network_help)->required();
  sweep->add_option("--param", param, "JSON pointer to a number, e.g. /servers/1/service/rate")
      ->required();
  sweep->add_option("--range", sweep_range, "lo:hi:step")->required();
  sweep->add_option("--epsilon", sweep_epsilon, "Violation probability")->capture_default_str();
  sweep->add_flag("--with-sim", with_sim, "Add a simulated quantile per point");
  add_sim_options(sweep, sweep_sim);
  sweep->add_option("-o,--output", out_path, "CSV path, - for stdout")->capture_default_str();

  snc::CounterexampleConfig cx;
  std::string horizons = "50,100,200";
  auto* counter = app.add_subcommand("counterexample",
                                     "Running-supremum bound versus simulation for Poisson service");
  counter->add_option("--mean", cx.service_mean, "Poisson service mean")->capture_default_str();
  counter->add_option("--theta", cx.theta_star, "theta*")->capture_default_str();
  counter->add_option("--horizons", horizons, "Comma-separated horizons")->capture_default_str();
  counter->add_option("--trials", cx.trials, "Trials per horizon")->capture_default_str();
  counter->add_option("--seed", cx.seed, "Base seed")->capture_default_str();
  counter->add_option("-o,--output", out_path, "CSV path, - for stdout")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (validate->parsed()) {
      const auto sites = snc::run_validate(resolve_network(network), std::cout);
      (void)sites;
      return 0;
    }
    if (analyze->parsed()) {
      snc::AnalyzeSpec spec;
      spec.method = method == "pmoo" ? snc::Method::Kind::Pmoo : snc::Method::Kind::Martingale;
      if (site != "auto") {
        std::size_t used = 0;
        const auto h = std::stoul(site, &used);
        if (used != site.size()) throw std::invalid_argument("--at must be a server or auto");
        spec.site = h;
      }
      spec.metric = metric == "delay" ? snc::Metric::Delay : snc::Metric::Backlog;
      parse_value_range(range, spec.lo, spec.hi);
      spec.epsilon = epsilon;
      const auto net = resolve_network(network);
      Output out(out_path, deterministic);
      const auto rows = snc::run_analyze(net, spec, out.stream());
      out.close();
      for (const auto& r : rows)
        std::cerr << r.method << (r.site ? " h=" + std::to_string(r.site) : std::string())
                  << " delay at epsilon: " << r.delay << '\n';
      return 0;
    }
    if (simulate->parsed()) {
      const auto net = resolve_network(network);
      Output out(out_path, deterministic);
      snc::run_simulate(net, sim.config(), max_value, out.stream());
      out.close();
      return 0;
    }
    if (sweep->parsed()) {
      snc::SweepSpec spec;
      spec.pointer = param;
      snc::parse_sweep_range(sweep_range, spec);
      spec.epsilon = sweep_epsilon;
      if (with_sim) spec.simulation = sweep_sim.config();
      const auto doc = resolve_document(network);
      Output out(out_path, deterministic);
      snc::run_sweep(doc, spec, out.stream());
      out.close();
      return 0;
    }
    if (counter->parsed()) {
      cx.horizons = parse_horizons(horizons);
      Output out(out_path, deterministic);
      snc::run_counterexample(cx, out.stream());
      out.close();
      return 0;
    }
  } catch (const snc::AssumptionViolation& e) {
    std::cerr << "error: " << e.what() << '\n';
    for (const auto& item : e.items()) std::cerr << "  " << item << '\n';
    return kFailure;
  } catch (const snc::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kUsage;
}
