#include "snc/mmp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "snc/error.hpp"
#include "snc/service.hpp"

namespace snc {
namespace {

constexpr double kRowSumTol = 1e-12;
constexpr double kStationaryTol = 1e-10;
constexpr int kPowerIterationCap = 100000;
// Iterations on psi itself before falling back to the shifted matrix
// psi + c I, which is primitive whenever psi is irreducible.
constexpr int kUnshiftedIterations = 2000;

std::vector<bool> reachable(const Matrix& p, std::size_t from, bool transpose) {
  const auto n = static_cast<std::size_t>(p.rows());
  std::vector<bool> seen(n, false);
  std::vector<std::size_t> stack{from};
  seen[from] = true;
  while (!stack.empty()) {
    const auto i = stack.back();
    stack.pop_back();
    for (std::size_t j = 0; j < n; ++j) {
      const double w = transpose ? p(j, i) : p(i, j);
      if (w > 0.0 && !seen[j]) {
        seen[j] = true;
        stack.push_back(j);
      }
    }
  }
  return seen;
}

void check_stochastic(const Matrix& p) {
  if (p.rows() == 0 || p.rows() != p.cols())
    throw InvalidModel("transition matrix must be square and non-empty");
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    double sum = 0.0;
    for (Eigen::Index j = 0; j < p.cols(); ++j) {
      if (!(p(i, j) >= 0.0) || !std::isfinite(p(i, j)))
        throw InvalidModel("transition matrix entry (" + std::to_string(i) + "," +
                           std::to_string(j) + ") must be finite and >= 0");
      sum += p(i, j);
    }
    if (std::abs(sum - 1.0) > kRowSumTol)
      throw InvalidModel("transition matrix row " + std::to_string(i) +
                         " sums to " + std::to_string(sum) + ", expected 1");
  }
}

void check_irreducible(const Matrix& p) {
  const auto fwd = reachable(p, 0, false);
  const auto bwd = reachable(p, 0, true);
  std::vector<std::size_t> bad;
  for (std::size_t i = 0; i < fwd.size(); ++i)
    if (!fwd[i] || !bwd[i]) bad.push_back(i);
  if (bad.empty()) return;
  std::ostringstream os;
  os << "transition matrix is reducible; states not communicating with state 0: {";
  for (std::size_t k = 0; k < bad.size(); ++k) os << (k ? "," : "") << bad[k];
  os << "}";
  throw ReducibleChain(os.str(), std::move(bad));
}

}  // namespace

Vector stationary_distribution(const Matrix& transition) {
  check_stochastic(transition);
  check_irreducible(transition);
  const auto n = transition.rows();
  if (n == 1) return Vector::Ones(1);

  // (P^T - I) pi = 0 with the last equation replaced by sum(pi) = 1.
  Matrix a = transition.transpose() - Matrix::Identity(n, n);
  a.row(n - 1).setOnes();
  Vector b = Vector::Zero(n);
  b(n - 1) = 1.0;
  Vector pi = a.fullPivLu().solve(b);

  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(pi(i) > 0.0))
      throw InvalidModel("stationary distribution has a non-positive entry at state " +
                         std::to_string(i));
  }
  pi /= pi.sum();
  const double err = (pi.transpose() * transition - pi.transpose()).cwiseAbs().maxCoeff();
  if (err > kStationaryTol)
    throw InvalidModel("stationary distribution residual " + std::to_string(err) +
                       " exceeds tolerance");
  return pi;
}

Matrix reversed_transition(const Matrix& transition, const Vector& pi) {
  const auto n = transition.rows();
  Matrix r(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) r(i, j) = pi(j) / pi(i) * transition(j, i);
  return r;
}

Mmp::Mmp(Matrix transition, std::vector<EmissionDist> emissions)
    : transition_(std::move(transition)), emissions_(std::move(emissions)) {
  if (static_cast<Eigen::Index>(emissions_.size()) != transition_.rows())
    throw InvalidModel("number of emissions (" + std::to_string(emissions_.size()) +
                       ") does not match the number of states (" +
                       std::to_string(transition_.rows()) + ")");
  for (const auto& e : emissions_) validate(e);
  stationary_ = stationary_distribution(transition_);
  reversed_ = reversed_transition(transition_, stationary_);
}

Mmp Mmp::single_state(EmissionDist emission) {
  return Mmp(Matrix::Ones(1, 1), {emission});
}

Mmp Mmp::on_off(double p_off_on, double p_on_off, EmissionDist on_emission) {
  Matrix p(2, 2);
  p << 1.0 - p_off_on, p_off_on, p_on_off, 1.0 - p_on_off;
  return Mmp(std::move(p), {Constant{0.0}, on_emission});
}

double Mmp::mean_rate() const {
  double m = 0.0;
  for (std::size_t x = 0; x < emissions_.size(); ++x)
    m += stationary_(static_cast<Eigen::Index>(x)) * mean(emissions_[x]);
  return m;
}

Matrix exp_transition_matrix(const Mmp& mmp, double theta) {
  Matrix psi = mmp.reversed();
  for (std::size_t j = 0; j < mmp.n_states(); ++j)
    psi.col(static_cast<Eigen::Index>(j)) *= mgf_emission(mmp.emissions()[j], theta);
  return psi;
}

PerronPair perron(const Matrix& psi, const Vector& pi) {
  const auto n = psi.rows();
  PerronPair out;
  if (n == 1) {
    out.lambda = psi(0, 0);
    out.nu = Vector::Constant(1, 1.0 / pi(0));
    return out;
  }

  Vector nu = Vector::Ones(n) / pi.sum();
  double lambda = pi.dot(psi * nu);
  double shift = 0.0;
  double residual = std::numeric_limits<double>::infinity();
  for (int it = 1; it <= kPowerIterationCap; ++it) {
    if (it == kUnshiftedIterations) shift = lambda;
    Vector w = psi * nu + shift * nu;
    const double next = pi.dot(w);
    nu = w / next;
    const double lam = next - shift;
    residual = (psi * nu - lam * nu).cwiseAbs().maxCoeff();
    const bool settled = std::abs(lam - lambda) <= 1e-13 * std::abs(lam);
    lambda = lam;
    if (settled && residual <= 1e-11 * lambda) {
      out.lambda = lambda;
      out.nu = std::move(nu);
      out.residual = residual;
      out.iterations = it;
      return out;
    }
  }
  throw ConvergenceError("power iteration did not converge; last residual " +
                             std::to_string(residual),
                         residual);
}

namespace detail {

// Builds psi with column weights exp(log_phi_j - max) so the entries stay in
// range; returns the characterization with the scale folded back into lambda.
SpectralChar characterize(const Mmp& mmp, double theta_eval, double theta_pos,
                          bool service) {
  const auto n = static_cast<Eigen::Index>(mmp.n_states());
  std::vector<double> log_phi(mmp.n_states());
  for (std::size_t j = 0; j < mmp.n_states(); ++j)
    log_phi[j] = log_mgf_emission(mmp.emissions()[j], theta_eval);
  const double scale = *std::max_element(log_phi.begin(), log_phi.end());
  if (std::isinf(scale)) {
    // The MGF itself overflows (Poisson at theta beyond ~700).
    SpectralChar c;
    c.theta = theta_pos;
    c.lambda = c.log_lambda = std::numeric_limits<double>::infinity();
    c.nu = Vector::Ones(n);
    c.rho = service ? -c.log_lambda : c.log_lambda;
    return c;
  }

  Matrix psi = mmp.reversed();
  for (Eigen::Index j = 0; j < n; ++j)
    psi.col(j) *= std::exp(log_phi[static_cast<std::size_t>(j)] - scale);

  auto pair = perron(psi, mmp.stationary());
  SpectralChar c;
  c.theta = theta_pos;
  c.log_lambda = std::log(pair.lambda) + scale;
  c.lambda = std::exp(c.log_lambda);
  c.nu = std::move(pair.nu);
  c.sigma = -std::log(c.nu.minCoeff()) / theta_pos;
  c.rho = service ? -c.log_lambda / theta_pos : c.log_lambda / theta_pos;
  // min(nu) <= <nu, pi> = 1; clamp rounding below zero.
  c.sigma = std::max(c.sigma, 0.0);
  return c;
}

}  // namespace detail

SpectralChar characterize_arrival(const Mmp& mmp, double theta) {
  if (!(theta > 0.0)) throw DomainError("theta must be > 0");
  return detail::characterize(mmp, theta, theta, false);
}

void validate(const ServiceModel& model) {
  if (const auto* c = std::get_if<ConstantRate>(&model)) {
    if (!(c->rate > 0.0) || !std::isfinite(c->rate))
      throw InvalidModel("constant_rate rate must be finite and > 0");
  }
}

bool is_constant_rate(const ServiceModel& model) {
  return std::holds_alternative<ConstantRate>(model);
}

double mean_rate(const ServiceModel& model) {
  if (const auto* c = std::get_if<ConstantRate>(&model)) return c->rate;
  return std::get<MarkovService>(model).mmp.mean_rate();
}

std::vector<SupportBounds> state_supports(const ServiceModel& model) {
  if (const auto* c = std::get_if<ConstantRate>(&model)) return {{c->rate, c->rate}};
  std::vector<SupportBounds> out;
  for (const auto& e : std::get<MarkovService>(model).mmp.emissions())
    out.push_back(support_bounds(e));
  return out;
}

SpectralChar characterize_service(const ServiceModel& model, double theta) {
  if (!(theta > 0.0)) throw DomainError("theta must be > 0");
  if (const auto* c = std::get_if<ConstantRate>(&model)) {
    SpectralChar out;
    out.theta = theta;
    out.log_lambda = -theta * c->rate;
    out.lambda = std::exp(out.log_lambda);
    out.nu = Vector::Ones(1);
    out.sigma = 0.0;
    out.rho = c->rate;
    return out;
  }
  return detail::characterize(std::get<MarkovService>(model).mmp, -theta, theta, true);
}

}  // namespace snc
