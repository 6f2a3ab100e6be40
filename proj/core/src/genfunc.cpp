#include "snc/genfunc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "snc/error.hpp"

namespace snc {
namespace {

constexpr double kUnderflow = 1e-300;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kDirectTermCap = 100'000'000;

double floor_exp(double log_value) {
  const double v = std::exp(log_value);
  return v < kUnderflow ? 0.0 : v;
}

}  // namespace

RationalGf::RationalGf(double log_prefactor, std::vector<double> pole_rates)
    : log_prefactor_(log_prefactor), poles_(std::move(pole_rates)) {
  if (!std::isfinite(log_prefactor_))
    throw InvalidModel("generating function prefactor must be finite");
  for (std::size_t j = 0; j < poles_.size(); ++j) {
    if (!(poles_[j] > 0.0) || !std::isfinite(poles_[j]))
      throw InvalidModel("pole rate " + std::to_string(j) + " must be finite and > 0");
  }
}

double RationalGf::max_pole() const {
  return poles_.empty() ? 0.0 : *std::max_element(poles_.begin(), poles_.end());
}

double RationalGf::radius() const {
  return poles_.empty() ? kInf : 1.0 / max_pole();
}

std::vector<double> RationalGf::scaled_coeffs(std::size_t k) const {
  std::vector<double> g(k + 1, 0.0);
  g[0] = 1.0;
  const double amax = max_pole();
  for (double a : poles_) {
    const double b = a / amax;
    for (std::size_t m = 1; m <= k; ++m) g[m] += b * g[m - 1];
  }
  return g;
}

double RationalGf::log_coeff(std::size_t k) const {
  if (poles_.empty()) return k == 0 ? log_prefactor_ : -kInf;
  const auto g = scaled_coeffs(k);
  return log_prefactor_ + static_cast<double>(k) * std::log(max_pole()) + std::log(g[k]);
}

double RationalGf::coeff(std::size_t k) const { return floor_exp(log_coeff(k)); }

void RationalGf::check_radius(double z) const {
  for (std::size_t j = 0; j < poles_.size(); ++j) {
    if (poles_[j] * z >= 1.0)
      throw DivergenceError("generating function evaluated at or beyond its radius "
                            "(pole " + std::to_string(j) + ", a*z = " +
                                std::to_string(poles_[j] * z) + ")",
                            j);
  }
}

double RationalGf::log_eval(double z) const {
  check_radius(z);
  double s = log_prefactor_;
  for (double a : poles_) s -= std::log1p(-a * z);
  return s;
}

double RationalGf::eval(double z) const { return floor_exp(log_eval(z)); }

double RationalGf::log_tail_sum(double r, std::size_t T) const {
  check_radius(r);
  if (poles_.empty()) return T == 0 ? log_prefactor_ : -kInf;

  // Scaled by a_max^T: tau_j = (tau_{j-1} + b_j g^{(j)}_{T-1}) / (1 - r' b_j),
  // tau_0 = [T == 0], r' = r a_max.
  const double amax = max_pole();
  const double rs = r * amax;
  std::vector<double> g(T, 0.0);
  if (T > 0) g[0] = 1.0;
  double tau = T == 0 ? 1.0 : 0.0;
  for (double a : poles_) {
    const double b = a / amax;
    for (std::size_t m = 1; m < T; ++m) g[m] += b * g[m - 1];
    const double prev = T > 0 ? g[T - 1] : 0.0;
    tau = (tau + b * prev) / (1.0 - rs * b);
  }
  return log_prefactor_ + static_cast<double>(T) * std::log(amax) + std::log(tau);
}

double RationalGf::tail_sum(double r, std::size_t T) const {
  return floor_exp(log_tail_sum(r, T));
}

double RationalGf::tail_sum_direct(double r, std::size_t T, double rel_tol) const {
  check_radius(r);
  if (poles_.empty()) return T == 0 ? std::exp(log_prefactor_) : 0.0;

  const double amax = max_pole();
  const double n = static_cast<double>(poles_.size());
  const double log_base = log_prefactor_ + static_cast<double>(T) * std::log(amax);
  const double rs = r * amax;

  std::size_t len = std::max<std::size_t>(2 * T + 64, 256);
  while (true) {
    const auto g = scaled_coeffs(T + len);
    double sum = 0.0;
    double ru = 1.0;
    for (std::size_t u = 0; u < len; ++u, ru *= rs) {
      const double term = ru * g[T + u];
      sum += term;
      const double k = static_cast<double>(T + u);
      const double q = rs * (1.0 + (n - 1.0) / (k + 1.0));
      if (q < 1.0 && term * q / (1.0 - q) <= rel_tol * sum)
        return floor_exp(log_base + std::log(sum));
    }
    if (len >= kDirectTermCap)
      throw ConvergenceError("direct tail summation exceeded the term cap", rel_tol);
    len *= 2;
  }
}

RationalGf gf_product(const std::vector<RationalGf>& factors) {
  double log_c = 0.0;
  std::vector<double> poles;
  for (const auto& f : factors) {
    log_c += f.log_prefactor();
    poles.insert(poles.end(), f.pole_rates().begin(), f.pole_rates().end());
  }
  return RationalGf(log_c, std::move(poles));
}

}  // namespace snc
