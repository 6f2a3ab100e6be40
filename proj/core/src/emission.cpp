#include "snc/emission.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "snc/error.hpp"

namespace snc {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// ln(1 - p + p e^x), stable for large |x|.
double log_bernoulli_mgf(double p, double x) {
  if (p <= 0.0) return 0.0;
  if (p >= 1.0) return x;
  if (x > 0.0) {
    // p e^x (1 + (1-p)/p e^{-x})
    return std::log(p) + x + std::log1p((1.0 - p) / p * std::exp(-x));
  }
  return std::log1p(p * std::expm1(x));
}

}  // namespace

void validate(const EmissionDist& dist) {
  std::visit(Overloaded{
                 [](const Constant& c) {
                   if (!(c.value >= 0.0) || !std::isfinite(c.value))
                     throw InvalidModel("constant emission value must be finite and >= 0");
                 },
                 [](const ScaledBernoulli& b) {
                   if (!(b.value >= 0.0) || !std::isfinite(b.value))
                     throw InvalidModel("bernoulli_scaled value must be finite and >= 0");
                   if (!(b.prob >= 0.0 && b.prob <= 1.0))
                     throw InvalidModel("bernoulli_scaled prob must lie in [0, 1], got " +
                                        std::to_string(b.prob));
                 },
                 [](const Poisson& p) {
                   if (!(p.mean > 0.0) || !std::isfinite(p.mean))
                     throw InvalidModel("poisson mean must be finite and > 0");
                 },
             },
             dist);
}

double log_mgf_emission(const EmissionDist& dist, double theta) {
  return std::visit(Overloaded{
                        [&](const Constant& c) { return theta * c.value; },
                        [&](const ScaledBernoulli& b) {
                          return log_bernoulli_mgf(b.prob, theta * b.value);
                        },
                        [&](const Poisson& p) { return p.mean * std::expm1(theta); },
                    },
                    dist);
}

double mgf_emission(const EmissionDist& dist, double theta) {
  return std::exp(log_mgf_emission(dist, theta));
}

SupportBounds support_bounds(const EmissionDist& dist) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  return std::visit(Overloaded{
                        [](const Constant& c) { return SupportBounds{c.value, c.value}; },
                        [](const ScaledBernoulli& b) {
                          if (b.prob <= 0.0) return SupportBounds{0.0, 0.0};
                          return SupportBounds{b.prob < 1.0 ? 0.0 : b.value, b.value};
                        },
                        [](const Poisson&) { return SupportBounds{0.0, kInf}; },
                    },
                    dist);
}

double mean(const EmissionDist& dist) {
  return std::visit(Overloaded{
                        [](const Constant& c) { return c.value; },
                        [](const ScaledBernoulli& b) { return b.prob * b.value; },
                        [](const Poisson& p) { return p.mean; },
                    },
                    dist);
}

}  // namespace snc
