#pragma once

#include <variant>

namespace snc {

// Per-slot emission distributions of a Markov-modulated process. All three
// have a finite MGF on the whole real line.

struct Constant {
  double value = 0.0;
};

/// `value` with probability `prob`, 0 otherwise.
struct ScaledBernoulli {
  double value = 0.0;
  double prob = 0.0;
};

struct Poisson {
  double mean = 1.0;
};

using EmissionDist = std::variant<Constant, ScaledBernoulli, Poisson>;

struct SupportBounds {
  double min = 0.0;
  double max = 0.0;  // +inf for unbounded support
};

/// Throws InvalidModel if parameters are out of range.
void validate(const EmissionDist& dist);

/// E[exp(theta * Y)].
double mgf_emission(const EmissionDist& dist, double theta);

/// ln E[exp(theta * Y)], computed without forming the exponential.
double log_mgf_emission(const EmissionDist& dist, double theta);

SupportBounds support_bounds(const EmissionDist& dist);

double mean(const EmissionDist& dist);

}  // namespace snc
