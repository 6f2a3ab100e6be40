#pragma once

#include <variant>

#include "snc/mmp.hpp"

namespace snc {

struct ConstantRate {
  double rate = 1.0;
};

struct MarkovService {
  Mmp mmp;
};

using ServiceModel = std::variant<ConstantRate, MarkovService>;

/// Throws InvalidModel for a non-positive rate.
void validate(const ServiceModel& model);

bool is_constant_rate(const ServiceModel& model);

double mean_rate(const ServiceModel& model);

/// Per-state (min, max) emission support; one entry for a constant-rate server.
std::vector<SupportBounds> state_supports(const ServiceModel& model);

/// ConstantRate C gives (sigma, rho) = (0, C) and nu = (1). A Markov service
/// is characterized through psi(-theta): rho = -ln lambda(-theta) / theta.
SpectralChar characterize_service(const ServiceModel& model, double theta);

}  // namespace snc
