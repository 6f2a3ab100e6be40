#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "snc/emission.hpp"

namespace snc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Markov-modulated process: a finite ergodic chain with one emission
/// distribution per state. Immutable after construction; the stationary
/// distribution and the time-reversed transition matrix are computed once.
class Mmp {
 public:
  /// Throws InvalidModel (or ReducibleChain) if `transition` is not a
  /// row-stochastic irreducible matrix or an emission is invalid.
  Mmp(Matrix transition, std::vector<EmissionDist> emissions);

  static Mmp single_state(EmissionDist emission);

  /// Two-state On-Off chain. State 0 is Off (no emission), state 1 is On.
  static Mmp on_off(double p_off_on, double p_on_off, EmissionDist on_emission);

  std::size_t n_states() const { return emissions_.size(); }
  const Matrix& transition() const { return transition_; }
  const Matrix& reversed() const { return reversed_; }
  const Vector& stationary() const { return stationary_; }
  const std::vector<EmissionDist>& emissions() const { return emissions_; }

  /// Stationary mean emission per slot.
  double mean_rate() const;

 private:
  Matrix transition_;
  std::vector<EmissionDist> emissions_;
  Vector stationary_;
  Matrix reversed_;
};

/// Unique pi with pi P = pi, sum(pi) = 1. Throws ReducibleChain naming the
/// states not mutually reachable with state 0.
Vector stationary_distribution(const Matrix& transition);

/// P^r_{ij} = pi_j / pi_i * P_{ji}.
Matrix reversed_transition(const Matrix& transition, const Vector& pi);

/// psi(theta)_{ij} = P^r_{ij} * phi_j(theta).
Matrix exp_transition_matrix(const Mmp& mmp, double theta);

struct PerronPair {
  double lambda = 0.0;
  Vector nu;  // right eigenvector, <nu, pi> = 1
  double residual = 0.0;
  int iterations = 0;
};

/// Dominant eigen-pair of a primitive nonnegative matrix by power iteration.
/// Throws ConvergenceError after 1e5 iterations.
PerronPair perron(const Matrix& psi, const Vector& pi);

/// (sigma, rho) characterization of one process at one theta. `log_lambda`
/// is carried alongside `lambda` since the latter overflows for large theta.
struct SpectralChar {
  double theta = 0.0;
  double lambda = 0.0;
  double log_lambda = 0.0;
  Vector nu;
  double sigma = 0.0;
  double rho = 0.0;
};

/// rho = ln(lambda) / theta, sigma = -ln(min nu) / theta. rho is +inf when
/// an emission MGF overflows.
SpectralChar characterize_arrival(const Mmp& mmp, double theta);

}  // namespace snc
