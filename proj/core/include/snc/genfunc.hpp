#pragma once

#include <cstddef>
#include <vector>

namespace snc {

/// F(z) = c * prod_j 1 / (1 - a_j z), with c kept as ln c.
class RationalGf {
 public:
  RationalGf() = default;
  /// Throws InvalidModel unless every pole rate is finite and > 0.
  RationalGf(double log_prefactor, std::vector<double> pole_rates);

  double log_prefactor() const { return log_prefactor_; }
  const std::vector<double>& pole_rates() const { return poles_; }
  double max_pole() const;

  /// 1 / max_j a_j; +inf without poles.
  double radius() const;

  /// [z^k] F. Values below 1e-300 are reported as 0.
  double coeff(std::size_t k) const;
  double log_coeff(std::size_t k) const;

  /// F(z). Throws DivergenceError naming the first pole with a_j z >= 1.
  double eval(double z) const;
  double log_eval(double z) const;

  /// sum_{u>=0} r^u [z^{T+u}] F, computed exactly through a positive-term
  /// recurrence over the poles. Throws DivergenceError if r a_max >= 1.
  double tail_sum(double r, std::size_t T) const;
  double log_tail_sum(double r, std::size_t T) const;

  /// Same sum by truncated direct summation; stops once the geometric
  /// majorant of the remainder drops below rel_tol of the partial sum.
  double tail_sum_direct(double r, std::size_t T, double rel_tol = 1e-10) const;


 private:
  // Coefficients of prod 1/(1 - b_j z) with b_j = a_j / a_max, indices 0..k.
  std::vector<double> scaled_coeffs(std::size_t k) const;
  void check_radius(double z) const;

  double log_prefactor_ = 0.0;
  std::vector<double> poles_;
};

/// Prefactors multiply, pole lists concatenate. The empty product is 1.
RationalGf gf_product(const std::vector<RationalGf>& factors);

}  // namespace snc
