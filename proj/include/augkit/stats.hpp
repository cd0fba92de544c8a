#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

namespace augkit::stats {

/// Mean and symmetric confidence halfwidth of a sample, assuming normally
/// distributed values with unknown variance (Student-t interval).
struct CiResult {
  double mean = 0.0;
  double halfwidth = 0.0;
  std::size_t n = 0;
  double level = 0.95;
};

/// Throws std::invalid_argument if fewer than two samples or level outside (0, 1).
CiResult confidence_interval(std::span<const double> samples, double level = 0.95);

struct UniformityResult {
  double statistic = 0.0;
  double p_value = 1.0;
  std::size_t cells = 0;
  std::uint64_t total = 0;
  double expected = 0.0;
};

/// Pearson chi-square goodness of fit against the uniform distribution over
/// the given cells, p-value from the chi-square survival function with
/// cells - 1 degrees of freedom. Throws std::invalid_argument when the total
/// is zero, fewer than two cells are given or the expected count per cell is
/// below 5.
UniformityResult uniformity_test(std::span<const std::uint64_t> counts);

// Special functions backing the above.
double log_gamma(double x);
/// Regularized incomplete beta I_x(a, b).
double incomplete_beta(double a, double b, double x);
/// Regularized upper incomplete gamma Q(a, x).
double incomplete_gamma_q(double a, double x);
double student_t_cdf(double t, double dof);
double student_t_quantile(double p, double dof);
double chi_square_sf(double x, double dof);

}  // namespace augkit::stats
