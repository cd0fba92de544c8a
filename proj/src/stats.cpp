#include "augkit/stats.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace augkit::stats {

namespace {

constexpr int kMaxIterations = 500;
constexpr double kEps = 1e-16;
constexpr double kTiny = 1e-300;

// Continued fraction for the incomplete beta (modified Lentz).
double beta_continued_fraction(double a, double b, double x) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}

// Upper tail of Student t: P(T > t) for t >= 0.
double student_t_upper(double t, double dof) {
  const double x = dof / (dof + t * t);
  return 0.5 * incomplete_beta(0.5 * dof, 0.5, x);
}

}  // namespace

double log_gamma(double x) { return std::lgamma(x); }

double incomplete_beta(double a, double b, double x) {
  if (a <= 0.0 || b <= 0.0) throw std::invalid_argument("incomplete_beta: a, b must be positive");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double log_front =
      log_gamma(a + b) - log_gamma(a) - log_gamma(b) + a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double incomplete_gamma_q(double a, double x) {
  if (a <= 0.0) throw std::invalid_argument("incomplete_gamma_q: a must be positive");
  if (x <= 0.0) return 1.0;
  const double log_front = -x + a * std::log(x) - log_gamma(a);
  if (x < a + 1.0) {
    // Series for P(a, x).
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int n = 0; n < 10 * kMaxIterations; ++n) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::fabs(del) < std::fabs(sum) * kEps) break;
    }
    return 1.0 - sum * std::exp(log_front);
  }
  // Continued fraction for Q(a, x).
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 10 * kMaxIterations; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return std::exp(log_front) * h;
}

double student_t_cdf(double t, double dof) {
  if (dof <= 0.0) throw std::invalid_argument("student_t_cdf: dof must be positive");
  const double upper = student_t_upper(std::fabs(t), dof);
  return t >= 0.0 ? 1.0 - upper : upper;
}

double student_t_quantile(double p, double dof) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("student_t_quantile: p must be in (0, 1)");
  if (dof <= 0.0) throw std::invalid_argument("student_t_quantile: dof must be positive");
  if (p == 0.5) return 0.0;
  // Solve P(T > t) = tail for t > 0 by bracketing and bisection; the upper
  // tail is strictly decreasing in t.
  const double tail = p > 0.5 ? 1.0 - p : p;
  double lo = 0.0;
  double hi = 1.0;
  while (student_t_upper(hi, dof) > tail) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) break;
  }
  for (int i = 0; i < 2000 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (student_t_upper(mid, dof) > tail) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double t = 0.5 * (lo + hi);
  return p > 0.5 ? t : -t;
}

double chi_square_sf(double x, double dof) {
  if (dof <= 0.0) throw std::invalid_argument("chi_square_sf: dof must be positive");
  if (x <= 0.0) return 1.0;
  return incomplete_gamma_q(0.5 * dof, 0.5 * x);
}

CiResult confidence_interval(std::span<const double> samples, double level) {
  if (samples.size() < 2) {
    throw std::invalid_argument("confidence interval needs at least 2 samples, got " +
                                std::to_string(samples.size()));
  }
  if (!(level > 0.0 && level < 1.0)) {
    throw std::invalid_argument("confidence level must be in (0, 1)");
  }
  const auto n = static_cast<double>(samples.size());
  // Shifted by the first sample: a constant input gives exactly zero spread.
  const double shift = samples.front();
  double sum = 0.0;
  for (double v : samples) sum += v - shift;
  const double centered_mean = sum / n;
  const double mean = shift + centered_mean;
  double ss = 0.0;
  for (double v : samples) ss += (v - shift - centered_mean) * (v - shift - centered_mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  const double t = student_t_quantile(0.5 * (1.0 + level), n - 1.0);
  return {mean, t * sd / std::sqrt(n), samples.size(), level};
}

UniformityResult uniformity_test(std::span<const std::uint64_t> counts) {
  if (counts.size() < 2) throw std::invalid_argument("uniformity test needs at least 2 cells");
  const std::uint64_t total = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
  if (total == 0) throw std::invalid_argument("uniformity test needs a positive total count");
  const double expected = static_cast<double>(total) / static_cast<double>(counts.size());
  if (expected < 5.0) {
    throw std::invalid_argument("expected count per cell is " + std::to_string(expected) +
                                " (< 5); draw more samples");
  }
  double stat = 0.0;
  for (std::uint64_t c : counts) {
    const double d = static_cast<double>(c) - expected;
    stat += d * d / expected;
  }
  const double dof = static_cast<double>(counts.size() - 1);
  return {stat, chi_square_sf(stat, dof), counts.size(), total, expected};
}

}  // namespace augkit::stats
