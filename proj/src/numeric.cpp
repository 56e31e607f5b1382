#include "bestsubset/numeric.hpp"

#include <algorithm>
#include <numbers>
#include <stdexcept>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace bestsubset {

double compensated_sum(std::span<const double> values) {
  CompensatedSum acc;
  for (double v : values) acc += v;
  return acc.value();
}

void SignedLogSum::Part::add(double x) {
  if (x == -std::numeric_limits<double>::infinity()) return;
  if (x > max) {
    // rescale what we have so far to the new maximum
    const double factor = std::exp(max - x);
    CompensatedSum rescaled;
    rescaled += scaled.value() * factor;
    scaled = rescaled;
    max = x;
  }
  scaled += std::exp(x - max);
}

double SignedLogSum::Part::log_total() const {
  if (max == -std::numeric_limits<double>::infinity()) return max;
  return max + std::log(scaled.value());
}

void SignedLogSum::add_log(double log_magnitude, int sign) {
  if (sign > 0) {
    positive_.add(log_magnitude);
  } else if (sign < 0) {
    negative_.add(log_magnitude);
  }
}

void SignedLogSum::add(double value) {
  if (value > 0) {
    positive_.add(std::log(value));
  } else if (value < 0) {
    negative_.add(std::log(-value));
  }
}

double SignedLogSum::log_value() const {
  const double pos = positive_.log_total();
  const double neg = negative_.log_total();
  constexpr double ninf = -std::numeric_limits<double>::infinity();
  if (neg == ninf) return pos;
  if (pos == ninf || neg > pos) {
    throw std::domain_error("SignedLogSum: total is negative");
  }
  const double ratio = std::exp(neg - pos);
  if (ratio >= 1.0) return ninf;
  return pos + std::log1p(-ratio);
}

double SignedLogSum::value() const {
  const double pos = positive_.log_total();
  const double neg = negative_.log_total();
  return std::exp(pos) - std::exp(neg);
}

double log_sum_exp(std::span<const double> logs) {
  SignedLogSum acc;
  for (double x : logs) acc.add_log(x);
  return acc.log_value();
}

double normal_upper_tail(double z) { return 0.5 * std::erfc(z / std::numbers::sqrt2); }

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double normal_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

namespace {

// Acklam's rational approximation to the lower-tail quantile, relative error
// about 1.15e-9 before refinement.
double acklam_lower_quantile(double p) {
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  constexpr double p_high = 1.0 - p_low;

  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p <= p_high) {
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  const double q = std::sqrt(-2.0 * std::log1p(-p));
  return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
         ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
}

}  // namespace

double normal_quantile(double upper_tail) {
  if (!(upper_tail > 0.0 && upper_tail < 1.0)) {
    throw std::invalid_argument("normal_quantile: tail probability must lie in (0, 1)");
  }
  // Solve P(Z >= z) = upper_tail, i.e. z = -Phi^{-1}(upper_tail).
  double x = acklam_lower_quantile(upper_tail);
  // Halley step against the erfc-based CDF. Working in the lower tail keeps
  // the residual well conditioned for small tail probabilities.
  const double e = normal_cdf(x) - upper_tail;
  const double u = e / normal_pdf(x);
  x = x - u / (1.0 + 0.5 * x * u);
  return -x;
}

double chi_square_upper_tail(double x, double df) {
  if (x <= 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  return boost::math::gamma_q(0.5 * df, 0.5 * x);
}

double f_upper_tail(double x, double df1, double df2) {
  if (x <= 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  // P(F >= x) = I_{df2/(df2 + df1 x)}(df2/2, df1/2)
  const double w = df2 / (df2 + df1 * x);
  return boost::math::ibeta(0.5 * df2, 0.5 * df1, w);
}

double binomial_half_upper_tail(long long successes, long long trials) {
  if (trials < 0) throw std::invalid_argument("binomial tail: negative trial count");
  if (successes <= 0) return 1.0;
  if (successes > trials) return 0.0;
  // P(Bin(N, 1/2) >= k) = I_{1/2}(k, N - k + 1)
  return boost::math::ibeta(static_cast<double>(successes),
                            static_cast<double>(trials - successes + 1), 0.5);
}

}  // namespace bestsubset
