#pragma once

#include <cmath>
#include <limits>
#include <span>

namespace bestsubset {

/// Neumaier-compensated running sum.
///
/// Unlike plain Kahan summation the compensation survives terms that are
/// larger in magnitude than the running sum.
class CompensatedSum {
 public:
  CompensatedSum& operator+=(double value) {
    const double t = sum_ + value;
    if (std::fabs(sum_) >= std::fabs(value)) {
      compensation_ += (sum_ - t) + value;
    } else {
      compensation_ += (value - t) + sum_;
    }
    sum_ = t;
    return *this;
  }

  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

double compensated_sum(std::span<const double> values);

/// Accumulates signed terms given as (sign, log|term|) and reports the log of
/// the total. Positive and negative parts are kept as separate log-sum-exp
/// accumulators so no intermediate exponentiation can overflow.
class SignedLogSum {
 public:
  void add_log(double log_magnitude, int sign = 1);
  void add(double value);

  /// log of the total; -inf when the total is zero.
  /// Throws std::domain_error when the total is negative.
  double log_value() const;
  /// Total as a plain double (may overflow to inf).
  double value() const;

 private:
  struct Part {
    double max = -std::numeric_limits<double>::infinity();
    CompensatedSum scaled;  // sum of exp(x - max)

    void add(double x);
    double log_total() const;
  };
  Part positive_;
  Part negative_;
};

double log_sum_exp(std::span<const double> logs);

/// P(Z >= z) for standard normal Z.
double normal_upper_tail(double z);

/// Standard normal density.
double normal_pdf(double z);

/// Standard normal CDF.
double normal_cdf(double z);

/// Upper quantile: returns z with P(Z >= z) = upper_tail.
/// Throws std::invalid_argument unless 0 < upper_tail < 1.
double normal_quantile(double upper_tail);

/// P(X >= x) for X ~ chi-square with df degrees of freedom.
double chi_square_upper_tail(double x, double df);

/// P(F >= x) for F ~ F(df1, df2).
double f_upper_tail(double x, double df1, double df2);

/// P(Bin(trials, 1/2) >= successes), exact.
double binomial_half_upper_tail(long long successes, long long trials);

}  // namespace bestsubset
