#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bestsubset/moments.hpp"
#include "bestsubset/numeric.hpp"
#include "bestsubset/types.hpp"

namespace bestsubset {

enum class WidthMethod { asymptotic, data_independent, data_dependent, simplified, lower_bound };

std::string to_string(WidthMethod method);

struct WidthResult {
  double width = 0.0;
  WidthMethod method = WidthMethod::asymptotic;
  std::optional<int> m_used;
  std::optional<double> delta_1;
  std::optional<double> delta_2;
  std::optional<double> epsilon_n;
  /// Set when the width carries no information: it exceeds 1, or (lower
  /// bound) the leading-order radicand is not positive.
  bool vacuous = false;
  std::map<std::string, double> diagnostics;
};

/// Which constant multiplies the standard error in the large-n width.
enum class AsymptoticConstant {
  normal_quantile,  ///< z_{delta/2}
  log_approximation ///< sqrt(2 log(2/delta))
};

/// 2 c sqrt(p(1-p)/n) with c selected by `constant`.
WidthResult asymptotic_width(double p_hat_max, std::int64_t n, double delta,
                             AsymptoticConstant constant = AsymptoticConstant::normal_quantile);

/// log of sum_u sum_k c_{k,m,n} (p_u(1-p_u))^k, evaluated term by term in the
/// log domain. Returns -inf when the sum is zero.
double log_moment_sum(const MomentCoefficients& c, std::span<const double> probs);

/// Same sum computed directly with compensated summation (may overflow).
double direct_moment_sum(const MomentCoefficients& c, std::span<const double> probs);

/// Markov bound on the sup-norm deviation with the true distribution known.
WidthResult data_independent_width(const Distribution& p, std::int64_t n, double delta, int m);

/// McDiarmid correction for replacing the population moment sum by its
/// plug-in estimate:
///   sqrt((2/n) log(1/delta_2)) * (sup_p f'(p) + sum_k |c_k| k(k-1) / (n 2^{2k-3}))
/// The absolute value changes nothing once every c_k is non-negative.
double epsilon_n(int m, std::int64_t n, double delta_2);

/// Data-dependent sup-norm radius R built from the plug-in moment sum plus
/// epsilon_n. Throws std::invalid_argument for n < 2.
WidthResult data_dependent_width(const Distribution& p_hat, std::int64_t n, double delta_1,
                                 double delta_2, int m);

/// Even integer nearest to 2 log(1/delta_1), ties upward, never below 2.
int choose_m(double delta_1);

/// Leading term of the data-dependent radius:
///   (1/n) (c_{d,m,n}/delta_1)^{1/m} (sum_u (p_u(1-p_u))^{m/2})^{1/m}
WidthResult simplified_width(const Distribution& p_hat, std::int64_t n, double delta_1, int m);

/// Leading-order minimal width for near-tied top symbols; O(1/n) terms are
/// not included.
WidthResult lower_bound_width(const Distribution& p, std::int64_t n, double delta);

/// delta_1 = fraction * delta, delta_2 = the rest.
std::pair<double, double> split_delta(double delta, double fraction = 0.9);

/// Data-dependent widths for every even m in [2, max_m]. Reported for
/// inspection only; choosing the minimum voids the coverage guarantee.
std::vector<std::pair<int, double>> scan_m_widths(const Distribution& p_hat, std::int64_t n,
                                                  double delta_1, double delta_2, int max_m);

}  // namespace bestsubset
