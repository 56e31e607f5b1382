#include "bestsubset/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bestsubset {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require_probability(double x, const char* name) {
  if (!(x > 0.0 && x < 1.0)) {
    throw std::invalid_argument(std::string(name) + " must lie in (0, 1)");
  }
}

void require_n(std::int64_t n, std::int64_t min = 1) {
  if (n < min) {
    throw std::invalid_argument("sample size n must be >= " + std::to_string(min));
  }
}

void require_even_m(int m) {
  if (m < 2 || m % 2 != 0) {
    throw std::invalid_argument("moment order m must be even and >= 2");
  }
}

double safe_exp(double log_value) { return log_value == kNegInf ? 0.0 : std::exp(log_value); }

}  // namespace

std::string to_string(WidthMethod method) {
  switch (method) {
    case WidthMethod::asymptotic: return "asymptotic";
    case WidthMethod::data_independent: return "data_independent";
    case WidthMethod::data_dependent: return "data_dependent";
    case WidthMethod::simplified: return "simplified";
    case WidthMethod::lower_bound: return "lower_bound";
  }
  return "unknown";
}

WidthResult asymptotic_width(double p_hat_max, std::int64_t n, double delta,
                             AsymptoticConstant constant) {
  if (!(p_hat_max >= 0.0 && p_hat_max <= 1.0)) {
    throw std::invalid_argument("p_hat_max must lie in [0, 1]");
  }
  require_n(n);
  require_probability(delta, "delta");

  const double z = constant == AsymptoticConstant::normal_quantile
                       ? normal_quantile(delta / 2.0)
                       : std::sqrt(2.0 * std::log(2.0 / delta));
  const double se = std::sqrt(p_hat_max * (1.0 - p_hat_max) / static_cast<double>(n));

  WidthResult r;
  r.method = WidthMethod::asymptotic;
  r.width = 2.0 * z * se;
  r.vacuous = r.width > 1.0;
  r.diagnostics["z"] = z;
  r.diagnostics["standard_error"] = se;
  return r;
}

double log_moment_sum(const MomentCoefficients& c, std::span<const double> probs) {
  SignedLogSum acc;
  for (double p : probs) {
    const double pq = p * (1.0 - p);
    if (pq <= 0.0) continue;
    const double log_pq = std::log(pq);
    for (int k = 1; k <= c.d(); ++k) {
      const auto i = static_cast<std::size_t>(k - 1);
      if (c.signs[i] == 0) continue;
      acc.add_log(c.log_abs[i] + k * log_pq, c.signs[i]);
    }
  }
  return acc.log_value();
}

double direct_moment_sum(const MomentCoefficients& c, std::span<const double> probs) {
  CompensatedSum acc;
  for (double p : probs) {
    const double pq = p * (1.0 - p);
    double power = 1.0;
    for (int k = 1; k <= c.d(); ++k) {
      power *= pq;
      acc += c.value(k) * power;
    }
  }
  return acc.value();
}

WidthResult data_independent_width(const Distribution& p, std::int64_t n, double delta, int m) {
  require_n(n);
  require_probability(delta, "delta");
  require_even_m(m);

  const MomentCoefficients& c = coefficients(m, n);
  const double log_sum = log_moment_sum(c, p.probs());

  WidthResult r;
  r.method = WidthMethod::data_independent;
  r.m_used = m;
  if (log_sum == kNegInf) {
    r.width = 0.0;
  } else {
    r.width = std::exp(-std::log(static_cast<double>(n)) + (log_sum - std::log(delta)) / m);
  }
  r.vacuous = r.width > 1.0;
  r.diagnostics["moment_sum"] = safe_exp(log_sum);
  r.diagnostics["log_moment_sum"] = log_sum;
  return r;
}

double epsilon_n(int m, std::int64_t n, double delta_2) {
  require_even_m(m);
  require_n(n);
  require_probability(delta_2, "delta_2");

  const MomentCoefficients& c = coefficients(m, n);
  SignedLogSum bracket;
  bracket.add(sup_derivative_term(m, n));
  for (int k = 2; k <= c.d(); ++k) {
    const auto i = static_cast<std::size_t>(k - 1);
    if (c.signs[i] == 0) continue;
    // |c_k| k (k-1) / (n 2^{2k-3}); the magnitude only matters for small n,
    // where some c_k are negative and the signed sum can turn the bracket negative
    const double log_term = c.log_abs[i] + std::log(static_cast<double>(k) * (k - 1)) -
                            std::log(static_cast<double>(n)) - (2.0 * k - 3.0) * std::log(2.0);
    bracket.add_log(log_term);
  }
  const double scale =
      std::sqrt(2.0 / static_cast<double>(n) * std::log(1.0 / delta_2));
  return scale * safe_exp(bracket.log_value());
}

WidthResult data_dependent_width(const Distribution& p_hat, std::int64_t n, double delta_1,
                                 double delta_2, int m) {
  require_n(n, 2);
  require_probability(delta_1, "delta_1");
  require_probability(delta_2, "delta_2");
  require_even_m(m);

  const MomentCoefficients& c = coefficients(m, n);
  const double log_sum = log_moment_sum(c, p_hat.probs());
  const double eps = epsilon_n(m, n, delta_2);

  SignedLogSum total;
  total.add_log(log_sum);
  total.add(eps);
  const double log_total = total.log_value();

  const double nd = static_cast<double>(n);
  const double log_factor = 0.5 * std::log(nd / (nd - 1.0));

  WidthResult r;
  r.method = WidthMethod::data_dependent;
  r.m_used = m;
  r.delta_1 = delta_1;
  r.delta_2 = delta_2;
  r.epsilon_n = eps;
  r.width = log_total == kNegInf
                ? 0.0
                : std::exp(-std::log(nd) + log_factor + (log_total - std::log(delta_1)) / m);
  r.vacuous = r.width > 1.0;
  r.diagnostics["moment_sum"] = safe_exp(log_sum);
  r.diagnostics["epsilon_n"] = eps;
  r.diagnostics["bracketed_sum"] = safe_exp(log_total);
  r.diagnostics["sqrt_n_over_n_minus_1"] = std::exp(log_factor);
  r.diagnostics["sup_derivative_term"] = sup_derivative_term(m, n);
  return r;
}

int choose_m(double delta_1) {
  require_probability(delta_1, "delta_1");
  const double target = 2.0 * std::log(1.0 / delta_1);
  const int m = 2 * static_cast<int>(std::floor(target / 2.0 + 0.5));
  return std::max(2, m);
}

WidthResult simplified_width(const Distribution& p_hat, std::int64_t n, double delta_1, int m) {
  require_n(n);
  require_probability(delta_1, "delta_1");
  require_even_m(m);

  const MomentCoefficients& c = coefficients(m, n);
  const int d = m / 2;
  SignedLogSum norm;
  for (double p : p_hat.probs()) {
    const double pq = p * (1.0 - p);
    if (pq > 0.0) norm.add_log(d * std::log(pq));
  }
  const double log_norm = norm.log_value();
  const double log_cd = c.log_abs[static_cast<std::size_t>(d - 1)];

  WidthResult r;
  r.method = WidthMethod::simplified;
  r.m_used = m;
  r.delta_1 = delta_1;
  const double log_leading = -std::log(static_cast<double>(n)) + (log_cd - std::log(delta_1)) / m;
  r.width = log_norm == kNegInf ? 0.0 : std::exp(log_leading + log_norm / m);
  r.vacuous = r.width > 1.0;
  r.diagnostics["leading_factor"] = std::exp(log_leading);
  r.diagnostics["norm"] = safe_exp(log_norm / m);
  return r;
}

WidthResult lower_bound_width(const Distribution& p, std::int64_t n, double delta) {
  require_n(n);
  require_probability(delta, "delta");

  const double top = p.max();
  const double z = normal_quantile(delta);
  const double nd = static_cast<double>(n);
  const double radicand = 2.0 * (top * (1.0 - top) - top * top);

  WidthResult r;
  r.method = WidthMethod::lower_bound;
  r.diagnostics["z"] = z;
  r.diagnostics["p_top"] = top;
  r.diagnostics["radicand"] = radicand;

  // radicand = 2p(1 - 2p) is non-positive only for p >= 1/2
  if (radicand <= 0.0) {
    r.width = 0.0;
    r.vacuous = true;
    r.diagnostics["branch"] = 0;
    return r;
  }
  const double primary = z * std::sqrt(radicand / nd);
  r.width = primary;
  r.diagnostics["branch"] = 1;
  r.diagnostics["primary"] = primary;
  if (top <= 1.0 / 3.0) {
    // 2p(1 - 2p) >= p(1 - p) here, so the second form only bites through rounding
    const double secondary = z * std::sqrt(top * (1.0 - top) / nd);
    r.diagnostics["secondary"] = secondary;
    if (secondary > primary) {
      r.width = secondary;
      r.diagnostics["branch"] = 2;
    }
  }
  return r;
}

std::pair<double, double> split_delta(double delta, double fraction) {
  require_probability(delta, "delta");
  require_probability(fraction, "delta split fraction");
  const double d1 = fraction * delta;
  return {d1, delta - d1};
}

std::vector<std::pair<int, double>> scan_m_widths(const Distribution& p_hat, std::int64_t n,
                                                  double delta_1, double delta_2, int max_m) {
  std::vector<std::pair<int, double>> out;
  for (int m = 2; m <= max_m; m += 2) {
    out.emplace_back(m, data_dependent_width(p_hat, n, delta_1, delta_2, m).width);
  }
  return out;
}

}  // namespace bestsubset
