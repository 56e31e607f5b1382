#include "bestsubset/moments.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace bestsubset {

IntPolynomial::IntPolynomial(std::vector<BigInt> terms) : terms_(std::move(terms)) { trim(); }

void IntPolynomial::trim() {
  while (!terms_.empty() && terms_.back() == 0) terms_.pop_back();
}

BigInt IntPolynomial::evaluate(std::int64_t n) const {
  BigInt acc = 0;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    acc = acc * n + *it;
  }
  return acc;
}

IntPolynomial& IntPolynomial::operator+=(const IntPolynomial& other) {
  if (other.terms_.size() > terms_.size()) terms_.resize(other.terms_.size());
  for (std::size_t j = 0; j < other.terms_.size(); ++j) terms_[j] += other.terms_[j];
  trim();
  return *this;
}

IntPolynomial& IntPolynomial::operator*=(const BigInt& scalar) {
  for (auto& t : terms_) t *= scalar;
  trim();
  return *this;
}

IntPolynomial IntPolynomial::times_n() const {
  if (terms_.empty()) return {};
  std::vector<BigInt> shifted;
  shifted.reserve(terms_.size() + 1);
  shifted.emplace_back(0);
  shifted.insert(shifted.end(), terms_.begin(), terms_.end());
  return IntPolynomial(std::move(shifted));
}

std::string IntPolynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (int j = degree(); j >= 0; --j) {
    const BigInt& c = terms_[static_cast<std::size_t>(j)];
    if (c == 0) continue;
    const BigInt magnitude = c < 0 ? BigInt(-c) : c;
    if (first) {
      if (c < 0) out << "-";
    } else {
      out << (c < 0 ? " - " : " + ");
    }
    first = false;
    if (magnitude != 1 || j == 0) out << magnitude;
    if (j >= 1) out << "n";
    if (j >= 2) out << "^" << j;
  }
  return out.str();
}

MomentPolynomial::MomentPolynomial(int order, std::vector<IntPolynomial> coeffs)
    : order_(order), coeffs_(std::move(coeffs)) {
  coeffs_.resize(static_cast<std::size_t>(order_ / 2));
}

const IntPolynomial& MomentPolynomial::coeff(int k) const {
  static const IntPolynomial zero;
  if (k < 1 || k > static_cast<int>(coeffs_.size())) return zero;
  return coeffs_[static_cast<std::size_t>(k - 1)];
}

std::vector<BigInt> MomentPolynomial::instantiate(std::int64_t n) const {
  std::vector<BigInt> out;
  out.reserve(coeffs_.size());
  for (const auto& c : coeffs_) out.push_back(c.evaluate(n));
  return out;
}

namespace {

// Working representation: a moment in one parity class, as coefficients of
// q^0, q^1, ... (each a polynomial in n).
using QSeries = std::vector<IntPolynomial>;

QSeries& add_into(QSeries& dst, const QSeries& src) {
  if (src.size() > dst.size()) dst.resize(src.size());
  for (std::size_t k = 0; k < src.size(); ++k) dst[k] += src[k];
  return dst;
}

// d/dtheta of sum_k a_k q^k = (1 - 2 theta) sum_k k a_k q^{k-1}
QSeries derivative_of_even(const QSeries& a) {
  QSeries b(a.empty() ? 0 : a.size() - 1);
  for (std::size_t k = 1; k < a.size(); ++k) {
    IntPolynomial term = a[k];
    term *= BigInt(k);
    b[k - 1] += term;
  }
  return b;
}

// d/dtheta of (1 - 2 theta) sum_k b_k q^k
//   = -2 sum_k b_k q^k + (1 - 4q) sum_k k b_k q^{k-1}
QSeries derivative_of_odd(const QSeries& b) {
  QSeries a(b.size());
  for (std::size_t k = 0; k < b.size(); ++k) {
    IntPolynomial same = b[k];
    same *= BigInt(-2 - 4 * static_cast<long long>(k));
    a[k] += same;
    if (k >= 1) {
      IntPolynomial lower = b[k];
      lower *= BigInt(k);
      a[k - 1] += lower;
    }
  }
  return a;
}

QSeries times_q(const QSeries& s) {
  QSeries out;
  out.reserve(s.size() + 1);
  out.emplace_back();
  out.insert(out.end(), s.begin(), s.end());
  return out;
}

class MomentCache {
 public:
  const MomentPolynomial& get(int m) {
    std::lock_guard lock(mutex_);
    while (static_cast<int>(series_.size()) <= m) extend();
    return polys_[static_cast<std::size_t>(m)];
  }

 private:
  void extend() {
    const int next = static_cast<int>(series_.size());
    QSeries s;
    if (next == 0) {
      s = {IntPolynomial({BigInt(1)})};
    } else if (next == 1) {
      s = {};
    } else {
      const int m = next - 1;  // build mu_{m+1} from mu_m and mu_{m-1}
      const QSeries& cur = series_[static_cast<std::size_t>(m)];
      const QSeries& prev = series_[static_cast<std::size_t>(m - 1)];
      QSeries sum = m % 2 == 0 ? derivative_of_even(cur) : derivative_of_odd(cur);
      QSeries scaled;
      scaled.reserve(prev.size());
      for (const auto& c : prev) {
        IntPolynomial t = c.times_n();
        t *= BigInt(m);
        scaled.push_back(std::move(t));
      }
      add_into(sum, scaled);
      s = times_q(sum);
    }
    while (!s.empty() && s.back().is_zero()) s.pop_back();

    std::vector<IntPolynomial> coeffs;
    for (std::size_t k = 1; k < s.size(); ++k) coeffs.push_back(s[k]);
    if (next >= 1 && !s.empty() && !s[0].is_zero()) {
      throw std::logic_error("moment recurrence produced a constant term");
    }
    series_.push_back(std::move(s));
    polys_.emplace_back(next, std::move(coeffs));
  }

  std::mutex mutex_;
  std::deque<QSeries> series_;
  std::deque<MomentPolynomial> polys_;
};

MomentCache& moment_cache() {
  static MomentCache cache;
  return cache;
}

template <class Value>
class KeyedCache {
 public:
  template <class Make>
  const Value& get(std::pair<int, std::int64_t> key, Make make) {
    {
      std::lock_guard lock(mutex_);
      if (auto it = entries_.find(key); it != entries_.end()) return it->second;
    }
    Value value = make();
    std::lock_guard lock(mutex_);
    return entries_.try_emplace(key, std::move(value)).first->second;
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<int, std::int64_t>, Value> entries_;
};

void require_even_order(int m) {
  if (m < 2 || m % 2 != 0) {
    throw std::invalid_argument("moment order must be an even integer >= 2, got " +
                                std::to_string(m));
  }
}

void require_trials(std::int64_t n) {
  if (n < 1) throw std::invalid_argument("trial count n must be >= 1");
}

// Evaluates sum_k c_k q^k for k = 1..K by Horner's rule.
long double q_series(const std::vector<double>& c, long double q) {
  long double acc = 0.0L;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = (acc + *it) * q;
  return acc;
}

}  // namespace

double log_bigint(const BigInt& value) {
  if (value <= 0) throw std::domain_error("log_bigint: argument must be positive");
  const auto msb = static_cast<long long>(boost::multiprecision::msb(value));
  const long long shift = std::max(0LL, msb - 60);
  const BigInt top = value >> static_cast<unsigned>(shift);
  return std::log(top.convert_to<double>()) + static_cast<double>(shift) * std::numbers::ln2;
}

const MomentPolynomial& central_moment_poly(int m) {
  if (m < 1) throw std::invalid_argument("moment order must be >= 1");
  return moment_cache().get(m);
}

const MomentCoefficients& coefficients(int m, std::int64_t n) {
  require_even_order(m);
  require_trials(n);
  static KeyedCache<MomentCoefficients> cache;
  return cache.get({m, n}, [&] {
    MomentCoefficients out;
    out.m = m;
    out.n = n;
    for (const BigInt& c : central_moment_poly(m).instantiate(n)) {
      const int sign = c > 0 ? 1 : (c < 0 ? -1 : 0);
      out.signs.push_back(sign);
      out.values.push_back(c.convert_to<double>());
      out.log_abs.push_back(sign == 0 ? -std::numeric_limits<double>::infinity()
                                      : log_bigint(sign > 0 ? c : BigInt(-c)));
    }
    return out;
  });
}

double eval_central_moment(int m, std::int64_t n, double theta) {
  if (m < 1) throw std::invalid_argument("moment order must be >= 1");
  require_trials(n);
  if (!(theta >= 0.0 && theta <= 1.0)) {
    throw std::invalid_argument("theta must lie in [0, 1]");
  }
  const MomentPolynomial& poly = central_moment_poly(m);
  std::vector<double> c;
  for (const BigInt& v : poly.instantiate(n)) c.push_back(v.convert_to<double>());
  const long double th = theta;
  const long double q = th * (1.0L - th);
  long double value = q_series(c, q);
  if (poly.parity() == Parity::odd) value *= (1.0L - 2.0L * th);
  return static_cast<double>(value);
}

double derivative_term(const MomentCoefficients& c, double p) {
  const double q = p * (1.0 - p);
  // sum_k k c_k q^{k-1}, Horner from the top
  double acc = 0.0;
  for (int k = c.d(); k >= 1; --k) acc = acc * q + k * c.value(k);
  return acc * (1.0 - 2.0 * p);
}

double sup_derivative_term(int m, std::int64_t n) {
  require_even_order(m);
  require_trials(n);
  static KeyedCache<double> cache;
  return cache.get({m, n}, [&] {
    const MomentCoefficients& c = coefficients(m, n);
    constexpr int intervals = 4096;
    int best_i = 0;
    double best = derivative_term(c, 0.0);
    for (int i = 1; i <= intervals; ++i) {
      const double v = derivative_term(c, static_cast<double>(i) / intervals);
      if (v > best) {
        best = v;
        best_i = i;
      }
    }

    double lo = static_cast<double>(std::max(0, best_i - 1)) / intervals;
    double hi = static_cast<double>(std::min(intervals, best_i + 1)) / intervals;
    const double tolerance = 1e-12 * std::fabs(c.value(1));
    constexpr double inv_phi = 0.6180339887498949;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = derivative_term(c, x1);
    double f2 = derivative_term(c, x2);
    for (int iter = 0; iter < 200 && hi - lo > 1e-15; ++iter) {
      if (std::fabs(f1 - f2) <= tolerance && hi - lo < 1e-12) break;
      if (f1 < f2) {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + inv_phi * (hi - lo);
        f2 = derivative_term(c, x2);
      } else {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - inv_phi * (hi - lo);
        f1 = derivative_term(c, x1);
      }
    }
    return std::max({best, f1, f2});
  });
}

std::vector<bool> coefficient_bound_holds(int m, std::int64_t n) {
  require_even_order(m);
  require_trials(n);
  const auto exact = central_moment_poly(m).instantiate(n);
  std::vector<bool> out;
  for (std::size_t i = 0; i < exact.size(); ++i) {
    const int k = static_cast<int>(i) + 1;
    const BigInt bound = boost::multiprecision::pow(BigInt(k), static_cast<unsigned>(m - k)) *
                         boost::multiprecision::pow(BigInt(n), static_cast<unsigned>(k));
    out.push_back(exact[i] <= bound);
  }
  return out;
}

}  // namespace bestsubset
