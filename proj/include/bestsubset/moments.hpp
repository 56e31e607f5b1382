#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace bestsubset {

using BigInt = boost::multiprecision::cpp_int;

/// Univariate polynomial in the trial count n with exact integer
/// coefficients; terms()[j] multiplies n^j.
class IntPolynomial {
 public:
  IntPolynomial() = default;
  explicit IntPolynomial(std::vector<BigInt> terms);

  const std::vector<BigInt>& terms() const { return terms_; }
  int degree() const { return static_cast<int>(terms_.size()) - 1; }
  bool is_zero() const { return terms_.empty(); }

  BigInt evaluate(std::int64_t n) const;

  IntPolynomial& operator+=(const IntPolynomial& other);
  IntPolynomial& operator*=(const BigInt& scalar);
  /// Multiplies by the symbol n.
  IntPolynomial times_n() const;

  friend bool operator==(const IntPolynomial&, const IntPolynomial&) = default;

  /// Human-readable form, highest power first, e.g. "3n^2 - 6n".
  std::string to_string() const;

 private:
  void trim();
  std::vector<BigInt> terms_;
};

enum class Parity { even, odd };

/// E(Y - n*theta)^m for Y ~ Bin(n, theta), written in the basis q = theta(1 - theta):
///   even m:  sum_k c_k(n) q^k
///   odd m:   (1 - 2 theta) sum_k c_k(n) q^k
/// with k running from 1 to floor(m/2).
class MomentPolynomial {
 public:
  MomentPolynomial(int order, std::vector<IntPolynomial> coeffs);

  int order() const { return order_; }
  Parity parity() const { return order_ % 2 == 0 ? Parity::even : Parity::odd; }
  /// coeffs()[k - 1] is c_{k,m,n} as a polynomial in n, k = 1..floor(m/2).
  const std::vector<IntPolynomial>& coeffs() const { return coeffs_; }
  /// c_{k,m,n} as a polynomial in n; zero polynomial when k is out of range.
  const IntPolynomial& coeff(int k) const;

  /// Exact c_{k,m,n} at the given n for k = 1..floor(m/2).
  std::vector<BigInt> instantiate(std::int64_t n) const;

 private:
  int order_;
  std::vector<IntPolynomial> coeffs_;
};

/// Builds the m-th central moment polynomial through the recurrence
///   mu_{m+1} = q (n m mu_{m-1} + d mu_m / d theta),  mu_0 = 1, mu_1 = 0,
/// carried out in the {q^k} / {(1 - 2 theta) q^k} basis. Results are cached;
/// the returned reference stays valid for the life of the program.
/// Throws std::invalid_argument for m < 1.
const MomentPolynomial& central_moment_poly(int m);

/// Numeric instantiation of the even-moment coefficients at a fixed n.
struct MomentCoefficients {
  int m = 0;
  std::int64_t n = 0;
  std::vector<double> values;     ///< c_{k,m,n}, k = 1..m/2 (may overflow to inf)
  std::vector<double> log_abs;    ///< log|c_{k,m,n}|, -inf for zero
  std::vector<int> signs;         ///< -1, 0 or +1

  int d() const { return m / 2; }
  double value(int k) const { return values[static_cast<std::size_t>(k - 1)]; }
};

/// Throws std::invalid_argument for odd or non-positive m and n < 1.
/// Results are cached per (m, n).
const MomentCoefficients& coefficients(int m, std::int64_t n);

/// Evaluates E(Y - n theta)^m for Y ~ Bin(n, theta) from the polynomial form.
double eval_central_moment(int m, std::int64_t n, double theta);

/// sup over p in [0, 1] of  sum_k c_{k,m,n} k (p(1-p))^{k-1} (1 - 2p)
/// located by a 4097-point grid scan followed by golden-section refinement.
/// Cached per (m, n).
double sup_derivative_term(int m, std::int64_t n);

/// The summand maximized by sup_derivative_term, exposed for checking.
double derivative_term(const MomentCoefficients& c, double p);

/// Per-k check of c_{k,m,n} <= k^{m-k} n^k, exact in integers.
std::vector<bool> coefficient_bound_holds(int m, std::int64_t n);

/// Natural log of a positive big integer.
double log_bigint(const BigInt& value);

}  // namespace bestsubset
