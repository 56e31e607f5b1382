#include "bestsubset/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "bestsubset/numeric.hpp"
#include "bestsubset/parallel.hpp"
#include "bestsubset/simulate.hpp"

namespace bestsubset {

namespace {

void require_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
}

}  // namespace

RankMatrix make_rank_matrix(std::vector<std::string> algorithms,
                            std::vector<std::vector<double>> ranks) {
  RankMatrix out;
  out.algorithms = std::move(algorithms);
  out.ranks = std::move(ranks);
  const std::size_t A = out.algorithms.size();
  if (A < 2) throw std::invalid_argument("rank matrix needs at least two algorithms");
  const double expected_sum = A * (A + 1) / 2.0;
  std::vector<CompensatedSum> sums(A);
  for (const auto& row : out.ranks) {
    if (row.size() != A) throw std::invalid_argument("rank matrix rows must have one rank per algorithm");
    double row_sum = 0.0;
    for (std::size_t j = 0; j < A; ++j) {
      if (row[j] < 1.0 || row[j] > static_cast<double>(A)) {
        throw std::invalid_argument("ranks must lie in [1, A]");
      }
      row_sum += row[j];
      sums[j] += row[j];
    }
    if (std::fabs(row_sum - expected_sum) > 1e-9) {
      throw std::invalid_argument("rank row does not sum to A(A+1)/2");
    }
    std::vector<double> sorted = row;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) ++out.rows_with_ties;
  }
  const double n = static_cast<double>(out.ranks.size());
  for (const auto& s : sums) out.average_ranks.push_back(n > 0 ? s.value() / n : 0.0);
  return out;
}

FriedmanResult friedman_test(const RankMatrix& ranks, double delta) {
  require_delta(delta);
  const auto n = static_cast<double>(ranks.datasets());
  const auto A = static_cast<double>(ranks.size());
  if (ranks.datasets() < 2 || ranks.size() < 2) {
    throw std::invalid_argument("Friedman test needs n >= 2 datasets and A >= 2 algorithms");
  }
  CompensatedSum squares;
  for (double r : ranks.average_ranks) squares += r * r;

  FriedmanResult out;
  out.df = static_cast<int>(A) - 1;
  out.chi2 = 12.0 * n / (A * (A + 1.0)) * (squares.value() - A * (A + 1.0) * (A + 1.0) / 4.0);
  out.chi2 = std::max(0.0, out.chi2);  // round-off when all averages agree
  out.p_value = chi_square_upper_tail(out.chi2, out.df);

  const double denominator = n * (A - 1.0) - out.chi2;
  const double df1 = A - 1.0;
  const double df2 = (A - 1.0) * (n - 1.0);
  if (denominator <= 1e-12 * n * (A - 1.0)) {
    out.iman_f = std::numeric_limits<double>::infinity();
    out.iman_p = 0.0;
  } else {
    out.iman_f = (n - 1.0) * out.chi2 / denominator;
    out.iman_p = f_upper_tail(out.iman_f, df1, df2);
  }
  out.reject = out.iman_p <= delta;
  return out;
}

double normal_range_cdf(double w, int A) {
  if (w <= 0.0) return 0.0;
  // A * integral phi(u) [Phi(u + w) - Phi(u)]^{A-1} du, composite Simpson
  constexpr double lo = -9.0, hi = 9.0;
  constexpr int panels = 3000;
  const double h = (hi - lo) / panels;
  auto integrand = [&](double u) {
    // difference of upper tails is better conditioned on the right half
    const double mass = u + 0.5 * w > 0.0 ? normal_upper_tail(u) - normal_upper_tail(u + w)
                                          : normal_cdf(u + w) - normal_cdf(u);
    return normal_pdf(u) * std::pow(mass, A - 1);
  };
  double s = integrand(lo) + integrand(hi);
  for (int i = 1; i < panels; ++i) s += (i % 2 ? 4.0 : 2.0) * integrand(lo + i * h);
  return std::min(1.0, A * s * h / 3.0);
}

double studentized_range_quantile(int A, double delta) {
  require_delta(delta);
  if (A < 2) throw std::invalid_argument("studentized range needs A >= 2");
  double lo = 0.0, hi = 30.0;
  const double target = 1.0 - delta;
  while (hi - lo > 1e-9) {
    const double mid = 0.5 * (lo + hi);
    (normal_range_cdf(mid, A) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

NemenyiResult nemenyi_cd(int A, std::int64_t n, double delta) {
  if (A < 2) throw std::invalid_argument("Nemenyi test needs A >= 2");
  if (n < 1) throw std::invalid_argument("Nemenyi test needs n >= 1");
  NemenyiResult out;
  out.q_over_sqrt2 = studentized_range_quantile(A, delta) / std::numbers::sqrt2;
  out.cd = out.q_over_sqrt2 * std::sqrt(A * (A + 1.0) / (6.0 * static_cast<double>(n)));
  return out;
}

NemenyiResult nemenyi_test(const RankMatrix& ranks, double delta) {
  const auto A = ranks.size();
  NemenyiResult out =
      nemenyi_cd(static_cast<int>(A), static_cast<std::int64_t>(ranks.datasets()), delta);
  const auto& R = ranks.average_ranks;
  out.significant.assign(A, std::vector<bool>(A, false));
  for (std::size_t i = 0; i < A; ++i) {
    for (std::size_t j = 0; j < A; ++j) out.significant[i][j] = std::fabs(R[i] - R[j]) >= out.cd;
  }
  const double best = *std::min_element(R.begin(), R.end());
  for (std::size_t i = 0; i < A; ++i) {
    if (R[i] - best < out.cd) out.comparable_to_best.push_back(ranks.algorithms[i]);
  }
  return out;
}

VerificationChain rank_verification(const WinCounts& counts, double delta) {
  require_delta(delta);
  if (counts.size() < 2) throw std::invalid_argument("rank verification needs A >= 2");
  std::vector<std::size_t> order(counts.size());
  std::iota(order.begin(), order.end(), 0);
  const auto& c = counts.counts();
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return c[a] > c[b]; });

  VerificationChain chain;
  for (std::size_t i = 0; i + 1 < order.size(); ++i) {
    PairwiseComparison cmp;
    cmp.leader = counts.labels()[order[i]];
    cmp.follower = counts.labels()[order[i + 1]];
    cmp.leader_count = c[order[i]];
    cmp.follower_count = c[order[i + 1]];
    cmp.tail_probability =
        binomial_half_upper_tail(cmp.leader_count, cmp.leader_count + cmp.follower_count);
    cmp.p_value = std::min(1.0, 2.0 * cmp.tail_probability);
    cmp.reject = cmp.p_value <= delta;
    chain.comparisons.push_back(cmp);
    if (!cmp.reject) break;
    ++chain.verified_prefix_length;
  }
  return chain;
}

double oracle_width(const Distribution& p, std::int64_t n, double delta, std::int64_t reps,
                    std::uint64_t seed, int threads) {
  require_delta(delta);
  if (reps < 1) throw std::invalid_argument("oracle_width needs reps >= 1");
  if (n < 1) throw std::invalid_argument("oracle_width needs n >= 1");
  if (p.max_multiplicity() != 1) {
    throw std::invalid_argument("oracle_width requires a unique most probable symbol");
  }
  const std::size_t best = p.argmax();
  std::vector<double> stats(static_cast<std::size_t>(reps));
  parallel_for(stats.size(), resolve_threads(threads), [&](std::size_t r) {
    Rng rng(derive_key(seed, {r}));
    const WinCounts counts = sample_counts(p, n, rng);
    const auto& c = counts.counts();
    const std::int64_t top = *std::max_element(c.begin(), c.end());
    stats[r] = static_cast<double>(top - c[best]) / static_cast<double>(n);
  });
  std::sort(stats.begin(), stats.end());
  // "higher" interpolation: smallest order statistic at or above the
  // fractional position (reps - 1)(1 - delta)
  const long double position = static_cast<long double>(reps - 1) * (1.0L - delta);
  const auto index = static_cast<std::size_t>(std::ceil(position - 1e-9L));
  return stats[std::min(index, stats.size() - 1)];
}

}  // namespace bestsubset
