#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bestsubset/types.hpp"

namespace bestsubset {

/// Per-dataset ranks (1 = best, midranks on ties) with per-algorithm means.
struct RankMatrix {
  std::vector<std::string> algorithms;
  std::vector<std::vector<double>> ranks;  ///< one row per dataset
  std::vector<double> average_ranks;
  std::size_t rows_with_ties = 0;

  std::size_t datasets() const { return ranks.size(); }
  std::size_t size() const { return algorithms.size(); }
};

/// Builds a RankMatrix from rank rows and fills in the averages.
/// Throws std::invalid_argument on ragged rows or row sums other than A(A+1)/2.
RankMatrix make_rank_matrix(std::vector<std::string> algorithms,
                            std::vector<std::vector<double>> ranks);

struct FriedmanResult {
  double chi2 = 0.0;
  int df = 0;
  double p_value = 1.0;
  double iman_f = 0.0;   ///< +inf when chi2 = n(A-1)
  double iman_p = 1.0;
  bool reject = false;   ///< decided on the Iman-Davenport p-value
};

/// Friedman chi-square on average ranks with the Iman-Davenport F transform.
/// No tie correction is applied. Requires n >= 2 and A >= 2.
FriedmanResult friedman_test(const RankMatrix& ranks, double delta);

/// q with P(range of A iid standard normals <= q) = 1 - delta.
double studentized_range_quantile(int A, double delta);

/// CDF of the range of A iid standard normals, by quadrature.
double normal_range_cdf(double w, int A);

struct NemenyiResult {
  double cd = 0.0;
  double q_over_sqrt2 = 0.0;
  /// significant[i][j]: |R_i - R_j| >= cd (filled only when ranks are given)
  std::vector<std::vector<bool>> significant;
  /// algorithms not significantly worse than the best average rank
  std::vector<std::string> comparable_to_best;
};

NemenyiResult nemenyi_cd(int A, std::int64_t n, double delta);
NemenyiResult nemenyi_test(const RankMatrix& ranks, double delta);

struct PairwiseComparison {
  std::string leader;
  std::string follower;
  std::int64_t leader_count = 0;
  std::int64_t follower_count = 0;
  /// P(Bin(N_i + N_{i+1}, 1/2) >= N_i)
  double tail_probability = 1.0;
  /// min(1, 2 * tail_probability); the sorted pair is compared two-sided
  double p_value = 1.0;
  bool reject = false;
};

struct VerificationChain {
  std::vector<PairwiseComparison> comparisons;  ///< stops after the first non-rejection
  std::size_t verified_prefix_length = 0;
};

/// Top-down rank verification on sorted win counts. Requires A >= 2.
VerificationChain rank_verification(const WinCounts& counts, double delta);

/// Monte Carlo (1 - delta) quantile ("higher" order statistic) of
/// max(p_hat) - p_hat_s over `reps` multinomial samples, s = argmax p.
/// Throws std::invalid_argument unless p has a unique maximum.
double oracle_width(const Distribution& p, std::int64_t n, double delta, std::int64_t reps,
                    std::uint64_t seed, int threads = 0);

}  // namespace bestsubset
