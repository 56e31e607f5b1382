#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "bestsubset/rng.hpp"
#include "bestsubset/subset.hpp"
#include "bestsubset/types.hpp"

namespace bestsubset {

/// p_u proportional to u^{-s}, u = 1..A.
Distribution zipf_distribution(double s, std::size_t A);

/// Flat Dirichlet draw: normalized unit-rate exponentials. Deterministic in seed.
Distribution uniform_simplex(std::size_t A, std::uint64_t seed);

/// Multinomial(n, p) as n inverse-CDF categorical draws in symbol order.
WinCounts sample_counts(const Distribution& p, std::int64_t n, std::uint64_t seed);
WinCounts sample_counts(const Distribution& p, std::int64_t n, Rng& rng);

enum class CoverageMethod { finite, asymptotic, oracle };

std::string to_string(CoverageMethod method);
CoverageMethod parse_coverage_method(std::string_view name);

struct CoverageRow {
  CoverageMethod method = CoverageMethod::finite;
  std::int64_t n = 0;
  double coverage = 0.0;
  double mean_size = 0.0;
  double se_coverage = 0.0;
  double se_size = 0.0;
  std::int64_t replicates = 0;
  std::optional<double> oracle_width;  ///< calibrated width, oracle rows only
};

struct CoverageReport {
  std::string distribution;   ///< descriptor, e.g. "zipf:s=1,A=20"
  std::vector<double> probs;
  std::size_t best = 0;       ///< index of the most probable symbol
  double delta = 0.0;
  std::int64_t replicates = 0;
  std::int64_t oracle_replicates = 0;
  std::uint64_t seed = 0;
  std::vector<CoverageRow> rows;  ///< ordered by n, then method

  const CoverageRow& row(CoverageMethod method, std::int64_t n) const;
};

struct ExperimentOptions {
  int threads = 0;                       ///< 0: resolve_threads()
  std::int64_t oracle_replicates = 100000;
  SubsetConfig subset;
  std::string distribution_label;
};

/// Monte Carlo coverage and subset-size study. All methods see the same
/// sampled counts within a replicate. Results do not depend on the thread
/// count. Throws std::invalid_argument when the oracle is requested for a
/// distribution without a unique maximum, or when n < 2 with the finite method.
CoverageReport coverage_experiment(const Distribution& p, const std::vector<std::int64_t>& n_grid,
                                   double delta, const std::set<CoverageMethod>& methods,
                                   std::int64_t reps, std::uint64_t seed,
                                   const ExperimentOptions& options = {});

/// Long-format CSV: method,n,coverage,mean_size,se_coverage,se_size
void write_coverage_csv(const CoverageReport& report, std::ostream& out);

}  // namespace bestsubset
