#include "bestsubset/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "bestsubset/baselines.hpp"
#include "bestsubset/numeric.hpp"
#include "bestsubset/parallel.hpp"

namespace bestsubset {

namespace {

// Stream tags keep evaluation and oracle calibration draws disjoint.
constexpr std::uint64_t kEvaluationStream = 1;
constexpr std::uint64_t kOracleStream = 2;

Distribution normalized(std::vector<double> weights) {
  CompensatedSum total;
  for (double w : weights) total += w;
  for (double& w : weights) w /= total.value();
  return Distribution(std::move(weights));
}

}  // namespace

Distribution zipf_distribution(double s, std::size_t A) {
  if (A < 1) throw std::invalid_argument("zipf_distribution: A must be >= 1");
  if (!(s >= 0.0)) throw std::invalid_argument("zipf_distribution: exponent must be >= 0");
  std::vector<double> w(A);
  for (std::size_t u = 1; u <= A; ++u) w[u - 1] = std::pow(static_cast<double>(u), -s);
  return normalized(std::move(w));
}

Distribution uniform_simplex(std::size_t A, std::uint64_t seed) {
  if (A < 1) throw std::invalid_argument("uniform_simplex: A must be >= 1");
  Rng rng(derive_key(seed, {}));
  std::vector<double> w(A);
  for (double& x : w) x = rng.exponential();
  return normalized(std::move(w));
}

WinCounts sample_counts(const Distribution& p, std::int64_t n, Rng& rng) {
  if (n < 0) throw std::invalid_argument("sample_counts: n must be >= 0");
  std::vector<double> cdf(p.size());
  CompensatedSum running;
  for (std::size_t i = 0; i < p.size(); ++i) {
    running += p[i];
    cdf[i] = running.value();
  }
  // zero-probability tail symbols must never be drawn
  std::size_t last = p.size() - 1;
  while (last > 0 && p[last] == 0.0) --last;
  std::vector<std::int64_t> counts(p.size(), 0);
  for (std::int64_t i = 0; i < n; ++i) {
    const double u = rng.uniform();
    auto it = std::upper_bound(cdf.begin(), cdf.begin() + static_cast<std::ptrdiff_t>(last), u);
    ++counts[static_cast<std::size_t>(it - cdf.begin())];
  }
  return WinCounts(std::move(counts));
}

WinCounts sample_counts(const Distribution& p, std::int64_t n, std::uint64_t seed) {
  Rng rng(derive_key(seed, {}));
  return sample_counts(p, n, rng);
}

std::string to_string(CoverageMethod method) {
  switch (method) {
    case CoverageMethod::finite: return "finite";
    case CoverageMethod::asymptotic: return "asymptotic";
    case CoverageMethod::oracle: return "oracle";
  }
  return "unknown";
}

CoverageMethod parse_coverage_method(std::string_view name) {
  if (name == "finite") return CoverageMethod::finite;
  if (name == "asymptotic") return CoverageMethod::asymptotic;
  if (name == "oracle") return CoverageMethod::oracle;
  throw std::invalid_argument("unknown method '" + std::string(name) +
                              "' (expected finite, asymptotic or oracle)");
}

const CoverageRow& CoverageReport::row(CoverageMethod method, std::int64_t n) const {
  for (const auto& r : rows) {
    if (r.method == method && r.n == n) return r;
  }
  throw std::out_of_range("no coverage row for method " + to_string(method) + " at n=" +
                          std::to_string(n));
}

CoverageReport coverage_experiment(const Distribution& p, const std::vector<std::int64_t>& n_grid,
                                   double delta, const std::set<CoverageMethod>& methods,
                                   std::int64_t reps, std::uint64_t seed,
                                   const ExperimentOptions& options) {
  if (reps < 1) throw std::invalid_argument("coverage_experiment: reps must be >= 1");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
  if (methods.empty()) throw std::invalid_argument("coverage_experiment: no methods requested");
  if (methods.contains(CoverageMethod::oracle) && p.max_multiplicity() != 1) {
    throw std::invalid_argument(
        "oracle method requires a unique most probable symbol; the distribution has tied maxima");
  }
  for (std::int64_t n : n_grid) {
    if (n < 1) throw std::invalid_argument("coverage_experiment: every n must be >= 1");
    if (n < 2 && methods.contains(CoverageMethod::finite)) {
      throw std::invalid_argument("finite method needs n >= 2");
    }
  }

  const unsigned threads = resolve_threads(options.threads);
  const std::vector<CoverageMethod> method_list(methods.begin(), methods.end());

  CoverageReport report;
  report.distribution = options.distribution_label;
  report.probs.assign(p.probs().begin(), p.probs().end());
  report.best = p.argmax();
  report.delta = delta;
  report.replicates = reps;
  report.oracle_replicates = methods.contains(CoverageMethod::oracle) ? options.oracle_replicates : 0;
  report.seed = seed;

  for (std::int64_t n : n_grid) {
    std::optional<double> oracle;
    if (methods.contains(CoverageMethod::oracle)) {
      oracle = oracle_width(p, n, delta, options.oracle_replicates,
                            derive_key(seed, {kOracleStream, static_cast<std::uint64_t>(n)}),
                            static_cast<int>(threads));
    }

    // covered[r * M + j], size[r * M + j]
    const std::size_t M = method_list.size();
    std::vector<char> covered(static_cast<std::size_t>(reps) * M);
    std::vector<double> sizes(static_cast<std::size_t>(reps) * M);
    parallel_for(static_cast<std::size_t>(reps), threads, [&](std::size_t r) {
      Rng rng(derive_key(seed, {kEvaluationStream, static_cast<std::uint64_t>(n), r}));
      const WinCounts counts = sample_counts(p, n, rng);
      for (std::size_t j = 0; j < M; ++j) {
        std::vector<std::size_t> members;
        switch (method_list[j]) {
          case CoverageMethod::finite:
            members = select_subset(counts, delta, SubsetMethod::finite, options.subset).member_indices;
            break;
          case CoverageMethod::asymptotic:
            members =
                select_subset(counts, delta, SubsetMethod::asymptotic, options.subset).member_indices;
            break;
          case CoverageMethod::oracle:
            members = members_within(mle(counts).probs(), *oracle);
            break;
        }
        covered[r * M + j] = std::binary_search(members.begin(), members.end(), report.best);
        sizes[r * M + j] = static_cast<double>(members.size());
      }
    });

    const double R = static_cast<double>(reps);
    for (std::size_t j = 0; j < M; ++j) {
      CompensatedSum hits, size_sum, size_sq;
      for (std::size_t r = 0; r < static_cast<std::size_t>(reps); ++r) {
        hits += covered[r * M + j] ? 1.0 : 0.0;
        size_sum += sizes[r * M + j];
      }
      const double mean_size = size_sum.value() / R;
      for (std::size_t r = 0; r < static_cast<std::size_t>(reps); ++r) {
        const double dev = sizes[r * M + j] - mean_size;
        size_sq += dev * dev;
      }
      CoverageRow row;
      row.method = method_list[j];
      row.n = n;
      row.replicates = reps;
      row.coverage = hits.value() / R;
      row.mean_size = mean_size;
      row.se_coverage = std::sqrt(row.coverage * (1.0 - row.coverage) / R);
      row.se_size = reps > 1 ? std::sqrt(size_sq.value() / (R - 1.0) / R) : 0.0;
      if (method_list[j] == CoverageMethod::oracle) row.oracle_width = oracle;
      report.rows.push_back(row);
    }
  }
  return report;
}

void write_coverage_csv(const CoverageReport& report, std::ostream& out) {
  const auto old_precision = out.precision(17);
  out << "method,n,coverage,mean_size,se_coverage,se_size\n";
  for (const auto& r : report.rows) {
    out << to_string(r.method) << ',' << r.n << ',' << r.coverage << ',' << r.mean_size << ','
        << r.se_coverage << ',' << r.se_size << '\n';
  }
  out.precision(old_precision);
}

}  // namespace bestsubset
