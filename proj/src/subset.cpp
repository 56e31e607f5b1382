#include "bestsubset/subset.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace bestsubset {

// ---------------------------------------------------------------------------
// WinCounts / Distribution

WinCounts::WinCounts(std::vector<std::string> labels, std::vector<std::int64_t> counts)
    : labels_(std::move(labels)), counts_(std::move(counts)) {
  if (counts_.empty()) throw std::invalid_argument("WinCounts: empty alphabet");
  if (labels_.size() != counts_.size()) {
    throw std::invalid_argument("WinCounts: label and count lengths differ");
  }
  std::unordered_set<std::string> seen;
  for (const auto& label : labels_) {
    if (!seen.insert(label).second) {
      throw std::invalid_argument("WinCounts: duplicate label '" + label + "'");
    }
  }
  for (std::int64_t c : counts_) {
    if (c < 0) throw std::invalid_argument("WinCounts: negative count");
    n_ += c;
  }
}

namespace {
std::vector<std::string> index_labels(std::size_t size) {
  std::vector<std::string> labels;
  labels.reserve(size);
  for (std::size_t i = 1; i <= size; ++i) labels.push_back(std::to_string(i));
  return labels;
}
}  // namespace

WinCounts::WinCounts(std::vector<std::int64_t> counts)
    : WinCounts(index_labels(counts.size()), std::vector<std::int64_t>(counts)) {}

Distribution::Distribution(std::vector<double> probs, std::optional<std::int64_t> denominator)
    : probs_(std::move(probs)), denominator_(denominator) {
  if (probs_.empty()) throw std::invalid_argument("Distribution: empty probability vector");
  CompensatedSum total;
  for (double p : probs_) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw std::invalid_argument("Distribution: probabilities must be finite and non-negative");
    }
    total += p;
  }
  if (std::fabs(total.value() - 1.0) > kSumTolerance) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "Distribution: probabilities sum to " << total.value() << ", not 1";
    throw std::invalid_argument(msg.str());
  }
}

double Distribution::max() const { return *std::max_element(probs_.begin(), probs_.end()); }

std::size_t Distribution::argmax() const {
  return static_cast<std::size_t>(std::max_element(probs_.begin(), probs_.end()) -
                                  probs_.begin());
}

std::size_t Distribution::max_multiplicity() const {
  const double top = max();
  return static_cast<std::size_t>(std::count(probs_.begin(), probs_.end(), top));
}

std::vector<double> Distribution::sorted_desc() const {
  std::vector<double> out = probs_;
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

// ---------------------------------------------------------------------------

std::string to_string(SubsetMethod method) {
  return method == SubsetMethod::finite ? "finite" : "asymptotic";
}

SubsetMethod parse_subset_method(std::string_view name) {
  if (name == "finite") return SubsetMethod::finite;
  if (name == "asymptotic") return SubsetMethod::asymptotic;
  throw std::invalid_argument("unknown method '" + std::string(name) +
                              "' (expected finite or asymptotic)");
}

Distribution mle(const WinCounts& counts) {
  if (counts.n() == 0) throw std::invalid_argument("mle: sample is empty (all counts zero)");
  std::vector<double> probs;
  probs.reserve(counts.size());
  const double n = static_cast<double>(counts.n());
  for (std::int64_t c : counts.counts()) probs.push_back(static_cast<double>(c) / n);
  return Distribution(std::move(probs), counts.n());
}

std::vector<std::string> winners(const WinCounts& counts) {
  const auto& c = counts.counts();
  const std::int64_t top = *std::max_element(c.begin(), c.end());
  std::vector<std::string> out;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] == top) out.push_back(counts.labels()[i]);
  }
  return out;
}

std::vector<std::size_t> members_within(std::span<const double> p_hat, double width) {
  constexpr double kBoundarySlack = 1e-12;
  const double top = *std::max_element(p_hat.begin(), p_hat.end());
  const double threshold = top - width - kBoundarySlack;
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < p_hat.size(); ++i) {
    if (p_hat[i] >= threshold) out.push_back(i);
  }
  return out;
}

ConfidenceSubset select_subset(const WinCounts& counts, double delta, SubsetMethod method,
                               const SubsetConfig& config) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
  const Distribution p_hat = mle(counts);
  const std::int64_t n = counts.n();

  ConfidenceSubset out;
  out.method = method;
  out.delta = delta;

  if (method == SubsetMethod::finite) {
    const auto [d1, d2] = split_delta(delta, config.delta_split);
    const int m = config.m.value_or(choose_m(d1));
    out.detail = data_dependent_width(p_hat, n, d1, d2, m);
    out.width = 2.0 * out.detail.width;
  } else {
    out.detail = asymptotic_width(p_hat.max(), n, delta, config.asymptotic_constant);
    out.width = out.detail.width;

    const auto sorted = p_hat.sorted_desc();
    const double gap = sorted.size() > 1 ? sorted[0] - sorted[1] : 1.0;
    const double doubt = static_cast<double>(sorted.size()) *
                         std::exp(-static_cast<double>(n) * gap * gap);
    out.detail.diagnostics["large_n_doubt"] = doubt;
    if (doubt > delta) {
      std::ostringstream msg;
      msg << "asymptotic regime doubtful: A*exp(-n*gap^2) = " << doubt
          << " exceeds delta; the finite method carries a non-asymptotic guarantee";
      out.advisory = msg.str();
    }
  }

  out.member_indices = members_within(p_hat.probs(), out.width);
  for (std::size_t i : out.member_indices) out.members.push_back(counts.labels()[i]);
  out.argmax_set = winners(counts);
  out.saturated = out.width >= p_hat.max();
  return out;
}

}  // namespace bestsubset
