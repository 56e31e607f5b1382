#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace bestsubset {

/// Integer win tallies per symbol.
class WinCounts {
 public:
  /// Throws std::invalid_argument on size mismatch, duplicate labels,
  /// negative counts or an empty alphabet.
  WinCounts(std::vector<std::string> labels, std::vector<std::int64_t> counts);
  /// Labels default to "1", "2", ... in input order.
  explicit WinCounts(std::vector<std::int64_t> counts);

  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<std::int64_t>& counts() const { return counts_; }
  std::int64_t n() const { return n_; }
  std::size_t size() const { return counts_.size(); }

 private:
  std::vector<std::string> labels_;
  std::vector<std::int64_t> counts_;
  std::int64_t n_ = 0;
};

/// Probability vector over the alphabet; entries are non-negative and sum
/// to one within 1e-12.
class Distribution {
 public:
  static constexpr double kSumTolerance = 1e-12;

  /// Throws std::invalid_argument for empty, negative or non-normalized input.
  explicit Distribution(std::vector<double> probs,
                        std::optional<std::int64_t> empirical_denominator = std::nullopt);

  std::span<const double> probs() const { return probs_; }
  double operator[](std::size_t i) const { return probs_[i]; }
  std::size_t size() const { return probs_.size(); }
  std::optional<std::int64_t> empirical_denominator() const { return denominator_; }

  double max() const;
  /// Index of the first maximal entry.
  std::size_t argmax() const;
  /// Number of entries equal to the maximum.
  std::size_t max_multiplicity() const;
  /// Entries sorted in decreasing order.
  std::vector<double> sorted_desc() const;

 private:
  std::vector<double> probs_;
  std::optional<std::int64_t> denominator_;
};

}  // namespace bestsubset
