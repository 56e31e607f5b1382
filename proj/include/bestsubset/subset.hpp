#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bestsubset/bounds.hpp"
#include "bestsubset/types.hpp"

namespace bestsubset {

enum class SubsetMethod { finite, asymptotic };

std::string to_string(SubsetMethod method);
/// Throws std::invalid_argument for anything other than "finite" / "asymptotic".
SubsetMethod parse_subset_method(std::string_view name);

struct SubsetConfig {
  std::optional<int> m;       ///< even moment order; nullopt selects choose_m(delta_1)
  double delta_split = 0.9;   ///< fraction of delta assigned to delta_1
  AsymptoticConstant asymptotic_constant = AsymptoticConstant::normal_quantile;
};

struct ConfidenceSubset {
  std::vector<std::string> members;
  std::vector<std::size_t> member_indices;  ///< increasing
  std::vector<std::string> argmax_set;
  double width = 0.0;
  SubsetMethod method = SubsetMethod::finite;
  double delta = 0.0;
  /// width >= p_hat_[1]: every symbol is selected.
  bool saturated = false;
  WidthResult detail;
  /// Non-binding note from the asymptotic branch when n looks too small.
  std::optional<std::string> advisory;
};

/// p_hat_u = N_u / n. Throws std::invalid_argument when n = 0.
Distribution mle(const WinCounts& counts);

/// Labels attaining the maximal count.
std::vector<std::string> winners(const WinCounts& counts);

/// Indices u with p_hat_u >= max(p_hat) - width, boundary inclusive with an
/// absolute slack of 1e-12.
std::vector<std::size_t> members_within(std::span<const double> p_hat, double width);

/// Builds the confidence subset for the most probable symbol.
ConfidenceSubset select_subset(const WinCounts& counts, double delta, SubsetMethod method,
                               const SubsetConfig& config = {});

}  // namespace bestsubset
