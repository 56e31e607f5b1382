#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bestsubset/baselines.hpp"
#include "bestsubset/types.hpp"

namespace bestsubset {

/// Malformed or unusable input file.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Direction { higher_better, lower_better };
Direction parse_direction(std::string_view name);
std::string to_string(Direction direction);

enum class TiePolicy { random, first, all_fractional_rounded };
TiePolicy parse_tie_policy(std::string_view name);
std::string to_string(TiePolicy policy);

struct ScoreMatrix {
  std::vector<std::string> datasets;
  std::vector<std::string> algorithms;
  std::vector<std::vector<double>> scores;  ///< rows: datasets, columns: algorithms
  Direction direction = Direction::higher_better;
  std::size_t dropped_rows = 0;             ///< rows skipped for missing cells
};

/// `algorithm,count` CSV. Labels keep file order.
WinCounts parse_counts_csv(const std::filesystem::path& path);
WinCounts parse_counts_csv(std::istream& in);

/// `dataset,<alg1>,<alg2>,...` CSV; rows with an empty cell are dropped.
ScoreMatrix parse_scores_csv(const std::filesystem::path& path, Direction direction);
ScoreMatrix parse_scores_csv(std::istream& in, Direction direction);

/// One win per dataset for the best-scoring algorithm; ties resolved by policy.
/// The `random` policy draws one tied winner per row from a stream keyed by
/// (seed, row index).
WinCounts wins_from_scores(const ScoreMatrix& scores, TiePolicy policy, std::uint64_t seed = 0);

/// Rows whose best score is shared by more than one algorithm.
std::size_t count_tied_rows(const ScoreMatrix& scores);

/// Per-row ranks with midranks for ties.
RankMatrix ranks_from_scores(const ScoreMatrix& scores);

}  // namespace bestsubset
