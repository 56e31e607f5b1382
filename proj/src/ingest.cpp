#include "bestsubset/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <unordered_set>

#include "bestsubset/rng.hpp"

namespace bestsubset {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

// Comma-separated fields; double quotes group fields and "" escapes a quote.
std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        current += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        current += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(trim(current));
      current.clear();
    } else {
      current += ch;
    }
  }
  fields.push_back(trim(current));
  return fields;
}

// Non-blank lines with a leading UTF-8 byte-order mark removed.
std::vector<std::pair<std::size_t, std::string>> read_lines(std::istream& in) {
  std::vector<std::pair<std::size_t, std::string>> lines;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (number == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
    if (trim(line).empty()) continue;
    lines.emplace_back(number, line);
  }
  return lines;
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  return in;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::string at_line(std::size_t line) { return " (line " + std::to_string(line) + ")"; }

}  // namespace

Direction parse_direction(std::string_view name) {
  if (name == "higher" || name == "higher_better" || name == "max") return Direction::higher_better;
  if (name == "lower" || name == "lower_better" || name == "min") return Direction::lower_better;
  throw std::invalid_argument("unknown direction '" + std::string(name) +
                              "' (expected higher_better or lower_better)");
}

std::string to_string(Direction direction) {
  return direction == Direction::higher_better ? "higher_better" : "lower_better";
}

TiePolicy parse_tie_policy(std::string_view name) {
  if (name == "random") return TiePolicy::random;
  if (name == "first") return TiePolicy::first;
  if (name == "all_fractional_rounded" || name == "fractional") {
    return TiePolicy::all_fractional_rounded;
  }
  throw std::invalid_argument("unknown tie policy '" + std::string(name) +
                              "' (expected random, first or all_fractional_rounded)");
}

std::string to_string(TiePolicy policy) {
  switch (policy) {
    case TiePolicy::random: return "random";
    case TiePolicy::first: return "first";
    case TiePolicy::all_fractional_rounded: return "all_fractional_rounded";
  }
  return "unknown";
}

WinCounts parse_counts_csv(std::istream& in) {
  const auto lines = read_lines(in);
  if (lines.empty()) throw InputError("counts file is empty");
  const auto header = split_csv_line(lines.front().second);
  if (header.size() != 2 || lower(header[0]) != "algorithm" || lower(header[1]) != "count") {
    throw InputError("counts file header must be 'algorithm,count'");
  }
  if (lines.size() == 1) throw InputError("counts file has no data rows");

  std::vector<std::string> labels;
  std::vector<std::int64_t> counts;
  std::unordered_set<std::string> seen;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& [number, text] = lines[i];
    const auto fields = split_csv_line(text);
    if (fields.size() != 2) throw InputError("expected 2 fields" + at_line(number));
    const std::string& label = fields[0];
    if (label.empty()) throw InputError("empty algorithm name" + at_line(number));
    if (!seen.insert(label).second) {
      throw InputError("duplicate label '" + label + "'" + at_line(number));
    }
    const std::string& cell = fields[1];
    std::int64_t value = 0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (ec != std::errc() || ptr != cell.data() + cell.size()) {
      throw InputError("non-integer count '" + cell + "' for '" + label + "'" + at_line(number));
    }
    if (value < 0) throw InputError("negative count for '" + label + "'" + at_line(number));
    labels.push_back(label);
    counts.push_back(value);
  }
  return WinCounts(std::move(labels), std::move(counts));
}

WinCounts parse_counts_csv(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  return parse_counts_csv(in);
}

ScoreMatrix parse_scores_csv(std::istream& in, Direction direction) {
  const auto lines = read_lines(in);
  if (lines.empty()) throw InputError("scores file is empty");
  const auto header = split_csv_line(lines.front().second);
  if (header.empty() || lower(header[0]) != "dataset") {
    throw InputError("scores file header must start with 'dataset'");
  }
  if (header.size() < 3) throw InputError("scores file needs at least 2 algorithm columns");

  ScoreMatrix out;
  out.direction = direction;
  out.algorithms.assign(header.begin() + 1, header.end());
  std::unordered_set<std::string> seen;
  for (const auto& a : out.algorithms) {
    if (a.empty()) throw InputError("empty algorithm name in header");
    if (!seen.insert(a).second) throw InputError("duplicate algorithm column '" + a + "'");
  }

  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& [number, text] = lines[i];
    const auto fields = split_csv_line(text);
    if (fields.size() > header.size()) throw InputError("too many fields" + at_line(number));
    bool missing = fields.size() < header.size();
    std::vector<double> row;
    for (std::size_t j = 1; j < fields.size() && !missing; ++j) {
      if (fields[j].empty()) {
        missing = true;
        break;
      }
      double value = 0.0;
      const auto [ptr, ec] =
          std::from_chars(fields[j].data(), fields[j].data() + fields[j].size(), value);
      if (ec != std::errc() || ptr != fields[j].data() + fields[j].size() || !std::isfinite(value)) {
        throw InputError("non-numeric score '" + fields[j] + "'" + at_line(number));
      }
      row.push_back(value);
    }
    if (missing) {
      ++out.dropped_rows;
      continue;
    }
    out.datasets.push_back(fields[0]);
    out.scores.push_back(std::move(row));
  }
  if (out.scores.empty()) throw InputError("scores file has no complete rows");
  return out;
}

ScoreMatrix parse_scores_csv(const std::filesystem::path& path, Direction direction) {
  auto in = open_or_throw(path);
  return parse_scores_csv(in, direction);
}

namespace {

// Column indices attaining the best score of a row, increasing.
std::vector<std::size_t> best_columns(const std::vector<double>& row, Direction direction) {
  const double best = direction == Direction::higher_better
                          ? *std::max_element(row.begin(), row.end())
                          : *std::min_element(row.begin(), row.end());
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (row[j] == best) out.push_back(j);
  }
  return out;
}

}  // namespace

std::size_t count_tied_rows(const ScoreMatrix& scores) {
  return static_cast<std::size_t>(
      std::count_if(scores.scores.begin(), scores.scores.end(), [&](const auto& row) {
        return best_columns(row, scores.direction).size() > 1;
      }));
}

WinCounts wins_from_scores(const ScoreMatrix& scores, TiePolicy policy, std::uint64_t seed) {
  const std::size_t A = scores.algorithms.size();
  std::vector<std::int64_t> counts(A, 0);
  std::vector<double> fractional(A, 0.0);

  for (std::size_t i = 0; i < scores.scores.size(); ++i) {
    const auto best = best_columns(scores.scores[i], scores.direction);
    switch (policy) {
      case TiePolicy::first:
        ++counts[best.front()];
        break;
      case TiePolicy::random: {
        Rng rng(derive_key(seed, {i}));
        ++counts[best[best.size() == 1 ? 0 : rng.below(best.size())]];
        break;
      }
      case TiePolicy::all_fractional_rounded:
        for (std::size_t j : best) fractional[j] += 1.0 / static_cast<double>(best.size());
        break;
    }
  }

  if (policy == TiePolicy::all_fractional_rounded) {
    // largest-remainder rounding with the total pinned to the row count
    const auto total = static_cast<std::int64_t>(scores.scores.size());
    std::int64_t assigned = 0;
    std::vector<double> remainder(A);
    for (std::size_t j = 0; j < A; ++j) {
      // nudge so that sums like 0.1 + ... + 0.1 = 0.99999 land on the integer
      const double floor_value = std::floor(fractional[j] + 1e-9);
      counts[j] = static_cast<std::int64_t>(floor_value);
      remainder[j] = fractional[j] - floor_value;
      assigned += counts[j];
    }
    std::vector<std::size_t> order(A);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
    for (std::size_t k = 0; assigned < total; ++k, ++assigned) ++counts[order[k % A]];
  }
  return WinCounts(scores.algorithms, std::move(counts));
}

RankMatrix ranks_from_scores(const ScoreMatrix& scores) {
  const std::size_t A = scores.algorithms.size();
  std::vector<std::vector<double>> ranks;
  ranks.reserve(scores.scores.size());
  for (const auto& row : scores.scores) {
    std::vector<std::size_t> order(A);
    std::iota(order.begin(), order.end(), 0);
    const bool higher = scores.direction == Direction::higher_better;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return higher ? row[a] > row[b] : row[a] < row[b];
    });
    std::vector<double> r(A);
    for (std::size_t start = 0; start < A;) {
      std::size_t end = start + 1;
      while (end < A && row[order[end]] == row[order[start]]) ++end;
      // positions start..end-1 hold ranks start+1..end
      const double midrank = 0.5 * static_cast<double>(start + 1 + end);
      for (std::size_t k = start; k < end; ++k) r[order[k]] = midrank;
      start = end;
    }
    ranks.push_back(std::move(r));
  }
  return make_rank_matrix(scores.algorithms, std::move(ranks));
}

}  // namespace bestsubset
