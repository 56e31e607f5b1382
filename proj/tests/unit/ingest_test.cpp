#include <gtest/gtest.h>

#include <sstream>

#include "bestsubset/ingest.hpp"

using namespace bestsubset;

namespace {

WinCounts counts_from(const std::string& text) {
  std::istringstream in(text);
  return parse_counts_csv(in);
}

ScoreMatrix scores_from(const std::string& text, Direction d = Direction::higher_better) {
  std::istringstream in(text);
  return parse_scores_csv(in, d);
}

std::string error_of(const std::string& text) {
  try {
    counts_from(text);
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(CountsCsv, BasicWithBomAndCrlf) {
  const WinCounts c = counts_from("\xEF\xBB\xBF" "algorithm,count\r\nrf,30\r\n\"ada, boost\",16\r\n\r\nknn,9\r\n");
  EXPECT_EQ(c.labels(), (std::vector<std::string>{"rf", "ada, boost", "knn"}));
  EXPECT_EQ(c.counts(), (std::vector<std::int64_t>{30, 16, 9}));
  EXPECT_EQ(c.n(), 55);
}

TEST(CountsCsv, Errors) {
  EXPECT_NE(error_of("").find("empty"), std::string::npos);
  EXPECT_NE(error_of("algorithm,count\nrf,3\nrf,4\n").find("duplicate label 'rf'"),
            std::string::npos);
  EXPECT_NE(error_of("algorithm,count\nrf,-3\n").find("negative"), std::string::npos);
  EXPECT_NE(error_of("algorithm,count\nrf,2.5\n").find("non-integer count"), std::string::npos);
  EXPECT_NE(error_of("algorithm,count\nrf,x\n").find("non-integer count"), std::string::npos);
  EXPECT_NE(error_of("name,wins\nrf,1\n").find("header"), std::string::npos);
  EXPECT_NE(error_of("algorithm,count\nrf\n").find("line 2"), std::string::npos);
  EXPECT_THROW(parse_counts_csv(std::filesystem::path("/nonexistent/file.csv")), InputError);
}

TEST(CountsCsv, InputErrorIsInvalidArgument) {
  EXPECT_THROW(counts_from("algorithm,count\nrf,-1\n"), std::invalid_argument);
}

TEST(ScoresCsv, DropsIncompleteRows) {
  const ScoreMatrix s = scores_from("dataset,a,b,c\nd1,0.9,0.8,0.7\nd2,0.5,,0.6\nd3,1,2\nd4,3,2,1\n");
  EXPECT_EQ(s.algorithms, (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_EQ(s.datasets, (std::vector<std::string>{"d1", "d4"}));
  EXPECT_EQ(s.dropped_rows, 2u);
}

TEST(ScoresCsv, Errors) {
  EXPECT_THROW(scores_from("dataset,a\nd1,1\n"), InputError);
  EXPECT_THROW(scores_from("dataset,a,b\nd1,,1\n"), InputError);
  EXPECT_THROW(scores_from("dataset,a,b\nd1,1,zz\n"), InputError);
  EXPECT_THROW(scores_from("dataset,a,a\nd1,1,2\n"), InputError);
  EXPECT_THROW(scores_from("dataset,a,b\nd1,1,2,3\n"), InputError);
}

TEST(WinsFromScores, DirectionAndFirstPolicy) {
  const ScoreMatrix hi = scores_from("dataset,a,b,c\n1,3,1,2\n2,1,5,5\n3,0,0,1\n");
  EXPECT_EQ(wins_from_scores(hi, TiePolicy::first).counts(), (std::vector<std::int64_t>{1, 1, 1}));
  EXPECT_EQ(count_tied_rows(hi), 1u);
  const ScoreMatrix lo =
      scores_from("dataset,a,b,c\n1,3,1,2\n2,1,5,5\n3,0,0,1\n", Direction::lower_better);
  EXPECT_EQ(wins_from_scores(lo, TiePolicy::first).counts(), (std::vector<std::int64_t>{2, 1, 0}));
}

TEST(WinsFromScores, RandomPolicyIsSeededAndConservesTotal) {
  std::string text = "dataset,a,b,c\n";
  for (int i = 0; i < 200; ++i) text += std::to_string(i) + ",1,1,1\n";
  const ScoreMatrix s = scores_from(text);
  const WinCounts x = wins_from_scores(s, TiePolicy::random, 5);
  EXPECT_EQ(x.n(), 200);
  EXPECT_EQ(x.counts(), wins_from_scores(s, TiePolicy::random, 5).counts());
  EXPECT_NE(x.counts(), wins_from_scores(s, TiePolicy::random, 6).counts());
  for (auto c : x.counts()) EXPECT_GT(c, 40);
}

TEST(WinsFromScores, FractionalRoundingKeepsTotal) {
  // three three-way ties give exactly one win each; a two-way tie splits 0.5/0.5
  const ScoreMatrix s =
      scores_from("dataset,a,b,c\n1,1,1,1\n2,1,1,1\n3,1,1,1\n4,2,2,0\n5,0,0,9\n");
  const WinCounts w = wins_from_scores(s, TiePolicy::all_fractional_rounded);
  EXPECT_EQ(w.n(), 5);
  EXPECT_EQ(w.counts(), (std::vector<std::int64_t>{2, 1, 2}));
}

TEST(RanksFromScores, Midranks) {
  const ScoreMatrix s = scores_from("dataset,a,b,c,d\n1,0.9,0.5,0.5,0.1\n2,1,2,3,4\n");
  const RankMatrix r = ranks_from_scores(s);
  EXPECT_EQ(r.ranks[0], (std::vector<double>{1, 2.5, 2.5, 4}));
  EXPECT_EQ(r.ranks[1], (std::vector<double>{4, 3, 2, 1}));
  EXPECT_EQ(r.rows_with_ties, 1u);
  const ScoreMatrix lo = scores_from("dataset,a,b,c,d\n2,1,2,3,4\n", Direction::lower_better);
  EXPECT_EQ(ranks_from_scores(lo).ranks[0], (std::vector<double>{1, 2, 3, 4}));
}

TEST(PolicyNames, RoundTrip) {
  for (auto p : {TiePolicy::random, TiePolicy::first, TiePolicy::all_fractional_rounded}) {
    EXPECT_EQ(parse_tie_policy(to_string(p)), p);
  }
  EXPECT_EQ(parse_direction("lower_better"), Direction::lower_better);
  EXPECT_THROW(parse_direction("sideways"), std::invalid_argument);
  EXPECT_THROW(parse_tie_policy("coin"), std::invalid_argument);
}
