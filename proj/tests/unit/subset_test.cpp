#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <vector>

#include "bestsubset/rng.hpp"
#include "bestsubset/simulate.hpp"
#include "bestsubset/subset.hpp"

using namespace bestsubset;

namespace {

WinCounts reconstructed_study() {
  std::vector<std::int64_t> counts = {30, 16, 9, 8, 7, 6, 5, 4, 4, 3, 3, 3, 2, 2, 2, 2, 2, 1,
                                      1,  1,  1, 1, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0};
  std::vector<std::string> labels = {"random_forest", "adaboost", "knn"};
  for (std::size_t i = labels.size(); i < counts.size(); ++i) {
    labels.push_back("classifier_" + std::to_string(i + 1));
  }
  return WinCounts(labels, counts);
}

}  // namespace

TEST(WinCounts, Validation) {
  EXPECT_THROW(WinCounts({}, {}), std::invalid_argument);
  EXPECT_THROW(WinCounts({"a", "a"}, {1, 2}), std::invalid_argument);
  EXPECT_THROW(WinCounts({"a", "b"}, {1, -2}), std::invalid_argument);
  EXPECT_THROW(WinCounts({"a"}, {1, 2}), std::invalid_argument);
  const WinCounts w({4, 0, 2});
  EXPECT_EQ(w.n(), 6);
  EXPECT_EQ(w.labels(), (std::vector<std::string>{"1", "2", "3"}));
}

TEST(DistributionType, Validation) {
  EXPECT_THROW(Distribution({}), std::invalid_argument);
  EXPECT_THROW(Distribution({0.5, 0.6}), std::invalid_argument);
  EXPECT_THROW(Distribution({1.2, -0.2}), std::invalid_argument);
  const Distribution p({0.2, 0.4, 0.4});
  EXPECT_EQ(p.argmax(), 1u);
  EXPECT_EQ(p.max_multiplicity(), 2u);
  EXPECT_EQ(p.sorted_desc(), (std::vector<double>{0.4, 0.4, 0.2}));
}

TEST(Mle, DirectDivision) {
  const Distribution p = mle(WinCounts({3, 1, 0}));
  EXPECT_EQ(p[0], 0.75);
  EXPECT_EQ(p[1], 0.25);
  EXPECT_EQ(p[2], 0.0);
  EXPECT_EQ(p.empirical_denominator(), 4);
}

TEST(Mle, ReconstructedStudyLeaders) {
  const Distribution p = mle(reconstructed_study());
  EXPECT_NEAR(p[0], 0.2564, 5e-5);
  EXPECT_NEAR(p[1], 0.1368, 5e-5);
  EXPECT_NEAR(p[2], 0.0769, 5e-5);
}

TEST(Mle, EmptySampleRejected) {
  EXPECT_THROW(mle(WinCounts({0, 0, 0})), std::invalid_argument);
}

TEST(Winners, Ties) {
  EXPECT_EQ(winners(WinCounts({5, 5, 2})), (std::vector<std::string>{"1", "2"}));
  EXPECT_EQ(winners(WinCounts({9, 1})), (std::vector<std::string>{"1"}));
  EXPECT_EQ(winners(WinCounts({1, 1, 1})), (std::vector<std::string>{"1", "2", "3"}));
}

TEST(MembersWithin, SaturationAndZeroWidth) {
  const std::vector<double> p = {0.5, 0.3, 0.2, 0.0};
  EXPECT_EQ(members_within(p, 0.5).size(), 4u);
  EXPECT_EQ(members_within(p, 0.0), (std::vector<std::size_t>{0}));
  const std::vector<double> tied = {0.4, 0.4, 0.2};
  EXPECT_EQ(members_within(tied, 0.0), (std::vector<std::size_t>{0, 1}));
}

TEST(MembersWithin, BoundaryInclusive) {
  // 7/10 - 4/10 is not exactly 0.3 in binary
  const std::vector<double> p = {7.0 / 10, 4.0 / 10};
  EXPECT_EQ(members_within(p, 0.3).size(), 2u);
  EXPECT_EQ(members_within(p, 0.3 - 1e-9).size(), 1u);
}

TEST(MembersWithin, MonotoneInWidth) {
  Rng rng(5);
  for (int t = 0; t < 200; ++t) {
    const Distribution p = uniform_simplex(2 + rng.below(20), t);
    const double w1 = rng.uniform() * 0.5, w2 = w1 + rng.uniform() * 0.5;
    const auto small = members_within(p.probs(), w1), large = members_within(p.probs(), w2);
    EXPECT_TRUE(std::includes(large.begin(), large.end(), small.begin(), small.end()));
  }
}

TEST(SelectSubset, ArgmaxAlwaysIncluded) {
  const auto s = select_subset(WinCounts({10, 0, 0}), 0.05, SubsetMethod::finite);
  EXPECT_NE(std::find(s.members.begin(), s.members.end(), "1"), s.members.end());
  Rng rng(17);
  for (int t = 0; t < 100; ++t) {
    const Distribution p = uniform_simplex(2 + rng.below(10), 500 + t);
    const WinCounts c = sample_counts(p, 2 + static_cast<std::int64_t>(rng.below(300)), rng);
    for (auto method : {SubsetMethod::finite, SubsetMethod::asymptotic}) {
      const auto s = select_subset(c, 0.1, method);
      for (const auto& w : s.argmax_set) {
        EXPECT_NE(std::find(s.members.begin(), s.members.end(), w), s.members.end());
      }
    }
  }
}

TEST(SelectSubset, RelabelingPermutesMembers) {
  const std::vector<std::int64_t> counts = {40, 35, 12, 9, 4};
  const std::vector<std::string> labels = {"a", "b", "c", "d", "e"};
  const std::vector<std::size_t> perm = {3, 0, 4, 2, 1};
  std::vector<std::int64_t> pc;
  std::vector<std::string> pl;
  for (auto i : perm) {
    pc.push_back(counts[i]);
    pl.push_back(labels[i]);
  }
  for (auto method : {SubsetMethod::finite, SubsetMethod::asymptotic}) {
    auto a = select_subset(WinCounts(labels, counts), 0.05, method).members;
    auto b = select_subset(WinCounts(pl, pc), 0.05, method).members;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    EXPECT_EQ(a, b);
  }
}

TEST(SelectSubset, FiniteUsesTwiceTheRadius) {
  const WinCounts c({300, 150, 100, 50});
  const auto s = select_subset(c, 0.05, SubsetMethod::finite);
  EXPECT_EQ(s.detail.m_used, choose_m(0.045));
  EXPECT_NEAR(s.width, 2 * s.detail.width, 0.0);
  EXPECT_NEAR(*s.detail.delta_1 + *s.detail.delta_2, 0.05, 1e-17);
  SubsetConfig fixed;
  fixed.m = 4;
  EXPECT_EQ(select_subset(c, 0.05, SubsetMethod::finite, fixed).detail.m_used, 4);
}

TEST(SelectSubset, SaturatedWhenWidthExceedsLeader) {
  const auto s = select_subset(WinCounts({3, 2, 1}), 0.05, SubsetMethod::finite);
  EXPECT_TRUE(s.saturated);
  EXPECT_EQ(s.members.size(), 3u);
}

TEST(SelectSubset, FiniteNeedsTwoObservations) {
  EXPECT_THROW(select_subset(WinCounts({1, 0}), 0.05, SubsetMethod::finite), std::invalid_argument);
  EXPECT_NO_THROW(select_subset(WinCounts({1, 0}), 0.05, SubsetMethod::asymptotic));
}

TEST(SelectSubset, AsymptoticAdvisoryOnSmallGap) {
  const auto close = select_subset(WinCounts({11, 10, 9}), 0.05, SubsetMethod::asymptotic);
  EXPECT_TRUE(close.advisory.has_value());
  const auto clear = select_subset(WinCounts({900, 50, 50}), 0.05, SubsetMethod::asymptotic);
  EXPECT_FALSE(clear.advisory.has_value());
}

TEST(SelectSubset, ReconstructedStudy) {
  const WinCounts c = reconstructed_study();
  // T = 2R exceeds the leading frequency here, so the guaranteed rule keeps everything
  const auto finite = select_subset(c, 0.05, SubsetMethod::finite);
  EXPECT_TRUE(finite.saturated);
  EXPECT_EQ(finite.members.size(), c.size());
  const auto asym = select_subset(c, 0.05, SubsetMethod::asymptotic);
  EXPECT_EQ(asym.members, (std::vector<std::string>{"random_forest", "adaboost"}));
}

TEST(SubsetMethodNames, RoundTrip) {
  EXPECT_EQ(parse_subset_method("finite"), SubsetMethod::finite);
  EXPECT_EQ(parse_subset_method(to_string(SubsetMethod::asymptotic)), SubsetMethod::asymptotic);
  EXPECT_THROW(parse_subset_method("bogus"), std::invalid_argument);
}
