#include <gtest/gtest.h>

#include <functional>
#include <set>
#include <tuple>

#include <ulam/niceness.hpp>

#include "non_nice_table.hpp"

using namespace ulam;

TEST(MTilde, BaseCases) {
  auto& dp = shared_dp();
  EXPECT_EQ(dp.m_tilde(0, 0), 1u);
  EXPECT_EQ(dp.m_tilde(1, 0), 0u);
  EXPECT_EQ(dp.m_tilde(0, 1), 0u);
  EXPECT_EQ(dp.m_unconstrained(0, 0), 1u);
}

TEST(MTilde, TableConsistent) {
  auto& dp = shared_dp();
  EXPECT_EQ(dp.m_tilde(1, 5), 8u);
  EXPECT_EQ(dp.m_unconstrained(1, 5), 8u);
  EXPECT_EQ(dp.m_tilde(2, 1), 14u);
  // every reference range ends one below the threshold
  for (const auto& r : ulam::testing::kNonNice) EXPECT_EQ(dp.m_tilde(r.t1, r.t2), r.hi + 1) << r.t1 << ',' << r.t2;
}

TEST(MinC, SelfReferenceSkipped) {
  auto& dp = shared_dp();
  EXPECT_FALSE(dp.minc(2, 1, 0, 0).has_value());
  std::uint64_t best = ~std::uint64_t(0);
  for (std::uint64_t a1 = 0; a1 <= 1; ++a1)
    for (std::uint64_t a2 = 0; a2 <= 1; ++a2)
      if (auto v = dp.minc(2, 1, a1, a2)) best = std::min(best, *v);
  EXPECT_EQ(best, dp.m_tilde(2, 1));
}

TEST(ZeroTypical, Examples) {
  EXPECT_TRUE(is_0typical({0, 5, 22, 44}));
  EXPECT_FALSE(is_0typical({1, 0, 0, 5}));
  EXPECT_FALSE(is_0typical({0, 3, 1, 100}));
}

TEST(NonNiceTable, MatchesReference) {
  std::set<std::tuple<int, std::uint64_t, std::uint64_t, std::uint64_t, std::uint64_t>> got, want;
  for (const auto& r : shared_dp().non_nice_table(13)) got.insert({r.ch, r.t1, r.t2, r.t3_min, r.t3_max});
  for (const auto& r : ulam::testing::kNonNice) want.insert({r.ch, r.t1, r.t2, r.lo, r.hi});
  EXPECT_EQ(got, want);
}

TEST(NonNiceTable, SmallCharacterCaps) {
  EXPECT_TRUE(shared_dp().non_nice_table(5).empty());
  auto six = shared_dp().non_nice_table(6);
  ASSERT_EQ(six.size(), 3u);
  EXPECT_EQ(six[0].t1, 1u);
  EXPECT_EQ(six[0].t2, 5u);
  for (const auto& r : shared_dp().non_nice_table(13)) EXPECT_LE(r.ch, 11);
}

TEST(DpQtype, TableRow) {
  EXPECT_EQ(shared_dp().dp_qtype({0, 1, 3, 5}), (QuestionType{0, 1, 0, 5}));
  EXPECT_EQ(shared_dp().dp_qtype({0, 4, 4, 5}), (QuestionType{0, 2, 2, 3}));
}

// The returned types give a full perfect descent on small nice states.
TEST(DpQtype, RecursiveDescent) {
  auto& dp = shared_dp();
  std::function<bool(const StateType&, int)> win = [&](const StateType& t, int q) -> bool {
    if (t.total() <= 1) return true;
    if (character(t) > q) return false;
    if (t[1] + t[2] <= 1) return true;  // endgame
    if (!dp.in_w(t)) return win({0, t[1], t[2], dp.m_tilde(t[1], t[2])}, q);  // dominated by a nice state
    auto a = dp.dp_qtype(t);
    if (!a) return false;
    return win(apply_answer_type(t, *a, Answer::Yes), q - 1) && win(apply_answer_type(t, *a, Answer::No), q - 1);
  };
  int checked = 0;
  for (std::uint64_t t1 = 0; t1 <= 6; ++t1)
    for (std::uint64_t t2 = 0; t2 <= 8; ++t2)
      for (std::uint64_t t3 = 0; t3 <= 40; ++t3) {
        StateType t{0, t1, t2, t3};
        if (t.total() <= 1 || !dp.in_w(t)) continue;
        ++checked;
        ASSERT_TRUE(win(t, character(t))) << t;
      }
  EXPECT_GT(checked, 1000);
}

TEST(DpQtype, DominatedChildren) {
  // both children cannot be nice; a child below its threshold is padded
  auto a = shared_dp().dp_qtype({0, 4, 0, 13});
  ASSERT_TRUE(a.has_value());
  for (Answer x : {Answer::Yes, Answer::No}) {
    StateType c = apply_answer_type({0, 4, 0, 13}, *a, x);
    StateType p{0, c[1], c[2], std::max(c[3], shared_dp().m_tilde(c[1], c[2]))};
    EXPECT_LE(character(p), 7) << c;
  }
}

TEST(Oracle, SmallAgreement) {
  TypeGameOracle o;
  auto& dp = shared_dp();
  for (std::uint64_t t1 = 0; t1 <= 3; ++t1)
    for (std::uint64_t t2 = 0; t2 <= 4; ++t2)
      for (std::uint64_t t3 = 0; t3 <= 20; ++t3) {
        StateType t{0, t1, t2, t3};
        if (t1 + t2 <= 1) continue;
        EXPECT_EQ(o.nice(t), t3 >= dp.m_tilde(t1, t2)) << t;
      }
}
