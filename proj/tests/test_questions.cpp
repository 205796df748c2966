#include <gtest/gtest.h>

#include <random>

#include <ulam/questions.hpp>

using namespace ulam;

TEST(Question, NormalizationMergesAndSorts) {
  Question q({{9, 9}, {0, 3}, {4, 5}, {7, 8}});
  EXPECT_EQ(q.str(), "0-5,7-9");
  EXPECT_EQ(q.count(), 2u);
  EXPECT_EQ(Question(q.intervals()), q);
}

TEST(Question, ParseRoundTrip) {
  auto q = Question::parse("0-3,9-9,14-20");
  EXPECT_EQ(q.str(), "0-3,9-9,14-20");
  EXPECT_TRUE(q.is_valid());
  EXPECT_FALSE(Question::parse("0-0,2-2,4-4,6-6,8-8").is_valid());
  EXPECT_THROW(Question::parse("5-3"), PreconditionError);
  EXPECT_THROW(Question::parse("7"), PreconditionError);
}

TEST(QuestionType, Examples) {
  auto s = GameState::initial(3);
  EXPECT_EQ(question_type(s, Question{}), (QuestionType{0, 0, 0, 0}));
  EXPECT_EQ(question_type(s, Question({{0, 3}})), (QuestionType{4, 0, 0, 0}));
}

TEST(QuestionType, MatchesMembershipCount) {
  std::mt19937_64 rng(5);
  for (int it = 0; it < 2000; ++it) {
    int m = 1 + int(rng() % 8);
    std::uint64_t n = std::uint64_t(1) << m;
    std::vector<int> lv(n);
    for (auto& l : lv) l = int(rng() % 5);
    auto s = GameState::from_levels(m, lv);
    std::vector<Interval> iv;
    for (int k = 0; k < 4; ++k) {
      std::uint64_t a = rng() % n, b = rng() % n;
      iv.push_back({std::min(a, b), std::max(a, b)});
    }
    Question q(iv);
    QuestionType expect;
    for (std::uint64_t x = 0; x < n; ++x)
      if (q.contains(x) && lv[x] < 4) ++expect[lv[x]];
    ASSERT_EQ(question_type(s, q), expect);
  }
}

TEST(Balance, Examples) {
  std::vector<int> lv{3, 3};
  auto two = GameState::from_levels(1, lv);
  EXPECT_TRUE(is_balanced(two, Question({{0, 0}})));
  EXPECT_TRUE(is_balanced_type({1, 8, 28, 56}, {1, 4, 10, 22}));
  EXPECT_EQ(volume(apply_answer_type({1, 8, 28, 56}, {1, 4, 10, 22}, Answer::Yes), 9), u128(494));
  EXPECT_EQ(volume(apply_answer_type({1, 8, 28, 56}, {1, 4, 10, 22}, Answer::No), 9), u128(494));
  EXPECT_FALSE(is_balanced_type({0, 0, 0, 4}, {0, 0, 0, 3}));
  EXPECT_THROW(is_balanced_type({0, 0, 0, 1}, {0, 0, 0, 0}), PreconditionError);
}

TEST(Balance, ImpliesCharacterDrop) {
  std::mt19937_64 rng(9);
  int balanced = 0;
  for (int it = 0; it < 100000; ++it) {
    StateType t{rng() % 4, rng() % 20, rng() % 100, rng() % 400};
    if (t.total() < 2) continue;
    QuestionType a{rng() % (t[0] + 1), rng() % (t[1] + 1), rng() % (t[2] + 1), rng() % (t[3] + 1)};
    if (!is_balanced_type(t, a)) continue;
    ++balanced;
    int q = character(t);
    ASSERT_LE(character(apply_answer_type(t, a, Answer::Yes)), q - 1);
    ASSERT_LE(character(apply_answer_type(t, a, Answer::No)), q - 1);
  }
  EXPECT_GT(balanced, 0);
}
