#include <gtest/gtest.h>

#include <ulam/verify.hpp>

using namespace ulam;

TEST(Verify, FinalStateNeedsNoQuestion) {
  auto st = GameState::from_levels(1, {3, 4});
  auto rep = verify_state(st, 0);
  EXPECT_TRUE(rep.ok());
  EXPECT_EQ(rep.max_depth, 0);
}

TEST(Verify, BudgetIsEnforced) {
  auto st = GameState::from_levels(1, {3, 3});
  EXPECT_TRUE(verify_state(st, 1).ok());
  auto rep = verify_state(st, 0);
  EXPECT_FALSE(rep.ok());
  ASSERT_FALSE(rep.failures.empty());
  EXPECT_NE(rep.failures[0].reason.find("depth exceeded"), std::string::npos);
}

TEST(Verify, SmallPerfectDepths) {
  auto r1 = verify_perfect(1);
  EXPECT_TRUE(r1.ok()) << r1.str();
  EXPECT_EQ(r1.max_depth, 7);
  EXPECT_EQ(r1.nodes, 20u);
  auto r4 = verify_perfect(4);
  EXPECT_TRUE(r4.ok()) << r4.str();
  EXPECT_EQ(r4.max_depth, 13);
  EXPECT_EQ(r4.nodes, 276u);
}

TEST(Verify, MemoMatchesPlainTraversal) {
  for (int m : {0, 1, 4, 6, 7, 8}) {
    VerifyOptions plain;
    plain.memo = false;
    auto a = verify_perfect(m), b = verify_perfect(m, plain);
    EXPECT_TRUE(a.ok()) << m;
    EXPECT_TRUE(b.ok()) << m;
    EXPECT_EQ(a.max_depth, b.max_depth) << m;
    EXPECT_EQ(a.max_depth, n_min(m)) << m;
  }
}

TEST(Verify, ThreadedMatchesSerial) {
  VerifyOptions par;
  par.jobs = 3;
  for (int m : {4, 6}) {
    auto a = verify_perfect(m), b = verify_perfect(m, par);
    EXPECT_EQ(a.ok(), b.ok());
    EXPECT_EQ(a.max_depth, b.max_depth);
  }
  auto f = verify_perfect(2, par);
  EXPECT_FALSE(f.ok());
}

TEST(Verify, KnownImpossibleSizesFailWithNote) {
  for (int m : {2, 3, 5}) {
    auto r = verify_perfect(m);
    EXPECT_FALSE(r.ok()) << m;
    ASSERT_FALSE(r.notes.empty());
    EXPECT_NE(r.str().find("failure expected"), std::string::npos);
    EXPECT_NE(r.str().find("result FAIL"), std::string::npos);
  }
}

TEST(Verify, FailurePathsReplay) {
  auto r = verify_perfect(2);
  ASSERT_FALSE(r.failures.empty());
  // every reported path is a real answer sequence from the root
  Strategy strat;
  for (const auto& f : r.failures) {
    GameState st = GameState::initial(2);
    for (char c : f.path == "-" ? std::string() : f.path) {
      auto d = strat.next_question(st);
      ASSERT_FALSE(d.final);
      st = apply_answer(st, d.question, c == 'y' ? Answer::Yes : Answer::No);
    }
    EXPECT_NE(f.reason.find(st.type().str()), std::string::npos) << f.path << ' ' << f.reason;
  }
}

TEST(Verify, SpencerModeRuns) {
  VerifyOptions o;
  o.mode = Mode::Spencer;
  auto r = verify_perfect(6, o);
  EXPECT_EQ(r.mode, Mode::Spencer);
  EXPECT_GT(r.nodes, 0u);
  EXPECT_NE(r.str().find("mode spencer"), std::string::npos);
}

TEST(Verify, SampledTraversal) {
  auto r = verify_sampled(12, 200, 7);
  EXPECT_TRUE(r.ok()) << r.str();
  EXPECT_LE(r.max_depth, n_min(12));
  EXPECT_NE(r.str().find("traversal sampled"), std::string::npos);
}

TEST(Verify, ReportFormat) {
  auto s = verify_perfect(1).str();
  EXPECT_EQ(s.rfind("m 1\nmode perfect\nbudget 7\ntraversal exhaustive\n", 0), 0u);
  EXPECT_NE(s.find("max_depth 7\nfailures 0\n"), std::string::npos);
  EXPECT_EQ(s.substr(s.size() - 12), "result PASS\n");
}

TEST(Verify, OptimalTiny) {
  EXPECT_TRUE(verify_optimal_tiny({0, 0, 0, 2}));
  EXPECT_TRUE(verify_optimal_tiny({0, 0, 2, 0}));
  EXPECT_TRUE(verify_optimal_tiny({0, 0, 0, 4}));
  EXPECT_EQ(tiny_depth({0, 0, 0, 2}), 1);
  EXPECT_EQ(tiny_depth({0, 0, 0, 4}), 2);
  EXPECT_EQ(tiny_depth({0, 0, 2, 0}), 3);
  EXPECT_THROW(tiny_depth({0, 0, 0, 9}), PreconditionError);
}
