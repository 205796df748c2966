// One line per acceptance criterion: "criterion N PASS|FAIL details".

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include <ulam/niceness.hpp>
#include <ulam/strategy.hpp>
#include <ulam/synthesis.hpp>
#include <ulam/verify.hpp>

#include "non_nice_table.hpp"
#include "support.hpp"

using namespace ulam;
using Clock = std::chrono::steady_clock;

namespace {

int failed = 0;

double secs(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

void report(int n, bool ok, const std::string& detail) {
  if (!ok) ++failed;
  std::cout << "criterion " << n << ' ' << (ok ? "PASS" : "FAIL") << ' ' << detail << std::endl;
}

std::string fmt(double s) {
  char b[32];
  std::snprintf(b, sizeof b, "%.1fs", s);
  return b;
}

void c1() {
  bool ok = true;
  std::ostringstream d;
  const int want[] = {7, 13, 16, 18, 23};
  int i = 0;
  for (int m : {1, 4, 6, 8, 12}) {
    auto t0 = Clock::now();
    auto r = verify_perfect(m);
    double s = secs(t0);
    bool good = r.ok() && r.max_depth == n_min(m) && n_min(m) == want[i++];
    ok = ok && good;
    d << "m=" << m << ":depth " << r.max_depth << "/" << n_min(m) << ",nodes " << r.nodes << "," << fmt(s) << ' ';
  }
  report(1, ok, d.str());
}

void c2() {
  VerifyOptions o;
  o.jobs = int(std::max(1u, std::thread::hardware_concurrency()));
  auto t0 = Clock::now();
  auto r = verify_perfect(17, o);
  std::ostringstream d;
  d << "mode exhaustive memoized, jobs " << o.jobs << ", depth " << r.max_depth << "/" << n_min(17) << ", nodes " << r.nodes
    << ", failures " << r.failure_count << ", " << fmt(secs(t0));
  report(2, r.ok() && r.max_depth == 29 && n_min(17) == 29, d.str());
}

void c3() {
  std::set<std::tuple<int, std::uint64_t, std::uint64_t, std::uint64_t, std::uint64_t>> got, want;
  auto rows = shared_dp().non_nice_table(13);
  bool high = false;
  for (const auto& r : rows) {
    got.insert({r.ch, r.t1, r.t2, r.t3_min, r.t3_max});
    high = high || r.ch >= 12;
  }
  for (const auto& r : ulam::testing::kNonNice) want.insert({r.ch, r.t1, r.t2, r.lo, r.hi});
  bool ends = got.count({6, 2, 1, 6, 13}) && got.count({11, 25, 30, 11, 13});
  std::ostringstream d;
  d << got.size() << " groups (reference " << want.size() << "), none at ch 12/13: "
    << (high ? "no" : "yes");
  report(3, got == want && ends && !high, d.str());
}

void c4() {
  auto& dp = shared_dp();
  int pairs = 0, raw = 0, eff = 0;
  for (auto [t1, t2] : dp.envelope(13)) {
    if (t1 + t2 <= 1) continue;
    ++pairs;
    std::uint64_t a = dp.m_tilde(t1, t2), b = dp.m_unconstrained(t1, t2);
    if (a != b) ++raw;
    // smallest t3 making the state 0-typical
    std::uint64_t z = 0;
    if (t2 + 1 >= t1) {
      while (z < std::uint64_t(character({0, t1, t2, z}))) ++z;
    } else {
      z = ~std::uint64_t(0);
    }
    if (std::max(a, z) != std::max(b, z)) ++eff;
  }
  std::ostringstream d;
  d << pairs << " pairs, effective thresholds differ on " << eff << ", raw values differ on " << raw
    << " (all below the 0-typical floor)";
  report(4, eff == 0, d.str());
}

void c5() {
  int rows = 0, bad = 0;
  std::string note;
  for (const auto& r : reference_tables()) {
    ++rows;
    auto y = apply_answer_type(r.state, r.question, Answer::Yes), n = apply_answer_type(r.state, r.question, Answer::No);
    if (y != r.yes || n != r.no) {
      ++bad;
      note += " " + r.state.str() + r.question.str() + "->" + y.str() + "/" + n.str() + " tabulated " + r.yes.str() + "/" + r.no.str();
    }
  }
  std::ostringstream d;
  d << rows << " rows, " << bad << " mismatch";
  if (bad) d << ":" << note << " (tabulated no child repeats the next row's)";
  report(5, bad == 0, d.str());
}

// All subsets of the support with at most 4 line runs, checked for the exact
// target and well-shaped children.
bool exact_exists(const Necklace& k, const QuestionType& target) {
  std::vector<int> lv = k.levels();
  int n = int(lv.size());
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    SupportQuestion q;
    for (int i = 0; i < n; ++i)
      if (mask >> i & 1) {
        if (!q.empty() && q.back().hi + 1 == std::uint64_t(i)) q.back().hi = i;
        else q.push_back({std::uint64_t(i), std::uint64_t(i)});
      }
    if (q.size() > 4 || question_type(k, q) != target) continue;
    if (is_well_shaped(apply_answer(k, q, Answer::Yes)) && is_well_shaped(apply_answer(k, q, Answer::No))) return true;
  }
  return false;
}

void c6() {
  auto t0 = Clock::now();
  std::set<std::vector<int>> seen;
  std::uint64_t states = 0, cases = 0, swapped = 0, bad = 0, swapped_unjustified = 0;
  const int kMaxTotal = 8;
  auto check = [&](const Necklace& k, const QuestionType& a) {
    ++cases;
    auto r = synthesize(k, a, Construction::Theorem1);
    if (!r) return ++bad, void();
    QuestionType want = r->swapped ? complement(k.type(), a) : a;
    if (question_type(k, r->spans) != want || r->spans.size() > 4 || !is_well_shaped(apply_answer(k, r->spans, Answer::Yes)) ||
        !is_well_shaped(apply_answer(k, r->spans, Answer::No)))
      return ++bad, void();
    if (r->swapped) {
      ++swapped;
      if (k.size() <= 20 && exact_exists(k, a)) ++swapped_unjustified;
    }
  };
  auto all_targets = [&](const Necklace& k) {
    StateType t = k.type();
    for (std::uint64_t a = 0; a <= t[0]; ++a)
      for (std::uint64_t b = 0; b <= (t[1] + 1) / 2; ++b)
        for (std::uint64_t c = 0; c <= (t[2] + 1) / 2; ++c)
          for (std::uint64_t d = 0; d <= std::min(t[3], (2 * t[3] + 2) / 3); ++d) check(k, {a, b, c, d});
  };
  for (int tpl = 0; tpl < 4; ++tpl) {
    std::array<std::uint64_t, 12> sz{};
    std::function<void(int, int)> rec = [&](int i, int left) {
      if (i == 12) {
        std::uint64_t total = 0;
        for (auto s : sz) total += s;
        if (total < 2) return;
        for (std::uint64_t sh = 0; sh < total; ++sh) {
          Necklace k = ulam::testing::from_template(tpl, sz, sh);
          if (!seen.insert(k.levels()).second) continue;
          ++states;
          all_targets(k);
        }
        return;
      }
      for (int s = 0; s <= std::min(3, left); ++s) {
        sz[i] = s;
        rec(i + 1, left - s);
      }
      sz[i] = 0;
    };
    rec(0, kMaxTotal);
  }
  std::uint64_t sweep_cases = cases;
  std::mt19937_64 rng(20261016);
  for (int it = 0; it < 10000; ++it) {
    Necklace k = ulam::testing::random_well_shaped(rng, 60, 0.1);
    StateType t = k.type();
    QuestionType a{rng() % (t[0] + 1), rng() % ((t[1] + 1) / 2 + 1), rng() % ((t[2] + 1) / 2 + 1),
                   rng() % (std::min(t[3], (2 * t[3] + 2) / 3) + 1)};
    check(k, a);
  }
  std::ostringstream d;
  d << "sweep " << states << " necklaces (slots <= 3, support <= " << kMaxTotal << ", all rotations) " << sweep_cases
    << " targets + 10000 random; invalid " << bad << ", complement returned " << swapped << " (exact type impossible in all "
    << swapped - swapped_unjustified << " brute-forced), " << fmt(secs(t0));
  report(6, bad == 0 && swapped_unjustified == 0, d.str());
}

void c7() {
  auto t0 = Clock::now();
  std::uint64_t checked = 0, bad = 0, states = 0;
  // every well-shaped level sequence of support 2..8 against every question of at most 4 runs
  for (int n = 2; n <= 8; ++n) {
    std::vector<int> lv(n);
    for (std::uint32_t code = 0; code < (1u << (2 * n)); ++code) {
      for (int i = 0; i < n; ++i) lv[i] = code >> (2 * i) & 3;
      Necklace k = Necklace::from_levels(lv);
      if (!is_well_shaped(k)) continue;
      ++states;
      for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        SupportQuestion q;
        for (int i = 0; i < n; ++i)
          if (mask >> i & 1) {
            if (!q.empty() && q.back().hi + 1 == std::uint64_t(i)) q.back().hi = i;
            else q.push_back({std::uint64_t(i), std::uint64_t(i)});
          }
        if (q.size() > 4) continue;
        for (Answer a : {Answer::Yes, Answer::No}) {
          ++checked;
          if (predicted_counts(k, q, a) != direct_counts(k, q, a)) ++bad;
        }
      }
    }
  }
  std::uint64_t small = checked;
  std::mt19937_64 rng(7);
  for (int it = 0; it < 10000; ++it) {
    Necklace k = ulam::testing::random_well_shaped(rng, 21);  // support <= 252, inside 2^8
    auto q = ulam::testing::random_question(rng, k.size());
    for (Answer a : {Answer::Yes, Answer::No}) {
      ++checked;
      if (predicted_counts(k, q, a) != direct_counts(k, q, a)) ++bad;
    }
  }
  std::ostringstream d;
  d << states << " well-shaped supports <= 8 x all questions (" << small << " answers) + 10000 random states of support <= 252; mismatches "
    << bad << ", " << fmt(secs(t0));
  report(7, bad == 0, d.str());
}

void c8() {
  std::mt19937_64 rng(8);
  std::uint64_t rec_bad = 0, bal = 0, bal_bad = 0;
  for (int it = 0; it < 100000; ++it) {
    StateType t{rng() % 3, rng() % 40, rng() % 400, rng() % 5000};
    if (t.total() < 2) continue;
    QuestionType a{rng() % (t[0] + 1), rng() % (t[1] + 1), rng() % (t[2] + 1), 0};
    int q = 1 + int(rng() % 40);
    StateType y = apply_answer_type(t, a, Answer::Yes), n = apply_answer_type(t, a, Answer::No);
    // level-3 part chosen to balance the children when it can
    int k = character(t);
    u128 vy = volume(y, k - 1), vn = volume(n, k - 1);
    if (vn > vy) {
      u128 x = (vn - vy) / 2;
      a[3] = std::uint64_t(std::min<u128>(x, t[3]));
    }
    if (rng() % 4 == 0) a[3] = rng() % (t[3] + 1);
    y = apply_answer_type(t, a, Answer::Yes);
    n = apply_answer_type(t, a, Answer::No);
    if (volume(t, q) != volume(y, q - 1) + volume(n, q - 1)) ++rec_bad;
    if (k == 0) continue;
    u128 wy = volume(y, k - 1), wn = volume(n, k - 1);
    if ((wy > wn ? wy - wn : wn - wy) <= 1) {
      ++bal;
      if (character(y) > k - 1 || character(n) > k - 1) ++bal_bad;
    }
  }
  std::ostringstream d;
  d << "100000 triples, recursion failures " << rec_bad << "; " << bal << " balanced, character not dropping " << bal_bad;
  report(8, rec_bad == 0 && bal_bad == 0 && bal > 10000, d.str());
}

void c9() {
  auto t0 = Clock::now();
  TypeGameOracle o;
  auto& dp = shared_dp();
  int n = 0, bad = 0;
  for (std::uint64_t t1 = 0; t1 <= 6; ++t1)
    for (std::uint64_t t2 = 0; t2 <= 8; ++t2)
      for (std::uint64_t t3 = 0; t3 <= 40; ++t3) {
        StateType t{0, t1, t2, t3};
        if (t.total() <= 1) continue;
        ++n;
        if (o.nice(t) != (t3 >= dp.m_tilde(t1, t2))) ++bad;
      }
  report(9, bad == 0, std::to_string(n) + " states, disagreements " + std::to_string(bad) + ", " + fmt(secs(t0)));
}

void c10() {
  auto t0 = Clock::now();
  std::map<std::vector<int>, int> memo;
  std::uint64_t multi = 0;
  // worst-case questions to finish, -1 if the endgame ever breaks its budget
  std::function<int(const Necklace&)> depth = [&](const Necklace& k) -> int {
    if (k.size() <= 1) return 0;
    auto key = k.levels();
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    auto sp = endgame_spans(k);
    if (sp.size() != 1) ++multi;
    int q = character(k.type());
    int dy = depth(apply_answer(k, sp, Answer::Yes)), dn = depth(apply_answer(k, sp, Answer::No));
    int r = (dy < 0 || dn < 0 || std::max(dy, dn) + 1 > q) ? -1 : std::max(dy, dn) + 1;
    return memo[key] = r;
  };
  int states = 0, bad = 0, tiny = 0, tiny_bad = 0;
  for (int j = -1; j <= 2; ++j)
    for (int n = 0; n <= 64; ++n)
      for (int pos = 0; pos <= (j < 0 ? 0 : n); ++pos) {
        std::vector<int> lv(n, 3);
        if (j >= 0) lv.insert(lv.begin() + pos, j);
        if (lv.size() < 2) continue;
        Necklace k = Necklace::from_levels(lv);
        ++states;
        if (depth(k) != character(k.type())) ++bad;
        if (lv.size() <= 8) {
          ++tiny;
          if (!verify_optimal_tiny(k.type())) ++tiny_bad;
        }
      }
  std::ostringstream d;
  d << states << " states, depth != character " << bad << ", multi-interval questions " << multi << "; " << tiny
    << " supports <= 8 with character-1 insufficient except " << tiny_bad << ", " << fmt(secs(t0));
  report(10, bad == 0 && multi == 0 && tiny_bad == 0, d.str());
}

}  // namespace

int main() {
  c1();
  c2();
  c3();
  c4();
  c5();
  c6();
  c7();
  c8();
  c9();
  c10();
  return failed ? 1 : 0;
}
