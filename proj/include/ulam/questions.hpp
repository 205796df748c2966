#pragma once

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "core.hpp"

namespace ulam {

inline constexpr int kMaxIntervals = 4;

struct Interval {
  std::uint64_t lo;
  std::uint64_t hi;  // inclusive
  std::uint64_t size() const { return hi - lo + 1; }
  bool contains(std::uint64_t x) const { return lo <= x && x <= hi; }
  bool operator==(const Interval&) const = default;
};

// Sorted, disjoint, non-touching intervals. Any number is representable so
// that intermediate results can be inspected; is_valid() enforces the budget.
class Question {
 public:
  Question() = default;
  explicit Question(std::vector<Interval> iv) : iv_(std::move(iv)) { normalize(); }

  const std::vector<Interval>& intervals() const { return iv_; }
  std::size_t count() const { return iv_.size(); }
  bool empty() const { return iv_.empty(); }
  bool is_valid(std::size_t budget = kMaxIntervals) const { return iv_.size() <= budget; }

  bool contains(std::uint64_t x) const {
    auto it = std::upper_bound(iv_.begin(), iv_.end(), x, [](std::uint64_t v, const Interval& i) { return v < i.lo; });
    return it != iv_.begin() && std::prev(it)->contains(x);
  }

  std::string str() const {
    std::ostringstream os;
    for (std::size_t k = 0; k < iv_.size(); ++k) os << (k ? "," : "") << iv_[k].lo << '-' << iv_[k].hi;
    return os.str();
  }

  static Question parse(const std::string& text) {
    std::vector<Interval> iv;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      if (tok.empty()) continue;
      auto dash = tok.find('-');
      if (dash == std::string::npos) throw PreconditionError("bad interval literal: " + tok);
      std::uint64_t lo = std::stoull(tok.substr(0, dash)), hi = std::stoull(tok.substr(dash + 1));
      if (lo > hi) throw PreconditionError("bad interval literal: " + tok);
      iv.push_back({lo, hi});
    }
    return Question(std::move(iv));
  }

  bool operator==(const Question&) const = default;

 private:
  void normalize() {
    std::sort(iv_.begin(), iv_.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    std::vector<Interval> out;
    for (const Interval& i : iv_) {
      if (!out.empty() && i.lo <= out.back().hi + 1)
        out.back().hi = std::max(out.back().hi, i.hi);
      else
        out.push_back(i);
    }
    iv_ = std::move(out);
  }

  std::vector<Interval> iv_;
};

inline void check_in_universe(const GameState& s, const Question& q) {
  if (!q.empty() && q.intervals().back().hi >= s.universe().size())
    throw PreconditionError("interval outside the universe");
}

// Walks the state runs cut at the question boundaries; f(level, len, inQ).
template <class F>
void for_each_piece(const GameState& s, const Question& q, F&& f) {
  const auto& iv = q.intervals();
  std::size_t k = 0;
  for (const Run& r : s.runs()) {
    std::uint64_t x = r.lo, end = r.lo + r.len;
    while (x < end) {
      while (k < iv.size() && iv[k].hi < x) ++k;
      if (k < iv.size() && iv[k].lo <= x) {
        std::uint64_t stop = std::min(end, iv[k].hi + 1);
        f(r.level, stop - x, true);
        x = stop;
      } else {
        std::uint64_t stop = k < iv.size() ? std::min(end, iv[k].lo) : end;
        f(r.level, stop - x, false);
        x = stop;
      }
    }
  }
}

inline QuestionType question_type(const GameState& s, const Question& q) {
  check_in_universe(s, q);
  QuestionType a;
  for_each_piece(s, q, [&](int level, std::uint64_t len, bool in) {
    if (in && level < kEliminated) a[level] += len;
  });
  return a;
}

inline GameState apply_answer(const GameState& s, const Question& q, Answer ans) {
  check_in_universe(s, q);
  std::vector<Run> out;
  std::uint64_t pos = 0;
  for_each_piece(s, q, [&](int level, std::uint64_t len, bool in) {
    bool lied = (ans == Answer::Yes) != in;
    int nl = std::min(level + (lied ? 1 : 0), kEliminated);
    out.push_back({nl, pos, len});
    pos += len;
  });
  return GameState::from_runs(s.universe().m, std::move(out));
}

inline bool is_balanced_type(const StateType& t, const QuestionType& a) {
  int q = character(t);
  if (q == 0) throw PreconditionError("state final");
  u128 wy = volume(apply_answer_type(t, a, Answer::Yes), q - 1);
  u128 wn = volume(apply_answer_type(t, a, Answer::No), q - 1);
  return (wy > wn ? wy - wn : wn - wy) <= 1;
}

inline bool is_balanced(const GameState& s, const Question& q) {
  return is_balanced_type(s.type(), question_type(s, q));
}

}  // namespace ulam
