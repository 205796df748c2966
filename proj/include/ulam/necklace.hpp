#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "core.hpp"
#include "questions.hpp"

namespace ulam {

// Maximal run of the support (eliminated elements removed) on one level.
struct Seg {
  int level;
  std::uint64_t len;
  bool operator==(const Seg&) const = default;
};

// Inclusive range of support indices.
struct Span {
  std::uint64_t lo;
  std::uint64_t hi;
  std::uint64_t size() const { return hi - lo + 1; }
  bool operator==(const Span&) const = default;
};

using SupportQuestion = std::vector<Span>;

inline SupportQuestion normalize(SupportQuestion q) {
  std::sort(q.begin(), q.end(), [](const Span& a, const Span& b) { return a.lo < b.lo; });
  SupportQuestion out;
  for (const Span& s : q) {
    if (!out.empty() && s.lo <= out.back().hi + 1)
      out.back().hi = std::max(out.back().hi, s.hi);
    else
      out.push_back(s);
  }
  return out;
}

// The support of a state in universe order. Positions are support indices
// 0..n-1; the circular view closes the line after index n-1.
class Necklace {
 public:
  Necklace() = default;

  explicit Necklace(const std::vector<Seg>& segs) {
    for (const Seg& s : segs) push(s.level, s.len);
  }

  static Necklace from_state(const GameState& st) {
    Necklace k;
    for (const Run& r : st.runs()) k.push(r.level, r.len);
    return k;
  }

  static Necklace from_levels(const std::vector<int>& levels) {
    Necklace k;
    for (int l : levels) k.push(l, 1);
    return k;
  }

  const std::vector<Seg>& segs() const { return segs_; }
  std::uint64_t size() const { return n_; }
  const StateType& type() const { return type_; }
  bool is_final() const { return n_ <= 1; }
  bool operator==(const Necklace& o) const { return segs_ == o.segs_; }

  std::vector<int> levels() const {
    std::vector<int> out;
    out.reserve(n_);
    for (const Seg& s : segs_) out.insert(out.end(), s.len, s.level);
    return out;
  }

 private:
  void push(int level, std::uint64_t len) {
    if (len == 0 || level >= kEliminated) return;
    if (!segs_.empty() && segs_.back().level == level)
      segs_.back().len += len;
    else
      segs_.push_back({level, len});
    n_ += len;
    type_[level] += len;
  }

  std::vector<Seg> segs_;
  std::uint64_t n_ = 0;
  StateType type_;
};

// Cuts the segments at the question boundaries; f(level, len, inQ).
template <class F>
void for_each_piece(const std::vector<Seg>& segs, const SupportQuestion& q, F&& f) {
  std::size_t k = 0;
  std::uint64_t base = 0;
  for (const Seg& s : segs) {
    std::uint64_t x = base, end = base + s.len;
    while (x < end) {
      while (k < q.size() && q[k].hi < x) ++k;
      if (k < q.size() && q[k].lo <= x) {
        std::uint64_t stop = std::min(end, q[k].hi + 1);
        f(s.level, stop - x, true);
        x = stop;
      } else {
        std::uint64_t stop = k < q.size() ? std::min(end, q[k].lo) : end;
        f(s.level, stop - x, false);
        x = stop;
      }
    }
    base = end;
  }
}

inline QuestionType question_type(const Necklace& k, const SupportQuestion& q) {
  QuestionType a;
  for_each_piece(k.segs(), q, [&](int level, std::uint64_t len, bool in) {
    if (in) a[level] += len;
  });
  return a;
}

// Answered support with eliminated elements kept as level 4 cells.
inline std::vector<Seg> answered_cells(const Necklace& k, const SupportQuestion& q, Answer ans) {
  std::vector<Seg> out;
  for_each_piece(k.segs(), q, [&](int level, std::uint64_t len, bool in) {
    bool lied = (ans == Answer::Yes) != in;
    int nl = std::min(level + (lied ? 1 : 0), kEliminated);
    if (!out.empty() && out.back().level == nl)
      out.back().len += len;
    else
      out.push_back({nl, len});
  });
  return out;
}

inline Necklace apply_answer(const Necklace& k, const SupportQuestion& q, Answer ans) {
  return Necklace(answered_cells(k, q, ans));
}

// Support index <-> universe element conversion for a state.
class SupportMap {
 public:
  explicit SupportMap(const GameState& s) {
    for (const Run& r : s.runs())
      if (r.level < kEliminated) {
        starts_.push_back(r.lo);
        offs_.push_back(n_);
        n_ += r.len;
      }
  }

  std::uint64_t size() const { return n_; }

  std::uint64_t element(std::uint64_t idx) const {
    auto it = std::upper_bound(offs_.begin(), offs_.end(), idx);
    std::size_t j = std::size_t(it - offs_.begin()) - 1;
    return starts_[j] + (idx - offs_[j]);
  }

  // Support index of the first support element >= x (size() if none).
  std::uint64_t index_at_or_after(std::uint64_t x, const GameState& s) const {
    std::uint64_t idx = 0;
    for (const Run& r : s.runs()) {
      if (r.level >= kEliminated) continue;
      if (x <= r.lo) return idx;
      if (x <= r.hi()) return idx + (x - r.lo);
      idx += r.len;
    }
    return idx;
  }

  Question to_universe(const SupportQuestion& q) const {
    std::vector<Interval> iv;
    for (const Span& sp : q) iv.push_back({element(sp.lo), element(sp.hi)});
    return Question(std::move(iv));
  }

  SupportQuestion to_support(const Question& q, const GameState& s) const {
    SupportQuestion out;
    for (const Interval& i : q.intervals()) {
      std::uint64_t a = index_at_or_after(i.lo, s);
      std::uint64_t b = index_at_or_after(i.hi + 1, s);
      if (b > a) out.push_back({a, b - 1});
    }
    return normalize(out);
  }

 private:
  std::vector<std::uint64_t> starts_, offs_;
  std::uint64_t n_ = 0;
};

}  // namespace ulam
