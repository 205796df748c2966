#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace ulam {

using u128 = unsigned __int128;

inline constexpr int kLies = 3;
inline constexpr int kEliminated = 4;
inline constexpr int kMaxQ = 126;

enum class Answer { Yes, No };

inline Answer flip(Answer a) { return a == Answer::Yes ? Answer::No : Answer::Yes; }
inline char answer_char(Answer a) { return a == Answer::Yes ? 'y' : 'n'; }

struct PreconditionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

inline std::string to_string(u128 v) {
  if (v == 0) return "0";
  std::string s;
  while (v) {
    s.insert(s.begin(), char('0' + int(v % 10)));
    v /= 10;
  }
  return s;
}

// Quadruple of per-level counts. Tag separates state types (t0..t3) from
// question types [a0..a3].
template <class Tag>
struct Quad {
  std::array<std::uint64_t, 4> v{};

  constexpr Quad() = default;
  constexpr Quad(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d) : v{a, b, c, d} {}

  constexpr std::uint64_t& operator[](int i) { return v[i]; }
  constexpr std::uint64_t operator[](int i) const { return v[i]; }
  constexpr std::uint64_t total() const { return v[0] + v[1] + v[2] + v[3]; }
  constexpr auto operator<=>(const Quad&) const = default;

  std::string str() const {
    std::ostringstream os;
    os << Tag::open << v[0] << ',' << v[1] << ',' << v[2] << ',' << v[3] << Tag::close;
    return os.str();
  }
};

struct StateTag { static constexpr char open = '(', close = ')'; };
struct QuestionTag { static constexpr char open = '[', close = ']'; };

using StateType = Quad<StateTag>;
using QuestionType = Quad<QuestionTag>;

template <class Tag>
std::ostream& operator<<(std::ostream& os, const Quad<Tag>& q) { return os << q.str(); }

// Pascal triangle up to kMaxQ, exact in 128 bits for the small lower
// indices we use (l <= 3).
inline u128 binom(int q, int l) {
  if (l < 0 || q < 0 || l > q) return 0;
  u128 r = 1;
  for (int i = 0; i < l; ++i) r = r * u128(q - i) / u128(i + 1);
  return r;
}

namespace detail {
struct PrefixTable {
  std::array<std::array<u128, 4>, kMaxQ + 1> p{};
  PrefixTable() {
    for (int q = 0; q <= kMaxQ; ++q) {
      u128 s = 0;
      for (int k = 0; k < 4; ++k) p[q][k] = (s += binom(q, k));
    }
  }
};
inline const PrefixTable& prefix_table() {
  static const PrefixTable t;
  return t;
}
}  // namespace detail

// sum_{l <= k} C(q, l), k <= 3
inline u128 binom_prefix(int q, int k) { return detail::prefix_table().p[q][k]; }

inline u128 pow2(int q) { return u128(1) << q; }

inline u128 volume(const StateType& t, int q) {
  const auto& p = detail::prefix_table().p[q];
  return u128(t[0]) * p[3] + u128(t[1]) * p[2] + u128(t[2]) * p[1] + u128(t[3]) * p[0];
}

inline int character(const StateType& t) {
  int q = 0;
  while (volume(t, q) > pow2(q)) {
    if (++q > kMaxQ) throw std::overflow_error("character out of range");
  }
  return q;
}

inline StateType initial_type(int m) {
  if (m < 0 || m > 62) throw PreconditionError("bit width out of range");
  return {std::uint64_t(1) << m, 0, 0, 0};
}

inline int n_min(int m) { return character(initial_type(m)); }

inline StateType apply_answer_type(const StateType& t, const QuestionType& a, Answer ans) {
  for (int i = 0; i < 4; ++i)
    if (a[i] > t[i]) throw PreconditionError("question type component exceeds state type");
  QuestionType in = a;
  if (ans == Answer::No)
    for (int i = 0; i < 4; ++i) in[i] = t[i] - a[i];
  return {in[0], in[1] + (t[0] - in[0]), in[2] + (t[1] - in[1]), in[3] + (t[2] - in[2])};
}

inline QuestionType complement(const StateType& t, const QuestionType& a) {
  return {t[0] - a[0], t[1] - a[1], t[2] - a[2], t[3] - a[3]};
}

struct Universe {
  int m = 0;
  std::uint64_t size() const { return std::uint64_t(1) << m; }
};

// Maximal run of consecutive universe elements on one level (0..4).
struct Run {
  int level;
  std::uint64_t lo;
  std::uint64_t len;
  std::uint64_t hi() const { return lo + len - 1; }
  bool operator==(const Run&) const = default;
};

// A state over the universe, stored as the run list of its level map.
// Level 4 runs are kept so positions stay explicit; they carry no data.
class GameState {
 public:
  GameState() = default;

  static GameState initial(int m) {
    GameState s;
    s.u_.m = m;
    s.runs_.push_back({0, 0, s.u_.size()});
    s.type_ = initial_type(m);
    return s;
  }

  // levels[x] in 0..4 for every element of a universe of size 2^m
  static GameState from_levels(int m, const std::vector<int>& levels) {
    if (levels.size() != (std::uint64_t(1) << m)) throw PreconditionError("level vector size mismatch");
    std::vector<Run> runs;
    for (std::uint64_t x = 0; x < levels.size(); ++x) runs.push_back({levels[x], x, 1});
    return from_runs(m, std::move(runs));
  }

  static GameState from_runs(int m, std::vector<Run> runs) {
    GameState s;
    s.u_.m = m;
    std::uint64_t pos = 0;
    for (const Run& r : runs) {
      if (r.len == 0) continue;
      if (r.lo != pos || r.level < 0 || r.level > kEliminated) throw PreconditionError("runs must tile the universe");
      pos += r.len;
      if (!s.runs_.empty() && s.runs_.back().level == r.level)
        s.runs_.back().len += r.len;
      else
        s.runs_.push_back(r);
      if (r.level < kEliminated) s.type_[r.level] += r.len;
    }
    if (pos != s.u_.size()) throw PreconditionError("runs must tile the universe");
    return s;
  }

  const Universe& universe() const { return u_; }
  const std::vector<Run>& runs() const { return runs_; }
  const StateType& type() const { return type_; }
  std::uint64_t support_size() const { return type_.total(); }
  bool is_final() const { return support_size() <= 1; }

  int level_of(std::uint64_t x) const {
    for (const Run& r : runs_)
      if (x >= r.lo && x <= r.hi()) return r.level;
    throw PreconditionError("element outside universe");
  }

  std::vector<int> levels() const {
    std::vector<int> out;
    out.reserve(u_.size());
    for (const Run& r : runs_) out.insert(out.end(), r.len, r.level);
    return out;
  }

  std::vector<std::uint64_t> support() const {
    std::vector<std::uint64_t> out;
    for (const Run& r : runs_)
      if (r.level < kEliminated)
        for (std::uint64_t k = 0; k < r.len; ++k) out.push_back(r.lo + k);
    return out;
  }

 private:
  Universe u_;
  std::vector<Run> runs_;
  StateType type_;
};

inline bool is_final(const GameState& s) { return s.is_final(); }

}  // namespace ulam
