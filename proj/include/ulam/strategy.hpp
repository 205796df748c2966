#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "core.hpp"
#include "necklace.hpp"
#include "niceness.hpp"
#include "questions.hpp"
#include "shape.hpp"
#include "synthesis.hpp"

namespace ulam {

struct StrategyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Route { Final, Tiny, Endgame, Halving, Table, Lemma7, Lemma5, Guzicki, Dp, Phantom, Exact, Spencer };

inline const char* route_name(Route r) {
  switch (r) {
    case Route::Final: return "final";
    case Route::Tiny: return "tiny";
    case Route::Endgame: return "endgame";
    case Route::Halving: return "halving";
    case Route::Table: return "table";
    case Route::Lemma7: return "lemma7";
    case Route::Lemma5: return "lemma5";
    case Route::Guzicki: return "guzicki";
    case Route::Dp: return "dp";
    case Route::Phantom: return "phantom";
    case Route::Exact: return "exact";
    case Route::Spencer: return "spencer";
  }
  return "?";
}

// ---- tables -----------------------------------------------------------------

struct TableRow {
  int m;  // 0 for the (1,0,3,n) table
  StateType state;
  QuestionType question;
  Construction construction;
  StateType yes, no;  // as tabulated
};

inline const std::vector<TableRow>& reference_tables() {
  using C = Construction;
  static const std::vector<TableRow> rows = {
      {1, {1, 1, 0, 0}, {1, 0, 0, 0}, C::Theorem1, {1, 0, 1, 0}, {0, 2, 0, 0}},
      {1, {1, 0, 1, 0}, {1, 0, 0, 0}, C::Theorem1, {1, 0, 0, 1}, {0, 1, 1, 0}},
      {1, {0, 2, 0, 0}, {0, 1, 0, 0}, C::Type0bcd, {0, 1, 1, 0}, {0, 1, 1, 0}},
      {1, {0, 1, 1, 0}, {0, 1, 0, 0}, C::Type0bcd, {0, 1, 0, 1}, {0, 0, 2, 0}},
      {4, {1, 4, 6, 4}, {1, 1, 3, 2}, C::Type11cd, {1, 1, 6, 5}, {0, 4, 4, 5}},
      {4, {1, 1, 6, 5}, {1, 0, 2, 3}, C::Type102d, {1, 0, 3, 7}, {0, 2, 4, 4}},
      {4, {0, 4, 4, 5}, {0, 2, 2, 3}, C::Type0bcd, {0, 2, 4, 5}, {0, 2, 4, 4}},
      {4, {0, 2, 4, 4}, {0, 1, 2, 2}, C::Type0bcd, {0, 1, 3, 4}, {0, 1, 3, 4}},
      {4, {0, 2, 4, 5}, {0, 1, 2, 3}, C::Type0bcd, {0, 1, 3, 5}, {0, 1, 3, 4}},
      {4, {0, 1, 3, 4}, {0, 1, 0, 4}, C::Type0bcd, {0, 1, 0, 7}, {0, 0, 4, 0}},
      {4, {0, 1, 3, 5}, {0, 1, 0, 5}, C::Type0bcd, {0, 1, 0, 8}, {0, 0, 4, 0}},
      {8, {1, 8, 28, 56}, {1, 4, 10, 22}, C::Theorem1, {1, 4, 14, 40}, {0, 5, 22, 44}},
      {8, {1, 4, 14, 40}, {1, 1, 5, 36}, C::Type11cd, {1, 1, 8, 45}, {0, 4, 10, 9}},
      {8, {1, 1, 8, 45}, {1, 0, 2, 29}, C::Type102d, {1, 0, 3, 35}, {0, 2, 6, 18}},
      {12, {1, 12, 66, 220}, {1, 6, 27, 110}, C::Theorem1, {1, 6, 33, 149}, {0, 7, 45, 137}},
      {12, {1, 6, 33, 149}, {1, 1, 13, 136}, C::Type11cd, {1, 1, 18, 156}, {0, 6, 21, 26}},
      {12, {1, 1, 18, 156}, {1, 0, 2, 120}, C::Type102d, {1, 0, 3, 136}, {0, 2, 16, 38}},
      {17, {1, 17, 136, 680}, {1, 8, 60, 373}, C::Theorem1, {1, 8, 69, 449}, {0, 10, 84, 367}},
      {17, {1, 8, 69, 449}, {1, 1, 30, 344}, C::Type11cd, {1, 1, 37, 383}, {0, 2, 35, 69}},
      {17, {1, 1, 37, 383}, {1, 0, 2, 316}, C::Type102d, {1, 0, 3, 351}, {0, 2, 35, 69}},
      {23, {1, 23, 253, 1771}, {1, 11, 115, 946}, C::Theorem1, {1, 11, 127, 1084}, {0, 13, 149, 940}},
      {23, {1, 11, 127, 1084}, {1, 1, 58, 767}, C::Type11cd, {1, 1, 68, 836}, {0, 11, 70, 375}},
      {23, {1, 1, 68, 836}, {1, 0, 2, 700}, C::Type102d, {1, 0, 3, 766}, {0, 2, 66, 138}},
      {32, {1, 32, 496, 4960}, {1, 16, 232, 2545}, C::Theorem1, {1, 16, 248, 2809}, {0, 17, 280, 2647}},
      {32, {1, 16, 248, 2809}, {1, 1, 116, 1852}, C::Type11cd, {1, 1, 131, 1984}, {0, 16, 133, 1073}},
      {32, {1, 1, 131, 1984}, {1, 0, 2, 1635}, C::Type102d, {1, 0, 3, 1764}, {0, 2, 129, 351}},
      {0, {1, 0, 3, 7}, {1, 0, 0, 2}, C::Type100d, {1, 0, 0, 5}, {0, 1, 3, 5}},
      {0, {1, 0, 3, 8}, {1, 0, 0, 3}, C::Type100d, {1, 0, 0, 6}, {0, 1, 3, 5}},
      {0, {1, 0, 3, 9}, {1, 0, 0, 4}, C::Type100d, {1, 0, 0, 7}, {0, 1, 3, 5}},
      {0, {0, 1, 3, 5}, {0, 1, 0, 5}, C::Type0bcd, {0, 1, 0, 8}, {0, 0, 4, 0}},
  };
  return rows;
}

inline bool is_table_m(int m) { return m == 1 || m == 4 || m == 8 || m == 12 || m == 17 || m == 23 || m == 32; }

// Rows of the script for one m (the (1,0,3,n) rows are m = 0).
inline std::vector<TableRow> table_strategy(int m) {
  if (m != 0 && !is_table_m(m)) throw PreconditionError("no table for m = " + std::to_string(m));
  std::vector<TableRow> out;
  for (const auto& r : reference_tables())
    if (r.m == m) out.push_back(r);
  return out;
}

inline const TableRow* find_row(const StateType& t) {
  for (const auto& r : reference_tables())
    if (r.state == t && r.m != 1) return &r;
  return nullptr;
}

inline StateType post_halving_type(int m) {
  return {1, std::uint64_t(m), std::uint64_t(binom(m, 2)), std::uint64_t(binom(m, 3))};
}

// ---- question types ---------------------------------------------------------

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline std::optional<QuestionType> checked_type(const StateType& t, std::array<std::int64_t, 4> a) {
  QuestionType r;
  for (int i = 0; i < 4; ++i) {
    if (a[i] < 0 || std::uint64_t(a[i]) > t[i]) return std::nullopt;
    r[i] = std::uint64_t(a[i]);
  }
  return r;
}

struct SpencerType {
  QuestionType type;
  bool flipped = false;
};

// Halves on levels 0..2 (odd levels alternate ceiling/floor in increasing
// order, starting with ceiling), level 3 from the balancing formula with
// q + 1 the character. The complement is returned when a3 exceeds
// ceil(2 t3 / 3) or falls outside [0, t3].
inline SpencerType spencer_qtype(const StateType& t, int q) {
  if (t[0] + t[1] + t[2] <= 1) throw PreconditionError("Spencer step needs more than one element below level 3");
  QuestionType a;
  bool ceil_next = true;
  for (int i = 0; i < 3; ++i) {
    a[i] = t[i] / 2;
    if (t[i] % 2) {
      if (ceil_next) ++a[i];
      ceil_next = !ceil_next;
    }
  }
  __int128 s = __int128(t[3]);
  // a level-j element weighs C(q,3-j) in the volume difference of the children
  for (int j = 0; j <= 2; ++j) s += (__int128(t[j]) - 2 * __int128(a[j])) * __int128(binom(q, 3 - j));
  __int128 a3 = s >= 0 ? s / 2 : -((-s + 1) / 2);
  QuestionType comp{t[0] - a[0], t[1] - a[1], t[2] - a[2], 0};
  __int128 cap = (2 * __int128(t[3]) + 2) / 3;
  if (a3 >= 0 && a3 <= cap) {
    a[3] = std::uint64_t(a3);
    return {a, false};
  }
  __int128 c3 = __int128(t[3]) - a3;
  if (c3 >= 0 && c3 <= __int128(t[3])) {
    comp[3] = std::uint64_t(c3);
    return {comp, true};
  }
  throw StrategyError("Spencer step infeasible for " + t.str());
}

// Case 1 (t2 >= 3k-3) then Case 2 (t3 >= k^2); k = character.
inline std::optional<QuestionType> guzicki_qtype(const StateType& t, std::string* which = nullptr) {
  if (t[0] != 0) return std::nullopt;
  std::int64_t k = character(t);
  std::int64_t t1 = t[1], t2 = t[2], t3 = t[3];
  bool e1 = t1 % 2 == 0, e2 = t2 % 2 == 0;
  auto name = [&](const char* s) {
    if (which) *which = s;
  };
  if (k >= 3 && t2 >= 3 * k - 3) {
    std::int64_t r = (k * k - k + 2) / 2;
    std::int64_t inner = (k * k - k + 2) / (2 * (k - 1));
    if (e1 && e2) return name("1.1"), checked_type(t, {0, t1 / 2, t2 / 2, t3 / 2});
    if (e1 && !e2) return name("1.2"), checked_type(t, {0, t1 / 2, t2 / 2, floor_div(t3 + k - 1, 2)});
    if (!e1 && e2) {
      std::int64_t B1 = inner / 2;
      std::int64_t tt = (2 * B1 + 1) * (k - 1) - r;
      return name("1.3"), checked_type(t, {0, t1 - t1 / 2, t2 - (t2 / 2 + B1), t3 - floor_div(t3 - tt - 1, 2)});
    }
    std::int64_t B1 = (inner + 1) / 2;
    std::int64_t tt = 2 * B1 * (k - 1) - r;
    return name("1.4"), checked_type(t, {0, t1 - t1 / 2, t2 - (t2 / 2 + B1), t3 - floor_div(t3 - tt - 1, 2)});
  }
  if (k >= 4 && t3 >= k * k) {
    if (e1 && e2) return name("2.1"), checked_type(t, {0, t1 / 2, t2 / 2, t3 / 2});
    if (e1 && !e2) return name("2.2"), checked_type(t, {0, t1 / 2, t2 / 2, floor_div(t3 + k - 1, 2)});
    if (!e1 && e2) {
      std::int64_t tt = (k * k - 3 * k + 2) / 2;
      return name("2.3"), checked_type(t, {0, t1 / 2, t2 / 2, floor_div(t3 + tt, 2)});
    }
    std::int64_t tt = (k * k - 5 * k + 4) / 2;
    return name("2.4"), checked_type(t, {0, t1 - t1 / 2, t2 - (t2 + 1) / 2, t3 - floor_div(t3 + tt, 2)});
  }
  if (which) *which = "gap";
  return std::nullopt;
}

// The three-question sequence from (1,m,C(m,2),C(m,3)), m >= 33.
struct Lemma7Plan {
  int q;
  QuestionType q1, q2, q3;
  StateType yes1, no1, yes2, no2, yes3, no3;
};

inline std::int64_t s64(u128 v) { return std::int64_t(v); }

inline QuestionType lemma7_q1(const StateType& t, int q) {
  std::int64_t b0 = t[1], c0 = t[2], d0 = t[3];
  std::int64_t hb = b0 / 2, hc = c0 / 2;
  std::int64_t alpha = d0 + 2 * hc - c0 - 2 * hb - s64(binom(q + 1, 3)) + s64(binom(q + 1, 2)) * (b0 + 1 - 2 * hb) +
                       (q + 2) * (c0 + 4 * hb - b0 - 2 * hc);
  return {1, std::uint64_t(hb), std::uint64_t(hc - hb), std::uint64_t(std::max<std::int64_t>(0, floor_div(alpha, 2)))};
}

inline QuestionType lemma7_q2(const StateType& t, int q) {
  std::int64_t b1 = t[1], c1 = t[2], d1 = t[3];
  std::int64_t hb = b1 / 2, hc = c1 / 2;
  std::int64_t beta = (b1 - 1) * s64(binom(q, 2)) - s64(binom(q, 3)) + (q + 1) * (c1 + 2 - b1 + 2 * hb - 2 * hc) + d1 - c1 + 2 * hc - 2 * hb;
  return {1, 1, std::uint64_t(hc - hb), std::uint64_t(std::max<std::int64_t>(0, floor_div(beta, 2)))};
}

inline QuestionType lemma7_q3(const StateType& t, int q) {
  std::int64_t c2 = t[2], d2 = t[3];
  std::int64_t z = floor_div(d2 + 4 - c2 - s64(binom(q - 1, 3)) + 2 * s64(binom(q - 1, 2)) + q * (c2 - 5), 2);
  return {1, 0, 2, std::uint64_t(std::max<std::int64_t>(0, z))};
}

// Level-3 component replaced by the value that makes the children's
// (k-1)-volumes as equal as possible.
inline QuestionType rebalance_last(const StateType& t, QuestionType a) {
  int k = character(t);
  if (k == 0) return a;
  a[3] = 0;
  u128 vy = volume(apply_answer_type(t, a, Answer::Yes), k - 1), vn = volume(apply_answer_type(t, a, Answer::No), k - 1);
  // yes gains one unit per level-3 element taken, no loses one
  u128 x = vn > vy ? (vn - vy) / 2 : 0;
  a[3] = std::uint64_t(std::min<u128>(x, t[3]));
  return a;
}

inline bool drops(const StateType& t, const QuestionType& a) {
  for (int i = 0; i < 4; ++i)
    if (a[i] > t[i]) return false;
  int k = character(t);
  return character(apply_answer_type(t, a, Answer::Yes)) < k && character(apply_answer_type(t, a, Answer::No)) < k;
}

inline Lemma7Plan lemma7_sequence(const StateType& t) {
  if (t[0] != 1 || t[1] < 33 || post_halving_type(int(t[1])) != t) throw PreconditionError("lemma7 needs (1,m,C(m,2),C(m,3)) with m >= 33");
  Lemma7Plan p;
  p.q = character(t) - 2;
  p.q1 = lemma7_q1(t, p.q);
  if (!drops(t, p.q1)) p.q1 = rebalance_last(t, p.q1);
  p.yes1 = apply_answer_type(t, p.q1, Answer::Yes);
  p.no1 = apply_answer_type(t, p.q1, Answer::No);
  p.q2 = lemma7_q2(p.yes1, p.q);
  if (!drops(p.yes1, p.q2)) p.q2 = rebalance_last(p.yes1, p.q2);
  p.yes2 = apply_answer_type(p.yes1, p.q2, Answer::Yes);
  p.no2 = apply_answer_type(p.yes1, p.q2, Answer::No);
  p.q3 = lemma7_q3(p.yes2, p.q);
  if (!drops(p.yes2, p.q3)) p.q3 = rebalance_last(p.yes2, p.q3);
  p.yes3 = apply_answer_type(p.yes2, p.q3, Answer::Yes);
  p.no3 = apply_answer_type(p.yes2, p.q3, Answer::No);
  return p;
}

// (1,0,3,n): table rows for 7 <= n <= 9, balancing [1,0,0,x] above.
inline QuestionType qtype_103n(const StateType& t) {
  if (t[0] != 1 || t[1] != 0 || t[2] != 3 || t[3] < 7) throw PreconditionError("needs (1,0,3,n) with n >= 7");
  if (const TableRow* r = find_row(t)) return r->question;
  std::int64_t n = t[3], q = character(t) - 1;
  std::int64_t x = floor_div(n + 3 * q - s64(binom(int(q), 3)), 2);
  x = std::clamp<std::int64_t>(x, 0, n);
  return {1, 0, 0, std::uint64_t(x)};
}

// ---- tiny supports ----------------------------------------------------------

// Exhaustive minimax over arbitrary subset questions on a multiset of
// levels (at most 8 elements). Depth = questions needed in the worst case.
class TinyMinimax {
 public:
  int depth(std::vector<int> lv) {
    lv = canon(lv);
    if (lv.size() <= 1) return 0;
    auto it = memo_.find(lv);
    if (it != memo_.end()) return it->second;
    memo_[lv] = 1 << 20;  // cycle guard; every answer raises some level
    int best = 1 << 20;
    std::size_t n = lv.size();
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      int d = std::max(depth(child(lv, mask, true)), depth(child(lv, mask, false)));
      best = std::min(best, d + 1);
    }
    memo_[lv] = best;
    return best;
  }

  static std::vector<int> canon(std::vector<int> lv) {
    std::vector<int> out;
    for (int l : lv)
      if (l < kEliminated) out.push_back(l);
    std::sort(out.begin(), out.end());
    return out;
  }

  static std::vector<int> child(const std::vector<int>& lv, std::uint32_t mask, bool yes) {
    std::vector<int> c;
    for (std::size_t i = 0; i < lv.size(); ++i) {
      bool in = (mask >> i) & 1;
      int l = lv[i] + ((yes != in) ? 1 : 0);
      if (l < kEliminated) c.push_back(l);
    }
    return canon(c);
  }

 private:
  std::map<std::vector<int>, int> memo_;
};

inline TinyMinimax& shared_tiny() {
  static TinyMinimax t;
  return t;
}

inline std::vector<int> type_levels(const StateType& t) {
  std::vector<int> lv;
  for (int l = 0; l < 4; ++l) lv.insert(lv.end(), t[l], l);
  return lv;
}

// Best subset question for a state with support <= 4: minimal worst-case
// depth, preferring well-shaped children, then the smallest mask.
inline Question minimax_tiny(const GameState& s) {
  auto sup = s.support();
  if (sup.size() > 4) throw PreconditionError("minimax_tiny needs support <= 4");
  if (sup.size() <= 1) return Question{};
  auto& mm = shared_tiny();
  std::vector<int> lv;
  for (auto x : sup) lv.push_back(s.level_of(x));
  int best = 1 << 20;
  bool best_ws = false;
  Question out;
  for (std::uint32_t mask = 0; mask < (1u << sup.size()); ++mask) {
    int d = 1 + std::max(mm.depth(TinyMinimax::child(lv, mask, true)), mm.depth(TinyMinimax::child(lv, mask, false)));
    std::vector<Interval> iv;
    for (std::size_t i = 0; i < sup.size(); ++i)
      if ((mask >> i) & 1) iv.push_back({sup[i], sup[i]});
    Question q(iv);
    bool ws = is_well_shaped(apply_answer(s, q, Answer::Yes)) && is_well_shaped(apply_answer(s, q, Answer::No));
    if (d < best || (d == best && ws && !best_ws)) best = d, best_ws = ws, out = q;
  }
  return out;
}

// ---- dispatcher -------------------------------------------------------------

struct Step {
  Route route = Route::Final;
  QuestionType type;
  Construction construction = Construction::Theorem1;
  std::string note;
};

struct Decision {
  bool final = false;
  Question question;
  Step step;
  bool swapped = false;  // question is the complement of the planned type
};

enum class Mode { Perfect, Spencer };

class Strategy {
 public:
  explicit Strategy(Mode mode = Mode::Perfect, NicenessDp* dp = nullptr) : mode_(mode), dp_(dp ? dp : &shared_dp()) {}

  Mode mode() const { return mode_; }

  // Type-level decision. Throws StrategyError when no route applies.
  Step plan(const StateType& t) {
    if (auto it = memo_.find(t); it != memo_.end()) {
      if (!it->second) throw StrategyError("no perfect strategy known from this state " + t.str());
      return *it->second;
    }
    std::optional<Step> s;
    try {
      s = mode_ == Mode::Spencer ? plan_spencer(t) : plan_perfect(t);
    } catch (const StrategyError&) {
      memo_[t] = std::nullopt;
      throw;
    }
    memo_[t] = s;
    if (!s) throw StrategyError("no perfect strategy known from this state " + t.str());
    return *s;
  }

  Decision next_question(const GameState& st) {
    Decision d;
    StateType t = st.type();
    d.step = plan(t);
    switch (d.step.route) {
      case Route::Final: d.final = true; return d;
      case Route::Tiny: d.question = minimax_tiny(st); return d;
      case Route::Endgame: d.question = synth_endgame(st); return d;
      default: break;
    }
    Necklace k = Necklace::from_state(st);
    auto r = synthesize(k, d.step.type, d.step.construction);
    if (!r) throw StrategyError("synthesis failed for " + d.step.type.str() + " in " + t.str() + " via " + route_name(d.step.route));
    d.swapped = r->swapped;
    d.question = SupportMap(st).to_universe(r->spans);
    return d;
  }

 private:
  static bool is_halving(const StateType& t) {
    std::uint64_t u = t[0];
    if (u < 2 || (u & (u - 1))) return false;
    std::uint64_t j = t[1] / u;
    return t[1] == j * u && t[2] == std::uint64_t(binom(int(j), 2)) * u && t[3] == std::uint64_t(binom(int(j), 3)) * u;
  }

  bool dp_ok(const StateType& t) { return t[0] == 0 && (t[1] + t[2] <= 1 || t[3] >= dp_->m_tilde(t[1], t[2])); }

  std::optional<Step> plan_spencer(const StateType& t) {
    if (t.total() <= 1) return Step{Route::Final, {}, Construction::Theorem1, ""};
    if (t[0] + t[1] + t[2] <= 1) return Step{Route::Endgame, {}, Construction::Theorem1, ""};
    int k = character(t);
    SpencerType sp = spencer_qtype(t, k - 1);
    return Step{Route::Spencer, sp.type, Construction::Theorem1, sp.flipped ? "complement" : ""};
  }

  std::optional<Step> plan_perfect(const StateType& t) {
    if (t.total() <= 1) return Step{Route::Final, {}, Construction::Theorem1, ""};
    if (t.total() <= 4) return Step{Route::Tiny, {}, Construction::Theorem1, ""};
    if (t[0] + t[1] + t[2] <= 1) return Step{Route::Endgame, {}, Construction::Theorem1, ""};
    if (is_halving(t)) return Step{Route::Halving, {t[0] / 2, t[1] / 2, t[2] / 2, t[3] / 2}, Construction::Theorem1, ""};
    if (const TableRow* r = find_row(t)) {
      StateType no = apply_answer_type(t, r->question, Answer::No);
      if (no[0] != 0 || dp_ok(no)) return Step{Route::Table, r->question, r->construction, "m=" + std::to_string(r->m)};
      if (auto s = search_11cd(t)) return s;
    }
    if (auto s = plan_lemma7(t)) return s;
    if (t[0] == 1 && t[1] == 0 && t[2] == 3 && t[3] >= 7) return Step{Route::Lemma5, qtype_103n(t), Construction::Type100d, ""};
    if (t[0] == 0) {
      int k = character(t);
      std::string gap;
      if (is_0typical(t) && k >= 12) {
        std::string which;
        auto g = guzicki_qtype(t, &which);
        if (g && drops(t, *g) && is_0typical(apply_answer_type(t, *g, Answer::Yes)) && is_0typical(apply_answer_type(t, *g, Answer::No)))
          return Step{Route::Guzicki, *g, Construction::Type0bcd, "case " + which};
        gap = g ? "Guzicki case " + which + " children not 0-typical" : "Guzicki gap";
      }
      if (dp_ok(t)) {
        if (auto a = dp_->dp_qtype(t)) return Step{Route::Dp, *a, Construction::Type0bcd, gap};
      }
      if (!gap.empty()) throw StrategyError(gap + " at " + t.str());
    }
    if (auto s = plan_phantom(t)) return s;
    if (auto s = plan_exact(t)) return s;
    return std::nullopt;
  }

  // Level-3 component for a type with t0 = 1 so that both children drop in
  // character, the no child is nice, and the children's volumes are as
  // close as possible.
  std::optional<QuestionType> balanced_last(const StateType& t, QuestionType a) {
    int k = character(t);
    if (k == 0) return std::nullopt;
    for (int i = 0; i < 3; ++i)
      if (a[i] > t[i]) return std::nullopt;
    a[3] = 0;
    u128 cap = pow2(k - 1);
    StateType y0 = apply_answer_type(t, a, Answer::Yes), n0 = apply_answer_type(t, a, Answer::No);
    u128 vy = volume(y0, k - 1), vn = volume(n0, k - 1);
    std::uint64_t need = n0[1] + n0[2] <= 1 ? 0 : dp_->m_tilde(n0[1], n0[2]);
    if (vy > cap || n0[3] < need || vn > cap + u128(t[3])) return std::nullopt;
    std::uint64_t lo = vn > cap ? std::uint64_t(vn - cap) : 0;
    std::uint64_t hi = std::min<std::uint64_t>({t[3], std::uint64_t(std::min<u128>(cap - vy, t[3])), n0[3] - need});
    if (lo > hi) return std::nullopt;
    a[3] = std::clamp<std::uint64_t>(vn > vy ? std::uint64_t((vn - vy + 1) / 2) : 0, lo, hi);
    return a;
  }

  // [1,1,c,d] with c from ceil(t2/2) down to t2/4, d from balanced_last,
  // and a yes child that has a route.
  std::optional<Step> search_11cd(const StateType& t) {
    if (t[0] != 1 || t[1] < 1) return std::nullopt;
    for (std::int64_t c = std::int64_t(ceil_half(t[2])); c >= 0 && 4 * std::uint64_t(c) >= t[2]; --c) {
      auto a = balanced_last(t, {1, 1, std::uint64_t(c), 0});
      if (!a) continue;
      try {
        plan(apply_answer_type(t, *a, Answer::Yes));
      } catch (const StrategyError&) {
        continue;
      }
      return Step{Route::Table, *a, Construction::Type11cd, "repaired row"};
    }
    return std::nullopt;
  }

  std::optional<Step> plan_lemma7(const StateType& t) {
    if (t[0] != 1) return std::nullopt;
    if (t[1] >= 33 && post_halving_type(int(t[1])) == t) {
      auto p = lemma7_sequence(t);
      return Step{Route::Lemma7, p.q1, Construction::Theorem1, "Q1"};
    }
    for (std::uint64_t m : {2 * t[1], 2 * t[1] + 1}) {
      if (m < 33 || m > 62) continue;
      auto p = lemma7_sequence(post_halving_type(int(m)));
      if (p.yes1 == t) return Step{Route::Lemma7, p.q2, Construction::Type11cd, "Q2"};
      if (p.yes2 == t) return Step{Route::Lemma7, p.q3, Construction::Type102d, "Q3"};
    }
    if (t[1] == 1 && t[2] >= 2) {
      // a (1,1,c,d) state outside the tables: the third question's rule
      QuestionType a = lemma7_q3(t, character(t));
      if (!drops(t, a)) a = rebalance_last(t, a);
      if (a[3] <= t[3] && drops(t, a) && dp_ok(apply_answer_type(t, a, Answer::No)))
        return Step{Route::Lemma7, a, Construction::Type102d, "Q3 rule"};
      if (auto z = balanced_last(t, {1, 0, 2, 0})) return Step{Route::Lemma7, *z, Construction::Type102d, "Q3 balanced"};
    }
    return std::nullopt;
  }

  // Dominating state of equal character with a known step; the step is
  // restricted to the real elements so each child is dominated by the
  // corresponding phantom child.
  std::optional<Step> plan_phantom(const StateType& t) {
    int k = character(t);
    std::vector<StateType> cands;
    for (const auto& r : reference_tables())
      if (r.m != 1) cands.push_back(r.state);
    for (int m = 6; m <= 62; ++m) cands.push_back(post_halving_type(m));
    if (t[0] == 1 && t[1] == 0 && t[2] <= 3) {
      for (std::uint64_t n = std::max<std::uint64_t>(t[3], 7); n < t[3] + 4096; ++n) {
        StateType p{1, 0, 3, n};
        int c = character(p);
        if (c == k) cands.push_back(p);
        if (c > k) break;
      }
    }
    if (t[0] == 0 && t[1] + t[2] > 1) {
      std::uint64_t need = dp_->m_tilde(t[1], t[2]);
      if (need > t[3]) cands.push_back({0, t[1], t[2], need});
    }
    for (const StateType& p : cands) {
      if (p == t || character(p) != k) continue;
      bool dom = true;
      for (int i = 0; i < 4; ++i) dom = dom && p[i] >= t[i];
      if (!dom) continue;
      Step ps;
      try {
        ps = plan(p);
      } catch (const StrategyError&) {
        continue;
      }
      if (ps.route == Route::Final || ps.route == Route::Tiny || ps.route == Route::Endgame) continue;
      if (auto s = restrict_step(t, p, ps)) return s;
    }
    return std::nullopt;
  }

  // Small states with no tabulated rule: a winning type from the exhaustive
  // type game, preferring the generalized-question bounds, then the most
  // balanced children.
  std::optional<Step> plan_exact(const StateType& t) {
    int k = character(t);
    if (k > kExactMaxCharacter || k == 0) return std::nullopt;
    std::optional<QuestionType> best;
    std::tuple<int, u128> best_rank{};
    for (std::uint64_t a0 = 0; a0 <= t[0]; ++a0)
      for (std::uint64_t a1 = 0; a1 <= t[1]; ++a1)
        for (std::uint64_t a2 = 0; a2 <= t[2]; ++a2)
          for (std::uint64_t a3 = 0; a3 <= t[3]; ++a3) {
            QuestionType a{a0, a1, a2, a3};
            StateType y = apply_answer_type(t, a, Answer::Yes), n = apply_answer_type(t, a, Answer::No);
            if (!oracle_.win(y, k - 1) || !oracle_.win(n, k - 1)) continue;
            bool in_bounds = a1 <= ceil_half(t[1]) && a2 <= ceil_half(t[2]) && a3 <= (2 * t[3] + 2) / 3;
            u128 vy = volume(y, k - 1), vn = volume(n, k - 1);
            std::tuple<int, u128> rank{in_bounds ? 0 : 1, vy > vn ? vy - vn : vn - vy};
            if (!best || rank < best_rank) best = a, best_rank = rank;
          }
    if (!best) return std::nullopt;
    return Step{Route::Exact, *best, Construction::Theorem1, ""};
  }

  static std::optional<Step> restrict_step(const StateType& t, const StateType& p, const Step& ps) {
    std::array<std::uint64_t, 4> lo{}, hi{};
    for (int i = 0; i < 4; ++i) {
      std::uint64_t slack = p[i] - t[i];
      lo[i] = ps.type[i] > slack ? ps.type[i] - slack : 0;
      hi[i] = std::min(ps.type[i], t[i]);
      if (lo[i] > hi[i]) return std::nullopt;
    }
    for (Construction c : {ps.construction, Construction::Theorem1, Construction::Type0bcd, Construction::Type11cd, Construction::Type102d,
                           Construction::Type100d}) {
      QuestionType a;
      for (int i = 0; i < 4; ++i) {
        // proportional share of the phantom component, clamped to the range
        std::uint64_t prop = p[i] ? std::uint64_t((u128(ps.type[i]) * t[i] + p[i] / 2) / p[i]) : 0;
        a[i] = std::clamp(prop, lo[i], hi[i]);
      }
      // pull components into the construction's bounds where the range allows
      auto half = [](std::uint64_t x) { return (x + 1) / 2; };
      if (c == Construction::Theorem1 || c == Construction::Type0bcd) {
        a[1] = std::max(lo[1], std::min(a[1], half(t[1])));
        a[2] = std::max(lo[2], std::min(a[2], half(t[2])));
      }
      if (c == Construction::Theorem1) a[3] = std::max(lo[3], std::min(a[3], (2 * t[3] + 2) / 3));
      try {
        check_admissible(c, t, a);
      } catch (const AdmissibilityError&) {
        continue;
      }
      if (!drops(t, a)) continue;
      return Step{Route::Phantom, a, c, "inside " + p.str() + " via " + route_name(ps.route)};
    }
    return std::nullopt;
  }

  static constexpr int kExactMaxCharacter = 10;

  Mode mode_;
  NicenessDp* dp_;
  TypeGameOracle oracle_;
  std::map<StateType, std::optional<Step>> memo_;
};

}  // namespace ulam
