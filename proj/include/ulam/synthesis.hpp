#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "core.hpp"
#include "necklace.hpp"
#include "questions.hpp"
#include "shape.hpp"

namespace ulam {

struct AdmissibilityError : PreconditionError {
  using PreconditionError::PreconditionError;
};

struct ShapeError : PreconditionError {
  using PreconditionError::PreconditionError;
};

struct SynthesisError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A synthesized question in support coordinates. When `swapped` is set the
// spans are the complement of the requested question (same partition of the
// support, answers exchanged); this only happens when every construction
// of the requested type needs an interval across the wrap point.
struct Synthesized {
  SupportQuestion spans;
  bool swapped = false;
  std::string route;  // which construction produced it
};

enum class Construction { Theorem1, Type0bcd, Type11cd, Type102d, Type100d };

inline const char* construction_name(Construction c) {
  switch (c) {
    case Construction::Theorem1: return "theorem1";
    case Construction::Type0bcd: return "lemma-0bcd";
    case Construction::Type11cd: return "lemma-11cd";
    case Construction::Type102d: return "lemma-102d";
    case Construction::Type100d: return "lemma-100d";
  }
  return "?";
}

// Checks the bounds of the construction; throws AdmissibilityError.
inline void check_admissible(Construction c, const StateType& t, const QuestionType& a) {
  auto fail = [&](const char* why) {
    throw AdmissibilityError(std::string(construction_name(c)) + ": " + why + " for " + a.str() + " in " + t.str());
  };
  for (int i = 0; i < 4; ++i)
    if (a[i] > t[i]) fail("component exceeds state");
  auto half = [](std::uint64_t x) { return (x + 1) / 2; };
  switch (c) {
    case Construction::Theorem1:
      if (a[1] > half(t[1]) || a[2] > half(t[2])) fail("level 1/2 above half");
      if (a[3] > (2 * t[3] + 2) / 3) fail("level 3 above two thirds");
      break;
    case Construction::Type0bcd:
      if (t[0] != 0 || a[0] != 0) fail("needs no level-0 elements");
      if (a[1] > half(t[1]) || a[2] > half(t[2])) fail("level 1/2 above half");
      break;
    case Construction::Type11cd:
      if (t[0] != 1 || a[0] != 1 || a[1] != 1) fail("needs type [1,1,c,d] in (1,b,c,d)");
      if (a[2] < t[2] / 4 || a[2] > half(t[2])) fail("level 2 outside [c/4, c/2]");
      break;
    case Construction::Type102d:
      if (t[0] != 1 || t[1] != 1) fail("needs state (1,1,c,d)");
      if (a[0] != 1 || a[1] != 0 || a[2] != 2) fail("needs type [1,0,2,d]");
      break;
    case Construction::Type100d:
      if (t[0] != 1 || t[1] != 0 || t[2] != 3) fail("needs state (1,0,3,d)");
      if (a[0] != 1 || a[1] != 0 || a[2] != 0) fail("needs type [1,0,0,d]");
      break;
  }
}

namespace detail {

// Covered amounts at the low and high end of each template slot.
struct Plan {
  std::array<std::uint64_t, 12> lo{}, hi{};
};

inline std::uint64_t covered(const Plan& p, int i) { return p.lo[i] + p.hi[i]; }

// Spans of a plan in support coordinates; circular ranges crossing the wrap
// point are split.
inline SupportQuestion plan_spans(const ArcList& a, const Plan& p) {
  SupportQuestion out;
  std::uint64_t n = a.n;
  auto add = [&](std::uint64_t x, std::uint64_t len) {
    if (!len) return;
    x %= n;
    if (x + len <= n) {
      out.push_back({x, x + len - 1});
    } else {
      out.push_back({x, n - 1});
      out.push_back({0, x + len - n - 1});
    }
  };
  for (int i = 0; i < 12; ++i) {
    const NamedArc& s = a.slot[i];
    if (!s.len) continue;
    if (covered(p, i) >= s.len) {
      add(s.start, s.len);
      continue;
    }
    add(s.start, p.lo[i]);
    add(s.start + s.len - p.hi[i], p.hi[i]);
  }
  return normalize(out);
}

inline std::size_t circular_count(const SupportQuestion& q, std::uint64_t n) {
  if (q.size() >= 2 && q.front().lo == 0 && q.back().hi == n - 1) return q.size() - 1;
  return q.size();
}

// Takes `amount` elements of slot i from the end facing slot j (a neighbour).
inline bool take_toward(const ArcList& a, Plan& p, int i, int j, std::uint64_t amount) {
  if (!amount) return true;
  if (covered(p, i) + amount > a.slot[i].len) return false;
  if (j == a.next(i))
    p.hi[i] += amount;
  else
    p.lo[i] += amount;
  return true;
}

inline bool take_full(const ArcList& a, Plan& p, int i) {
  p.lo[i] = a.slot[i].len;
  p.hi[i] = 0;
  return true;
}

inline std::vector<int> slots_at(const ArcList& a, int level) {
  std::vector<int> v;
  for (int i = 0; i < 12; ++i)
    if (a.slot[i].level == level) v.push_back(i);
  return v;
}

inline bool is_mode_slot(const ArcList& a, int i) {
  return a.slot[a.prev(i)].level > a.slot[i].level && a.slot[a.next(i)].level > a.slot[i].level;
}

// Neighbours of slot i ordered larger first; ties prefer the next slot
// (positive orientation).
inline std::array<int, 2> larger_first(const ArcList& a, int x, int y) {
  if (a.slot[y].len > a.slot[x].len) return {y, x};
  if (a.slot[x].len > a.slot[y].len) return {x, y};
  return {x, y};
}

struct Search {
  const Necklace& k;
  const ArcList& arcs;
  QuestionType target;
  std::function<bool(const SupportQuestion&)> accept;
  std::size_t budget = 400000;  // candidate evaluations before giving up
  std::size_t evals = 0;

  bool exhausted() const { return evals >= budget; }

  // Fills `rem` level-3 elements over the three level-3 slots with one of
  // five patterns per slot (none, full, low end, high end, both ends).
  bool level3(const Plan& base) {
    auto l3 = slots_at(arcs, 3);
    std::uint64_t d = target[3];
    for (int i : l3) d -= std::min(d, covered(base, i));
    std::array<int, 3> pat{};
    int m = int(l3.size());
    int combos = 1;
    for (int i = 0; i < m; ++i) combos *= 5;
    std::vector<std::pair<int, int>> order;  // (partials, combo)
    for (int c = 0; c < combos; ++c) {
      int x = c, partial = 0;
      for (int i = 0; i < m; ++i) {
        int v = x % 5;
        x /= 5;
        partial += v >= 2 ? (v == 4 ? 2 : 1) : 0;
      }
      order.push_back({partial, c});
    }
    std::stable_sort(order.begin(), order.end());
    for (auto [partials, c] : order) {
      int x = c;
      for (int i = 0; i < m; ++i) pat[i] = x % 5, x /= 5;
      for (int dir = 0; dir < 2; ++dir) {
        if (exhausted()) return false;
        Plan p = base;
        std::uint64_t rem = d;
        bool ok = true;
        std::vector<std::pair<int, int>> vars;  // (slot, side 0=lo 1=hi)
        for (int i = 0; i < m && ok; ++i) {
          int s = l3[i];
          std::uint64_t len = arcs.slot[s].len, free = len - covered(p, s);
          if (covered(p, s) && pat[i] != 0) ok = false;
          switch (pat[i]) {
            case 0: break;
            case 1:
              if (!len || free > rem) ok = false;
              else p.lo[s] += free, rem -= free;
              break;
            case 2: vars.push_back({s, 0}); if (len < 2) ok = false; break;
            case 3: vars.push_back({s, 1}); if (len < 2) ok = false; break;
            case 4:
              vars.push_back({s, 0}), vars.push_back({s, 1});
              if (len < 3) ok = false;
              break;
          }
        }
        if (!ok) continue;
        if (dir) std::reverse(vars.begin(), vars.end());
        if (vars.empty() && rem) continue;
        if (!vars.empty() && rem < vars.size()) continue;
        // each variable gets at least 1; greedy fill keeps every slot partial
        std::uint64_t left = rem;
        for (std::size_t v = 0; v < vars.size() && ok; ++v) {
          auto [s, side] = vars[v];
          std::uint64_t len = arcs.slot[s].len, used = covered(p, s);
          std::uint64_t later_same = 0, later = vars.size() - v - 1;
          for (std::size_t w = v + 1; w < vars.size(); ++w)
            if (vars[w].first == s) ++later_same;
          // at least one element of the slot must stay uncovered
          std::uint64_t cap = len - used - 1 - later_same;
          std::uint64_t need_after = later;
          if (left < 1 + need_after) { ok = false; break; }
          std::uint64_t amt = std::min(cap, left - need_after);
          if (v + 1 == vars.size()) amt = left;
          if (amt < 1 || amt > cap) { ok = false; break; }
          (side ? p.hi[s] : p.lo[s]) += amt;
          left -= amt;
        }
        if (!ok || left) continue;
        ++evals;
        if (accept(plan_spans(arcs, p))) return true;
        if (vars.size() < 2) break;  // direction only matters with two or more variables
      }
    }
    return false;
  }
};

// The level-by-level construction with its choices enumerated: which
// neighbour plays A1/A2/A3, which level-2 mode is A, and which arc and end
// serve as E/e+ in the third level-2 case.
inline bool construct(Search& s, Construction kind) {
  const ArcList& a = s.arcs;
  const auto& t = s.target;
  int S = a.index_of('S'), H = a.index_of('H');
  auto l2 = slots_at(a, 2);
  std::vector<int> modes2;
  for (int i : l2)
    if (is_mode_slot(a, i)) modes2.push_back(i);
  if (modes2.empty()) modes2 = {a.index_of('A')};
  std::sort(modes2.begin(), modes2.end(), [&](int x, int y) { return a.slot[x].len > a.slot[y].len; });

  std::array<int, 2> a1s = larger_first(a, a.next(S), a.prev(S));
  std::array<int, 2> a2s = larger_first(a, a.next(H), a.prev(H));
  for (int A1 : a1s) {
    Plan p0;
    if (!take_toward(a, p0, S, A1, t[0])) continue;
    for (int A2 : a2s) {
      for (int l1case = 0; l1case < 2; ++l1case) {
        Plan p1 = p0;
        if (kind == Construction::Type11cd) {
          // the single level-1 element is taken next to a level-2 cover below
          if (l1case) continue;
        } else if (l1case == 0) {
          if (t[1] > a.slot[H].len) continue;
          take_toward(a, p1, H, A2, t[1]);
        } else {
          if (t[1] <= a.slot[H].len) continue;
          take_full(a, p1, H);
          if (!take_toward(a, p1, A1, S, t[1] - a.slot[H].len)) continue;
        }
        for (int Am : modes2) {
          std::array<int, 2> a3s = larger_first(a, a.next(Am), a.prev(Am));
          for (int A3 : a3s) {
            for (int l2case = 0; l2case < 3; ++l2case) {
              Plan p2 = p1;
              std::uint64_t c = t[2], lenA = a.slot[Am].len, lenA2 = a.slot[A2].len;
              std::vector<Plan> plans;
              if (l2case == 0) {
                if (c > lenA) continue;
                take_toward(a, p2, Am, A3, c);
                plans.push_back(p2);
              } else if (l2case == 1) {
                if (c <= lenA || c > lenA + lenA2) continue;
                take_full(a, p2, Am);
                if (!take_toward(a, p2, A2, H, c - lenA)) continue;
                plans.push_back(p2);
              } else {
                if (c <= lenA + lenA2) continue;
                take_full(a, p2, Am);
                take_full(a, p2, A2);
                std::vector<int> es;
                for (int i : l2)
                  if (i != Am && i != A2) es.push_back(i);
                std::sort(es.begin(), es.end(), [&](int x, int y) { return a.slot[x].len > a.slot[y].len; });
                for (int E : es)
                  for (int side : {a.next(E), a.prev(E)}) {
                    Plan pe = p2;
                    if (take_toward(a, pe, E, side, c - lenA - lenA2)) plans.push_back(pe);
                  }
              }
              for (Plan& pl : plans) {
                if (kind == Construction::Type11cd) {
                  // one level-1 element adjacent to a covered level-2 end
                  for (int i : slots_at(a, 1)) {
                    if (!a.slot[i].len) continue;
                    for (int j : {a.next(i), a.prev(i)}) {
                      if (a.slot[j].level != 2 || !covered(pl, j)) continue;
                      Plan q = pl;
                      if (!take_toward(a, q, i, j, 1)) continue;
                      if (s.level3(q)) return true;
                    }
                  }
                } else if (s.level3(pl)) {
                  return true;
                }
                if (s.exhausted()) return false;
              }
            }
          }
        }
      }
    }
  }
  return false;
}

// Wider search used when the construction's choices all fail: every arc at
// levels 0..2 is left out, fully covered, or cut from one end, with at most
// two cut arcs per level.
inline bool broad(Search& s) {
  const ArcList& a = s.arcs;
  std::array<std::vector<Plan>, 3> per_level;
  for (int lvl = 0; lvl < 3; ++lvl) {
    auto sl = slots_at(a, lvl);
    std::vector<int> live;
    for (int i : sl)
      if (a.slot[i].len) live.push_back(i);
    std::size_t m = live.size();
    std::uint64_t want = s.target[lvl];
    std::size_t combos = 1;
    for (std::size_t i = 0; i < m; ++i) combos *= 4;
    for (std::size_t c = 0; c < combos; ++c) {
      std::size_t x = c;
      Plan p;
      std::uint64_t fixed = 0;
      std::vector<std::pair<int, int>> vars;
      for (std::size_t i = 0; i < m; ++i) {
        int v = int(x % 4);
        x /= 4;
        int sl_i = live[i];
        if (v == 1) p.lo[sl_i] = a.slot[sl_i].len, fixed += a.slot[sl_i].len;
        if (v >= 2) {
          if (a.slot[sl_i].len < 2) goto next_combo;
          vars.push_back({sl_i, v - 2});
        }
      }
      if (vars.size() > 2 || fixed > want) continue;
      if (vars.empty()) {
        if (fixed == want) per_level[lvl].push_back(p);
        continue;
      }
      {
        std::uint64_t rem = want - fixed;
        if (rem < vars.size()) continue;
        if (vars.size() == 1) {
          auto [i, side] = vars[0];
          if (rem >= a.slot[i].len) continue;
          (side ? p.hi[i] : p.lo[i]) = rem;
          per_level[lvl].push_back(p);
        } else {
          auto [i, si] = vars[0];
          auto [j, sj] = vars[1];
          std::uint64_t ci = a.slot[i].len - 1, cj = a.slot[j].len - 1;
          for (int dir = 0; dir < 2; ++dir) {
            std::uint64_t xi = dir ? std::max<std::uint64_t>(1, rem > cj ? rem - cj : 1) : std::min(ci, rem - 1);
            std::uint64_t xj = rem - xi;
            if (xi < 1 || xi > ci || xj < 1 || xj > cj) continue;
            Plan q = p;
            (si ? q.hi[i] : q.lo[i]) = xi;
            (sj ? q.hi[j] : q.lo[j]) = xj;
            per_level[lvl].push_back(q);
          }
        }
      }
    next_combo:;
    }
    if (per_level[lvl].empty()) return false;
  }
  for (const Plan& p0 : per_level[0])
    for (const Plan& p1 : per_level[1])
      for (const Plan& p2 : per_level[2]) {
        Plan p;
        for (int i = 0; i < 12; ++i) p.lo[i] = p0.lo[i] + p1.lo[i] + p2.lo[i], p.hi[i] = p0.hi[i] + p1.hi[i] + p2.hi[i];
        if (circular_count(plan_spans(a, p), a.n) > 7) continue;
        if (s.level3(p)) return true;
        if (s.exhausted()) return false;
      }
  return false;
}

}  // namespace detail

// Core synthesizer on a necklace: exact type, at most four line intervals,
// both children well-shaped. Bounds are checked by the caller.
inline std::optional<Synthesized> synthesize(const Necklace& k, const QuestionType& target, Construction kind,
                                             bool allow_swap = true) {
  if (!is_well_shaped(k)) throw ShapeError("state is not well-shaped");
  StateType t = k.type();
  QuestionType comp = complement(t, target);
  std::optional<Synthesized> swapped;
  auto check = [&](const SupportQuestion& q, bool strict) {
    if (question_type(k, q) != target) return false;
    if (!preserves_well_shape(k, q)) return false;
    if (q.size() <= std::size_t(kMaxIntervals)) return true;
    if (strict || swapped || !allow_swap) return false;
    // the complement of a wrapping 4-arc question is a line 4-interval one
    if (detail::circular_count(q, k.size()) <= std::size_t(kMaxIntervals)) {
      SupportQuestion c;
      std::uint64_t x = 0;
      for (const Span& sp : q) {
        if (sp.lo > x) c.push_back({x, sp.lo - 1});
        x = sp.hi + 1;
      }
      if (x < k.size()) c.push_back({x, k.size() - 1});
      if (c.size() <= std::size_t(kMaxIntervals) && question_type(k, c) == comp) swapped = Synthesized{c, true, ""};
    }
    return false;
  };
  if (k.is_final() && target == QuestionType{}) return Synthesized{{}, false, "empty"};
  auto fits = all_fits(k, 64);
  for (int stage = 0; stage < 2; ++stage)
    for (const ArcList& a : fits) {
      std::optional<SupportQuestion> found;
      detail::Search s{k, a, target, [&](const SupportQuestion& q) {
                         if (check(q, false)) {
                           found = q;
                           return true;
                         }
                         return false;
                       }};
      s.budget = stage == 0 ? 20000 : 400000;
      bool ok = stage == 0 ? detail::construct(s, kind) : detail::broad(s);
      if (ok) return Synthesized{*found, false, stage == 0 ? "construction" : "broad"};
    }
  if (swapped) {
    swapped->route = "swapped";
    return swapped;
  }
  return std::nullopt;
}

inline Synthesized synth_on_necklace(const Necklace& k, const QuestionType& target, Construction kind) {
  check_admissible(kind, k.type(), target);
  auto r = synthesize(k, target, kind);
  if (!r) throw SynthesisError(std::string(construction_name(kind)) + ": no question of type " + target.str() + " in " + k.type().str());
  return *r;
}

// GameState front ends. The returned question has the requested type
// unless `swapped` is reported through the optional out-parameter.
inline Question synth_state(const GameState& st, const QuestionType& target, Construction kind, bool* swapped = nullptr) {
  Necklace k = Necklace::from_state(st);
  Synthesized r = synth_on_necklace(k, target, kind);
  if (swapped) *swapped = r.swapped;
  else if (r.swapped) throw SynthesisError("question of type " + target.str() + " needs an interval across the wrap point");
  return SupportMap(st).to_universe(r.spans);
}

inline Question synth_theorem1(const GameState& st, const QuestionType& t, bool* swapped = nullptr) {
  return synth_state(st, t, Construction::Theorem1, swapped);
}
inline Question synth_type_0bcd(const GameState& st, const QuestionType& t, bool* swapped = nullptr) {
  return synth_state(st, t, Construction::Type0bcd, swapped);
}
inline Question synth_type_11cd(const GameState& st, const QuestionType& t, bool* swapped = nullptr) {
  return synth_state(st, t, Construction::Type11cd, swapped);
}
inline Question synth_type_102d(const GameState& st, const QuestionType& t, bool* swapped = nullptr) {
  return synth_state(st, t, Construction::Type102d, swapped);
}
inline Question synth_type_100d(const GameState& st, const QuestionType& t, bool* swapped = nullptr) {
  return synth_state(st, t, Construction::Type100d, swapped);
}

// One interval holding the single low-level element (if any) and enough
// level-3 elements to make the yes child's (q-1)-volume exactly 2^(q-1).
inline SupportQuestion endgame_spans(const Necklace& k) {
  StateType t = k.type();
  if (t[0] + t[1] + t[2] > 1) throw PreconditionError("endgame needs at most one element below level 3");
  int q = character(t);
  if (q == 0) throw PreconditionError("state final");
  std::uint64_t n = k.size();
  std::uint64_t half = std::uint64_t(pow2(q - 1));
  std::uint64_t len = 0, pos = 0;
  int j = -1;
  std::uint64_t x = 0;
  for (const Seg& s : k.segs()) {
    if (s.level < 3) j = s.level, pos = x;
    x += s.len;
  }
  if (j < 0) {
    len = (n + 1) / 2;
    pos = 0;
  } else {
    std::uint64_t alpha = std::uint64_t(binom_prefix(q - 1, 3 - j));
    if (alpha > half || half - alpha > t[3]) throw PreconditionError("endgame precondition violated");
    len = 1 + (half - alpha);
  }
  std::uint64_t lo = std::min(pos, n - len);
  return {{lo, lo + len - 1}};
}

inline Question synth_endgame(const GameState& st) {
  Necklace k = Necklace::from_state(st);
  return SupportMap(st).to_universe(endgame_spans(k));
}

}  // namespace ulam
