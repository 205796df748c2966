#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "necklace.hpp"

namespace ulam {

// Non-empty arc of the circular support: level, first support index, length.
// An arc may wrap past index n-1.
struct CArc {
  int level;
  std::uint64_t start;
  std::uint64_t len;
};

// Circular arcs of a necklace: the linear segments with the last one glued
// to the first when they share a level.
inline std::vector<CArc> circular_arcs(const std::vector<Seg>& segs) {
  std::vector<CArc> out;
  std::uint64_t pos = 0, n = 0;
  for (const Seg& s : segs) n += s.len;
  for (const Seg& s : segs) {
    out.push_back({s.level, pos, s.len});
    pos += s.len;
  }
  if (out.size() >= 2 && out.front().level == out.back().level) {
    out.front().start = out.back().start;
    out.front().len += out.back().len;
    out.pop_back();
  }
  (void)n;
  return out;
}

inline std::vector<CArc> circular_arcs(const Necklace& k) { return circular_arcs(k.segs()); }

// c[h] = number of circular boundaries between levels <= h and > h, h = 0..3.
inline std::array<int, 4> crossings(const std::vector<int>& arc_levels) {
  std::array<int, 4> c{};
  std::size_t r = arc_levels.size();
  if (r < 2) return c;
  for (std::size_t i = 0; i < r; ++i) {
    int a = arc_levels[i], b = arc_levels[(i + 1) % r];
    for (int h = 0; h < 4; ++h)
      if ((a <= h) != (b <= h)) ++c[h];
  }
  return c;
}

template <class ArcLike>
std::vector<int> levels_of(const std::vector<ArcLike>& arcs) {
  std::vector<int> lv;
  for (const auto& a : arcs) lv.push_back(a.level);
  return lv;
}

// Arc counts per level (0..4) of the minimal circular list, empty arcs
// included: level l holds (c(l-1/2) + c(l+1/2)) / 2 arcs.
inline std::array<int, 5> minimal_counts(const std::vector<int>& arc_levels) {
  std::array<int, 5> cnt{};
  if (arc_levels.empty()) return cnt;
  if (arc_levels.size() == 1) {
    cnt[arc_levels[0]] = 1;
    return cnt;
  }
  auto c = crossings(arc_levels);
  for (int l = 0; l <= 4; ++l) {
    int lo = l == 0 ? 0 : c[l - 1];
    int hi = l == 4 ? 0 : c[l];
    cnt[l] = (lo + hi) / 2;
  }
  return cnt;
}

inline std::vector<int> merged_levels(const std::vector<Seg>& cells) { return levels_of(circular_arcs(cells)); }

// Well-shaped templates: L2 N1 S0 O1 M2 Q3 B2 H1 C2 R3 A2 P3 and
// L2 N1 S0 O1 B2 H1 C2 Q3 M2 R3 A2 P3, plus their reversed orientations.
struct Template {
  const char* name;
  std::array<char, 12> label;
  std::array<int, 12> level;
  bool mirrored;
  int pattern;  // 1 or 2
};

inline const std::array<Template, 4>& templates() {
  static const std::array<Template, 4> t = {{
      {"sigma1", {'L', 'N', 'S', 'O', 'M', 'Q', 'B', 'H', 'C', 'R', 'A', 'P'}, {2, 1, 0, 1, 2, 3, 2, 1, 2, 3, 2, 3}, false, 1},
      {"sigma2", {'L', 'N', 'S', 'O', 'B', 'H', 'C', 'Q', 'M', 'R', 'A', 'P'}, {2, 1, 0, 1, 2, 1, 2, 3, 2, 3, 2, 3}, false, 2},
      {"sigma1r", {'L', 'P', 'A', 'R', 'C', 'H', 'B', 'Q', 'M', 'O', 'S', 'N'}, {2, 3, 2, 3, 2, 1, 2, 3, 2, 1, 0, 1}, true, 1},
      {"sigma2r", {'L', 'P', 'A', 'R', 'M', 'Q', 'C', 'H', 'B', 'O', 'S', 'N'}, {2, 3, 2, 3, 2, 3, 2, 1, 2, 1, 0, 1}, true, 2},
  }};
  return t;
}

enum class ArcRole { Mode, Saddle, StepUp, StepDown };

inline const char* role_name(ArcRole r) {
  switch (r) {
    case ArcRole::Mode: return "mode";
    case ArcRole::Saddle: return "saddle";
    case ArcRole::StepUp: return "step-up";
    case ArcRole::StepDown: return "step-down";
  }
  return "?";
}

inline ArcRole role_from_neighbors(int prev, int level, int next) {
  if (prev > level && next > level) return ArcRole::Mode;
  if (prev < level && next < level) return ArcRole::Saddle;
  return prev < level ? ArcRole::StepUp : ArcRole::StepDown;
}

// One slot of a template fitted to a state. Empty slots sit at the gap
// where the neighbouring arcs meet (start = first support index after it).
struct NamedArc {
  char name;
  int level;
  std::uint64_t start;
  std::uint64_t len;
  int arc = -1;  // index into circular_arcs, -1 when empty
};

// A fit of a necklace into one of the templates.
struct ArcList {
  int tpl = -1;
  std::uint64_t n = 0;
  std::array<NamedArc, 12> slot{};

  const Template& templ() const { return templates()[tpl]; }
  int index_of(char name) const {
    for (int i = 0; i < 12; ++i)
      if (slot[i].name == name) return i;
    return -1;
  }
  const NamedArc& operator[](char name) const { return slot[index_of(name)]; }
  int prev(int i) const { return (i + 11) % 12; }
  int next(int i) const { return (i + 1) % 12; }
  std::array<int, 4> counts() const {
    std::array<int, 4> c{};
    for (const auto& s : slot) ++c[s.level];
    return c;
  }

  std::string dump() const {
    std::ostringstream os;
    for (int i = 0; i < 12; ++i) {
      const NamedArc& a = slot[i];
      os << a.name << ' ' << a.level << ' ';
      if (a.len == 0)
        os << "[]";
      else
        os << '[' << a.start << ".." << (a.start + a.len - 1) % n << ']';
      os << ' ' << role_name(role_from_neighbors(slot[prev(i)].level, a.level, slot[next(i)].level)) << '\n';
    }
    return os.str();
  }
};

// All embeddings of the circular arc sequence into the templates: each
// non-empty arc goes to a distinct slot of its level, cyclic order kept.
inline std::vector<ArcList> all_fits(const Necklace& k, std::size_t limit = 64) {
  std::vector<ArcList> out;
  auto arcs = circular_arcs(k);
  const auto& T = templates();
  if (arcs.empty()) {
    ArcList a;
    a.tpl = 0;
    for (int i = 0; i < 12; ++i) a.slot[i] = {T[0].label[i], T[0].level[i], 0, 0, -1};
    out.push_back(a);
    return out;
  }
  std::size_t r = arcs.size();
  if (r > 12) return out;
  std::vector<int> pick(r);
  for (int t = 0; t < 4 && out.size() < limit; ++t) {
    for (int s = 0; s < 12 && out.size() < limit; ++s) {
      if (T[t].level[s] != arcs[0].level) continue;
      pick[0] = s;
      // depth-first over increasing offsets from s
      auto rec = [&](auto&& self, std::size_t j, int off) -> void {
        if (out.size() >= limit) return;
        if (j == r) {
          ArcList a;
          a.tpl = t;
          a.n = k.size();
          std::array<int, 12> owner;
          owner.fill(-1);
          for (std::size_t x = 0; x < r; ++x) owner[pick[x]] = int(x);
          std::uint64_t cursor = arcs[0].start;
          for (int d = 0; d < 12; ++d) {
            int sl = (s + d) % 12;
            NamedArc na{T[t].label[sl], T[t].level[sl], cursor % k.size(), 0, owner[sl]};
            if (owner[sl] >= 0) {
              na.start = arcs[owner[sl]].start;
              na.len = arcs[owner[sl]].len;
              cursor = na.start + na.len;
            }
            a.slot[sl] = na;
          }
          out.push_back(a);
          return;
        }
        for (int o = off + 1; o < 12; ++o) {
          int sl = (s + o) % 12;
          if (T[t].level[sl] != arcs[j].level) continue;
          pick[j] = sl;
          self(self, j + 1, o);
        }
      };
      rec(rec, 1, 0);
    }
  }
  return out;
}

// First embedding found (smallest slot offsets first).
inline std::optional<ArcList> fit(const Necklace& k) {
  auto f = all_fits(k, 1);
  if (f.empty()) return std::nullopt;
  return f.front();
}

inline bool crossing_bounds_ok(const std::vector<int>& arc_levels) {
  auto c = crossings(arc_levels);
  return c[0] <= 2 && c[1] <= 4 && c[2] <= 6;
}

// Padded well-shapedness: the minimal arc list fits one of the templates
// once empty arcs are inserted. Equivalent to crossing_bounds_ok (tested).
inline bool is_well_shaped(const Necklace& k) { return crossing_bounds_ok(levels_of(circular_arcs(k))); }
inline bool is_well_shaped(const GameState& s) { return is_well_shaped(Necklace::from_state(s)); }

enum class ShapePattern { Sigma1, Sigma2, NotWellShaped };

inline const char* pattern_name(ShapePattern p) {
  switch (p) {
    case ShapePattern::Sigma1: return "sigma1";
    case ShapePattern::Sigma2: return "sigma2";
    default: return "not-well-shaped";
  }
}

inline ShapePattern shape_pattern(const Necklace& k) {
  auto f = fit(k);
  if (!f) return ShapePattern::NotWellShaped;
  return f->templ().pattern == 1 ? ShapePattern::Sigma1 : ShapePattern::Sigma2;
}
inline ShapePattern shape_pattern(const GameState& s) { return shape_pattern(Necklace::from_state(s)); }

inline ArcList canonical_arcs(const Necklace& k) {
  auto f = fit(k);
  if (!f) throw PreconditionError("state is not well-shaped");
  return *f;
}
inline ArcList canonical_arcs(const GameState& s) { return canonical_arcs(Necklace::from_state(s)); }

inline ArcRole arc_role(const ArcList& a, int idx) {
  return role_from_neighbors(a.slot[a.prev(idx)].level, a.slot[idx].level, a.slot[a.next(idx)].level);
}

// ---- question effect ------------------------------------------------------

enum class SplitKind { ModeSplit, SaddleSplit, UpStepSplit, DownStepSplit, ModeCover, SaddleCover, StepCover, NoTouch, Irregular };

inline const char* kind_name(SplitKind k) {
  switch (k) {
    case SplitKind::ModeSplit: return "mode-split";
    case SplitKind::SaddleSplit: return "saddle-split";
    case SplitKind::UpStepSplit: return "up-step-split";
    case SplitKind::DownStepSplit: return "down-step-split";
    case SplitKind::ModeCover: return "mode-cover";
    case SplitKind::SaddleCover: return "saddle-cover";
    case SplitKind::StepCover: return "step-cover";
    case SplitKind::NoTouch: return "no-touch";
    case SplitKind::Irregular: return "irregular";
  }
  return "?";
}

// delta(kind, answer) at both affected levels i and i+1. Irregular and
// NoTouch have no table value.
inline int delta(SplitKind kind, Answer ans) {
  bool y = ans == Answer::Yes;
  switch (kind) {
    case SplitKind::SaddleSplit: return 1;
    case SplitKind::ModeSplit: return 0;
    case SplitKind::UpStepSplit: return y ? 0 : 1;
    case SplitKind::DownStepSplit: return y ? 1 : 0;
    case SplitKind::SaddleCover: return y ? 0 : 1;
    case SplitKind::ModeCover: return y ? 0 : -1;
    case SplitKind::StepCover: return 0;
    default: throw PreconditionError("no delta table entry for this kind");
  }
}

// How Q meets one non-empty circular arc. `covered` counts elements of the
// arc in Q; pieces is the number of maximal Q-runs inside the arc (circular).
struct ArcTouch {
  int arc;
  int level;
  ArcRole role;
  SplitKind kind;        // relative to Q
  bool in_q;             // some element of the arc is in Q
  bool touches_low = false;  // for splits: Q holds the boundary facing a lower neighbour
};

namespace detail {

// Membership pattern of Q over positions [start, start+len) taken mod n.
inline std::vector<std::pair<std::uint64_t, bool>> arc_pattern(const SupportQuestion& q, std::uint64_t n, std::uint64_t start,
                                                               std::uint64_t len) {
  std::vector<std::pair<std::uint64_t, bool>> pat;
  auto add = [&](std::uint64_t l, bool in) {
    if (!l) return;
    if (!pat.empty() && pat.back().second == in)
      pat.back().first += l;
    else
      pat.push_back({l, in});
  };
  auto walk = [&](std::uint64_t a, std::uint64_t b) {  // [a, b)
    std::uint64_t x = a;
    for (const Span& s : q) {
      if (s.hi < x) continue;
      if (s.lo >= b) break;
      if (s.lo > x) add(s.lo - x, false), x = s.lo;
      std::uint64_t e = std::min(b, s.hi + 1);
      add(e - x, true);
      x = e;
    }
    if (x < b) add(b - x, false);
  };
  if (start + len <= n) {
    walk(start, start + len);
  } else {
    walk(start, n);
    walk(0, start + len - n);
  }
  return pat;
}

}  // namespace detail

inline std::vector<ArcTouch> classify(const Necklace& k, const SupportQuestion& q) {
  auto arcs = circular_arcs(k);
  std::vector<ArcTouch> out;
  std::size_t r = arcs.size();
  for (std::size_t i = 0; i < r; ++i) {
    const CArc& a = arcs[i];
    ArcTouch t{int(i), a.level, ArcRole::Mode, SplitKind::NoTouch, false};
    int lo = -1, hi = -1;
    if (r >= 2) {
      lo = arcs[(i + r - 1) % r].level;
      hi = arcs[(i + 1) % r].level;
      // neighbour in the minimal list differs by exactly one level
      lo = lo > a.level ? a.level + 1 : a.level - 1;
      hi = hi > a.level ? a.level + 1 : a.level - 1;
      t.role = role_from_neighbors(lo, a.level, hi);
    }
    auto pat = detail::arc_pattern(q, k.size(), a.start, a.len);
    std::uint64_t inq = 0;
    for (auto& [l, in] : pat)
      if (in) inq += l;
    t.in_q = inq > 0;
    if (inq == 0) {
      t.kind = SplitKind::NoTouch;
    } else if (inq == a.len) {
      t.kind = t.role == ArcRole::Mode ? SplitKind::ModeCover : t.role == ArcRole::Saddle ? SplitKind::SaddleCover : SplitKind::StepCover;
      if (r < 2) t.kind = SplitKind::Irregular;
    } else if (r >= 2 && pat.size() == 2) {
      bool first = pat.front().second;  // Q holds the boundary at the arc start
      int side_level = first ? lo : hi;
      t.touches_low = side_level < a.level;
      switch (t.role) {
        case ArcRole::Mode: t.kind = SplitKind::ModeSplit; break;
        case ArcRole::Saddle: t.kind = SplitKind::SaddleSplit; break;
        default: t.kind = t.touches_low ? SplitKind::UpStepSplit : SplitKind::DownStepSplit;
      }
    } else {
      t.kind = SplitKind::Irregular;
    }
    out.push_back(t);
  }
  return out;
}

// Isolated-update delta: arc counts at levels 0..4 when only the elements of
// arc `idx` take their answered level.
inline std::array<int, 5> isolated_delta(const Necklace& k, const SupportQuestion& q, int idx, Answer ans) {
  auto arcs = circular_arcs(k);
  std::vector<int> before = levels_of(arcs);
  std::vector<int> after;
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    if (int(i) != idx) {
      after.push_back(arcs[i].level);
      continue;
    }
    auto pat = detail::arc_pattern(q, k.size(), arcs[i].start, arcs[i].len);
    for (auto& [l, in] : pat) after.push_back(arcs[i].level + (((ans == Answer::Yes) != in) ? 1 : 0));
  }
  // glue equal neighbours (including around the circle)
  std::vector<int> g;
  for (int l : after)
    if (g.empty() || g.back() != l) g.push_back(l);
  while (g.size() >= 2 && g.front() == g.back()) g.pop_back();
  auto cb = minimal_counts(before), ca = minimal_counts(g);
  std::array<int, 5> d{};
  for (int l = 0; l < 5; ++l) d[l] = ca[l] - cb[l];
  return d;
}

// Level counts of the answered support with level-4 cells retained.
inline std::array<int, 4> direct_counts(const Necklace& k, const SupportQuestion& q, Answer ans);

// Level-i arc counts (i = 0..3) predicted by summing delta over all arcs
// for the yes/no answer. Table values for regular kinds; isolated
// evaluation for irregular ones. Arcs disjoint from Q are covered by the
// complement, so the cover rule applies with the answer swapped.
// With at most two arcs the flanking arcs of an arc coincide and the
// updates are not separable: `degenerate` is set and the joint update used.
// A child with no boundaries left is a single closed arc.
inline std::array<int, 4> predicted_counts(const Necklace& k, const SupportQuestion& q, Answer ans, bool* degenerate = nullptr) {
  auto arcs = circular_arcs(k);
  if (degenerate) *degenerate = arcs.size() < 3;
  if (arcs.size() < 3) return direct_counts(k, q, ans);
  auto base = minimal_counts(levels_of(arcs));
  std::array<int, 4> out{base[0], base[1], base[2], base[3]};
  for (const ArcTouch& t : classify(k, q)) {
    std::array<int, 5> d{};
    if (t.kind == SplitKind::Irregular) {
      d = isolated_delta(k, q, t.arc, ans);
    } else if (t.kind == SplitKind::NoTouch) {
      SplitKind cover = t.role == ArcRole::Mode ? SplitKind::ModeCover : t.role == ArcRole::Saddle ? SplitKind::SaddleCover : SplitKind::StepCover;
      d[t.level] = d[t.level + 1] = delta(cover, flip(ans));
    } else {
      d[t.level] = d[t.level + 1] = delta(t.kind, ans);
    }
    for (int l = 0; l < 4; ++l) out[l] += d[l];
  }
  // every boundary vanished: the child is one arc closed around the circle
  if (out == std::array<int, 4>{}) {
    int l = answered_cells(k, q, ans).front().level;
    if (l < kEliminated) out[l] = 1;
  }
  return out;
}

// Level counts of the answered support with level-4 cells retained.
inline std::array<int, 4> direct_counts(const Necklace& k, const SupportQuestion& q, Answer ans) {
  auto c = minimal_counts(merged_levels(answered_cells(k, q, ans)));
  return {c[0], c[1], c[2], c[3]};
}

// Both children well-shaped (eliminated elements leave the necklace).
inline bool preserves_well_shape(const Necklace& k, const SupportQuestion& q) {
  if (!is_well_shaped(k)) throw PreconditionError("state is not well-shaped");
  return is_well_shaped(apply_answer(k, q, Answer::Yes)) && is_well_shaped(apply_answer(k, q, Answer::No));
}

inline bool preserves_well_shape(const GameState& s, const Question& q) {
  SupportMap map(s);
  return preserves_well_shape(Necklace::from_state(s), map.to_support(q, s));
}

// The sufficient conditions (a), (b)(i-iv), (c) checked for levels 0..2.
struct LemmaCheck {
  bool ok = true;
  std::string why;
};

inline LemmaCheck lemma_conditions(const Necklace& k, const SupportQuestion& q) {
  LemmaCheck res;
  auto touches = classify(k, q);
  for (int i = 0; i <= 2; ++i) {
    int splits = 0, irregular = 0;
    const ArcTouch* sp = nullptr;
    int modes_covered = 0, modes_uncovered = 0;
    bool saddle_cover = false, saddle_uncover = false;
    for (const ArcTouch& t : touches) {
      if (t.level != i) continue;
      switch (t.kind) {
        case SplitKind::ModeSplit:
        case SplitKind::SaddleSplit:
        case SplitKind::UpStepSplit:
        case SplitKind::DownStepSplit: ++splits, sp = &t; break;
        case SplitKind::Irregular: ++irregular; break;
        case SplitKind::ModeCover: ++modes_covered; break;
        case SplitKind::SaddleCover: saddle_cover = true; break;
        case SplitKind::NoTouch:
          if (t.role == ArcRole::Mode) ++modes_uncovered;
          if (t.role == ArcRole::Saddle) saddle_uncover = true;
          break;
        default: break;
      }
    }
    std::string lvl = "level " + std::to_string(i) + ": ";
    if (irregular) return {false, lvl + "irregular intersection"};
    if (splits > 1) return {false, lvl + "(a) more than one split arc"};
    int holds = 0, used_cover = 0, used_uncover = 0;
    if (sp) {
      if (sp->kind == SplitKind::ModeSplit) ++holds;
      if (sp->kind == SplitKind::UpStepSplit && modes_covered >= 1) ++holds, used_cover = 1;
      if (sp->kind == SplitKind::DownStepSplit && modes_uncovered >= 1) ++holds, used_uncover = 1;
      if (sp->kind == SplitKind::SaddleSplit && modes_covered >= 1 && modes_uncovered >= 1) ++holds, used_cover = used_uncover = 1;
    }
    if (holds != 1) return {false, lvl + "(b) no admissible split pattern"};
    if (saddle_cover && modes_covered - used_cover < 1) return {false, lvl + "(c) saddle covered without a spare covered mode"};
    // (c) read for the complementary question as well
    if (saddle_uncover && modes_uncovered - used_uncover < 1) return {false, lvl + "(c) saddle uncovered without a spare uncovered mode"};
  }
  return res;
}

}  // namespace ulam
