#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "core.hpp"

namespace ulam {

inline std::uint64_t ceil_half(std::uint64_t x) { return (x + 1) / 2; }

inline bool is_0typical(const StateType& t) {
  return t[0] == 0 && t[2] + 1 >= t[1] && t[3] >= std::uint64_t(character(t));
}

// Minimal level-3 mass for (0,t1,t2,.) to be won by halved questions
// (constrained) or arbitrary ones (unconstrained).
class NicenessDp {
 public:
  std::uint64_t m_tilde(std::uint64_t t1, std::uint64_t t2) { return get(t1, t2, true); }
  std::uint64_t m_unconstrained(std::uint64_t t1, std::uint64_t t2) { return get(t1, t2, false); }

  // Smallest t3 with ch(0,t1,t2,t3) > max(k1..k4) for the question
  // [0,a1,a2] asked in (0,t1,t2,0). Empty for self-referential candidates.
  std::optional<std::uint64_t> minc(std::uint64_t t1, std::uint64_t t2, std::uint64_t a1, std::uint64_t a2, bool halved = true) {
    auto k = max_k(t1, t2, a1, a2, halved);
    if (!k) return std::nullopt;
    return from_k(t1, t2, *k);
  }

  // Niceness per the characterization: t3 >= m_tilde(t1, t2).
  bool in_w(const StateType& t) { return t[0] == 0 && t[3] >= m_tilde(t[1], t[2]); }

  // A type [0,a1,a2,a3] with a1 <= ceil(t1/2), a2 <= ceil(t2/2) whose
  // children can both be won in character - 1 questions: each child, padded
  // up to its W threshold on level 3, fits the volume bound. Candidates whose
  // children are in W themselves come first; then the smallest gap between
  // the children's volumes, more level-3 elements, more level-1 elements,
  // fewer level-2 elements.
  std::optional<QuestionType> dp_qtype(const StateType& t) {
    if (t[0] != 0) return std::nullopt;
    int k = character(t);
    if (k == 0) return std::nullopt;
    u128 cap = pow2(k - 1);
    auto need = [&](const StateType& c) -> std::uint64_t {
      return (c[1] + c[2] <= 1) ? 0 : m_tilde(c[1], c[2]);
    };
    auto padded_fits = [&](const StateType& c, std::uint64_t n) { return volume({0, c[1], c[2], n}, k - 1) <= cap; };
    std::optional<QuestionType> best;
    std::tuple<bool, u128, std::uint64_t, std::uint64_t, std::uint64_t> best_rank;
    for (std::uint64_t a1 = 0; a1 <= std::min(t[1], ceil_half(t[1])); ++a1)
      for (std::uint64_t a2 = 0; a2 <= std::min(t[2], ceil_half(t[2])); ++a2) {
        // yes child gains a3 on level 3, no child loses it
        StateType y0 = apply_answer_type(t, {0, a1, a2, 0}, Answer::Yes);
        StateType n0 = apply_answer_type(t, {0, a1, a2, 0}, Answer::No);
        std::uint64_t ny = need(y0), nn = need(n0);
        if (!padded_fits(y0, ny) || !padded_fits(n0, nn)) continue;
        u128 vy = volume(y0, k - 1), vn = volume(n0, k - 1);
        if (vy > cap || vn > cap + u128(t[3])) continue;
        std::uint64_t lo = vn > cap ? std::uint64_t(vn - cap) : 0;
        std::uint64_t hi = std::uint64_t(std::min<u128>(cap - vy, u128(t[3])));
        if (lo > hi) continue;
        // range keeping both children in W
        std::uint64_t slo = std::max(lo, ny > y0[3] ? ny - y0[3] : 0);
        std::uint64_t shi = n0[3] >= nn ? std::min(hi, n0[3] - nn) : 0;
        bool strict = n0[3] >= nn && slo <= shi;
        // gap |vy + a3 - (vn - a3)| is smallest at a3 = ceil((vn - vy) / 2)
        std::uint64_t a3 = vn > vy ? std::uint64_t((vn - vy + 1) / 2) : 0;
        a3 = strict ? std::clamp(a3, slo, shi) : std::clamp(a3, lo, hi);
        u128 wy = vy + a3, wn = vn - a3;
        u128 gap = wy > wn ? wy - wn : wn - wy;
        QuestionType cand{0, a1, a2, a3};
        auto rank = std::make_tuple(!strict, gap, ~a3, ~a1, a2);
        if (!best || rank < best_rank) best = cand, best_rank = rank;
      }
    return best;
  }

  struct Row {
    int ch;
    std::uint64_t t1, t2, t3_min, t3_max;
    auto operator<=>(const Row&) const = default;
  };

  // 0-typical (0,t1,t2,t3) of character <= max_ch with t3 < m_tilde, grouped
  // by (t1,t2) into maximal t3 ranges of equal character.
  std::vector<Row> non_nice_table(int max_ch = 13) {
    std::vector<Row> rows;
    u128 cap = pow2(max_ch);
    for (std::uint64_t t1 = 0; volume({0, t1, 0, 0}, max_ch) <= cap; ++t1)
      for (std::uint64_t t2 = t1 ? t1 - 1 : 0; volume({0, t1, t2, 0}, max_ch) <= cap; ++t2) {
        if (t1 + t2 == 0) continue;
        std::uint64_t mt = m_tilde(t1, t2);
        for (std::uint64_t t3 = 0; t3 < mt; ++t3) {
          StateType s{0, t1, t2, t3};
          int c = character(s);
          if (c > max_ch) break;
          if (t3 < std::uint64_t(c)) continue;
          if (!rows.empty() && rows.back().t1 == t1 && rows.back().t2 == t2 && rows.back().ch == c && rows.back().t3_max + 1 == t3)
            rows.back().t3_max = t3;
          else
            rows.push_back({c, t1, t2, t3, t3});
        }
      }
    std::sort(rows.begin(), rows.end());
    return rows;
  }

  // Pairs (t1,t2) visited while building the table envelope.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> envelope(int max_ch = 13) {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
    u128 cap = pow2(max_ch);
    for (std::uint64_t t1 = 0; volume({0, t1, 0, 0}, max_ch) <= cap; ++t1)
      for (std::uint64_t t2 = 0; volume({0, t1, t2, 0}, max_ch) <= cap; ++t2) out.push_back({t1, t2});
    return out;
  }

 private:
  static std::uint64_t from_k(std::uint64_t t1, std::uint64_t t2, int K) {
    u128 w = volume({0, t1, t2, 0}, K), p = pow2(K);
    return w > p ? 0 : std::uint64_t(p - w + 1);
  }

  std::optional<int> max_k(std::uint64_t t1, std::uint64_t t2, std::uint64_t a1, std::uint64_t a2, bool halved) {
    std::uint64_t y1 = a1, y2 = t1 - a1 + a2, y3 = t2 - a2;
    std::uint64_t n1 = t1 - a1, n2 = a1 + t2 - a2, n3 = a2;
    if ((y1 == t1 && y2 == t2) || (n1 == t1 && n2 == t2)) return std::nullopt;
    int k1 = character({0, y1, y2, y3}), k2 = character({0, n1, n2, n3});
    int k3 = character({0, y1, y2, get(y1, y2, halved)});
    int k4 = character({0, n1, n2, get(n1, n2, halved)});
    return std::max({k1, k2, k3, k4});
  }

  std::uint64_t get(std::uint64_t t1, std::uint64_t t2, bool halved) {
    if (t1 == 0 && t2 == 0) return 1;
    if (t1 + t2 == 1) return 0;
    auto& memo = halved ? halved_ : free_;
    auto key = (t1 << 32) | t2;
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    // Every candidate has max k >= ch(0,t1,t2,0) - 1 and MinC grows with k,
    // so reaching that bound ends the search.
    int lb = std::max(0, character({0, t1, t2, 0}) - 1);
    std::uint64_t A1 = halved ? ceil_half(t1) : t1, A2 = halved ? ceil_half(t2) : t2;
    std::optional<std::uint64_t> best;
    int best_k = 1 << 20;
    for (std::uint64_t a1 = 0; a1 <= A1 && best_k > lb; ++a1)
      for (std::uint64_t a2 = 0; a2 <= A2 && best_k > lb; ++a2) {
        auto k = max_k(t1, t2, a1, a2, halved);
        if (!k) continue;
        std::uint64_t v = from_k(t1, t2, *k);
        if (!best || v < *best) best = v, best_k = *k;
      }
    std::uint64_t r = best.value_or(0);
    memo[key] = r;
    return r;
  }

  std::unordered_map<std::uint64_t, std::uint64_t> halved_, free_;
};

inline NicenessDp& shared_dp() {
  static NicenessDp dp;
  return dp;
}

// Exhaustive type-level game search: can (t) be won within q questions by
// arbitrary question types? Used as an independent niceness oracle.
class TypeGameOracle {
 public:
  bool win(const StateType& t, int q) {
    if (t.total() <= 1) return true;
    if (q <= 0) return false;
    if (volume(t, q) > pow2(q)) return false;
    auto key = std::make_tuple(t[0], t[1], t[2], t[3], q);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    bool ok = false;
    for (std::uint64_t a0 = 0; a0 <= t[0] && !ok; ++a0)
      for (std::uint64_t a1 = 0; a1 <= t[1] && !ok; ++a1)
        for (std::uint64_t a2 = 0; a2 <= t[2] && !ok; ++a2) {
          QuestionType a{a0, a1, a2, 0};
          StateType y = apply_answer_type(t, a, Answer::Yes), n = apply_answer_type(t, a, Answer::No);
          // yes child gains a3 at level 3, no child loses it: find a feasible range
          u128 cap = pow2(q - 1), vy = volume(y, q - 1), vn = volume(n, q - 1);
          if (vy > cap || vn > cap + u128(t[3])) continue;
          std::uint64_t hi = std::uint64_t(std::min<u128>(cap - vy, t[3]));
          std::uint64_t lo = vn > cap ? std::uint64_t(vn - cap) : 0;
          for (std::uint64_t a3 = lo; a3 <= hi && !ok; ++a3) {
            a[3] = a3;
            ok = win(apply_answer_type(t, a, Answer::Yes), q - 1) && win(apply_answer_type(t, a, Answer::No), q - 1);
          }
        }
    memo_[key] = ok;
    return ok;
  }

  bool nice(const StateType& t) { return win(t, character(t)); }

 private:
  std::map<std::tuple<std::uint64_t, std::uint64_t, std::uint64_t, std::uint64_t, int>, bool> memo_;
};

}  // namespace ulam
