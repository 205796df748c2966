#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include <ulam/necklace.hpp>
#include <ulam/shape.hpp>

namespace ulam::testing {

// Template slot sizes laid out in template order, then rotated by `shift`
// support positions so that the line cut falls anywhere on the circle.
inline Necklace from_template(int tpl, const std::array<std::uint64_t, 12>& sizes, std::uint64_t shift = 0) {
  const Template& t = templates()[tpl];
  std::vector<int> lv;
  for (int i = 0; i < 12; ++i) lv.insert(lv.end(), sizes[i], t.level[i]);
  if (!lv.empty()) std::rotate(lv.begin(), lv.begin() + (shift % lv.size()), lv.end());
  return Necklace::from_levels(lv);
}

inline Necklace random_well_shaped(std::mt19937_64& rng, std::uint64_t max_size, double empty_p = 0.2) {
  std::array<std::uint64_t, 12> sz{};
  for (;;) {
    std::uint64_t total = 0;
    for (auto& s : sz) {
      s = std::uniform_real_distribution<double>(0, 1)(rng) < empty_p ? 0 : 1 + rng() % max_size;
      total += s;
    }
    if (total >= 2) break;
  }
  return from_template(int(rng() % 4), sz, rng());
}

inline SupportQuestion random_question(std::mt19937_64& rng, std::uint64_t n, int max_spans = 4) {
  SupportQuestion q;
  int c = int(rng() % (max_spans + 1));
  for (int k = 0; k < c; ++k) {
    std::uint64_t a = rng() % n, b = rng() % n;
    q.push_back({std::min(a, b), std::max(a, b)});
  }
  return normalize(q);
}

// A GameState over 2^m with the given support necklace and eliminated
// elements scattered between its segments.
inline GameState embed(const Necklace& k, int m, std::mt19937_64& rng) {
  std::uint64_t n = std::uint64_t(1) << m;
  std::vector<int> lv = k.levels();
  while (lv.size() < n) lv.insert(lv.begin() + (rng() % (lv.size() + 1)), 4);
  return GameState::from_levels(m, lv);
}

}  // namespace ulam::testing

namespace ulam::testing {

// A well-shaped necklace of the given type: each level's count spread over
// that level's template slots at random.
inline Necklace necklace_of_type(const StateType& t, std::mt19937_64& rng, int tpl = -1) {
  if (tpl < 0) tpl = int(rng() % 4);
  const Template& T = templates()[tpl];
  std::array<std::uint64_t, 12> sz{};
  for (int l = 0; l < 4; ++l) {
    std::vector<int> slots;
    for (int i = 0; i < 12; ++i)
      if (T.level[i] == l) slots.push_back(i);
    for (std::uint64_t x = 0; x < t[l]; ++x) ++sz[slots[rng() % slots.size()]];
  }
  return from_template(tpl, sz, rng());
}

}  // namespace ulam::testing
