#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "core.hpp"
#include "necklace.hpp"
#include "questions.hpp"
#include "shape.hpp"
#include "strategy.hpp"

namespace ulam {

struct Failure {
  std::string path;  // answers from the root, 'y'/'n'
  std::string reason;
};

struct VerificationReport {
  int m = -1;
  Mode mode = Mode::Perfect;
  int budget = 0;
  bool shape_checked = true;
  bool sampled = false;
  std::uint64_t samples = 0;
  std::uint64_t nodes = 0;  // states expanded (memo hits excluded)
  int max_depth = 0;
  std::vector<Failure> failures;
  std::uint64_t failure_count = 0;
  std::map<int, std::map<StateType, std::uint64_t>> histogram;  // depth -> type -> expansions
  std::vector<std::string> notes;

  bool ok() const { return failure_count == 0; }

  std::string str(bool with_histogram = false) const {
    std::ostringstream os;
    os << "m " << m << '\n';
    os << "mode " << (mode == Mode::Perfect ? "perfect" : "spencer") << '\n';
    os << "budget " << budget << '\n';
    os << "traversal " << (sampled ? "sampled" : "exhaustive") << '\n';
    if (sampled) os << "samples " << samples << '\n';
    os << "shape_check " << (shape_checked ? 1 : 0) << '\n';
    os << "nodes " << nodes << '\n';
    os << "max_depth " << max_depth << '\n';
    os << "failures " << failure_count << '\n';
    for (const Failure& f : failures) os << "failure " << (f.path.empty() ? "-" : f.path) << ' ' << f.reason << '\n';
    if (with_histogram)
      for (const auto& [d, types] : histogram)
        for (const auto& [t, c] : types) os << "depth " << d << ' ' << t.str() << ' ' << c << '\n';
    for (const std::string& n : notes) os << "note " << n << '\n';
    os << "result " << (ok() ? "PASS" : "FAIL") << '\n';
    return os.str();
  }
};

namespace detail {

inline std::vector<std::uint64_t> necklace_key(const GameState& s, int budget) {
  std::vector<std::uint64_t> key{std::uint64_t(budget)};
  for (const Run& r : s.runs())
    if (r.level < kEliminated) {
      if (key.size() > 1 && key[key.size() - 2] == std::uint64_t(r.level))
        key.back() += r.len;
      else
        key.push_back(std::uint64_t(r.level)), key.push_back(r.len);
    }
  return key;
}

struct KeyHash {
  std::size_t operator()(const std::vector<std::uint64_t>& v) const {
    std::size_t h = 1469598103934665603ull;
    for (auto x : v) h = (h ^ std::hash<std::uint64_t>{}(x)) * 1099511628211ull;
    return h;
  }
};

// Depth-first traversal with a memo on (budget, segment sequence). The
// strategy only reads the segment sequence, so equal keys give equal
// subtrees.
class Walker {
 public:
  struct Sub {
    bool ok = true;
    int height = 0;
    std::uint64_t failures = 0;
    std::string first_path, first_reason;
  };

  Walker(Strategy& s, bool check_shape, bool memo, std::size_t max_failures = 16)
      : strat_(s), check_shape_(check_shape), memo_on_(memo), max_failures_(max_failures) {}

  Sub walk(const GameState& st, int budget, int depth, std::string& path, VerificationReport& rep) {
    std::vector<std::uint64_t> key;
    if (memo_on_) {
      key = necklace_key(st, budget);
      if (auto it = memo_.find(key); it != memo_.end()) {
        Sub hit = it->second;
        if (!hit.ok) {
          hit.first_path = path + hit.first_path;
          record(rep, hit.first_path, hit.first_reason, hit.failures);
        }
        return hit;
      }
    }
    Sub r = expand(st, budget, depth, path, rep);
    if (memo_on_) {
      // failure suffixes are stored relative to this node
      Sub stored = r;
      if (!r.ok) stored.first_path = r.first_path.substr(std::min(path.size(), r.first_path.size()));
      memo_.emplace(std::move(key), std::move(stored));
    }
    return r;
  }

 private:
  Sub fail(VerificationReport& rep, const std::string& path, const std::string& reason) {
    record(rep, path, reason, 1);
    return Sub{false, 0, 1, path, reason};
  }

  void record(VerificationReport& rep, const std::string& path, const std::string& reason, std::uint64_t n) {
    rep.failure_count += n;
    if (rep.failures.size() < max_failures_) rep.failures.push_back({path, reason});
  }

  Sub expand(const GameState& st, int budget, int depth, std::string& path, VerificationReport& rep) {
    ++rep.nodes;
    ++rep.histogram[depth][st.type()];
    if (check_shape_ && !is_well_shaped(st)) return fail(rep, path, "non-well-shaped " + st.type().str());
    if (st.is_final()) return Sub{};
    if (budget <= 0) return fail(rep, path, "depth exceeded at " + st.type().str());
    Decision d;
    try {
      d = strat_.next_question(st);
    } catch (const std::exception& e) {
      return fail(rep, path, std::string("dispatcher error: ") + e.what());
    }
    if (d.final) return fail(rep, path, "dispatcher declared final with support " + std::to_string(st.support_size()));
    if (!d.question.is_valid()) return fail(rep, path, "more than four intervals: " + d.question.str());
    Sub out;
    for (Answer a : {Answer::Yes, Answer::No}) {
      GameState child = apply_answer(st, d.question, a);
      path.push_back(answer_char(a));
      Sub c = walk(child, budget - 1, depth + 1, path, rep);
      path.pop_back();
      out.height = std::max(out.height, c.height + 1);
      if (!c.ok) {
        if (out.ok) out.first_path = c.first_path, out.first_reason = c.first_reason;
        out.ok = false;
        out.failures += c.failures;
      }
    }
    return out;
  }

  Strategy& strat_;
  bool check_shape_, memo_on_;
  std::size_t max_failures_;
  std::unordered_map<std::vector<std::uint64_t>, Sub, KeyHash> memo_;
};

inline void merge(VerificationReport& into, const VerificationReport& from) {
  into.nodes += from.nodes;
  into.max_depth = std::max(into.max_depth, from.max_depth);
  into.failure_count += from.failure_count;
  for (const Failure& f : from.failures)
    if (into.failures.size() < 16) into.failures.push_back(f);
  for (const auto& [d, types] : from.histogram)
    for (const auto& [t, c] : types) into.histogram[d][t] += c;
}

}  // namespace detail

struct VerifyOptions {
  Mode mode = Mode::Perfect;
  bool check_shape = true;
  bool memo = true;
  int jobs = 1;
  int split_depth = 4;  // subtrees below this depth go to workers when jobs > 1
};

inline VerificationReport verify_state(const GameState& st, int budget, const VerifyOptions& opt = {}) {
  VerificationReport rep;
  rep.mode = opt.mode;
  rep.budget = budget;
  rep.shape_checked = opt.check_shape;
  if (opt.jobs <= 1) {
    Strategy strat(opt.mode);
    detail::Walker w(strat, opt.check_shape, opt.memo);
    std::string path;
    auto r = w.walk(st, budget, 0, path, rep);
    rep.max_depth = r.height;
    return rep;
  }
  // Expand the top levels serially, then hand the frontier to workers, each
  // with its own strategy memo and traversal memo.
  struct Item {
    GameState st;
    std::string path;
    int budget;
  };
  std::vector<Item> frontier{{st, "", budget}};
  Strategy top(opt.mode);
  for (int d = 0; d < opt.split_depth; ++d) {
    std::vector<Item> next;
    for (Item& it : frontier) {
      if (it.st.is_final() || it.budget <= 0) {
        next.push_back(it);
        continue;
      }
      if (opt.check_shape && !is_well_shaped(it.st)) {
        next.push_back(it);  // the worker reports the failure
        continue;
      }
      Decision dec;
      try {
        dec = top.next_question(it.st);
      } catch (const std::exception&) {
        next.push_back(it);
        continue;
      }
      ++rep.nodes;
      ++rep.histogram[d][it.st.type()];
      for (Answer a : {Answer::Yes, Answer::No})
        next.push_back({apply_answer(it.st, dec.question, a), it.path + answer_char(a), it.budget - 1});
    }
    frontier.swap(next);
  }
  int jobs = std::min<int>(opt.jobs, int(frontier.size()));
  std::vector<VerificationReport> parts(jobs);
  std::vector<std::thread> pool;
  for (int j = 0; j < jobs; ++j)
    pool.emplace_back([&, j] {
      Strategy strat(opt.mode);
      detail::Walker w(strat, opt.check_shape, opt.memo);
      for (std::size_t i = j; i < frontier.size(); i += jobs) {
        std::string path = frontier[i].path;
        int depth = int(path.size());
        auto r = w.walk(frontier[i].st, frontier[i].budget, depth, path, parts[j]);
        parts[j].max_depth = std::max(parts[j].max_depth, depth + r.height);
      }
    });
  for (auto& t : pool) t.join();
  for (const auto& p : parts) detail::merge(rep, p);
  return rep;
}

inline bool no_perfect_strategy_known(int m) { return m == 2 || m == 3 || m == 5; }

inline VerificationReport verify_perfect(int m, const VerifyOptions& opt = {}) {
  if (m < 0 || m > 62) throw PreconditionError("m out of range");
  VerificationReport rep = verify_state(GameState::initial(m), n_min(m), opt);
  rep.m = m;
  if (no_perfect_strategy_known(m)) rep.notes.push_back("no perfect strategy exists for m in {2,3,5}; failure expected");
  return rep;
}

// Uniformly random answer paths; each question is planned on the real state.
inline VerificationReport verify_sampled(int m, std::uint64_t samples, std::uint64_t seed = 1, const VerifyOptions& opt = {}) {
  VerificationReport rep;
  rep.m = m;
  rep.mode = opt.mode;
  rep.budget = n_min(m);
  rep.shape_checked = opt.check_shape;
  rep.sampled = true;
  rep.samples = samples;
  Strategy strat(opt.mode);
  std::mt19937_64 rng(seed);
  // decisions cached in support coordinates: equal keys may place the
  // eliminated elements differently
  std::unordered_map<std::vector<std::uint64_t>, SupportQuestion, detail::KeyHash> cache;
  GameState root = GameState::initial(m);
  for (std::uint64_t s = 0; s < samples; ++s) {
    GameState st = root;
    std::string path;
    int budget = rep.budget;
    for (;;) {
      ++rep.nodes;
      if (opt.check_shape && !is_well_shaped(st)) {
        rep.failure_count++;
        if (rep.failures.size() < 16) rep.failures.push_back({path, "non-well-shaped " + st.type().str()});
        break;
      }
      if (st.is_final()) {
        rep.max_depth = std::max(rep.max_depth, int(path.size()));
        break;
      }
      if (budget <= 0) {
        rep.failure_count++;
        if (rep.failures.size() < 16) rep.failures.push_back({path, "depth exceeded at " + st.type().str()});
        break;
      }
      auto key = detail::necklace_key(st, budget);
      auto it = cache.find(key);
      if (it == cache.end()) {
        try {
          Decision d = strat.next_question(st);
          it = cache.emplace(std::move(key), SupportMap(st).to_support(d.question, st)).first;
        } catch (const std::exception& e) {
          rep.failure_count++;
          if (rep.failures.size() < 16) rep.failures.push_back({path, std::string("dispatcher error: ") + e.what()});
          break;
        }
      }
      Answer a = (rng() & 1) ? Answer::Yes : Answer::No;
      st = apply_answer(st, SupportMap(st).to_universe(it->second), a);
      path.push_back(answer_char(a));
      --budget;
    }
  }
  return rep;
}

// Exhaustive subset minimax: no strategy with character - 1 questions.
inline bool verify_optimal_tiny(const StateType& t) {
  if (t.total() > 8) throw PreconditionError("verify_optimal_tiny needs support <= 8");
  int ch = character(t);
  if (ch == 0) return true;
  return shared_tiny().depth(type_levels(t)) > ch - 1;
}

inline int tiny_depth(const StateType& t) {
  if (t.total() > 8) throw PreconditionError("tiny_depth needs support <= 8");
  return shared_tiny().depth(type_levels(t));
}

}  // namespace ulam
