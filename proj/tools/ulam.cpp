#include <CLI11.hpp>

#include <cctype>
#include <chrono>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <ulam/core.hpp>
#include <ulam/necklace.hpp>
#include <ulam/niceness.hpp>
#include <ulam/questions.hpp>
#include <ulam/shape.hpp>
#include <ulam/strategy.hpp>
#include <ulam/synthesis.hpp>
#include <ulam/verify.hpp>

using namespace ulam;

namespace {

constexpr int kOk = 0, kFail = 1, kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::array<std::uint64_t, 4> parse_quad(const std::string& s) {
  std::array<std::uint64_t, 4> v{};
  std::string clean;
  for (char c : s)
    if (std::isdigit(static_cast<unsigned char>(c)) || c == ',') clean += c;
  std::stringstream ss(clean);
  std::string tok;
  int i = 0;
  while (std::getline(ss, tok, ',')) {
    if (i >= 4 || tok.empty()) throw UsageError("expected four comma-separated counts: " + s);
    v[i++] = std::stoull(tok);
  }
  if (i != 4) throw UsageError("expected four comma-separated counts: " + s);
  return v;
}

// "level:len level:len ..." in support order
Necklace parse_segs(const std::string& s) {
  std::vector<Seg> segs;
  std::stringstream ss(s);
  std::string tok;
  while (ss >> tok) {
    auto c = tok.find(':');
    if (c == std::string::npos) throw UsageError("segment must be level:len: " + tok);
    int level = std::stoi(tok.substr(0, c));
    std::uint64_t len = std::stoull(tok.substr(c + 1));
    if (level < 0 || level > 3) throw UsageError("segment level must be 0..3: " + tok);
    segs.push_back({level, len});
  }
  return Necklace(segs);
}

std::vector<Answer> parse_answers(const std::string& s) {
  std::vector<Answer> out;
  for (char c : s) {
    if (c == 'y' || c == 'Y') out.push_back(Answer::Yes);
    else if (c == 'n' || c == 'N') out.push_back(Answer::No);
    else if (!std::isspace(static_cast<unsigned char>(c))) throw UsageError(std::string("answers must be y/n, got '") + c + "'");
  }
  return out;
}

Construction parse_construction(const std::string& s) {
  if (s == "theorem1") return Construction::Theorem1;
  if (s == "0bcd") return Construction::Type0bcd;
  if (s == "11cd") return Construction::Type11cd;
  if (s == "102d") return Construction::Type102d;
  if (s == "100d") return Construction::Type100d;
  throw UsageError("unknown construction: " + s);
}

Mode parse_mode(const std::string& s) {
  if (s == "perfect") return Mode::Perfect;
  if (s == "spencer") return Mode::Spencer;
  throw UsageError("unknown mode: " + s);
}

std::string trace_line(int depth, const StateType& t, const Question& q, Answer a, const StateType& c) {
  std::ostringstream os;
  os << depth << '\t' << t.str() << '\t' << (q.empty() ? "-" : q.str()) << '\t' << answer_char(a) << '\t' << c.str();
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ulam-Renyi game with 3 lies and 4-interval questions"};
  app.require_subcommand(1);

  auto* verify = app.add_subcommand("verify", "verify the strategy for a universe of size 2^m");
  int v_m = 0, v_jobs = 1;
  std::string v_mode = "perfect";
  bool v_no_shape = false, v_hist = false, v_no_memo = false;
  std::uint64_t v_samples = 0, v_seed = 1;
  verify->add_option("--m", v_m, "bit width")->required()->check(CLI::Range(0, 62));
  verify->add_option("--mode", v_mode, "perfect | spencer");
  verify->add_option("--jobs", v_jobs, "worker threads")->check(CLI::PositiveNumber);
  verify->add_flag("--no-shape-check", v_no_shape, "skip the well-shapedness check");
  verify->add_flag("--no-memo", v_no_memo, "disable subtree memoization");
  verify->add_flag("--histogram", v_hist, "print the per-depth type histogram");
  verify->add_option("--sampled", v_samples, "check this many random answer paths instead of all");
  verify->add_option("--seed", v_seed, "seed for --sampled");

  auto* charcmd = app.add_subcommand("character", "volume-scan character of a type, or n_min for --m");
  std::string c_type;
  int c_m = -1;
  charcmd->add_option("--type", c_type, "t0,t1,t2,t3");
  charcmd->add_option("--m", c_m, "bit width")->check(CLI::Range(0, 62));

  auto* synth = app.add_subcommand("synth", "synthesize a question of a given type on a necklace");
  std::string s_segs, s_type, s_cons = "theorem1";
  synth->add_option("--segs", s_segs, "support segments 'level:len ...'")->required();
  synth->add_option("--type", s_type, "a0,a1,a2,a3")->required();
  synth->add_option("--construction", s_cons, "theorem1 | 0bcd | 11cd | 102d | 100d");

  auto* table = app.add_subcommand("table", "regenerate the table of 0-typical non-nice states");
  int t_max = 13;
  table->add_option("--max-ch", t_max, "largest character")->check(CLI::Range(0, 13));

  auto* trace = app.add_subcommand("trace", "print the strategy along one answer path");
  int tr_m = 0;
  std::string tr_answers;
  std::string tr_mode = "perfect";
  trace->add_option("--m", tr_m, "bit width")->required()->check(CLI::Range(0, 62));
  trace->add_option("--answers", tr_answers, "y/n string");
  trace->add_option("--mode", tr_mode, "perfect | spencer");

  auto* play = app.add_subcommand("play", "play as Responder against the strategy");
  int p_m = 0, p_lies = -1;
  std::uint64_t p_seed = 0;
  std::string p_mode = "perfect";
  bool p_auto = false;
  play->add_option("--m", p_m, "bit width")->required()->check(CLI::Range(0, 62));
  play->add_option("--seed", p_seed, "seed for the automatic responder");
  play->add_flag("--auto", p_auto, "let a random responder answer (secret and lies from --seed)");
  play->add_option("--lies", p_lies, "lies told by the automatic responder (default 0..3 at random)");
  play->add_option("--mode", p_mode, "perfect | spencer");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*verify) {
      VerifyOptions opt;
      opt.mode = parse_mode(v_mode);
      opt.check_shape = !v_no_shape;
      opt.memo = !v_no_memo;
      opt.jobs = v_jobs;
      auto t0 = std::chrono::steady_clock::now();
      VerificationReport rep = v_samples ? verify_sampled(v_m, v_samples, v_seed, opt) : verify_perfect(v_m, opt);
      if (v_samples && no_perfect_strategy_known(v_m)) rep.notes.push_back("no perfect strategy exists for m in {2,3,5}; failure expected");
      double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      std::cout << rep.str(v_hist);
      std::cerr << "elapsed " << secs << " s\n";
      return rep.ok() ? kOk : kFail;
    }
    if (*charcmd) {
      if (c_type.empty() == (c_m < 0)) throw UsageError("give exactly one of --type or --m");
      StateType t;
      if (c_m >= 0) t = initial_type(c_m);
      else {
        auto v = parse_quad(c_type);
        t = {v[0], v[1], v[2], v[3]};
      }
      int ch = character(t);
      std::cout << "type " << t.str() << '\n' << "character " << ch << '\n';
      if (ch > 0) std::cout << "volume " << to_string(volume(t, ch)) << " <= 2^" << ch << '\n';
      if (ch > 0) std::cout << "volume_below " << to_string(volume(t, ch - 1)) << " > 2^" << ch - 1 << '\n';
      return kOk;
    }
    if (*synth) {
      Necklace k = parse_segs(s_segs);
      auto v = parse_quad(s_type);
      QuestionType a{v[0], v[1], v[2], v[3]};
      Synthesized r = synth_on_necklace(k, a, parse_construction(s_cons));
      std::cout << "state " << k.type().str() << '\n';
      std::cout << "spans";
      for (const Span& sp : r.spans) std::cout << ' ' << sp.lo << '-' << sp.hi;
      std::cout << '\n';
      std::cout << "type " << question_type(k, r.spans).str() << '\n';
      std::cout << "swapped " << (r.swapped ? 1 : 0) << '\n';
      std::cout << "route " << r.route << '\n';
      for (Answer ans : {Answer::Yes, Answer::No}) {
        Necklace c = apply_answer(k, r.spans, ans);
        std::cout << (ans == Answer::Yes ? "yes " : "no ") << c.type().str() << ' ' << (is_well_shaped(c) ? "well-shaped" : "NOT-well-shaped") << '\n';
      }
      return kOk;
    }
    if (*table) {
      for (const auto& r : shared_dp().non_nice_table(t_max))
        std::cout << r.ch << "\t0\t" << r.t1 << '\t' << r.t2 << '\t' << r.t3_min << '\t' << r.t3_max << '\n';
      return kOk;
    }
    if (*trace) {
      Strategy strat(parse_mode(tr_mode));
      GameState st = GameState::initial(tr_m);
      auto answers = parse_answers(tr_answers);
      int depth = 0;
      for (Answer a : answers) {
        Decision d = strat.next_question(st);
        if (d.final) throw UsageError("path longer than the strategy: state is final after " + std::to_string(depth) + " answers");
        GameState child = apply_answer(st, d.question, a);
        std::cout << trace_line(depth, st.type(), d.question, a, child.type()) << '\n';
        st = child;
        ++depth;
      }
      if (st.is_final()) {
        std::cout << depth << '\t' << st.type().str() << "\tfinal\n";
      } else {
        Decision d = strat.next_question(st);
        std::cout << depth << '\t' << st.type().str() << '\t' << d.question.str() << '\t' << route_name(d.step.route) << '\t'
                  << question_type(st, d.question).str() << '\n';
      }
      return kOk;
    }
    if (*play) {
      Strategy strat(parse_mode(p_mode));
      GameState st = GameState::initial(p_m);
      std::mt19937_64 rng(p_seed);
      std::uint64_t secret = 0;
      std::vector<int> lie_at;
      int budget = n_min(p_m);
      if (p_auto) {
        secret = std::uniform_int_distribution<std::uint64_t>(0, (std::uint64_t(1) << p_m) - 1)(rng);
        int lies = p_lies >= 0 ? p_lies : int(rng() % 4);
        std::vector<int> plies(budget);
        for (int i = 0; i < budget; ++i) plies[i] = i;
        std::shuffle(plies.begin(), plies.end(), rng);
        lie_at.assign(plies.begin(), plies.begin() + std::min(lies, budget));
        std::cout << "responder secret " << secret << " lies " << lie_at.size() << '\n';
      }
      int asked = 0;
      while (!st.is_final()) {
        Decision d = strat.next_question(st);
        std::cout << "Q" << asked + 1 << ": is x in " << (d.question.empty() ? "{}" : d.question.str()) << "? [y/n]" << std::endl;
        Answer a;
        if (p_auto) {
          bool truth = d.question.contains(secret);
          bool lie = std::find(lie_at.begin(), lie_at.end(), asked) != lie_at.end();
          a = (truth != lie) ? Answer::Yes : Answer::No;
          std::cout << answer_char(a) << '\n';
        } else {
          std::string line;
          for (;;) {
            if (!std::getline(std::cin, line)) {
              std::cerr << "input ended\n";
              return kUsage;
            }
            std::string w;
            for (char c : line)
              if (!std::isspace(static_cast<unsigned char>(c))) w += char(std::tolower(static_cast<unsigned char>(c)));
            if (w == "y" || w == "yes") a = Answer::Yes;
            else if (w == "n" || w == "no") a = Answer::No;
            else {
              std::cout << "answer y or n" << std::endl;
              continue;
            }
            break;
          }
        }
        st = apply_answer(st, d.question, a);
        ++asked;
      }
      if (st.support_size() == 0) {
        std::cout << "answers inconsistent with <= 3 lies\n";
        return kFail;
      }
      std::cout << "secret " << st.support().front() << " found after " << asked << " questions (n_min " << budget << ")\n";
      return kOk;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFail;
  }
  return kUsage;
}
