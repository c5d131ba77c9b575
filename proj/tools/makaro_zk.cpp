// makaro-zk: check, solve, prove and zero-knowledge-test Makaro puzzles.
//
// Trial t of a batch seeded with S draws its shuffles and prover choices
// from RandomSource::for_trial(S, t); simulated transcripts in zk-test use
// for_trial(simulator_seed(S), t). Output depends only on the flags, never
// on the worker count.

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "makaro/makaro.hpp"

using json = nlohmann::ordered_json;
using namespace makaro;

namespace {

constexpr std::uint64_t kDefaultSeed = 1;

enum Exit { kPass = 0, kFail = 1, kUsage = 2 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string puzzle;
  std::string solution;
  std::uint64_t seed = kDefaultSeed;
  std::uint64_t trials = 1;
  std::string transcript_out;
  std::string format = "text";
  std::uint64_t bound = kDefaultSearchBound;
  unsigned workers = 0;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Grid load_puzzle(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return parse_puzzle(text);
  } catch (const ParseError& e) {
    throw UsageError(path + ": " + e.what());
  } catch (const GridError& e) {
    throw UsageError(path + ": " + e.what());
  }
}

Assignment load_solution(const std::string& path, const Grid& g) {
  const std::string text = read_file(path);
  try {
    return parse_solution(text, g);
  } catch (const ParseError& e) {
    throw UsageError(path + ": " + e.what());
  }
}

json cell(Coord c) { return json::array({c.row, c.col}); }

std::string describe(const Grid& g, const FailingCheck& f) {
  switch (f.kind) {
    case CheckKind::Setup: return "setup of room '" + g.rooms()[f.room].id + "' at " + to_string(f.first);
    case CheckKind::Room: return "room '" + g.rooms()[f.room].id + "'";
    case CheckKind::Neighbor: return "neighbor " + to_string(f.first) + " " + to_string(f.second);
    case CheckKind::Arrow: return "arrow " + to_string(f.first);
  }
  return "?";
}

void emit(const Options& o, const json& j, const std::string& text) {
  if (o.format == "json")
    std::cout << j.dump(2) << "\n";
  else
    std::cout << text;
}

unsigned workers(const Options& o) { return o.workers ? o.workers : default_workers(); }

int cmd_check(const Options& o) {
  Grid g = load_puzzle(o.puzzle);
  Assignment a = load_solution(o.solution, g);
  const RuleReport rep = evaluate_rules(g, a);
  json j{{"command", "check"}, {"valid", rep.ok()}, {"violations", json::array()}};
  std::string text = rep.ok() ? "valid\n" : "invalid\n";
  for (std::size_t r : rep.rooms) {
    j["violations"].push_back({{"rule", "room"}, {"room", g.rooms()[r].id}});
    text += "  room '" + g.rooms()[r].id + "' is not a permutation of 1.." + std::to_string(g.rooms()[r].size()) + "\n";
  }
  for (const auto& [x, y] : rep.neighbors) {
    j["violations"].push_back({{"rule", "neighbor"}, {"cells", json::array({cell(x), cell(y)})}});
    text += "  neighbors " + to_string(x) + " and " + to_string(y) + " are equal\n";
  }
  for (Coord b : rep.arrows) {
    j["violations"].push_back({{"rule", "arrow"}, {"cell", cell(b)}});
    text += "  arrow at " + to_string(b) + " does not point at the strict maximum\n";
  }
  emit(o, j, text);
  return rep.ok() ? kPass : kFail;
}

int cmd_solve(const Options& o) {
  Grid g = load_puzzle(o.puzzle);
  std::vector<Assignment> sols;
  try {
    sols = solve_brute_force(g, o.bound);
  } catch (const SearchBoundExceeded& e) {
    throw UsageError(e.what());
  }
  json j{{"command", "solve"}, {"count", sols.size()}, {"solutions", json::array()}};
  std::string text = std::to_string(sols.size()) + (sols.size() == 1 ? " solution\n" : " solutions\n");
  for (const auto& s : sols) {
    j["solutions"].push_back(serialize_solution(g, s));
    text += "\n" + serialize_solution(g, s);
  }
  emit(o, j, text);
  return sols.empty() ? kFail : kPass;
}

struct ProveTally {
  std::uint64_t accepted = 0;
  std::uint64_t rejected = 0;
  std::size_t peak = 0;
  std::map<std::string, std::uint64_t> failures;  // by failing check
  std::optional<std::uint64_t> first_reject;

  void merge(const ProveTally& o) {
    accepted += o.accepted;
    rejected += o.rejected;
    peak = std::max(peak, o.peak);
    for (const auto& [k, v] : o.failures) failures[k] += v;
    if (o.first_reject && (!first_reject || *o.first_reject < *first_reject)) first_reject = o.first_reject;
  }
};

int cmd_prove(const Options& o) {
  Grid g = load_puzzle(o.puzzle);
  const ProverState prover{load_solution(o.solution, g)};
  if (!prover.secret.agrees_with_clues(g)) throw UsageError("solution contradicts a clue of the puzzle");
  const auto tally = run_trials<ProveTally>(o.trials, workers(o), [&](std::uint64_t t, ProveTally& acc) {
    auto r = RandomSource::for_trial(o.seed, t);
    auto run = run_full_protocol(g, prover, r);
    acc.peak = std::max(acc.peak, run.peak_cards);
    if (run.verdict.accepted) {
      ++acc.accepted;
    } else {
      ++acc.rejected;
      ++acc.failures[describe(g, *run.verdict.failing_check)];
      if (!acc.first_reject || t < *acc.first_reject) acc.first_reject = t;
    }
  });
  if (!o.transcript_out.empty()) {
    auto r = RandomSource::for_trial(o.seed, 0);
    std::ofstream out(o.transcript_out, std::ios::binary);
    out << serialize_transcript(run_full_protocol(g, prover, r).transcript);
    if (!out) throw UsageError("cannot write " + o.transcript_out);
  }
  const auto budget = card_budget(stats(g));
  json j{{"command", "prove"},     {"seed", o.seed},           {"trials", o.trials},
         {"accepted", tally.accepted}, {"rejected", tally.rejected}, {"card_budget", budget.total},
         {"peak_cards", tally.peak},   {"failing_checks", json::object()}};
  std::string text = "accepted " + std::to_string(tally.accepted) + "/" + std::to_string(o.trials) + "\n" +
                     "card budget " + std::to_string(budget.total) + " (n=" + std::to_string(budget.n) +
                     ", k=" + std::to_string(budget.k) + "), peak in use " + std::to_string(tally.peak) + "\n";
  if (tally.first_reject) {
    j["first_rejected_trial"] = *tally.first_reject;
    text += "first rejected trial " + std::to_string(*tally.first_reject) + "\n";
  }
  for (const auto& [k, v] : tally.failures) {
    j["failing_checks"][k] = v;
    text += "  rejected at " + k + ": " + std::to_string(v) + "\n";
  }
  emit(o, j, text);
  return tally.rejected == 0 ? kPass : kFail;
}

int cmd_zk_test(const Options& o) {
  Grid g = load_puzzle(o.puzzle);
  Assignment sol;
  if (!o.solution.empty()) {
    sol = load_solution(o.solution, g);
    if (!check_solution(g, sol)) throw UsageError("zk-test needs a valid solution");
  } else {
    std::vector<Assignment> sols;
    try {
      sols = solve_brute_force(g, o.bound);
    } catch (const SearchBoundExceeded& e) {
      throw UsageError(e.what());
    }
    if (sols.empty()) throw UsageError("puzzle has no solution");
    sol = sols.front();
  }
  const auto rep = zero_knowledge_test(protocol_source(g, sol, o.seed), simulator_source(g, o.seed), o.trials, workers(o));
  json j{{"command", "zk-test"},
         {"seed", o.seed},
         {"trials", o.trials},
         {"passed", rep.passed},
         {"family_alpha", rep.family_alpha},
         {"site_alpha", rep.site_alpha},
         {"sites_below_unadjusted_alpha", rep.below_unadjusted},
         {"sites", json::array()}};
  std::ostringstream text;
  text << (rep.passed ? "pass" : "fail") << ": " << rep.sites.size() << " reveal sites, " << o.trials
       << " real vs " << o.trials << " simulated transcripts\n"
       << "family alpha " << rep.family_alpha << ", per-site alpha " << rep.site_alpha << ", "
       << rep.below_unadjusted << " sites below " << rep.family_alpha << " unadjusted\n";
  for (const auto& s : rep.sites) {
    j["sites"].push_back({{"site", s.site},
                          {"mode", s.joint ? "joint" : "marginal"},
                          {"statistic", s.statistic},
                          {"df", s.df},
                          {"p_value", s.p_value},
                          {"passed", s.passed}});
    if (!s.passed) text << "  site " << s.site << " p=" << s.p_value << "\n";
  }
  emit(o, j, text.str());
  return rep.passed ? kPass : kFail;
}

int cmd_stats(const Options& o) {
  Grid g = load_puzzle(o.puzzle);
  const auto s = stats(g);
  const auto b = card_budget(s);
  json j{{"command", "stats"},
         {"height", g.height()},
         {"width", g.width()},
         {"white_cells", s.n},
         {"largest_room", s.k},
         {"rooms", g.rooms().size()},
         {"black_cells", g.black_cells().size()},
         {"cross_room_pairs", g.cross_room_pairs().size()},
         {"search_space", search_space(g)},
         {"card_budget",
          {{"cell", b.cell_cards}, {"helping", b.helping_cards}, {"encoding", b.encoding_cards}, {"total", b.total}}}};
  std::ostringstream text;
  text << g.height() << "x" << g.width() << ", " << s.n << " white cells, " << g.rooms().size() << " rooms (largest "
       << s.k << "), " << g.black_cells().size() << " black cells, " << g.cross_room_pairs().size()
       << " cross-room pairs\n"
       << "cards: " << b.cell_cards << " cell + " << b.helping_cards << " helping + " << b.encoding_cards
       << " encoding = " << b.total << "\n"
       << "search space " << search_space(g) << "\n";
  emit(o, j, text.str());
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Zero-knowledge proofs for Makaro with a standard deck of cards"};
  app.require_subcommand(1);
  Options o;

  auto puzzle = [&](CLI::App* c) { c->add_option("--puzzle", o.puzzle, "Puzzle file")->required()->check(CLI::ExistingFile); };
  auto solution = [&](CLI::App* c, bool required) {
    auto* opt = c->add_option("--solution", o.solution, "Solution file")->check(CLI::ExistingFile);
    if (required) opt->required();
  };
  auto format = [&](CLI::App* c) {
    c->add_option("--report-format", o.format, "text or json")->check(CLI::IsMember({"text", "json"}));
  };

  auto* check = app.add_subcommand("check", "Check a solution against the rules");
  puzzle(check);
  solution(check, true);
  format(check);

  auto* solve = app.add_subcommand("solve", "List every solution by exhaustive search");
  puzzle(solve);
  solve->add_option("--bound", o.bound, "Give up beyond this many room permutations");
  format(solve);

  auto* prove = app.add_subcommand("prove", "Run the protocol with a prover holding the solution");
  puzzle(prove);
  solution(prove, true);
  prove->add_option("--transcript-out", o.transcript_out, "Write the transcript of trial 0 here");
  format(prove);

  auto* zk = app.add_subcommand("zk-test", "Compare real transcripts with simulated ones");
  puzzle(zk);
  solution(zk, false);
  zk->add_option("--bound", o.bound, "Search bound when no solution is given");
  format(zk);

  auto* st = app.add_subcommand("stats", "Print puzzle statistics and card budget");
  puzzle(st);
  format(st);

  // Defaults differ per command; set them before parsing.
  o.trials = 1;
  {
    CLI::App* with_trials[] = {prove, zk};
    for (CLI::App* c : with_trials) {
      c->add_option("--seed", o.seed, "Base seed (default 1)");
      c->add_option("--trials", o.trials, "Number of runs (prove: 1, zk-test: 10000)")->check(CLI::PositiveNumber);
      c->add_option("--workers", o.workers, "Worker threads (default: hardware concurrency)");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }
  if (zk->parsed() && zk->count("--trials") == 0) o.trials = 10'000;

  try {
    if (check->parsed()) return cmd_check(o);
    if (solve->parsed()) return cmd_solve(o);
    if (prove->parsed()) return cmd_prove(o);
    if (zk->parsed()) return cmd_zk_test(o);
    if (st->parsed()) return cmd_stats(o);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
