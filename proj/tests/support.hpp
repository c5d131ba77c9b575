#pragma once

#include <algorithm>
#include <cstddef>
#include <deque>
#include <fstream>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "makaro/makaro.hpp"

#ifndef MAKARO_DATA_DIR
#error "MAKARO_DATA_DIR must point at data/puzzles"
#endif

namespace testing_support {

inline std::string data_path(const std::string& name) { return std::string(MAKARO_DATA_DIR) + "/" + name; }

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string read_data(const std::string& name) { return read_file(data_path(name)); }

inline makaro::Grid sample() { return makaro::parse_puzzle(read_data("sample.mkr")); }

inline makaro::Assignment sample_solution(const makaro::Grid& g) {
  return makaro::parse_solution(read_data("sample.sol"), g);
}

// Replays queued outcomes; identity / zero once a queue runs dry.
struct ScriptedRandomness {
  std::deque<std::size_t> shifts;
  std::deque<std::vector<std::size_t>> perms;
  std::deque<std::vector<std::size_t>> prover;

  std::size_t shift(std::size_t n) {
    if (shifts.empty()) return 0;
    auto s = shifts.front();
    shifts.pop_front();
    return s % n;
  }
  std::vector<std::size_t> permutation(std::size_t n) { return next(perms, n); }
  std::vector<std::size_t> prover_permutation(std::size_t n) { return next(prover, n); }

 private:
  static std::vector<std::size_t> next(std::deque<std::vector<std::size_t>>& q, std::size_t n) {
    if (q.empty() || q.front().size() != n) {
      std::vector<std::size_t> id(n);
      std::iota(id.begin(), id.end(), std::size_t{0});
      return id;
    }
    auto p = q.front();
    q.pop_front();
    return p;
  }
};

struct Perturbation {
  std::string description;
  makaro::Assignment assignment;
  makaro::RuleReport report;
};

// Clue-consistent edits of a solution that break exactly one rule: swaps of
// two cells inside a room, and single-cell rewrites to another value
// (in range or one past it).
inline std::vector<Perturbation> single_rule_perturbations(const makaro::Grid& g, const makaro::Assignment& solution) {
  using namespace makaro;
  std::vector<Perturbation> out;
  auto consider = [&](Assignment a, std::string what) {
    if (!a.agrees_with_clues(g)) return;
    auto rep = evaluate_rules(g, a);
    if (rep.rules_broken() == 1) out.push_back({std::move(what), std::move(a), std::move(rep)});
  };
  for (const Room& room : g.rooms())
    for (std::size_t i = 0; i < room.size(); ++i)
      for (std::size_t j = i + 1; j < room.size(); ++j) {
        Assignment a = solution;
        a.set(room.cells[i], solution.at(room.cells[j]));
        a.set(room.cells[j], solution.at(room.cells[i]));
        consider(std::move(a), "swap " + to_string(room.cells[i]) + " " + to_string(room.cells[j]));
      }
  for (Coord c : g.white_cells()) {
    const int top = static_cast<int>(g.room_size_of(c)) + 1;
    for (int v = 1; v <= top; ++v) {
      if (v == solution.at(c)) continue;
      Assignment a = solution;
      a.set(c, v);
      consider(std::move(a), "set " + to_string(c) + "=" + std::to_string(v));
    }
  }
  return out;
}

// Does the failing check name a condition the assignment actually breaks?
inline bool names_violation(const makaro::Grid& g, const makaro::FailingCheck& f, const makaro::RuleReport& rep) {
  using namespace makaro;
  auto has = [](const auto& v, const auto& x) { return std::find(v.begin(), v.end(), x) != v.end(); };
  switch (f.kind) {
    case CheckKind::Setup:
    case CheckKind::Room: return has(rep.rooms, f.room) && f.room < g.rooms().size();
    case CheckKind::Neighbor: return has(rep.neighbors, std::pair<Coord, Coord>{f.first, f.second});
    case CheckKind::Arrow: return has(rep.arrows, f.first);
  }
  return false;
}

// Encodes x and y in sequences of length 2m-1, applies every shift and
// checks that the window opened from a's marker holds b's marker exactly
// when y >= x. Returns the number of disagreements; `cases` counts checks.
inline std::size_t arrow_window_counterexamples(std::size_t max_m, std::size_t& cases) {
  using namespace makaro;
  cases = 0;
  std::size_t bad = 0;
  for (std::size_t m = 1; m <= max_m; ++m) {
    std::string room;
    for (std::size_t i = 0; i < m; ++i) room += i ? " a" : "a";
    Grid g = parse_puzzle("makaro 1 " + std::to_string(m) + "\n" + room + "\n");
    auto r = RandomSource::from_seed(m);
    const std::size_t width = 2 * m - 1;
    for (std::size_t x = 1; x <= m; ++x)
      for (std::size_t y = 1; y <= m; ++y)
        for (std::size_t s = 0; s < width; ++s) {
          TableState ts(g);
          auto a = make_encoding(ts, CardSet::A, width, x, r);
          auto b = make_encoding(ts, CardSet::B, width, y, r);
          CardMatrix mat(2, width);
          for (std::size_t j = 0; j < width; ++j) {
            mat.place(0, j, a.cards[j]);
            mat.place(1, j, b.cards[j]);
          }
          mat = shift_columns(std::move(mat), s);
          std::size_t col = 0;
          while (mat.at(0, col)->id != marker(CardSet::A)) ++col;
          bool seen = false;
          for (std::size_t c : arrow_window(col, m)) seen |= mat.at(1, c)->id == marker(CardSet::B);
          ++cases;
          if (seen != (y >= x)) ++bad;
        }
  }
  return bad;
}

// Converts a random white cell of `g` and checks that the room's cards are
// back on their cells, face down, with nothing else left on the table and
// the sequence encoding the cell's value.
template <class R>
bool conversion_round_trip(const makaro::Grid& g, const makaro::Assignment& sol, R& r, std::size_t pick) {
  using namespace makaro;
  Transcript t;
  TableState ts = setup_placement(g, ProverState{sol}, t);
  const auto whites = g.white_cells();
  const Coord cell = whites[pick % whites.size()];
  std::vector<std::optional<TableCard>> before;
  for (Coord c : whites) before.push_back(ts.cell(c));
  const std::size_t k = ts.largest_room();
  const std::size_t m = g.room_size_of(cell) + pick / whites.size() % (2 * k - g.room_size_of(cell));
  const CardSet set = kEncodingSets[pick % 4];
  EncodingSequence seq = convert_cell(ts, cell, set, m, r, t);
  bool ok = seq.length() == m && seq.marker_position() == static_cast<std::size_t>(sol.at(cell));
  for (std::size_t i = 0; i < whites.size(); ++i) ok = ok && ts.cell(whites[i]) == before[i];
  ok = ok && ts.matrix().empty() && ts.aside().empty() && ts.cards_in_use() == g.white_cells().size() + m;
  std::vector<EncodingSequence> held{seq};
  ts.audit(held);
  return ok;
}

}  // namespace testing_support
