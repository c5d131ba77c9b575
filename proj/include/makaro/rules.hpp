#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "makaro/grid.hpp"

namespace makaro {

// Every rule violation found in an assignment, rule by rule.
struct RuleReport {
  std::vector<std::size_t> rooms;                   // room ordinals breaking the room rule
  std::vector<std::pair<Coord, Coord>> neighbors;   // equal cross-room neighbours
  std::vector<Coord> arrows;                        // black cells whose arrow is wrong

  bool ok() const { return rooms.empty() && neighbors.empty() && arrows.empty(); }
  int rules_broken() const {
    return static_cast<int>(!rooms.empty()) + static_cast<int>(!neighbors.empty()) + static_cast<int>(!arrows.empty());
  }
};

inline bool room_ok(const Grid& grid, const Assignment& a, std::size_t room) {
  const auto& cells = grid.rooms()[room].cells;
  std::vector<bool> seen(cells.size() + 1, false);
  for (Coord c : cells) {
    const int v = a.at(c);
    if (v < 1 || static_cast<std::size_t>(v) > cells.size() || seen[static_cast<std::size_t>(v)]) return false;
    seen[static_cast<std::size_t>(v)] = true;
  }
  return true;
}

// The pointed cell must hold a value strictly above every other white neighbour.
inline bool arrow_ok(const Grid& grid, const Assignment& a, Coord black) {
  const auto around = grid.arrow_neighbors(black);
  const int pointed = a.at(around.front());
  return std::all_of(around.begin() + 1, around.end(), [&](Coord c) { return a.at(c) < pointed; });
}

inline RuleReport evaluate_rules(const Grid& grid, const Assignment& a) {
  if (!a.covers(grid)) throw std::invalid_argument("assignment is not defined on exactly the white cells");
  RuleReport report;
  for (std::size_t r = 0; r < grid.rooms().size(); ++r)
    if (!room_ok(grid, a, r)) report.rooms.push_back(r);
  for (const auto& [x, y] : grid.cross_room_pairs())
    if (a.at(x) == a.at(y)) report.neighbors.emplace_back(x, y);
  for (Coord b : grid.black_cells())
    if (!arrow_ok(grid, a, b)) report.arrows.push_back(b);
  return report;
}

inline bool check_solution(const Grid& grid, const Assignment& a) { return evaluate_rules(grid, a).ok(); }

}  // namespace makaro
