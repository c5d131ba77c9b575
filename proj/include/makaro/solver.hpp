#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "makaro/grid.hpp"
#include "makaro/rules.hpp"

namespace makaro {

class SearchBoundExceeded : public std::runtime_error {
 public:
  explicit SearchBoundExceeded(std::uint64_t space, std::uint64_t bound)
      : std::runtime_error("search space of " + std::to_string(space) + " room permutations exceeds bound " +
                           std::to_string(bound)) {}
};

inline constexpr std::uint64_t kDefaultSearchBound = 100'000'000;

// Product of room-size factorials, saturating at uint64 max.
inline std::uint64_t search_space(const Grid& grid) {
  std::uint64_t total = 1;
  for (const Room& room : grid.rooms()) {
    for (std::uint64_t f = 2; f <= room.size(); ++f) {
      if (total > std::numeric_limits<std::uint64_t>::max() / f) return std::numeric_limits<std::uint64_t>::max();
      total *= f;
    }
  }
  return total;
}

/// Every assignment satisfying all three rules. Rooms are filled one at a
/// time in room order, each with the permutations of 1..size in
/// lexicographic order, so the output order is deterministic.
inline std::vector<Assignment> solve_brute_force(const Grid& grid, std::uint64_t bound = kDefaultSearchBound) {
  if (const auto space = search_space(grid); space > bound) throw SearchBoundExceeded(space, bound);

  const auto& rooms = grid.rooms();
  // Constraints become checkable once the highest room they touch is filled.
  std::vector<std::vector<std::pair<Coord, Coord>>> pairs_at(rooms.size());
  for (const auto& p : grid.cross_room_pairs())
    pairs_at[std::max(grid.room_of(p.first), grid.room_of(p.second))].push_back(p);
  std::vector<std::vector<Coord>> arrows_at(rooms.size());
  for (Coord b : grid.black_cells()) {
    std::size_t last = 0;
    for (Coord n : grid.arrow_neighbors(b)) last = std::max(last, grid.room_of(n));
    arrows_at[last].push_back(b);
  }

  std::vector<Assignment> out;
  Assignment a(grid);
  auto fill = [&](auto&& self, std::size_t r) -> void {
    if (r == rooms.size()) {
      out.push_back(a);
      return;
    }
    const auto& cells = rooms[r].cells;
    std::vector<int> perm(cells.size());
    std::iota(perm.begin(), perm.end(), 1);
    do {
      bool fits = true;
      for (std::size_t i = 0; i < cells.size() && fits; ++i) {
        if (auto clue = grid.clue(cells[i]); clue && *clue != perm[i]) fits = false;
        a.set(cells[i], perm[i]);
      }
      if (!fits) continue;
      for (const auto& [x, y] : pairs_at[r])
        if (a.at(x) == a.at(y)) fits = false;
      for (std::size_t i = 0; i < arrows_at[r].size() && fits; ++i) fits = arrow_ok(grid, a, arrows_at[r][i]);
      if (fits) self(self, r + 1);
    } while (std::next_permutation(perm.begin(), perm.end()));
    for (Coord c : cells) a.set(c, 0);
  };
  fill(fill, 0);
  return out;
}

}  // namespace makaro
