#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "makaro/grid.hpp"

namespace makaro {

struct EnumerationLimits {
  int max_height = 3;
  int max_width = 3;
  std::size_t max_room_size = 3;
  std::size_t max_black_cells = 9;
};

/// Calls `visit` once for every structurally valid, clue-free grid within
/// `limits`: every black/white pattern, every valid arrow choice for each
/// black cell, and every partition of the white cells into connected rooms
/// no larger than `max_room_size`. Returns the number of grids visited.
inline std::uint64_t enumerate_grids(const EnumerationLimits& limits, const std::function<void(const Grid&)>& visit) {
  std::uint64_t count = 0;
  for (int h = 1; h <= limits.max_height; ++h) {
    for (int w = 1; w <= limits.max_width; ++w) {
      const int cells = h * w;
      auto at = [w](int idx) { return Coord{idx / w, idx % w}; };
      auto inside = [h, w](Coord c) { return c.row >= 0 && c.row < h && c.col >= 0 && c.col < w; };
      for (std::uint32_t mask = 0; mask < (1u << cells); ++mask) {
        std::vector<bool> black(static_cast<std::size_t>(cells));
        std::size_t blacks = 0;
        for (int i = 0; i < cells; ++i) {
          black[static_cast<std::size_t>(i)] = (mask >> i) & 1u;
          blacks += black[static_cast<std::size_t>(i)];
        }
        if (blacks == static_cast<std::size_t>(cells) || blacks > limits.max_black_cells) continue;
        auto white_at = [&](Coord c) { return inside(c) && !black[static_cast<std::size_t>(c.row * w + c.col)]; };

        // Arrow options per black cell.
        std::vector<int> black_idx;
        std::vector<std::vector<Arrow>> options;
        bool feasible = true;
        for (int i = 0; i < cells; ++i) {
          if (!black[static_cast<std::size_t>(i)]) continue;
          std::vector<Arrow> opts;
          for (Arrow a : {Arrow::Up, Arrow::Down, Arrow::Left, Arrow::Right})
            if (white_at(step(at(i), a))) opts.push_back(a);
          if (opts.empty()) feasible = false;
          black_idx.push_back(i);
          options.push_back(std::move(opts));
        }
        if (!feasible) continue;

        // Room partitions: each block grows from the first unassigned white
        // cell in row-major order, so room ordinals follow first appearance.
        std::vector<int> room(static_cast<std::size_t>(cells), -1);
        std::vector<std::vector<int>> partitions;
        auto connected = [&](const std::vector<int>& block) {
          std::vector<int> seen{block.front()};
          for (std::size_t i = 0; i < seen.size(); ++i) {
            for (Arrow a : {Arrow::Up, Arrow::Down, Arrow::Left, Arrow::Right}) {
              Coord n = step(at(seen[i]), a);
              if (!inside(n)) continue;
              int ni = n.row * w + n.col;
              if (std::find(block.begin(), block.end(), ni) != block.end() &&
                  std::find(seen.begin(), seen.end(), ni) == seen.end())
                seen.push_back(ni);
            }
          }
          return seen.size() == block.size();
        };
        auto partition = [&](auto&& self, int next_room) -> void {
          int first = -1;
          for (int i = 0; i < cells; ++i)
            if (!black[static_cast<std::size_t>(i)] && room[static_cast<std::size_t>(i)] < 0) {
              first = i;
              break;
            }
          if (first < 0) {
            partitions.push_back(room);
            return;
          }
          std::vector<int> rest;
          for (int i = first + 1; i < cells; ++i)
            if (!black[static_cast<std::size_t>(i)] && room[static_cast<std::size_t>(i)] < 0) rest.push_back(i);
          // Subsets of `rest` of size < max_room_size joined with `first`.
          std::vector<int> block{first};
          auto choose = [&](auto&& pick, std::size_t from) -> void {
            if (connected(block)) {
              for (int i : block) room[static_cast<std::size_t>(i)] = next_room;
              self(self, next_room + 1);
              for (int i : block) room[static_cast<std::size_t>(i)] = -1;
            }
            if (block.size() >= limits.max_room_size) return;
            for (std::size_t j = from; j < rest.size(); ++j) {
              block.push_back(rest[j]);
              pick(pick, j + 1);
              block.pop_back();
            }
          };
          choose(choose, 0);
        };
        partition(partition, 0);

        std::vector<std::size_t> choice(black_idx.size(), 0);
        while (true) {
          for (const auto& rooms : partitions) {
            std::vector<Cell> grid_cells;
            grid_cells.reserve(static_cast<std::size_t>(cells));
            std::size_t b = 0;
            for (int i = 0; i < cells; ++i) {
              if (black[static_cast<std::size_t>(i)])
                grid_cells.emplace_back(Black{options[b][choice[b]]}), ++b;
              else
                grid_cells.emplace_back(White{"r" + std::to_string(rooms[static_cast<std::size_t>(i)] + 1), {}});
            }
            visit(Grid(h, w, std::move(grid_cells)));
            ++count;
          }
          std::size_t d = 0;
          while (d < choice.size() && ++choice[d] == options[d].size()) choice[d++] = 0;
          if (d == choice.size()) break;
        }
      }
    }
  }
  return count;
}

/// Calls `visit` for every assignment that gives each white cell a value in
/// 1..(its room size) and agrees with the clues. Returns how many there were.
inline std::uint64_t for_each_assignment(const Grid& grid, const std::function<void(const Assignment&)>& visit) {
  const auto whites = grid.white_cells();
  Assignment a = Assignment::from_clues(grid);
  std::vector<Coord> free;
  for (Coord c : whites)
    if (!grid.clue(c)) free.push_back(c);
  for (Coord c : free) a.set(c, 1);
  std::uint64_t count = 0;
  while (true) {
    visit(a);
    ++count;
    std::size_t d = 0;
    for (; d < free.size(); ++d) {
      const int v = a.at(free[d]);
      if (static_cast<std::size_t>(v) < grid.room_size_of(free[d])) {
        a.set(free[d], v + 1);
        break;
      }
      a.set(free[d], 1);
    }
    if (d == free.size()) break;
  }
  return count;
}

}  // namespace makaro
