#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace makaro {

// 0-based (row, col); row 0 is the topmost row.
struct Coord {
  int row = 0;
  int col = 0;

  friend auto operator<=>(const Coord&, const Coord&) = default;
};

inline std::string to_string(Coord c) {
  return "(" + std::to_string(c.row) + "," + std::to_string(c.col) + ")";
}

enum class Arrow : unsigned char { Up, Down, Left, Right };

inline Coord step(Coord c, Arrow a) {
  switch (a) {
    case Arrow::Up: return {c.row - 1, c.col};
    case Arrow::Down: return {c.row + 1, c.col};
    case Arrow::Left: return {c.row, c.col - 1};
    case Arrow::Right: return {c.row, c.col + 1};
  }
  return c;
}

// Clockwise starting from `a`.
inline std::array<Arrow, 4> clockwise_from(Arrow a) {
  static constexpr Arrow ring[4] = {Arrow::Up, Arrow::Right, Arrow::Down, Arrow::Left};
  std::size_t start = 0;
  while (ring[start] != a) ++start;
  return {ring[start], ring[(start + 1) % 4], ring[(start + 2) % 4], ring[(start + 3) % 4]};
}

struct White {
  std::string room;
  std::optional<int> clue;

  friend bool operator==(const White&, const White&) = default;
};

struct Black {
  Arrow arrow = Arrow::Up;

  friend bool operator==(const Black&, const Black&) = default;
};

using Cell = std::variant<White, Black>;

// Thrown when a board violates the structural rules (rooms, arrows, clues).
// The message names the offending cell.
class GridError : public std::runtime_error {
 public:
  GridError(const std::string& what, Coord where)
      : std::runtime_error(what + " at " + makaro::to_string(where)), where_(where) {}

  Coord where() const { return where_; }

 private:
  Coord where_;
};

struct Room {
  std::string id;
  std::vector<Coord> cells;  // top to bottom, then left to right

  std::size_t size() const { return cells.size(); }
  friend bool operator==(const Room&, const Room&) = default;
};

struct PuzzleStats {
  std::size_t n = 0;  // white cells
  std::size_t k = 0;  // largest room

  friend bool operator==(const PuzzleStats&, const PuzzleStats&) = default;
};

/// An immutable Makaro board. Construction validates every structural
/// invariant, so any Grid value in hand is well formed.
///
/// Rooms are ordered by the row-major position of their first cell; that
/// order fixes the room ordinal used for cell-card identities.
class Grid {
 public:
  Grid(int height, int width, std::vector<Cell> cells)
      : height_(height), width_(width), cells_(std::move(cells)) {
    if (height_ <= 0 || width_ <= 0) throw std::invalid_argument("grid dimensions must be positive");
    if (cells_.size() != static_cast<std::size_t>(height_) * static_cast<std::size_t>(width_))
      throw std::invalid_argument("cell count does not match grid dimensions");
    build_rooms();
    validate();
  }

  int height() const { return height_; }
  int width() const { return width_; }

  bool in_bounds(Coord c) const { return c.row >= 0 && c.row < height_ && c.col >= 0 && c.col < width_; }

  const Cell& at(Coord c) const { return cells_[index(c)]; }

  bool is_white(Coord c) const { return in_bounds(c) && std::holds_alternative<White>(at(c)); }
  bool is_black(Coord c) const { return in_bounds(c) && std::holds_alternative<Black>(at(c)); }

  std::optional<int> clue(Coord c) const {
    if (!is_white(c)) return std::nullopt;
    return std::get<White>(at(c)).clue;
  }

  const std::vector<Room>& rooms() const { return rooms_; }

  // Room ordinal of a white cell.
  std::size_t room_of(Coord c) const { return room_of_[index(c)]; }

  // Column of `c` when its room is laid out in canonical order.
  std::size_t position_in_room(Coord c) const { return position_[index(c)]; }

  std::size_t room_size_of(Coord c) const { return rooms_[room_of(c)].size(); }

  std::vector<Coord> white_cells() const { return collect(true); }
  std::vector<Coord> black_cells() const { return collect(false); }

  // Every orthogonally adjacent white pair in different rooms, once each,
  // ordered by the row-major position of the first cell (right neighbour
  // before down neighbour).
  std::vector<std::pair<Coord, Coord>> cross_room_pairs() const {
    std::vector<std::pair<Coord, Coord>> out;
    for (int r = 0; r < height_; ++r) {
      for (int c = 0; c < width_; ++c) {
        Coord here{r, c};
        if (!is_white(here)) continue;
        for (Coord there : {Coord{r, c + 1}, Coord{r + 1, c}}) {
          if (is_white(there) && room_of(there) != room_of(here)) out.emplace_back(here, there);
        }
      }
    }
    return out;
  }

  // White neighbours of a black cell: the pointed cell first, then the
  // remaining ones clockwise from the arrow direction.
  std::vector<Coord> arrow_neighbors(Coord black) const {
    const Arrow a = std::get<Black>(at(black)).arrow;
    std::vector<Coord> out;
    for (Arrow dir : clockwise_from(a)) {
      Coord n = step(black, dir);
      if (is_white(n)) out.push_back(n);
    }
    return out;
  }

  PuzzleStats stats() const {
    PuzzleStats s;
    for (const Room& room : rooms_) {
      s.n += room.size();
      s.k = std::max(s.k, room.size());
    }
    return s;
  }

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.height_ == b.height_ && a.width_ == b.width_ && a.cells_ == b.cells_;
  }

 private:
  std::size_t index(Coord c) const {
    return static_cast<std::size_t>(c.row) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(c.col);
  }

  std::vector<Coord> collect(bool white) const {
    std::vector<Coord> out;
    for (int r = 0; r < height_; ++r)
      for (int c = 0; c < width_; ++c)
        if (std::holds_alternative<White>(cells_[index({r, c})]) == white) out.push_back({r, c});
    return out;
  }

  void build_rooms() {
    room_of_.assign(cells_.size(), 0);
    position_.assign(cells_.size(), 0);
    std::map<std::string, std::size_t> ordinal;
    for (int r = 0; r < height_; ++r) {
      for (int c = 0; c < width_; ++c) {
        const auto* w = std::get_if<White>(&cells_[index({r, c})]);
        if (w == nullptr) continue;
        auto [it, fresh] = ordinal.try_emplace(w->room, rooms_.size());
        if (fresh) rooms_.push_back(Room{w->room, {}});
        Room& room = rooms_[it->second];
        room_of_[index({r, c})] = it->second;
        position_[index({r, c})] = room.cells.size();
        room.cells.push_back({r, c});
      }
    }
  }

  void validate() const {
    for (const Room& room : rooms_) {
      // Flood fill from the first cell must reach every cell of the room.
      std::vector<Coord> seen{room.cells.front()};
      for (std::size_t i = 0; i < seen.size(); ++i) {
        for (Arrow dir : {Arrow::Up, Arrow::Down, Arrow::Left, Arrow::Right}) {
          Coord n = step(seen[i], dir);
          if (!is_white(n) || rooms_[room_of(n)].id != room.id) continue;
          if (std::find(seen.begin(), seen.end(), n) == seen.end()) seen.push_back(n);
        }
      }
      if (seen.size() != room.size()) {
        for (Coord c : room.cells)
          if (std::find(seen.begin(), seen.end(), c) == seen.end())
            throw GridError("room '" + room.id + "' is not connected", c);
      }
      for (Coord c : room.cells) {
        const auto& w = std::get<White>(at(c));
        if (w.clue && (*w.clue < 1 || static_cast<std::size_t>(*w.clue) > room.size()))
          throw GridError("clue " + std::to_string(*w.clue) + " out of range for room '" + room.id + "' of size " +
                              std::to_string(room.size()),
                          c);
      }
    }
    for (Coord b : black_cells()) {
      Coord target = step(b, std::get<Black>(at(b)).arrow);
      if (!in_bounds(target)) throw GridError("arrow points off the grid", b);
      if (!is_white(target)) throw GridError("arrow points into a black cell", b);
    }
  }

  int height_;
  int width_;
  std::vector<Cell> cells_;
  std::vector<Room> rooms_;
  std::vector<std::size_t> room_of_;
  std::vector<std::size_t> position_;
};

inline PuzzleStats stats(const Grid& grid) { return grid.stats(); }

/// Values for the white cells of a grid. Zero marks "no value" (black cells,
/// or a white cell not yet filled).
class Assignment {
 public:
  Assignment() = default;
  Assignment(int height, int width)
      : height_(height), width_(width), values_(static_cast<std::size_t>(height) * static_cast<std::size_t>(width), 0) {}
  explicit Assignment(const Grid& grid) : Assignment(grid.height(), grid.width()) {}

  // Row-major values for every cell, zero on black cells.
  Assignment(const Grid& grid, std::vector<int> values) : Assignment(grid) {
    if (values.size() != values_.size()) throw std::invalid_argument("assignment size does not match grid");
    values_ = std::move(values);
  }

  static Assignment from_clues(const Grid& grid) {
    Assignment a(grid);
    for (Coord c : grid.white_cells())
      if (auto clue = grid.clue(c)) a.set(c, *clue);
    return a;
  }

  int height() const { return height_; }
  int width() const { return width_; }

  int at(Coord c) const { return values_[index(c)]; }
  void set(Coord c, int v) { values_[index(c)] = v; }

  const std::vector<int>& values() const { return values_; }

  // Defined on exactly the white cells of `grid`, with positive values.
  bool covers(const Grid& grid) const {
    if (height_ != grid.height() || width_ != grid.width()) return false;
    for (int r = 0; r < height_; ++r)
      for (int c = 0; c < width_; ++c)
        if ((at({r, c}) > 0) != grid.is_white({r, c}) || at({r, c}) < 0) return false;
    return true;
  }

  bool agrees_with_clues(const Grid& grid) const {
    for (Coord c : grid.white_cells())
      if (auto clue = grid.clue(c); clue && *clue != at(c)) return false;
    return true;
  }

  friend bool operator==(const Assignment&, const Assignment&) = default;
  friend auto operator<=>(const Assignment&, const Assignment&) = default;

 private:
  std::size_t index(Coord c) const {
    if (c.row < 0 || c.row >= height_ || c.col < 0 || c.col >= width_)
      throw std::out_of_range("coordinate " + makaro::to_string(c) + " outside assignment");
    return static_cast<std::size_t>(c.row) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(c.col);
  }

  int height_ = 0;
  int width_ = 0;
  std::vector<int> values_;
};

}  // namespace makaro
