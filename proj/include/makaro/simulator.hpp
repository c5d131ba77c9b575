#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "makaro/deck.hpp"
#include "makaro/grid.hpp"
#include "makaro/protocol.hpp"
#include "makaro/transcript.hpp"

namespace makaro {

namespace detail {

// Emits the transcript of an accepting run using only the public grid.
// Every reveal is drawn from the distribution an honest run produces.
template <ProtocolRandomness R>
class TranscriptSimulator {
 public:
  TranscriptSimulator(const Grid& grid, R& r, Transcript& t) : grid_(grid), r_(r), t_(t) {}

  void run() {
    t_.begin("setup");
    const auto whites = grid_.white_cells();
    for (Coord c : whites)
      if (auto clue = grid_.clue(c)) t_.place_public(Zone::Grid, c.row, c.col, cell_card(grid_.room_of(c), *clue));
    for (Coord c : whites)
      if (!grid_.clue(c)) t_.place_secret(Zone::Grid, c.row, c.col);

    for (std::size_t i = 0; i < grid_.rooms().size(); ++i) room(i);
    for (const auto& [a, b] : grid_.cross_room_pairs()) neighbor(a, b);
    for (Coord black : grid_.black_cells()) arrow(black);
    t_.outcome(true);
  }

 private:
  // Uniform ordered draw of `count` indices from lowest..lowest+universe-1.
  std::vector<int> draw(std::size_t universe, std::size_t count, int lowest) {
    auto order = r_.permutation(universe);
    std::vector<int> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count && i < universe; ++i) out.push_back(static_cast<int>(order[i]) + lowest);
    return out;
  }

  void lay_out(const Room& room, int rows) {
    const int p = as_int(room.size());
    t_.build(rows, p);
    for (int j = 0; j < p; ++j) {
      t_.take(Zone::Grid, room.cells[static_cast<std::size_t>(j)].row, room.cells[static_cast<std::size_t>(j)].col);
      t_.place_secret(Zone::Matrix, 0, j);
    }
    for (int j = 0; j < p; ++j) t_.place_public(Zone::Matrix, 1, j, help_card(j + 1));
  }

  void reveal_room_cards(std::size_t room_index) {
    const std::size_t p = grid_.rooms()[room_index].size();
    const auto order = draw(p, p, 1);
    for (std::size_t j = 0; j < p; ++j) t_.reveal(Zone::Matrix, 0, as_int(j), cell_card(room_index, order[j]));
  }

  void restore(const Room& room, const char* help_phase) {
    const std::size_t p = room.size();
    t_.turn_down(Zone::Matrix);
    t_.shuffle("scramble");
    t_.phase(help_phase);
    const auto order = draw(p, p, 1);
    for (std::size_t j = 0; j < p; ++j) t_.reveal(Zone::Matrix, 1, as_int(j), help_card(order[j]));
    t_.rearrange(1);
    t_.turn_down(Zone::Matrix);
    for (Coord c : room.cells) t_.restore(c.row, c.col);
    t_.take(Zone::Matrix, 1, -1);
  }

  void room(std::size_t i) {
    const Room& room = grid_.rooms()[i];
    t_.begin("room", room.cells.front().row, room.cells.front().col);
    lay_out(room, 2);
    t_.shuffle("scramble");
    t_.phase(phase::kRoomCells);
    reveal_room_cards(i);
    restore(room, phase::kRoomHelp);
  }

  void convert(Coord cell, CardSet set, std::size_t m) {
    const std::size_t room_index = grid_.room_of(cell);
    const Room& room = grid_.rooms()[room_index];
    const std::size_t p = room.size();
    const std::size_t col = grid_.position_in_room(cell);
    t_.begin(std::string("convert:") + set_letter(set), cell.row, cell.col);
    lay_out(room, 3);
    t_.place_public(Zone::Matrix, 2, as_int(col), marker(set));
    for (std::size_t j = 0; j < p; ++j)
      if (j != col) t_.place_secret(Zone::Matrix, 2, as_int(j));
    for (std::size_t j = 0; j < m - p; ++j) t_.place_secret(Zone::Aside, 0, as_int(j));
    t_.shuffle("scramble");
    t_.phase(phase::kConvertCells);
    reveal_room_cards(room_index);
    t_.rearrange(0);
    for (std::size_t j = 0; j < p; ++j) t_.take(Zone::Matrix, 2, as_int(j));
    for (std::size_t j = 0; j < m - p; ++j) t_.take(Zone::Aside, 0, as_int(j));
    restore(room, phase::kConvertHelp);
  }

  void neighbor(Coord a, Coord b) {
    const std::size_t m = std::max(grid_.room_size_of(a), grid_.room_size_of(b));
    t_.begin("neighbor:" + coord_tag(b), a.row, a.col);
    convert(a, CardSet::A, m);
    convert(b, CardSet::B, m);
    t_.build(2, as_int(m));
    t_.shuffle("scramble");
    t_.phase(phase::kNeighborRowA);
    const auto row_a = draw(m, m, 1);
    for (std::size_t j = 0; j < m; ++j) t_.reveal(Zone::Matrix, 0, as_int(j), encoding_card(CardSet::A, row_a[j]));
    const auto col = static_cast<std::size_t>(std::find(row_a.begin(), row_a.end(), 1) - row_a.begin());
    t_.phase(phase::kNeighborRowB);
    const auto under = m > 1 ? draw(m - 1, 1, 2).front() : 1;
    t_.reveal(Zone::Matrix, 1, as_int(col), encoding_card(CardSet::B, under));
    t_.take(Zone::Matrix, -1, -1);
  }

  void arrow(Coord black) {
    const auto around = grid_.arrow_neighbors(black);
    std::size_t m = 0;
    for (Coord c : around) m = std::max(m, grid_.room_size_of(c));
    const std::size_t width = 2 * m - 1;
    t_.begin("arrow", black.row, black.col);
    for (std::size_t i = 0; i < around.size(); ++i) convert(around[i], kEncodingSets[i], width);
    t_.build(as_int(around.size()), as_int(width));
    t_.shuffle("shift");
    t_.phase(phase::kArrowRowA);
    const auto row_a = draw(width, width, 1);
    for (std::size_t j = 0; j < width; ++j) t_.reveal(Zone::Matrix, 0, as_int(j), encoding_card(CardSet::A, row_a[j]));
    const auto col = static_cast<std::size_t>(std::find(row_a.begin(), row_a.end(), 1) - row_a.begin());
    if (around.size() > 1) {
      t_.phase(phase::kArrowWindow);
      const auto window = arrow_window(col, m);
      for (std::size_t i = 1; i < around.size(); ++i) {
        const auto seen = draw(width - 1, m, 2);
        for (std::size_t j = 0; j < window.size(); ++j)
          t_.reveal(Zone::Matrix, as_int(i), as_int(window[j]),
                    encoding_card(kEncodingSets[i], j < seen.size() ? seen[j] : 1));
      }
    }
    t_.take(Zone::Matrix, -1, -1);
  }

  const Grid& grid_;
  R& r_;
  Transcript& t_;
};

}  // namespace detail

/// A transcript with the same distribution as an accepting run on `grid`,
/// produced without any solution. Meaningful only for satisfiable grids.
template <ProtocolRandomness R>
Transcript simulate_transcript(const Grid& grid, R& r) {
  Transcript t;
  detail::TranscriptSimulator<R>(grid, r, t).run();
  return t;
}

}  // namespace makaro
