#pragma once

// Prover/verifier interaction on a standard deck: every card is distinct.
//
// Cards in play for a grid with n white cells and largest room k:
//   cell cards     cell<r>.1 .. cell<r>.<size of room r>, one per white cell
//   helping cards  h1 .. hk
//   encoding cards a1..a(2k-1), b.., c.., d..
//
// Encoding cards are returned to the pool after every neighbour or arrow
// check and reused by the next one.

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "makaro/cards.hpp"
#include "makaro/deck.hpp"
#include "makaro/grid.hpp"
#include "makaro/transcript.hpp"

namespace makaro {

// Phase tags naming each group of reveals in a transcript.
namespace phase {
inline constexpr const char* kRoomCells = "room.cells";
inline constexpr const char* kRoomHelp = "room.help";
inline constexpr const char* kConvertCells = "convert.cells";
inline constexpr const char* kConvertHelp = "convert.help";
inline constexpr const char* kNeighborRowA = "neighbor.row-a";
inline constexpr const char* kNeighborRowB = "neighbor.row-b";
inline constexpr const char* kArrowRowA = "arrow.row-a";
inline constexpr const char* kArrowWindow = "arrow.window";
}  // namespace phase

enum class CheckKind { Setup, Room, Neighbor, Arrow };

inline const char* check_name(CheckKind k) {
  switch (k) {
    case CheckKind::Setup: return "setup";
    case CheckKind::Room: return "room";
    case CheckKind::Neighbor: return "neighbor";
    case CheckKind::Arrow: return "arrow";
  }
  return "?";
}

// Which check rejected. Setup failures name the room whose cards could not
// be laid out (a repeated or out-of-range value) and the cell concerned.
struct FailingCheck {
  CheckKind kind = CheckKind::Setup;
  std::size_t room = 0;  // Setup, Room
  Coord first{};         // Setup cell, Neighbor first cell, Arrow black cell
  Coord second{};        // Neighbor second cell

  friend bool operator==(const FailingCheck&, const FailingCheck&) = default;
};

struct Verdict {
  bool accepted = true;
  std::optional<FailingCheck> failing_check;
};

struct ProverState {
  Assignment secret;
};

class SetupError : public std::runtime_error {
 public:
  SetupError(const std::string& what, std::size_t room, Coord cell)
      : std::runtime_error(what + " at " + to_string(cell)), room_(room), cell_(cell) {}
  std::size_t room() const { return room_; }
  Coord cell() const { return cell_; }

 private:
  std::size_t room_;
  Coord cell_;
};

/// m face-down cards of one encoding family with the family's marker card at
/// the encoded value.
struct EncodingSequence {
  CardSet set = CardSet::A;
  std::vector<TableCard> cards;

  std::size_t length() const { return cards.size(); }

  // 1-based position of the marker; for white-box tests.
  std::size_t marker_position() const {
    for (std::size_t i = 0; i < cards.size(); ++i)
      if (cards[i].id == marker(set)) return i + 1;
    throw TableError("encoding sequence has no marker");
  }
};

/// Everything on the table during one run, plus the registry that enforces
/// the standard-deck rule: each card exists once, so a card can be in play
/// at most once at any time.
class TableState {
 public:
  explicit TableState(const Grid& grid) : grid_(&grid), stats_(grid.stats()) {
    std::size_t offset = 0;
    for (const Room& room : grid.rooms()) {
      room_offset_.push_back(offset);
      offset += room.size();
    }
    in_use_.assign(stats_.n + stats_.k + 4 * encoding_family_size(), false);
    cells_.resize(static_cast<std::size_t>(grid.height()) * static_cast<std::size_t>(grid.width()));
  }

  const Grid& grid() const { return *grid_; }
  std::size_t largest_room() const { return stats_.k; }
  std::size_t encoding_family_size() const { return 2 * stats_.k - 1; }

  // Size of the whole deck.
  std::size_t deck_size() const { return in_use_.size(); }

  std::optional<TableCard>& cell(Coord c) { return cells_[cell_index(c)]; }
  const std::optional<TableCard>& cell(Coord c) const { return cells_[cell_index(c)]; }

  CardMatrix& matrix() { return matrix_; }
  const CardMatrix& matrix() const { return matrix_; }

  std::vector<TableCard>& aside() { return aside_; }

  bool exists(CardId id) const { return slot(id).has_value(); }
  bool in_use(CardId id) const {
    auto s = slot(id);
    return s && in_use_[*s];
  }

  void acquire(CardId id) {
    auto s = slot(id);
    if (!s) throw TableError("no card " + to_string(id) + " in this deck");
    if (in_use_[*s]) throw TableError("card " + to_string(id) + " is already in use");
    in_use_[*s] = true;
    peak_ = std::max(peak_, ++count_);
  }

  void release(CardId id) {
    auto s = slot(id);
    if (!s || !in_use_[*s]) throw TableError("card " + to_string(id) + " is not in use");
    in_use_[*s] = false;
    --count_;
  }

  std::size_t cards_in_use() const { return count_; }
  std::size_t peak_in_use() const { return peak_; }

  // Every card lying in a zone (grid, matrix, aside, `held`) is registered
  // exactly once, and every registered card lies somewhere.
  void audit(std::span<const EncodingSequence> held = {}) const {
    std::vector<CardId> seen;
    for (const auto& c : cells_)
      if (c) seen.push_back(c->id);
    for (CardId id : matrix_.card_ids()) seen.push_back(id);
    for (const auto& c : aside_) seen.push_back(c.id);
    for (const auto& seq : held)
      for (const auto& c : seq.cards) seen.push_back(c.id);
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) throw TableError("audit: duplicate card on table");
    if (seen.size() != count_) throw TableError("audit: card count mismatch");
    for (CardId id : seen)
      if (!in_use(id)) throw TableError("audit: unregistered card " + to_string(id));
  }

 private:
  std::size_t cell_index(Coord c) const {
    return static_cast<std::size_t>(c.row) * static_cast<std::size_t>(grid_->width()) + static_cast<std::size_t>(c.col);
  }

  std::optional<std::size_t> slot(CardId id) const {
    const std::size_t i = id.index;
    if (i < 1) return std::nullopt;
    switch (id.set) {
      case CardSet::Cell:
        if (id.room >= grid_->rooms().size() || i > grid_->rooms()[id.room].size()) return std::nullopt;
        return room_offset_[id.room] + i - 1;
      case CardSet::Help:
        if (i > stats_.k) return std::nullopt;
        return stats_.n + i - 1;
      default: {
        if (i > encoding_family_size()) return std::nullopt;
        const auto family = static_cast<std::size_t>(id.set) - static_cast<std::size_t>(CardSet::A);
        return stats_.n + stats_.k + family * encoding_family_size() + i - 1;
      }
    }
  }

  const Grid* grid_;
  PuzzleStats stats_;
  std::vector<std::size_t> room_offset_;
  std::vector<bool> in_use_;
  std::size_t count_ = 0;
  std::size_t peak_ = 0;
  std::vector<std::optional<TableCard>> cells_;
  CardMatrix matrix_;
  std::vector<TableCard> aside_;
};

namespace detail {

inline int as_int(std::size_t v) { return static_cast<int>(v); }

inline std::string coord_tag(Coord c) { return std::to_string(c.row) + "," + std::to_string(c.col); }

// Moves a room's cell cards, in canonical order, into row 0 of a fresh
// matrix with `rows` rows, and lays h1..hp openly in row 1.
inline void lay_out_room(TableState& ts, const Room& room, std::size_t rows, Transcript& t) {
  const std::size_t p = room.size();
  ts.matrix() = CardMatrix(rows, p);
  t.build(as_int(rows), as_int(p));
  for (std::size_t j = 0; j < p; ++j) {
    auto& slot = ts.cell(room.cells[j]);
    if (!slot) throw TableError("room cell " + to_string(room.cells[j]) + " holds no card");
    ts.matrix().place(0, j, TableCard{slot->id, Face::Down});
    slot.reset();
    t.take(Zone::Grid, room.cells[j].row, room.cells[j].col);
    t.place_secret(Zone::Matrix, 0, as_int(j));
  }
  for (std::size_t j = 0; j < p; ++j) {
    const CardId h = help_card(as_int(j) + 1);
    ts.acquire(h);
    ts.matrix().place(1, j, TableCard{h, Face::Down});
    t.place_public(Zone::Matrix, 1, as_int(j), h);
  }
}

// Turns row `row` face up, left to right, and returns the identities seen.
inline std::vector<CardId> reveal_row(CardMatrix& m, std::size_t row, Transcript& t) {
  std::vector<CardId> out;
  out.reserve(m.cols());
  for (std::size_t c = 0; c < m.cols(); ++c) out.push_back(reveal(m, row, c, t));
  return out;
}

// The helping-card half shared by room checks and conversions: shuffle the
// two-row matrix, open row 1, sort columns back to h1..hp, then return the
// cell cards to the room and the helping cards to the pool.
template <ProtocolRandomness R>
void restore_room(TableState& ts, const Room& room, R& r, Transcript& t, const char* help_phase) {
  ts.matrix() = turn_all_down(std::move(ts.matrix()));
  t.turn_down(Zone::Matrix);
  ts.matrix() = pile_scramble_shuffle(std::move(ts.matrix()), r);
  t.shuffle("scramble");
  t.phase(help_phase);
  reveal_row(ts.matrix(), 1, t);
  sort_columns_by_row(ts.matrix(), 1);
  t.rearrange(1);
  ts.matrix() = turn_all_down(std::move(ts.matrix()));
  t.turn_down(Zone::Matrix);
  for (std::size_t j = 0; j < room.size(); ++j) {
    ts.cell(room.cells[j]) = ts.matrix().take(0, j);
    t.restore(room.cells[j].row, room.cells[j].col);
  }
  for (std::size_t j = 0; j < room.size(); ++j) ts.release(ts.matrix().take(1, j).id);
  t.take(Zone::Matrix, 1, -1);
  ts.matrix() = CardMatrix();
}

inline void return_to_pool(TableState& ts, Transcript& t) {
  for (std::size_t r = 0; r < ts.matrix().rows(); ++r)
    for (std::size_t c = 0; c < ts.matrix().cols(); ++c)
      if (ts.matrix().at(r, c)) ts.release(ts.matrix().take(r, c).id);
  t.take(Zone::Matrix, -1, -1);
  ts.matrix() = CardMatrix();
}

inline std::size_t column_of(const CardMatrix& m, std::size_t row, CardId id) {
  for (std::size_t c = 0; c < m.cols(); ++c)
    if (m.at(row, c) && m.at(row, c)->id == id) return c;
  throw TableError("card " + to_string(id) + " not found in row");
}

}  // namespace detail

/// Lays a face-down cell card on every white cell: clue cells first, openly,
/// then the prover's values secretly. Throws SetupError when a value is out
/// of its room's range or its card is already on the table.
inline TableState setup_placement(const Grid& grid, const ProverState& p, Transcript& t) {
  if (!p.secret.covers(grid)) throw std::invalid_argument("prover assignment does not cover the white cells");
  if (!p.secret.agrees_with_clues(grid)) throw std::invalid_argument("prover assignment contradicts a clue");
  TableState ts(grid);
  const auto whites = grid.white_cells();
  for (bool clued : {true, false}) {
    for (Coord c : whites) {
      if (grid.clue(c).has_value() != clued) continue;
      const std::size_t room = grid.room_of(c);
      const int v = p.secret.at(c);
      if (v < 1 || static_cast<std::size_t>(v) > grid.room_size_of(c))
        throw SetupError("value " + std::to_string(v) + " has no card in room '" + grid.rooms()[room].id + "'", room, c);
      const CardId id = cell_card(room, v);
      if (ts.in_use(id))
        throw SetupError("card for value " + std::to_string(v) + " already placed in room '" + grid.rooms()[room].id + "'",
                         room, c);
      ts.acquire(id);
      ts.cell(c) = TableCard{id, Face::Down};
      if (clued)
        t.place_public(Zone::Grid, c.row, c.col, id);
      else
        t.place_secret(Zone::Grid, c.row, c.col);
    }
  }
  ts.audit();
  return ts;
}

/// Builds an encoding sequence of length m for value x directly from the
/// pool: marker at position x, the other m-1 cards in a private random
/// order.
template <ProtocolRandomness R>
EncodingSequence make_encoding(TableState& ts, CardSet set, std::size_t m, std::size_t x, R& r) {
  if (!is_encoding(set)) throw std::invalid_argument("not an encoding family");
  if (m < 1 || m > ts.encoding_family_size()) throw std::invalid_argument("sequence length out of range");
  if (x < 1 || x > m) throw std::invalid_argument("encoded value out of range");
  for (std::size_t i = 1; i <= m; ++i)
    if (ts.in_use(encoding_card(set, detail::as_int(i))))
      throw TableError("card " + to_string(encoding_card(set, detail::as_int(i))) + " is already in use");
  EncodingSequence seq{set, {}};
  seq.cards.reserve(m);
  const auto order = r.prover_permutation(m - 1);
  std::size_t next = 0;
  for (std::size_t pos = 1; pos <= m; ++pos) {
    const CardId id = pos == x ? marker(set) : encoding_card(set, detail::as_int(order[next++]) + 2);
    ts.acquire(id);
    seq.cards.push_back(TableCard{id, Face::Down});
  }
  return seq;
}

/// Turns the cell card on `cell` into an encoding sequence of length m
/// without revealing its value. The room's cell cards end where they
/// started, face down.
template <ProtocolRandomness R>
EncodingSequence convert_cell(TableState& ts, Coord cell, CardSet set, std::size_t m, R& r, Transcript& t) {
  const Grid& grid = ts.grid();
  if (!grid.is_white(cell)) throw std::invalid_argument("conversion needs a white cell");
  if (!is_encoding(set)) throw std::invalid_argument("not an encoding family");
  const Room& room = grid.rooms()[grid.room_of(cell)];
  const std::size_t p = room.size();
  if (m < p) throw std::invalid_argument("sequence shorter than the room");
  if (m > ts.encoding_family_size()) throw std::invalid_argument("sequence longer than the encoding family");
  for (std::size_t i = 1; i <= m; ++i)
    if (ts.in_use(encoding_card(set, detail::as_int(i))))
      throw TableError("card " + to_string(encoding_card(set, detail::as_int(i))) + " is already in use");

  t.begin(std::string("convert:") + set_letter(set), cell.row, cell.col);
  detail::lay_out_room(ts, room, 3, t);
  CardMatrix& m3 = ts.matrix();

  // The marker goes openly under the target cell's column.
  const std::size_t col = grid.position_in_room(cell);
  ts.acquire(marker(set));
  m3.place(2, col, TableCard{marker(set), Face::Down});
  t.place_public(Zone::Matrix, 2, detail::as_int(col), marker(set));

  // The prover privately orders set_2..set_m; the first p-1 fill row 2,
  // the rest wait aside.
  const auto order = r.prover_permutation(m - 1);
  std::vector<TableCard> pile;
  pile.reserve(m - 1);
  for (std::size_t i : order) {
    const CardId id = encoding_card(set, detail::as_int(i) + 2);
    ts.acquire(id);
    pile.push_back(TableCard{id, Face::Down});
  }
  std::size_t used = 0;
  for (std::size_t j = 0; j < p; ++j) {
    if (j == col) continue;
    m3.place(2, j, pile[used++]);
    t.place_secret(Zone::Matrix, 2, detail::as_int(j));
  }
  ts.aside().assign(pile.begin() + static_cast<std::ptrdiff_t>(used), pile.end());
  for (std::size_t j = 0; j < ts.aside().size(); ++j) t.place_secret(Zone::Aside, 0, detail::as_int(j));

  ts.matrix() = pile_scramble_shuffle(std::move(ts.matrix()), r);
  t.shuffle("scramble");
  t.phase(phase::kConvertCells);
  detail::reveal_row(ts.matrix(), 0, t);
  sort_columns_by_row(ts.matrix(), 0);
  t.rearrange(0);

  // Row 2 followed by the aside cards is the encoding.
  EncodingSequence seq{set, {}};
  seq.cards.reserve(m);
  for (std::size_t j = 0; j < p; ++j) {
    seq.cards.push_back(ts.matrix().take(2, j));
    t.take(Zone::Matrix, 2, detail::as_int(j));
  }
  for (std::size_t j = 0; j < ts.aside().size(); ++j) {
    seq.cards.push_back(ts.aside()[j]);
    t.take(Zone::Aside, 0, detail::as_int(j));
  }
  ts.aside().clear();

  CardMatrix two(2, p);
  for (std::size_t row = 0; row < 2; ++row)
    for (std::size_t j = 0; j < p; ++j) two.place(row, j, ts.matrix().take(row, j));
  ts.matrix() = std::move(two);
  detail::restore_room(ts, room, r, t, phase::kConvertHelp);
  return seq;
}

/// Room check: the room's cards, opened after a scramble, must be exactly
/// that room's card set.
template <ProtocolRandomness R>
bool verify_room(TableState& ts, std::size_t room_index, R& r, Transcript& t) {
  const Room& room = ts.grid().rooms().at(room_index);
  const std::size_t p = room.size();
  t.begin("room", room.cells.front().row, room.cells.front().col);
  detail::lay_out_room(ts, room, 2, t);
  ts.matrix() = pile_scramble_shuffle(std::move(ts.matrix()), r);
  t.shuffle("scramble");
  t.phase(phase::kRoomCells);
  auto seen = detail::reveal_row(ts.matrix(), 0, t);
  std::sort(seen.begin(), seen.end());
  for (std::size_t i = 0; i < p; ++i)
    if (seen[i] != cell_card(room_index, detail::as_int(i) + 1)) return false;
  detail::restore_room(ts, room, r, t, phase::kRoomHelp);
  ts.audit();
  return true;
}

// Columns opened in the non-pointed rows of an arrow check: m consecutive
// columns starting at the marker column, wrapping modulo 2m-1.
inline std::vector<std::size_t> arrow_window(std::size_t marker_col, std::size_t m) {
  const std::size_t width = 2 * m - 1;
  std::vector<std::size_t> cols(m);
  for (std::size_t j = 0; j < m; ++j) cols[j] = (marker_col + j) % width;
  return cols;
}

/// Neighbour check for two adjacent cells in different rooms: passes iff
/// their values differ.
template <ProtocolRandomness R>
bool verify_neighbor(TableState& ts, Coord first, Coord second, R& r, Transcript& t) {
  const Grid& grid = ts.grid();
  if (!grid.is_white(first) || !grid.is_white(second)) throw std::invalid_argument("neighbour check needs white cells");
  if (std::abs(first.row - second.row) + std::abs(first.col - second.col) != 1)
    throw std::invalid_argument("neighbour check needs adjacent cells");
  if (grid.room_of(first) == grid.room_of(second)) throw std::invalid_argument("neighbour check needs different rooms");

  const std::size_t m = std::max(grid.room_size_of(first), grid.room_size_of(second));
  t.begin("neighbor:" + detail::coord_tag(second), first.row, first.col);
  EncodingSequence row_a = convert_cell(ts, first, CardSet::A, m, r, t);
  EncodingSequence row_b = convert_cell(ts, second, CardSet::B, m, r, t);
  ts.audit(std::vector<EncodingSequence>{row_a, row_b});

  ts.matrix() = CardMatrix(2, m);
  t.build(2, detail::as_int(m));
  for (std::size_t j = 0; j < m; ++j) {
    ts.matrix().place(0, j, row_a.cards[j]);
    ts.matrix().place(1, j, row_b.cards[j]);
  }
  ts.matrix() = pile_scramble_shuffle(std::move(ts.matrix()), r);
  t.shuffle("scramble");
  t.phase(phase::kNeighborRowA);
  detail::reveal_row(ts.matrix(), 0, t);
  const std::size_t col = detail::column_of(ts.matrix(), 0, marker(CardSet::A));
  t.phase(phase::kNeighborRowB);
  const bool pass = reveal(ts.matrix(), 1, col, t) != marker(CardSet::B);
  detail::return_to_pool(ts, t);
  ts.audit();
  return pass;
}

/// Arrow check: passes iff the pointed cell holds a value strictly larger
/// than every other white neighbour of the black cell.
///
/// Rows: pointed cell (family a), then the other neighbours clockwise from
/// the arrow (families b, c, d). Only existing neighbours get a row.
template <ProtocolRandomness R>
bool verify_arrow(TableState& ts, Coord black, R& r, Transcript& t) {
  const Grid& grid = ts.grid();
  if (!grid.is_black(black)) throw std::invalid_argument("arrow check needs a black cell");
  const auto around = grid.arrow_neighbors(black);
  std::size_t m = 0;
  for (Coord c : around) m = std::max(m, grid.room_size_of(c));
  const std::size_t width = 2 * m - 1;

  t.begin("arrow", black.row, black.col);
  std::vector<EncodingSequence> rows;
  rows.reserve(around.size());
  for (std::size_t i = 0; i < around.size(); ++i) rows.push_back(convert_cell(ts, around[i], kEncodingSets[i], width, r, t));
  ts.audit(rows);

  ts.matrix() = CardMatrix(rows.size(), width);
  t.build(detail::as_int(rows.size()), detail::as_int(width));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < width; ++j) ts.matrix().place(i, j, rows[i].cards[j]);
  ts.matrix() = pile_shifting_shuffle(std::move(ts.matrix()), r);
  t.shuffle("shift");
  t.phase(phase::kArrowRowA);
  detail::reveal_row(ts.matrix(), 0, t);
  const std::size_t col = detail::column_of(ts.matrix(), 0, marker(CardSet::A));
  bool pass = true;
  if (rows.size() > 1) {
    t.phase(phase::kArrowWindow);
    const auto window = arrow_window(col, m);
    for (std::size_t i = 1; i < rows.size(); ++i)
      for (std::size_t c : window)
        if (reveal(ts.matrix(), i, c, t) == marker(kEncodingSets[i])) pass = false;
  }
  detail::return_to_pool(ts, t);
  ts.audit();
  return pass;
}

struct ProtocolRun {
  Verdict verdict;
  Transcript transcript;
  std::size_t peak_cards = 0;
};

/// Setup, then a room check per room, a neighbour check per cross-room
/// adjacent pair and an arrow check per black cell, stopping at the first
/// rejection.
template <ProtocolRandomness R>
ProtocolRun run_full_protocol(const Grid& grid, const ProverState& p, R& r) {
  ProtocolRun run;
  Transcript& t = run.transcript;
  auto reject = [&](FailingCheck f) {
    run.verdict = Verdict{false, f};
    t.outcome(false);
    return run;
  };

  t.begin("setup");
  std::optional<TableState> ts;
  try {
    ts.emplace(setup_placement(grid, p, t));
  } catch (const SetupError& e) {
    return reject({CheckKind::Setup, e.room(), e.cell(), {}});
  }

  auto finish = [&]() { run.peak_cards = ts->peak_in_use(); };
  for (std::size_t i = 0; i < grid.rooms().size(); ++i) {
    if (!verify_room(*ts, i, r, t)) {
      finish();
      return reject({CheckKind::Room, i, grid.rooms()[i].cells.front(), {}});
    }
  }
  for (const auto& [a, b] : grid.cross_room_pairs()) {
    if (!verify_neighbor(*ts, a, b, r, t)) {
      finish();
      return reject({CheckKind::Neighbor, 0, a, b});
    }
  }
  for (Coord black : grid.black_cells()) {
    if (!verify_arrow(*ts, black, r, t)) {
      finish();
      return reject({CheckKind::Arrow, 0, black, {}});
    }
  }
  finish();
  run.verdict = Verdict{true, std::nullopt};
  t.outcome(true);
  return run;
}

}  // namespace makaro
