#pragma once

// Verifier-visible record of a protocol run.
//
// Serialized as one line per event with six space-separated fields:
//
//   <kind> <zone> <row> <col> <card> <tag>
//
// `-` stands for an absent field. `card` is present only when its identity
// is public: reveals, and cards placed openly. Row/col are 0-based. For
// `build` events row/col hold the matrix dimensions.

#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "makaro/cards.hpp"

namespace makaro {

enum class EventKind : std::uint8_t {
  Begin,        // a check or conversion starts; tag names it
  Phase,        // subsequent reveals belong to the phase named by tag
  Build,        // a fresh working matrix
  PlacePublic,  // card placed openly
  PlaceSecret,  // card placed by the prover, identity hidden
  Take,         // card lifted from a zone
  Restore,      // card put back into the grid
  Shuffle,      // tag: shift | scramble
  Reveal,       // card turned face up
  TurnDown,     // every face-up card in the zone turned face down
  Rearrange,    // columns sorted by the face-up row `row`
  Outcome,      // tag: pass | reject
};

enum class Zone : std::uint8_t { None, Grid, Matrix, Aside, Sequence, Pool };

struct Event {
  EventKind kind = EventKind::Begin;
  Zone zone = Zone::None;
  int row = -1;
  int col = -1;
  std::optional<CardId> card;
  std::string tag;

  friend bool operator==(const Event&, const Event&) = default;
};

inline const char* kind_name(EventKind k) {
  switch (k) {
    case EventKind::Begin: return "begin";
    case EventKind::Phase: return "phase";
    case EventKind::Build: return "build";
    case EventKind::PlacePublic: return "place-public";
    case EventKind::PlaceSecret: return "place-secret";
    case EventKind::Take: return "take";
    case EventKind::Restore: return "restore";
    case EventKind::Shuffle: return "shuffle";
    case EventKind::Reveal: return "reveal";
    case EventKind::TurnDown: return "turn-down";
    case EventKind::Rearrange: return "rearrange";
    case EventKind::Outcome: return "outcome";
  }
  return "?";
}

inline const char* zone_name(Zone z) {
  switch (z) {
    case Zone::None: return "-";
    case Zone::Grid: return "grid";
    case Zone::Matrix: return "matrix";
    case Zone::Aside: return "aside";
    case Zone::Sequence: return "sequence";
    case Zone::Pool: return "pool";
  }
  return "?";
}

class Transcript {
 public:
  void push(Event e) { events_.push_back(std::move(e)); }

  void begin(std::string tag, int row = -1, int col = -1) {
    push({EventKind::Begin, Zone::None, row, col, std::nullopt, std::move(tag)});
  }
  void phase(std::string tag) { push({EventKind::Phase, Zone::None, -1, -1, std::nullopt, std::move(tag)}); }
  void build(int rows, int cols) { push({EventKind::Build, Zone::Matrix, rows, cols, std::nullopt, {}}); }
  void place_public(Zone z, int row, int col, CardId id) { push({EventKind::PlacePublic, z, row, col, id, {}}); }
  void place_secret(Zone z, int row, int col) { push({EventKind::PlaceSecret, z, row, col, std::nullopt, {}}); }
  void take(Zone z, int row, int col) { push({EventKind::Take, z, row, col, std::nullopt, {}}); }
  void restore(int row, int col) { push({EventKind::Restore, Zone::Grid, row, col, std::nullopt, {}}); }
  void shuffle(std::string kind) { push({EventKind::Shuffle, Zone::Matrix, -1, -1, std::nullopt, std::move(kind)}); }
  void reveal(Zone z, int row, int col, CardId id) { push({EventKind::Reveal, z, row, col, id, {}}); }
  void turn_down(Zone z) { push({EventKind::TurnDown, z, -1, -1, std::nullopt, {}}); }
  void rearrange(int row) { push({EventKind::Rearrange, Zone::Matrix, row, -1, std::nullopt, {}}); }
  void outcome(bool pass) { push({EventKind::Outcome, Zone::None, -1, -1, std::nullopt, pass ? "pass" : "reject"}); }

  const std::vector<Event>& events() const { return events_; }
  std::size_t size() const { return events_.size(); }
  bool empty() const { return events_.empty(); }

  friend bool operator==(const Transcript&, const Transcript&) = default;

 private:
  std::vector<Event> events_;
};

inline std::string to_line(const Event& e) {
  auto num = [](int v) { return v < 0 ? std::string("-") : std::to_string(v); };
  std::string line = kind_name(e.kind);
  line += ' ';
  line += zone_name(e.zone);
  line += ' ' + num(e.row) + ' ' + num(e.col) + ' ';
  line += e.card ? to_string(*e.card) : std::string("-");
  line += ' ';
  line += e.tag.empty() ? std::string("-") : e.tag;
  return line;
}

inline std::string serialize_transcript(const Transcript& t) {
  std::string out;
  for (const Event& e : t.events()) {
    out += to_line(e);
    out += '\n';
  }
  return out;
}

inline Transcript parse_transcript(std::string_view text) {
  static constexpr EventKind kinds[] = {
      EventKind::Begin, EventKind::Phase,  EventKind::Build,    EventKind::PlacePublic, EventKind::PlaceSecret,
      EventKind::Take,  EventKind::Restore, EventKind::Shuffle, EventKind::Reveal,      EventKind::TurnDown,
      EventKind::Rearrange, EventKind::Outcome};
  static constexpr Zone zones[] = {Zone::None, Zone::Grid, Zone::Matrix, Zone::Aside, Zone::Sequence, Zone::Pool};

  Transcript t;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string kind, zone, row, col, card, tag;
    if (!(fields >> kind >> zone >> row >> col >> card >> tag))
      throw std::invalid_argument("transcript line " + std::to_string(line_no) + ": expected six fields");
    Event e;
    bool found = false;
    for (EventKind k : kinds)
      if (kind == kind_name(k)) e.kind = k, found = true;
    if (!found) throw std::invalid_argument("transcript line " + std::to_string(line_no) + ": unknown kind " + kind);
    found = false;
    for (Zone z : zones)
      if (zone == zone_name(z)) e.zone = z, found = true;
    if (!found) throw std::invalid_argument("transcript line " + std::to_string(line_no) + ": unknown zone " + zone);
    e.row = row == "-" ? -1 : std::stoi(row);
    e.col = col == "-" ? -1 : std::stoi(col);
    if (card != "-") {
      e.card = parse_card(card);
      if (!e.card) throw std::invalid_argument("transcript line " + std::to_string(line_no) + ": bad card " + card);
    }
    if (tag != "-") e.tag = tag;
    t.push(std::move(e));
  }
  return t;
}

}  // namespace makaro
