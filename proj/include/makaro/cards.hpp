#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace makaro {

// Card families. Cell cards carry a room ordinal; the other families do not.
enum class CardSet : std::uint8_t { Cell, Help, A, B, C, D };

inline constexpr CardSet kEncodingSets[4] = {CardSet::A, CardSet::B, CardSet::C, CardSet::D};

inline bool is_encoding(CardSet s) { return s == CardSet::A || s == CardSet::B || s == CardSet::C || s == CardSet::D; }

/// A unique card face. Indices are 1-based as printed on the card.
struct CardId {
  CardSet set = CardSet::Help;
  std::uint16_t room = 0;
  std::uint16_t index = 1;

  friend auto operator<=>(const CardId&, const CardId&) = default;
};

inline CardId cell_card(std::size_t room, int index) {
  return {CardSet::Cell, static_cast<std::uint16_t>(room), static_cast<std::uint16_t>(index)};
}
inline CardId help_card(int index) { return {CardSet::Help, 0, static_cast<std::uint16_t>(index)}; }
inline CardId encoding_card(CardSet set, int index) { return {set, 0, static_cast<std::uint16_t>(index)}; }

// The marker card of an encoding family (a1, b1, c1 or d1).
inline CardId marker(CardSet set) { return encoding_card(set, 1); }

inline char set_letter(CardSet s) {
  switch (s) {
    case CardSet::A: return 'a';
    case CardSet::B: return 'b';
    case CardSet::C: return 'c';
    case CardSet::D: return 'd';
    case CardSet::Help: return 'h';
    case CardSet::Cell: return 'x';
  }
  return '?';
}

// Text form: `cell<room>.<i>`, `h<i>`, `a<i>` .. `d<i>`.
inline std::string to_string(const CardId& id) {
  if (id.set == CardSet::Cell) return "cell" + std::to_string(id.room) + "." + std::to_string(id.index);
  return std::string(1, set_letter(id.set)) + std::to_string(id.index);
}

inline std::optional<CardId> parse_card(std::string_view s) {
  auto number = [](std::string_view digits) -> std::optional<std::uint16_t> {
    if (digits.empty() || digits.size() > 5) return std::nullopt;
    unsigned v = 0;
    for (char ch : digits) {
      if (ch < '0' || ch > '9') return std::nullopt;
      v = v * 10 + static_cast<unsigned>(ch - '0');
    }
    if (v > 0xFFFF) return std::nullopt;
    return static_cast<std::uint16_t>(v);
  };
  if (s.starts_with("cell")) {
    auto dot = s.find('.');
    if (dot == std::string_view::npos) return std::nullopt;
    auto room = number(s.substr(4, dot - 4));
    auto index = number(s.substr(dot + 1));
    if (!room || !index) return std::nullopt;
    return CardId{CardSet::Cell, *room, *index};
  }
  if (s.size() < 2) return std::nullopt;
  CardSet set;
  switch (s[0]) {
    case 'a': set = CardSet::A; break;
    case 'b': set = CardSet::B; break;
    case 'c': set = CardSet::C; break;
    case 'd': set = CardSet::D; break;
    case 'h': set = CardSet::Help; break;
    default: return std::nullopt;
  }
  auto index = number(s.substr(1));
  if (!index) return std::nullopt;
  return CardId{set, 0, *index};
}

enum class Face : std::uint8_t { Down, Up };

struct TableCard {
  CardId id;
  Face face = Face::Down;

  friend bool operator==(const TableCard&, const TableCard&) = default;
};

// Misuse of the table: revealing an empty slot, reusing a card, and so on.
class TableError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace makaro
