#pragma once

// Text format for puzzles and solutions.
//
//   makaro <height> <width>
//   <height rows of <width> whitespace-separated tokens>
//
// Tokens: `B^ Bv B< B>` are black cells with an arrow (up, down, left,
// right). Anything else is a white cell, written `<room-id>` or
// `<room-id>=<value>` where room-id is alphanumeric. The four arrow tokens are
// reserved and cannot be used as room ids.
//
// A solution file uses the same layout with a value on every white cell.

#include <cctype>
#include <charconv>
#include <cstddef>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "makaro/grid.hpp"

namespace makaro {

// Syntax error; line and column are 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

namespace detail {

struct RawToken {
  bool black = false;
  Arrow arrow = Arrow::Up;
  std::string room;
  std::optional<int> value;
  std::size_t column = 1;
};

struct RawBoard {
  int height = 0;
  int width = 0;
  std::vector<RawToken> tokens;  // row-major
};

struct Word {
  std::string_view text;
  std::size_t column;  // 1-based
};

inline std::vector<Word> split_words(std::string_view line) {
  std::vector<Word> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    if (i >= line.size()) break;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    out.push_back({line.substr(start, i - start), start + 1});
  }
  return out;
}

inline std::optional<int> parse_positive(std::string_view s) {
  int v = 0;
  if (s.empty()) return std::nullopt;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || end != s.data() + s.size() || v < 1) return std::nullopt;
  return v;
}

inline RawToken parse_token(const Word& w, std::size_t line) {
  RawToken t;
  t.column = w.column;
  if (w.text.size() == 2 && w.text[0] == 'B') {
    switch (w.text[1]) {
      case '^': t.black = true; t.arrow = Arrow::Up; return t;
      case 'v': t.black = true; t.arrow = Arrow::Down; return t;
      case '<': t.black = true; t.arrow = Arrow::Left; return t;
      case '>': t.black = true; t.arrow = Arrow::Right; return t;
      default: break;
    }
  }
  std::string_view room = w.text;
  std::string_view value;
  if (auto eq = w.text.find('='); eq != std::string_view::npos) {
    room = w.text.substr(0, eq);
    value = w.text.substr(eq + 1);
    if (value.empty()) throw ParseError("missing value after '='", line, w.column + eq + 1);
  }
  if (room.empty()) throw ParseError("missing room id", line, w.column);
  for (std::size_t i = 0; i < room.size(); ++i) {
    if (!std::isalnum(static_cast<unsigned char>(room[i])))
      throw ParseError("invalid character '" + std::string(1, room[i]) + "' in room id", line, w.column + i);
  }
  t.room = std::string(room);
  if (!value.empty()) {
    t.value = parse_positive(value);
    if (!t.value) throw ParseError("value must be a positive integer", line, w.column + room.size() + 1);
  }
  return t;
}

inline RawBoard parse_raw(std::string_view text) {
  std::vector<std::string_view> lines;
  for (std::size_t pos = 0; pos <= text.size();) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) {
      if (pos < text.size()) lines.push_back(text.substr(pos));
      break;
    }
    lines.push_back(text.substr(pos, nl - pos));
    pos = nl + 1;
  }

  if (lines.empty()) throw ParseError("empty input", 1, 1);
  auto header = split_words(lines[0]);
  if (header.empty() || header[0].text != "makaro") throw ParseError("expected header 'makaro <height> <width>'", 1, 1);
  if (header.size() != 3) throw ParseError("header needs exactly a height and a width", 1, header.back().column);
  auto h = parse_positive(header[1].text);
  if (!h) throw ParseError("height must be a positive integer", 1, header[1].column);
  auto w = parse_positive(header[2].text);
  if (!w) throw ParseError("width must be a positive integer", 1, header[2].column);

  RawBoard board{*h, *w, {}};
  board.tokens.reserve(static_cast<std::size_t>(*h) * static_cast<std::size_t>(*w));
  for (int r = 0; r < *h; ++r) {
    const std::size_t line_no = static_cast<std::size_t>(r) + 2;
    if (line_no > lines.size()) throw ParseError("expected " + std::to_string(*h) + " rows", line_no, 1);
    auto words = split_words(lines[line_no - 1]);
    if (words.size() != static_cast<std::size_t>(*w)) {
      std::size_t col = words.size() > static_cast<std::size_t>(*w) ? words[static_cast<std::size_t>(*w)].column : 1;
      throw ParseError("expected " + std::to_string(*w) + " tokens, found " + std::to_string(words.size()), line_no,
                       col);
    }
    for (const Word& word : words) board.tokens.push_back(parse_token(word, line_no));
  }
  for (std::size_t i = static_cast<std::size_t>(*h) + 1; i < lines.size(); ++i) {
    auto rest = split_words(lines[i]);
    if (!rest.empty()) throw ParseError("unexpected content after the last row", i + 1, rest[0].column);
  }
  return board;
}

inline char arrow_char(Arrow a) {
  switch (a) {
    case Arrow::Up: return '^';
    case Arrow::Down: return 'v';
    case Arrow::Left: return '<';
    case Arrow::Right: return '>';
  }
  return '?';
}

template <class ValueOf>
std::string serialize(const Grid& grid, ValueOf value_of) {
  std::string out = "makaro " + std::to_string(grid.height()) + " " + std::to_string(grid.width()) + "\n";
  for (int r = 0; r < grid.height(); ++r) {
    for (int c = 0; c < grid.width(); ++c) {
      if (c > 0) out += ' ';
      const Cell& cell = grid.at({r, c});
      if (const auto* b = std::get_if<Black>(&cell)) {
        out += 'B';
        out += arrow_char(b->arrow);
      } else {
        out += std::get<White>(cell).room;
        if (std::optional<int> v = value_of(Coord{r, c})) out += "=" + std::to_string(*v);
      }
    }
    out += '\n';
  }
  return out;
}

}  // namespace detail

/// Parses a puzzle file. Throws ParseError on malformed text and GridError
/// when the board breaks a structural rule.
inline Grid parse_puzzle(std::string_view text) {
  detail::RawBoard raw = detail::parse_raw(text);
  std::vector<Cell> cells;
  cells.reserve(raw.tokens.size());
  for (auto& t : raw.tokens) {
    if (t.black)
      cells.emplace_back(Black{t.arrow});
    else
      cells.emplace_back(White{std::move(t.room), t.value});
  }
  return Grid(raw.height, raw.width, std::move(cells));
}

inline std::string serialize_puzzle(const Grid& grid) {
  return detail::serialize(grid, [&](Coord c) { return grid.clue(c); });
}

/// Reads a solution file against `grid`. Layout, black cells and room ids
/// must match the puzzle; values need only be positive, so dishonest
/// solutions (wrong or out-of-range values) can still be loaded.
inline Assignment parse_solution(std::string_view text, const Grid& grid) {
  detail::RawBoard raw = detail::parse_raw(text);
  if (raw.height != grid.height() || raw.width != grid.width())
    throw ParseError("solution dimensions differ from the puzzle", 1, 1);
  Assignment a(grid);
  for (int r = 0; r < raw.height; ++r) {
    for (int c = 0; c < raw.width; ++c) {
      const Coord at{r, c};
      const auto& t = raw.tokens[static_cast<std::size_t>(r) * static_cast<std::size_t>(raw.width) +
                                 static_cast<std::size_t>(c)];
      const Cell& cell = grid.at(at);
      const auto line = static_cast<std::size_t>(r) + 2;
      if (t.black) {
        const auto* b = std::get_if<Black>(&cell);
        if (b == nullptr || b->arrow != t.arrow) throw ParseError("black cell differs from the puzzle", line, t.column);
        continue;
      }
      const auto* w = std::get_if<White>(&cell);
      if (w == nullptr || w->room != t.room) throw ParseError("cell " + to_string(at) + " differs from the puzzle", line, t.column);
      if (!t.value) throw ParseError("white cell " + to_string(at) + " has no value", line, t.column);
      a.set(at, *t.value);
    }
  }
  return a;
}

inline std::string serialize_solution(const Grid& grid, const Assignment& a) {
  return detail::serialize(grid, [&](Coord c) -> std::optional<int> {
    if (int v = a.at(c); v > 0) return v;
    return std::nullopt;
  });
}

}  // namespace makaro
