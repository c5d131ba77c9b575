#pragma once

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "makaro/cards.hpp"
#include "makaro/transcript.hpp"

namespace makaro {

/// Cards laid out in rows and columns. Slots may be empty while a matrix is
/// being assembled; shuffles need every slot filled.
class CardMatrix {
 public:
  CardMatrix() = default;
  CardMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), slots_(rows * cols) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  const std::optional<TableCard>& at(std::size_t row, std::size_t col) const { return slots_.at(row * cols_ + col); }
  std::optional<TableCard>& at(std::size_t row, std::size_t col) { return slots_.at(row * cols_ + col); }

  void place(std::size_t row, std::size_t col, TableCard card) {
    auto& slot = at(row, col);
    if (slot) throw TableError("slot already occupied");
    slot = card;
  }

  TableCard take(std::size_t row, std::size_t col) {
    auto& slot = at(row, col);
    if (!slot) throw TableError("taking from an empty slot");
    TableCard card = *slot;
    slot.reset();
    return card;
  }

  bool full() const {
    return std::all_of(slots_.begin(), slots_.end(), [](const auto& s) { return s.has_value(); });
  }

  // Identities of one row, left to right. Every slot must be filled.
  std::vector<CardId> row_ids(std::size_t row) const {
    std::vector<CardId> out;
    out.reserve(cols_);
    for (std::size_t c = 0; c < cols_; ++c) out.push_back(at(row, c).value().id);
    return out;
  }

  // Sorted identities of every occupied slot.
  std::vector<CardId> card_ids() const {
    std::vector<CardId> out;
    for (const auto& s : slots_)
      if (s) out.push_back(s->id);
    std::sort(out.begin(), out.end());
    return out;
  }

  // New column j is old column `order[j]`.
  void permute_columns(std::span<const std::size_t> order) {
    std::vector<std::optional<TableCard>> next(slots_.size());
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t j = 0; j < cols_; ++j) next[r * cols_ + j] = slots_[r * cols_ + order[j]];
    slots_ = std::move(next);
  }

  friend bool operator==(const CardMatrix&, const CardMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::optional<TableCard>> slots_;
};

// Randomness used by a protocol run. Shuffle draws model outcomes unknown to
// every party; prover draws model the prover's private choices.
template <class R>
concept ProtocolRandomness = requires(R& r, std::size_t n) {
  { r.shift(n) } -> std::convertible_to<std::size_t>;
  { r.permutation(n) } -> std::same_as<std::vector<std::size_t>>;
  { r.prover_permutation(n) } -> std::same_as<std::vector<std::size_t>>;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Two independent seeded streams: one for shuffles, one for the prover.
///
/// Seed schedule: `from_seed(s)` seeds the shuffle stream with
/// splitmix64(2s) and the prover stream with splitmix64(2s + 1).
/// `for_trial(s, t)` is `from_seed(splitmix64(s ^ splitmix64(t)))`, so trial
/// t of a batch gets the same streams no matter which worker runs it.
class RandomSource {
 public:
  RandomSource(std::uint64_t shuffle_seed, std::uint64_t prover_seed) : shuffle_(shuffle_seed), prover_(prover_seed) {}

  static RandomSource from_seed(std::uint64_t seed) {
    return RandomSource(splitmix64(seed * 2), splitmix64(seed * 2 + 1));
  }
  static RandomSource for_trial(std::uint64_t seed, std::uint64_t trial) {
    return from_seed(splitmix64(seed ^ splitmix64(trial)));
  }

  std::size_t shift(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(shuffle_); }
  std::vector<std::size_t> permutation(std::size_t n) { return draw(n, shuffle_); }
  std::vector<std::size_t> prover_permutation(std::size_t n) { return draw(n, prover_); }

 private:
  static std::vector<std::size_t> draw(std::size_t n, std::mt19937_64& engine) {
    std::vector<std::size_t> p(n);
    std::iota(p.begin(), p.end(), std::size_t{0});
    std::shuffle(p.begin(), p.end(), engine);
    return p;
  }

  std::mt19937_64 shuffle_;
  std::mt19937_64 prover_;
};

static_assert(ProtocolRandomness<RandomSource>);

// Column j moves to column (j + s) mod cols.
inline CardMatrix shift_columns(CardMatrix m, std::size_t s) {
  const std::size_t n = m.cols();
  std::vector<std::size_t> order(n);
  for (std::size_t j = 0; j < n; ++j) order[(j + s) % n] = j;
  m.permute_columns(order);
  return m;
}

inline void require_full(const CardMatrix& m) {
  if (m.empty()) throw TableError("cannot shuffle an empty matrix");
  if (!m.full()) throw TableError("cannot shuffle a matrix with empty slots");
}

template <ProtocolRandomness R>
CardMatrix pile_shifting_shuffle(CardMatrix m, R& r) {
  require_full(m);
  const std::size_t s = r.shift(m.cols());
  return shift_columns(std::move(m), s);
}

template <ProtocolRandomness R>
CardMatrix pile_scramble_shuffle(CardMatrix m, R& r) {
  require_full(m);
  const auto order = r.permutation(m.cols());
  m.permute_columns(order);
  return m;
}

// Turns a face-down card up and logs it.
inline CardId reveal(CardMatrix& m, std::size_t row, std::size_t col, Transcript& t) {
  auto& slot = m.at(row, col);
  if (!slot) throw TableError("revealing an empty slot");
  if (slot->face == Face::Up) throw TableError("card is already face up");
  slot->face = Face::Up;
  t.reveal(Zone::Matrix, static_cast<int>(row), static_cast<int>(col), slot->id);
  return slot->id;
}

inline CardMatrix turn_all_down(CardMatrix m) {
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c)
      if (auto& s = m.at(r, c)) s->face = Face::Down;
  return m;
}

// Reorders columns so that row `row`, which must be face up, reads
// ascending by card index.
inline void sort_columns_by_row(CardMatrix& m, std::size_t row) {
  std::vector<std::size_t> order(m.cols());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return m.at(row, x)->id < m.at(row, y)->id; });
  m.permute_columns(order);
}

}  // namespace makaro
