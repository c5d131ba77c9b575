#include <map>

#include <gtest/gtest.h>

#include "support.hpp"

using namespace makaro;
using testing_support::ScriptedRandomness;

namespace {

// One row of cards a1..a<n>, in order.
CardMatrix row_of(std::size_t n) {
  CardMatrix m(1, n);
  for (std::size_t j = 0; j < n; ++j) m.place(0, j, TableCard{encoding_card(CardSet::A, static_cast<int>(j) + 1)});
  return m;
}

std::vector<int> indices(const CardMatrix& m, std::size_t row = 0) {
  std::vector<int> out;
  for (CardId id : m.row_ids(row)) out.push_back(id.index);
  return out;
}

}  // namespace

TEST(Cards, TextRoundTrip) {
  for (CardId id : {cell_card(3, 2), help_card(4), encoding_card(CardSet::D, 9), marker(CardSet::B)}) {
    auto back = parse_card(to_string(id));
    ASSERT_TRUE(back.has_value()) << to_string(id);
    EXPECT_EQ(*back, id);
  }
  EXPECT_EQ(to_string(cell_card(0, 1)), "cell0.1");
  EXPECT_FALSE(parse_card("z1"));
  EXPECT_FALSE(parse_card("cell1"));
  EXPECT_FALSE(parse_card("a"));
}

TEST(Matrix, PlaceAndTake) {
  CardMatrix m(2, 2);
  EXPECT_FALSE(m.full());
  m.place(0, 0, TableCard{help_card(1)});
  EXPECT_THROW(m.place(0, 0, TableCard{help_card(2)}), TableError);
  EXPECT_EQ(m.take(0, 0).id, help_card(1));
  EXPECT_THROW(m.take(0, 0), TableError);
}

TEST(Shift, MovesColumnsRight) {
  EXPECT_EQ(indices(shift_columns(row_of(5), 0)), (std::vector<int>{1, 2, 3, 4, 5}));
  EXPECT_EQ(indices(shift_columns(row_of(5), 2)), (std::vector<int>{4, 5, 1, 2, 3}));
  EXPECT_EQ(indices(shift_columns(row_of(3), 1)), (std::vector<int>{3, 1, 2}));
}

TEST(Shift, KeepsColumnsTogether) {
  CardMatrix m(2, 3);
  for (std::size_t j = 0; j < 3; ++j) {
    m.place(0, j, TableCard{encoding_card(CardSet::A, static_cast<int>(j) + 1)});
    m.place(1, j, TableCard{encoding_card(CardSet::B, static_cast<int>(j) + 1)});
  }
  ScriptedRandomness r;
  r.shifts = {1};
  auto out = pile_shifting_shuffle(m, r);
  EXPECT_EQ(indices(out, 0), indices(out, 1));
  EXPECT_EQ(indices(out, 0), (std::vector<int>{3, 1, 2}));
}

TEST(Scramble, AppliesPermutationToWholeColumns) {
  CardMatrix m(2, 3);
  for (std::size_t j = 0; j < 3; ++j) {
    m.place(0, j, TableCard{encoding_card(CardSet::A, static_cast<int>(j) + 1)});
    m.place(1, j, TableCard{help_card(static_cast<int>(j) + 1)});
  }
  ScriptedRandomness r;
  r.perms = {{2, 0, 1}};
  auto out = pile_scramble_shuffle(m, r);
  EXPECT_EQ(indices(out, 0), (std::vector<int>{3, 1, 2}));
  EXPECT_EQ(indices(out, 1), (std::vector<int>{3, 1, 2}));
}

TEST(Shuffle, RefusesIncompleteMatrix) {
  ScriptedRandomness r;
  CardMatrix m(1, 2);
  m.place(0, 0, TableCard{help_card(1)});
  EXPECT_THROW(pile_shifting_shuffle(m, r), TableError);
  EXPECT_THROW(pile_scramble_shuffle(CardMatrix(), r), TableError);
}

TEST(Reveal, LogsAndGuards) {
  CardMatrix m = row_of(2);
  Transcript t;
  EXPECT_EQ(reveal(m, 0, 1, t), encoding_card(CardSet::A, 2));
  EXPECT_EQ(m.at(0, 1)->face, Face::Up);
  EXPECT_THROW(reveal(m, 0, 1, t), TableError);
  ASSERT_EQ(t.size(), 1u);
  EXPECT_EQ(t.events()[0].kind, EventKind::Reveal);
  EXPECT_EQ(t.events()[0].card, encoding_card(CardSet::A, 2));
  m = turn_all_down(m);
  EXPECT_EQ(m.at(0, 1)->face, Face::Down);
  EXPECT_NO_THROW(reveal(m, 0, 1, t));
  CardMatrix empty(1, 1);
  EXPECT_THROW(reveal(empty, 0, 0, t), TableError);
}

TEST(Reveal, SortByRow) {
  CardMatrix m(2, 3);
  const int order[] = {2, 3, 1};
  for (std::size_t j = 0; j < 3; ++j) {
    m.place(0, j, TableCard{help_card(order[j]), Face::Up});
    m.place(1, j, TableCard{encoding_card(CardSet::B, order[j])});
  }
  sort_columns_by_row(m, 0);
  EXPECT_EQ(indices(m, 0), (std::vector<int>{1, 2, 3}));
  EXPECT_EQ(indices(m, 1), (std::vector<int>{1, 2, 3}));
}

TEST(Random, SeedsAreReproducible) {
  auto a = RandomSource::from_seed(42);
  auto b = RandomSource::from_seed(42);
  for (int i = 0; i < 20; ++i) {
    EXPECT_EQ(a.permutation(6), b.permutation(6));
    EXPECT_EQ(a.shift(9), b.shift(9));
    EXPECT_EQ(a.prover_permutation(4), b.prover_permutation(4));
  }
  auto c = RandomSource::for_trial(7, 0);
  auto d = RandomSource::for_trial(7, 1);
  EXPECT_NE(c.permutation(10), d.permutation(10));
}

TEST(Random, ProverStreamIsIndependentOfShuffles) {
  auto a = RandomSource::from_seed(5);
  auto b = RandomSource::from_seed(5);
  (void)a.permutation(8);
  (void)a.shift(3);
  EXPECT_EQ(a.prover_permutation(8), b.prover_permutation(8));
}

TEST(Uniformity, ShiftValues) {
  const std::size_t n = 7;
  const std::uint64_t trials = 14'000;
  auto r = RandomSource::from_seed(2024);
  RevealSiteHistogram h;
  for (std::uint64_t i = 0; i < trials; ++i) {
    auto out = pile_shifting_shuffle(row_of(n), r);
    // The shift is where card a1 ended up.
    const auto row = indices(out);
    const auto s = static_cast<std::uint16_t>(std::find(row.begin(), row.end(), 1) - row.begin());
    h.add({static_cast<std::uint16_t>(s + 1)});
  }
  auto rep = uniformity_test(h, SiteShape{n, 1, 1});
  EXPECT_TRUE(rep.passed) << rep.p_value;
}

TEST(Uniformity, ScramblePermutations) {
  auto r = RandomSource::from_seed(99);
  for (std::size_t cols = 1; cols <= 4; ++cols) {
    RevealSiteHistogram h;
    for (int i = 0; i < 12'000; ++i) {
      auto v = indices(pile_scramble_shuffle(row_of(cols), r));
      h.add(Pattern(v.begin(), v.end()));
    }
    EXPECT_EQ(h.counts.size(), ordered_outcomes({cols, cols, 1}));
    auto rep = uniformity_test(h, SiteShape{cols, cols, 1});
    EXPECT_TRUE(rep.passed) << cols << " " << rep.p_value;
  }
}

TEST(Transcript, TextRoundTrip) {
  Transcript t;
  t.begin("room", 1, 2);
  t.build(2, 3);
  t.place_public(Zone::Matrix, 1, 0, help_card(1));
  t.place_secret(Zone::Grid, 0, 0);
  t.shuffle("scramble");
  t.phase(phase::kRoomCells);
  t.reveal(Zone::Matrix, 0, 2, cell_card(4, 3));
  t.turn_down(Zone::Matrix);
  t.rearrange(1);
  t.take(Zone::Matrix, -1, -1);
  t.outcome(true);
  const std::string text = serialize_transcript(t);
  EXPECT_EQ(parse_transcript(text), t);
  EXPECT_EQ(serialize_transcript(parse_transcript(text)), text);
  EXPECT_THROW(parse_transcript("reveal matrix 0 0 q1 -\n"), std::invalid_argument);
  EXPECT_THROW(parse_transcript("nope - - - - -\n"), std::invalid_argument);
  EXPECT_THROW(parse_transcript("reveal matrix 0\n"), std::invalid_argument);
}
