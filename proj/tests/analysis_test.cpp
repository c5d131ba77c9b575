#include <random>

#include <gtest/gtest.h>

#include "support.hpp"

using namespace makaro;
using testing_support::sample;
using testing_support::sample_solution;

TEST(Budget, Formula) {
  EXPECT_EQ(card_budget(stats(sample())).total, 61u);
  EXPECT_EQ(card_budget(PuzzleStats{1, 1}).total, 6u);
  auto b = card_budget(PuzzleStats{9, 3});
  EXPECT_EQ(b.total, 32u);
  EXPECT_EQ(b.encoding_cards, 20u);
  EXPECT_EQ(b.helping_cards, 3u);
}

TEST(Outcomes, Counts) {
  EXPECT_EQ(ordered_outcomes({5, 5, 1}), 120u);
  EXPECT_EQ(ordered_outcomes({8, 5, 2}), 6720u);
  EXPECT_EQ(ordered_outcomes({3, 4, 1}), 0u);
  EXPECT_EQ(ordered_outcomes({40, 30, 1}), std::numeric_limits<std::uint64_t>::max());
}

TEST(ChiSquare, UpperTail) {
  EXPECT_NEAR(chi_square_upper_tail(3.841458820694124, 1), 0.05, 1e-9);
  EXPECT_NEAR(chi_square_upper_tail(23.209251158954356, 10), 0.01, 1e-9);
  EXPECT_EQ(chi_square_upper_tail(std::numeric_limits<double>::infinity(), 3), 0.0);
}

TEST(Uniformity, PassesUniformAndFailsBiased) {
  std::mt19937_64 eng(1);
  RevealSiteHistogram fair, biased;
  fair.site = biased.site = "s";
  for (int i = 0; i < 6000; ++i) {
    Pattern p = {1, 2, 3};
    std::shuffle(p.begin(), p.end(), eng);
    fair.add(p);
    if (std::uniform_int_distribution<int>(0, 9)(eng) == 0) p = {1, 2, 3};
    biased.add(p);
  }
  EXPECT_TRUE(uniformity_test(fair, {3, 3, 1}).passed);
  EXPECT_FALSE(uniformity_test(biased, {3, 3, 1}).passed);
}

TEST(Uniformity, SixBins) {
  RevealSiteHistogram even, lumped;
  const Pattern perms[] = {{1, 2, 3}, {1, 3, 2}, {2, 1, 3}, {2, 3, 1}, {3, 1, 2}, {3, 2, 1}};
  for (int i = 0; i < 10'000; ++i) lumped.add(perms[0]);
  for (int i = 0; i < 6000; ++i) even.add(perms[i % 6]);
  EXPECT_TRUE(uniformity_test(even, {3, 3, 1}).passed);
  EXPECT_FALSE(uniformity_test(lumped, {3, 3, 1}).passed);
}

TEST(Uniformity, RoomCheckOfThreeCells) {
  Grid g = parse_puzzle("makaro 1 3\na a a\n");
  auto sites = collect_sites(protocol_source(g, Assignment(g, {3, 1, 2}), 6), 30'000, 1);
  const auto& h = sites.sites().at("1:room@0,0/room.cells/row0");
  EXPECT_EQ(h.trials, 30'000u);
  EXPECT_TRUE(uniformity_test(h, h.shape).passed);
}

TEST(Uniformity, OffSupportFails) {
  RevealSiteHistogram h;
  for (int i = 0; i < 100; ++i) h.add({static_cast<std::uint16_t>(i % 2 + 1)});
  h.add({7});
  auto rep = uniformity_test(h, {2, 1, 1});
  EXPECT_FALSE(rep.passed);
  EXPECT_EQ(rep.p_value, 0.0);
}

TEST(Uniformity, MarginalFallback) {
  std::mt19937_64 eng(2);
  RevealSiteHistogram h;
  for (int i = 0; i < 2000; ++i) {
    Pattern p = {1, 2, 3, 4, 5, 6, 7, 8, 9};
    std::shuffle(p.begin(), p.end(), eng);
    h.add(p);
  }
  auto rep = uniformity_test(h, {9, 9, 1});
  EXPECT_FALSE(rep.joint);
  EXPECT_TRUE(rep.passed);
  RevealSiteHistogram few;
  few.add({1});
  EXPECT_THROW(uniformity_test(few, {9, 9, 1}), InsufficientTrials);
}

TEST(Compare, SameAndDifferentSources) {
  std::mt19937_64 eng(3);
  RevealSiteHistogram a, b, c;
  a.site = b.site = c.site = "s";
  a.shape = b.shape = c.shape = {4, 1, 1};
  for (int i = 0; i < 4000; ++i) {
    a.add({static_cast<std::uint16_t>(std::uniform_int_distribution<int>(1, 4)(eng))});
    b.add({static_cast<std::uint16_t>(std::uniform_int_distribution<int>(1, 4)(eng))});
    c.add({static_cast<std::uint16_t>(std::uniform_int_distribution<int>(1, 3)(eng))});
  }
  EXPECT_TRUE(compare_histograms(a, b).passed);
  EXPECT_FALSE(compare_histograms(a, c).passed);
  EXPECT_EQ(compare_histograms(a, a).p_value, 1.0);
  RevealSiteHistogram other = b;
  other.site = "t";
  EXPECT_THROW(compare_histograms(a, other), std::invalid_argument);
}

TEST(Sites, NamesAreStableAcrossRuns) {
  Grid g = sample();
  Assignment sol = sample_solution(g);
  SiteHistograms a, b;
  auto r1 = RandomSource::from_seed(1);
  auto r2 = RandomSource::from_seed(2);
  a.add(run_full_protocol(g, ProverState{sol}, r1).transcript);
  b.add(simulate_transcript(g, r2));
  ASSERT_EQ(a.sites().size(), b.sites().size());
  for (const auto& [name, h] : a.sites()) {
    ASSERT_TRUE(b.sites().contains(name)) << name;
    EXPECT_EQ(h.shape, b.sites().at(name).shape) << name;
    EXPECT_EQ(h.counts.begin()->first.size(), h.shape.length) << name;
  }
  EXPECT_TRUE(a.sites().contains("1:room@0,0/room.cells/row0"));
  EXPECT_TRUE(a.sites().contains("1:room@0,0/room.help/row1"));
}

TEST(Sites, EveryRealSiteIsUniform) {
  Grid g = sample();
  auto sites = collect_sites(protocol_source(g, sample_solution(g), 5), 3000, 1);
  const double alpha = 0.01 / static_cast<double>(sites.sites().size());
  TestConfig cfg;
  cfg.alpha = alpha;
  for (const auto& [name, h] : sites.sites()) {
    auto rep = uniformity_test(h, h.shape, cfg);
    EXPECT_TRUE(rep.passed) << name << " p=" << rep.p_value;
  }
}

TEST(ZeroKnowledge, SimulatorMatchesRealRuns) {
  Grid g = sample();
  auto rep = zero_knowledge_test(protocol_source(g, sample_solution(g), 9), simulator_source(g, 9), 2000, 1);
  EXPECT_TRUE(rep.passed);
  EXPECT_FALSE(rep.sites.empty());
}

TEST(ZeroKnowledge, RiggedSourceIsCaught) {
  // A source that leaks the value: the room reveal is left unshuffled.
  Grid g = parse_puzzle("makaro 1 2\na a\n");
  Assignment sol(g, {2, 1});
  TranscriptSource leaky = [&](std::uint64_t t) {
    auto r = RandomSource::for_trial(4, t);
    auto tr = run_full_protocol(g, ProverState{sol}, r).transcript;
    Transcript out;
    for (Event e : tr.events()) {
      if (e.kind == EventKind::Reveal && e.card->set == CardSet::Cell) e.card = cell_card(0, e.col == 0 ? 2 : 1);
      out.push(std::move(e));
    }
    return out;
  };
  auto rep = zero_knowledge_test(leaky, simulator_source(g, 4), 2000, 1);
  EXPECT_FALSE(rep.passed);
}

TEST(ZeroKnowledge, TwoSolutionsLookAlike) {
  Grid g = parse_puzzle(testing_support::read_data("pair.mkr"));
  auto sols = solve_brute_force(g);
  ASSERT_EQ(sols.size(), 2u);
  auto rep = zero_knowledge_test(protocol_source(g, sols[0], 1), protocol_source(g, sols[1], 2), 3000, 1);
  EXPECT_TRUE(rep.passed);
}

TEST(Trials, WorkerCountDoesNotChangeResult) {
  Grid g = parse_puzzle("makaro 2 3\nr1 Bv r2\nr1 r2 r2\n");
  auto sol = solve_brute_force(g).front();
  auto one = collect_sites(protocol_source(g, sol, 3), 300, 1);
  auto three = collect_sites(protocol_source(g, sol, 3), 300, 3);
  ASSERT_EQ(one.sites().size(), three.sites().size());
  for (const auto& [name, h] : one.sites()) EXPECT_EQ(h.counts, three.sites().at(name).counts) << name;
}
