#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "makaro/grid.hpp"
#include "makaro/protocol.hpp"
#include "makaro/transcript.hpp"

namespace makaro {

struct CardBudget {
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t cell_cards = 0;
  std::size_t helping_cards = 0;
  std::size_t encoding_cards = 0;
  std::size_t total = 0;
};

// n cell cards, k helping cards, four encoding families of 2k-1 cards:
// n + 9k - 4 in all.
inline CardBudget card_budget(const PuzzleStats& s) {
  CardBudget b{s.n, s.k, s.n, s.k, 4 * (2 * s.k - 1), 0};
  b.total = b.cell_cards + b.helping_cards + b.encoding_cards;
  return b;
}

// Reveals at one site are ordered draws of `length` distinct cards from the
// indices lowest .. lowest + universe - 1.
struct SiteShape {
  std::size_t universe = 0;
  std::size_t length = 0;
  int lowest = 1;

  friend bool operator==(const SiteShape&, const SiteShape&) = default;
};

// universe! / (universe - length)!, saturating.
inline std::uint64_t ordered_outcomes(const SiteShape& shape) {
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < shape.length; ++i) {
    const std::uint64_t f = shape.universe - i;
    if (f == 0) return 0;
    if (total > std::numeric_limits<std::uint64_t>::max() / f) return std::numeric_limits<std::uint64_t>::max();
    total *= f;
  }
  return total;
}

using Pattern = std::vector<std::uint16_t>;

/// Counts of what was revealed at one site across many runs, both as whole
/// patterns and per position.
struct RevealSiteHistogram {
  std::string site;
  SiteShape shape;
  std::uint64_t trials = 0;
  std::map<Pattern, std::uint64_t> counts;
  std::vector<std::map<std::uint16_t, std::uint64_t>> positions;

  void add(const Pattern& p) {
    ++trials;
    ++counts[p];
    if (positions.size() < p.size()) positions.resize(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) ++positions[i][p[i]];
  }

  void merge(const RevealSiteHistogram& other) {
    if (other.site != site || !(other.shape == shape)) throw std::invalid_argument("merging different sites");
    trials += other.trials;
    for (const auto& [p, c] : other.counts) counts[p] += c;
    if (positions.size() < other.positions.size()) positions.resize(other.positions.size());
    for (std::size_t i = 0; i < other.positions.size(); ++i)
      for (const auto& [v, c] : other.positions[i]) positions[i][v] += c;
  }
};

namespace detail {

inline SiteShape shape_for(const std::string& phase_tag, std::size_t width) {
  if (phase_tag == phase::kNeighborRowB) return {width - 1, 1, 2};
  if (phase_tag == phase::kArrowWindow) return {width - 1, (width + 1) / 2, 2};
  return {width, width, 1};
}

}  // namespace detail

/// Per-site histograms over a batch of transcripts.
///
/// A site is one group of reveals: the check instance (ordinal, kind and
/// position), the conversion inside it if any, the phase, and the matrix
/// row. Identical public grids give identical site names across runs.
class SiteHistograms {
 public:
  void add(const Transcript& t) {
    std::size_t ordinal = 0;
    std::string check, convert, phase_tag;
    std::size_t width = 0;
    Pattern pattern;
    int row = -1;
    auto flush = [&] {
      if (pattern.empty()) return;
      std::string name = check;
      if (!convert.empty()) name += "/" + convert;
      name += "/" + phase_tag + "/row" + std::to_string(row);
      auto [it, fresh] = sites_.try_emplace(name);
      if (fresh) {
        it->second.site = name;
        it->second.shape = detail::shape_for(phase_tag, width);
      }
      it->second.add(pattern);
      pattern.clear();
      row = -1;
    };
    EventKind previous = EventKind::Outcome;
    for (const Event& e : t.events()) {
      if (e.kind == EventKind::Reveal && e.row == row) {
        pattern.push_back(e.card->index);
        continue;
      }
      flush();
      // A conversion's matrix is built right after its begin event; any
      // other build belongs to the enclosing check.
      if (e.kind == EventKind::Build && previous != EventKind::Begin) convert.clear();
      previous = e.kind;
      switch (e.kind) {
        case EventKind::Begin:
          if (e.tag.starts_with("convert:")) {
            convert = e.tag + "@" + detail::coord_tag({e.row, e.col});
          } else {
            check = std::to_string(ordinal++) + ":" + e.tag;
            if (e.row >= 0) check += "@" + detail::coord_tag({e.row, e.col});
            convert.clear();
          }
          break;
        case EventKind::Phase: phase_tag = e.tag; break;
        case EventKind::Build: width = static_cast<std::size_t>(e.col); break;
        case EventKind::Reveal:
          row = e.row;
          pattern.push_back(e.card->index);
          break;
        default: break;
      }
    }
    flush();
  }

  void merge(const SiteHistograms& other) {
    for (const auto& [name, h] : other.sites_) {
      auto [it, fresh] = sites_.try_emplace(name, h);
      if (!fresh) it->second.merge(h);
    }
  }

  const std::map<std::string, RevealSiteHistogram>& sites() const { return sites_; }
  std::map<std::string, RevealSiteHistogram>& sites() { return sites_; }

 private:
  std::map<std::string, RevealSiteHistogram> sites_;
};

class InsufficientTrials : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TestReport {
  std::string site;
  bool joint = true;  // whole-pattern bins; false means per-position marginals
  double statistic = 0;
  double df = 0;
  double p_value = 1;
  double alpha = 0.01;
  bool passed = true;
};

struct TestConfig {
  double alpha = 0.01;
  double min_expected = 5;          // per bin
  std::uint64_t max_joint_bins = 10'000;
};

inline double chi_square_upper_tail(double statistic, double df) {
  if (df <= 0) return statistic > 0 ? 0.0 : 1.0;
  if (!std::isfinite(statistic)) return 0.0;
  return boost::math::cdf(boost::math::complement(boost::math::chi_squared(df), statistic));
}

namespace detail {

inline bool in_support(const Pattern& p, const SiteShape& s) {
  if (p.size() != s.length) return false;
  std::vector<bool> used(s.universe, false);
  for (auto v : p) {
    const long off = static_cast<long>(v) - s.lowest;
    if (off < 0 || off >= static_cast<long>(s.universe) || used[static_cast<std::size_t>(off)]) return false;
    used[static_cast<std::size_t>(off)] = true;
  }
  return true;
}

struct Chi {
  double statistic = 0;
  double df = 0;
};

// Goodness of fit against `bins` equally likely outcomes, given the counts
// of the outcomes that occurred. Off-support counts make the fit fail.
template <class Counts, class InSupport>
Chi uniform_fit(const Counts& counts, std::uint64_t trials, std::uint64_t bins, InSupport&& in_support) {
  const double expected = static_cast<double>(trials) / static_cast<double>(bins);
  double sum = 0;
  for (const auto& [key, c] : counts) {
    if (!in_support(key)) return {std::numeric_limits<double>::infinity(), static_cast<double>(bins - 1)};
    const double d = static_cast<double>(c) - expected;
    sum += d * d / expected;
  }
  // Bins never observed contribute expected each.
  sum += static_cast<double>(bins - counts.size()) * expected;
  return {sum, static_cast<double>(bins - 1)};
}

// Two-sample chi-square for unequal sample sizes over the union of bins.
template <class Counts>
Chi two_sample(const Counts& a, std::uint64_t na, const Counts& b, std::uint64_t nb) {
  const double ka = std::sqrt(static_cast<double>(nb) / static_cast<double>(na));
  const double kb = std::sqrt(static_cast<double>(na) / static_cast<double>(nb));
  std::map<typename Counts::key_type, std::pair<std::uint64_t, std::uint64_t>> joined;
  for (const auto& [key, c] : a) joined[key].first += c;
  for (const auto& [key, c] : b) joined[key].second += c;
  Chi chi;
  for (const auto& [key, c] : joined) {
    const double d = ka * static_cast<double>(c.first) - kb * static_cast<double>(c.second);
    chi.statistic += d * d / static_cast<double>(c.first + c.second);
  }
  chi.df = static_cast<double>(joined.size()) - 1;
  return chi;
}

inline bool joint_mode(const SiteShape& s, std::uint64_t trials, const TestConfig& cfg) {
  const std::uint64_t bins = ordered_outcomes(s);
  return bins <= cfg.max_joint_bins && static_cast<double>(trials) >= cfg.min_expected * static_cast<double>(bins);
}

}  // namespace detail

/// Chi-square goodness of fit of one site against the uniform distribution
/// over its ordered outcomes. Sites with too many outcomes for the trial
/// count are tested position by position instead, with the smallest
/// per-position p-value scaled by the number of positions.
inline TestReport uniformity_test(const RevealSiteHistogram& h, const SiteShape& expected, const TestConfig& cfg = {}) {
  TestReport rep{h.site, true, 0, 0, 1, cfg.alpha, true};
  if (ordered_outcomes(expected) == 0) throw std::invalid_argument("empty outcome space");
  if (detail::joint_mode(expected, h.trials, cfg)) {
    const auto bins = ordered_outcomes(expected);
    auto fit = detail::uniform_fit(h.counts, h.trials, bins, [&](const Pattern& p) { return detail::in_support(p, expected); });
    rep.statistic = fit.statistic;
    rep.df = fit.df;
    rep.p_value = chi_square_upper_tail(fit.statistic, fit.df);
  } else {
    if (static_cast<double>(h.trials) < cfg.min_expected * static_cast<double>(expected.universe))
      throw InsufficientTrials("site " + h.site + " needs at least " +
                               std::to_string(static_cast<std::uint64_t>(cfg.min_expected * expected.universe)) +
                               " trials");
    rep.joint = false;
    double worst = 1;
    for (std::size_t i = 0; i < expected.length; ++i) {
      static const std::map<std::uint16_t, std::uint64_t> none;
      const auto& counts = i < h.positions.size() ? h.positions[i] : none;
      auto fit = detail::uniform_fit(counts, h.trials, expected.universe, [&](std::uint16_t v) {
        return v >= expected.lowest && v < expected.lowest + static_cast<long>(expected.universe);
      });
      const double p = chi_square_upper_tail(fit.statistic, fit.df);
      if (p <= worst) {
        worst = p;
        rep.statistic = fit.statistic;
        rep.df = fit.df;
      }
    }
    rep.p_value = std::min(1.0, worst * static_cast<double>(expected.length));
  }
  rep.passed = rep.p_value >= cfg.alpha;
  return rep;
}

/// Two-sample chi-square between two histograms of the same site.
inline TestReport compare_histograms(const RevealSiteHistogram& a, const RevealSiteHistogram& b,
                                     const TestConfig& cfg = {}) {
  if (a.site != b.site || !(a.shape == b.shape)) throw std::invalid_argument("site mismatch: " + a.site + " vs " + b.site);
  if (a.trials == 0 || b.trials == 0) throw InsufficientTrials("site " + a.site + " has an empty sample");
  TestReport rep{a.site, true, 0, 0, 1, cfg.alpha, true};
  if (detail::joint_mode(a.shape, std::min(a.trials, b.trials), cfg)) {
    auto chi = detail::two_sample(a.counts, a.trials, b.counts, b.trials);
    rep.statistic = chi.statistic;
    rep.df = chi.df;
    rep.p_value = chi_square_upper_tail(chi.statistic, chi.df);
  } else {
    rep.joint = false;
    const std::size_t len = std::max(a.positions.size(), b.positions.size());
    double worst = 1;
    for (std::size_t i = 0; i < len; ++i) {
      static const std::map<std::uint16_t, std::uint64_t> none;
      const auto& pa = i < a.positions.size() ? a.positions[i] : none;
      const auto& pb = i < b.positions.size() ? b.positions[i] : none;
      auto chi = detail::two_sample(pa, a.trials, pb, b.trials);
      const double p = chi_square_upper_tail(chi.statistic, chi.df);
      if (p <= worst) {
        worst = p;
        rep.statistic = chi.statistic;
        rep.df = chi.df;
      }
    }
    rep.p_value = std::min(1.0, worst * static_cast<double>(std::max<std::size_t>(len, 1)));
  }
  rep.passed = rep.p_value >= cfg.alpha;
  return rep;
}

/// Result of comparing every site of two batches. The family is tested at
/// `family_alpha`: each site must clear family_alpha / (number of sites).
struct FamilyReport {
  std::vector<TestReport> sites;
  double family_alpha = 0.01;
  double site_alpha = 0.01;
  std::size_t below_unadjusted = 0;  // sites with p < family_alpha, for information
  bool passed = true;
};

inline FamilyReport compare_site_sets(const SiteHistograms& a, const SiteHistograms& b, double family_alpha = 0.01,
                                      const TestConfig& base = {}) {
  FamilyReport rep;
  rep.family_alpha = family_alpha;
  for (const auto& [name, h] : a.sites())
    if (!b.sites().contains(name)) throw std::invalid_argument("site mismatch: " + name + " missing from second batch");
  for (const auto& [name, h] : b.sites())
    if (!a.sites().contains(name)) throw std::invalid_argument("site mismatch: " + name + " missing from first batch");
  const std::size_t n = std::max<std::size_t>(a.sites().size(), 1);
  rep.site_alpha = family_alpha / static_cast<double>(n);
  TestConfig cfg = base;
  cfg.alpha = rep.site_alpha;
  for (const auto& [name, h] : a.sites()) {
    TestReport r = compare_histograms(h, b.sites().at(name), cfg);
    if (r.p_value < family_alpha) ++rep.below_unadjusted;
    rep.passed = rep.passed && r.passed;
    rep.sites.push_back(std::move(r));
  }
  return rep;
}

}  // namespace makaro
