#pragma once

#include <cstdint>
#include <functional>

#include "makaro/analysis.hpp"
#include "makaro/deck.hpp"
#include "makaro/grid.hpp"
#include "makaro/protocol.hpp"
#include "makaro/simulator.hpp"
#include "makaro/trials.hpp"

namespace makaro {

// Produces the transcript of trial t.
using TranscriptSource = std::function<Transcript(std::uint64_t)>;

// Real runs use RandomSource::for_trial(seed, t); simulated runs use the
// same schedule from simulator_seed(seed), so the two batches never share
// random streams.
inline std::uint64_t simulator_seed(std::uint64_t seed) { return splitmix64(seed ^ 0x5a4b5f53494d554cULL); }

inline TranscriptSource protocol_source(const Grid& grid, const Assignment& solution, std::uint64_t seed) {
  return [&grid, prover = ProverState{solution}, seed](std::uint64_t t) {
    auto r = RandomSource::for_trial(seed, t);
    return run_full_protocol(grid, prover, r).transcript;
  };
}

inline TranscriptSource simulator_source(const Grid& grid, std::uint64_t seed) {
  return [&grid, base = simulator_seed(seed)](std::uint64_t t) {
    auto r = RandomSource::for_trial(base, t);
    return simulate_transcript(grid, r);
  };
}

inline SiteHistograms collect_sites(const TranscriptSource& source, std::uint64_t trials, unsigned workers) {
  return run_trials<SiteHistograms>(trials, workers,
                                    [&](std::uint64_t t, SiteHistograms& acc) { acc.add(source(t)); });
}

/// Real-versus-simulated comparison at every reveal site.
inline FamilyReport zero_knowledge_test(const TranscriptSource& real, const TranscriptSource& simulated,
                                        std::uint64_t trials, unsigned workers, double family_alpha = 0.01) {
  const auto a = collect_sites(real, trials, workers);
  const auto b = collect_sites(simulated, trials, workers);
  return compare_site_sets(a, b, family_alpha);
}

}  // namespace makaro
