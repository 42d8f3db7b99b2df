#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rydspec/analytic.hpp"
#include "rydspec/common.hpp"
#include "rydspec/ensembles.hpp"
#include "rydspec/spacing.hpp"
#include "rydspec/spectra.hpp"

namespace rydspec {

struct RealizationFailure {
    std::size_t index = 0;
    std::uint64_t seed = 0;
    std::string error;
};

// Spectra of a block of realizations. Realization i uses the stream
// stream_seed(seed, i), so any split into shards reproduces the same draws.
struct EnsembleRun {
    EnsembleSpec spec;
    std::uint64_t seed = 0;
    std::vector<std::size_t> indices;
    std::vector<std::uint64_t> seeds;
    std::vector<std::vector<double>> spectra;  // ascending, parallel to indices
    std::vector<RealizationFailure> failures;

    std::size_t size() const { return spectra.size(); }
    void append(EnsembleRun&& other);
};

// Realizations first_index .. first_index + count - 1. Failed realizations
// are dropped and listed, never retried with another seed.
EnsembleRun run_ensemble(const EnsembleSpec& spec, std::size_t count, std::uint64_t seed, std::size_t first_index = 0,
                         Execution exec = Execution::parallel);

SpectrumAccumulator accumulate_dos(std::span<const std::vector<double>> spectra, const DosBinning& binning = {});

struct SpacingOptions {
    double window_lo = 0.05;
    double window_hi = 1e3;
    std::size_t windows_per_sign = 14;
    std::size_t knots_per_decade = 16;
    SpacingBinning binning;
    TransitionSettings transition;
};

struct SpacingAnalysis {
    SpacingAccumulator log_windows;
    SpacingAccumulator literal_windows;
    std::vector<WindowStats> log_stats;
    std::vector<WindowStats> literal_stats;
};

SpacingAnalysis analyze_spacings(std::span<const std::vector<double>> spectra, const SpacingOptions& options = {});

struct SampleMoments {
    std::uint64_t n = 0;
    double mean = 0.0;
    double variance = 0.0;
    double mean_stderr = 0.0;
};

// Moments of `count` independent decorrelated couplings, drawn in fixed
// chunks with their own streams so the result does not depend on threads.
SampleMoments decorrelated_coupling_moments(const GeometryParams& g, std::uint64_t count, std::uint64_t seed,
                                            Execution exec = Execution::parallel);

}  // namespace rydspec
