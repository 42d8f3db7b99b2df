#include "rydspec/campaign.hpp"

#include <algorithm>
#include <cmath>
#include <exception>

extern "C" void openblas_set_num_threads(int);

namespace rydspec {

void EnsembleRun::append(EnsembleRun&& o) {
    indices.insert(indices.end(), o.indices.begin(), o.indices.end());
    seeds.insert(seeds.end(), o.seeds.begin(), o.seeds.end());
    for (auto& s : o.spectra) spectra.push_back(std::move(s));
    failures.insert(failures.end(), o.failures.begin(), o.failures.end());
}

namespace {

struct Slot {
    std::vector<double> spectrum;
    std::string error;
    bool ok = false;
};

void run_one(const EnsembleSpec& spec, std::uint64_t stream, Slot& slot) {
    try {
        slot.spectrum = eigenvalues(sample_realization(spec, stream));
        slot.ok = true;
    } catch (const std::exception& e) {
        slot.error = e.what();
    }
}

}  // namespace

EnsembleRun run_ensemble(const EnsembleSpec& spec, std::size_t count, std::uint64_t seed, std::size_t first_index,
                         Execution exec) {
    spec.validate();
    std::vector<Slot> slots(count);
    std::vector<std::uint64_t> streams(count);
    for (std::size_t k = 0; k < count; ++k) streams[k] = stream_seed(seed, first_index + k);

    if (exec == Execution::parallel && max_threads() > 1) {
        // One realization per thread; keep LAPACK itself single-threaded.
        openblas_set_num_threads(1);
        const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(dynamic, 1)
        for (std::ptrdiff_t k = 0; k < n; ++k) run_one(spec, streams[k], slots[k]);
    } else {
        for (std::size_t k = 0; k < count; ++k) run_one(spec, streams[k], slots[k]);
    }

    EnsembleRun run;
    run.spec = spec;
    run.seed = seed;
    for (std::size_t k = 0; k < count; ++k) {
        if (slots[k].ok) {
            run.indices.push_back(first_index + k);
            run.seeds.push_back(streams[k]);
            run.spectra.push_back(std::move(slots[k].spectrum));
        } else {
            run.failures.push_back({first_index + k, streams[k], slots[k].error});
        }
    }
    return run;
}

SpectrumAccumulator accumulate_dos(std::span<const std::vector<double>> spectra, const DosBinning& binning) {
    SpectrumAccumulator acc(binning);
    for (const auto& s : spectra) acc.accumulate(s);
    return acc;
}

SpacingAnalysis analyze_spacings(std::span<const std::vector<double>> spectra, const SpacingOptions& o) {
    const Unfolder map(spectra, o.knots_per_decade);
    SpacingAnalysis a{SpacingAccumulator(log_windows(o.window_lo, o.window_hi, o.windows_per_sign), o.binning),
                      SpacingAccumulator(literal_windows(), o.binning),
                      {},
                      {}};
    for (const auto& s : spectra) {
        if (!std::is_sorted(s.begin(), s.end())) {
            std::vector<double> sorted(s);
            std::sort(sorted.begin(), sorted.end());
            a.log_windows.accumulate(sorted, map);
            a.literal_windows.accumulate(sorted, map);
        } else {
            a.log_windows.accumulate(s, map);
            a.literal_windows.accumulate(s, map);
        }
    }
    a.log_stats = window_stats(a.log_windows, o.transition.min_spacings);
    a.literal_stats = window_stats(a.literal_windows, 1);
    return a;
}

namespace {

struct Chunk {
    std::uint64_t n = 0;
    double mean = 0.0, m2 = 0.0;
};

Chunk draw_chunk(const GeometryParams& g, std::uint64_t n, std::uint64_t stream) {
    Rng rng(stream);
    Chunk c;
    for (std::uint64_t i = 0; i < n; ++i) {
        const double x = sample_decorrelated_coupling(g, rng);
        ++c.n;
        const double d = x - c.mean;
        c.mean += d / static_cast<double>(c.n);
        c.m2 += d * (x - c.mean);
    }
    return c;
}

}  // namespace

SampleMoments decorrelated_coupling_moments(const GeometryParams& g, std::uint64_t count, std::uint64_t seed,
                                            Execution exec) {
    constexpr std::uint64_t kChunk = 1u << 16;
    const std::uint64_t chunks = (count + kChunk - 1) / kChunk;
    std::vector<Chunk> parts(chunks);
    auto work = [&](std::uint64_t k) {
        const std::uint64_t n = std::min(kChunk, count - k * kChunk);
        parts[k] = draw_chunk(g, n, stream_seed(seed, k));
    };
    if (exec == Execution::parallel) {
        const auto n = static_cast<std::ptrdiff_t>(chunks);
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t k = 0; k < n; ++k) work(static_cast<std::uint64_t>(k));
    } else {
        for (std::uint64_t k = 0; k < chunks; ++k) work(k);
    }
    Chunk total;
    for (const auto& c : parts) {
        if (c.n == 0) continue;
        const double n = static_cast<double>(total.n + c.n);
        const double d = c.mean - total.mean;
        total.m2 += c.m2 + d * d * static_cast<double>(total.n) * static_cast<double>(c.n) / n;
        total.mean += d * static_cast<double>(c.n) / n;
        total.n += c.n;
    }
    SampleMoments m;
    m.n = total.n;
    m.mean = total.mean;
    m.variance = total.n > 1 ? total.m2 / static_cast<double>(total.n - 1) : 0.0;
    m.mean_stderr = total.n > 0 ? std::sqrt(m.variance / static_cast<double>(total.n)) : 0.0;
    return m;
}

}  // namespace rydspec
