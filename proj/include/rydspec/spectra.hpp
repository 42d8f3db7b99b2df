#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "rydspec/symmetric_matrix.hpp"

namespace rydspec {

class EigenError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Full spectrum in ascending order (LAPACK dsyevd, eigenvalues only).
std::vector<double> eigenvalues(const SymmetricMatrix& m);

struct EigenPairs {
    std::vector<double> values;
    std::vector<double> vectors;  // column-major, one eigenvector per column
};
EigenPairs eigenpairs(const SymmetricMatrix& m);

class BinningMismatch : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

class InsufficientTailData : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct DosBinning {
    double lin_lo = -25.0;
    double lin_hi = 25.0;
    std::size_t lin_bins = 1000;
    double log_lo = 1e-2;  // |lambda| range of the per-sign log histograms
    double log_hi = 1e7;
    std::size_t bins_per_decade = 40;

    std::size_t log_bins() const;
    double log_edge(std::size_t k) const;  // k = 0..log_bins()
    bool operator==(const DosBinning&) const = default;
};

// Moments over the eigenvalues inside the linear window. The heavy tails
// of the r_b = 0 ensembles make moments over the full line meaningless.
struct RunningMoments {
    std::uint64_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;
    double m3 = 0.0;

    void add(double x);
    static RunningMoments combine(const RunningMoments& a, const RunningMoments& b);
    double variance() const { return n > 0 ? m2 / static_cast<double>(n) : 0.0; }
    double skewness() const;
};

class SpectrumAccumulator {
  public:
    explicit SpectrumAccumulator(DosBinning binning = {});

    // Adds the spectrum of one realization.
    void accumulate(std::span<const double> eigenvalues);
    // Throws BinningMismatch if the binnings differ.
    void merge(const SpectrumAccumulator& other);
    static SpectrumAccumulator merged(SpectrumAccumulator a, const SpectrumAccumulator& b);

    const DosBinning& binning() const { return binning_; }
    std::uint64_t realizations() const { return realizations_; }
    std::uint64_t eigenvalue_count() const { return count_; }
    const std::vector<std::uint64_t>& linear_counts() const { return lin_; }
    std::uint64_t below_linear() const { return below_; }
    std::uint64_t above_linear() const { return above_; }
    // sign < 0 selects the negative-lambda histogram.
    const std::vector<std::uint64_t>& log_counts(int sign) const { return sign < 0 ? neg_ : pos_; }
    // |lambda| below log_lo, either sign.
    std::uint64_t log_underflow() const { return log_under_; }
    // |lambda| at or above log_hi with the given sign.
    std::uint64_t log_overflow(int sign) const { return sign < 0 ? neg_over_ : pos_over_; }
    const RunningMoments& core_moments() const { return moments_; }

    // Counts-only equality (moments excluded).
    bool same_counts(const SpectrumAccumulator& other) const;

    // For persistence.
    struct State {
        DosBinning binning;
        std::uint64_t realizations = 0, count = 0, below = 0, above = 0, log_under = 0, neg_over = 0, pos_over = 0;
        std::vector<std::uint64_t> lin, neg, pos;
        RunningMoments moments;
    };
    State state() const;
    static SpectrumAccumulator from_state(const State& s);

  private:
    DosBinning binning_;
    std::uint64_t realizations_ = 0;
    std::uint64_t count_ = 0;
    std::vector<std::uint64_t> lin_;
    std::uint64_t below_ = 0;
    std::uint64_t above_ = 0;
    std::vector<std::uint64_t> neg_;
    std::vector<std::uint64_t> pos_;
    std::uint64_t log_under_ = 0;
    std::uint64_t neg_over_ = 0;
    std::uint64_t pos_over_ = 0;
    RunningMoments moments_;
};

struct BinnedDensity {
    std::vector<double> left;
    std::vector<double> right;
    std::vector<double> density;
    std::vector<std::uint64_t> count;
    double tail_mass = 0.0;  // probability outside the binned range

    double center(std::size_t i) const { return 0.5 * (left[i] + right[i]); }
};

// Linear-bin density; sum(density * width) + tail_mass = 1.
BinnedDensity dos_density(const SpectrumAccumulator& acc);
// Log-bin density of eigenvalues with the given sign, as a function of
// |lambda|, normalised by the total eigenvalue count.
BinnedDensity dos_log_density(const SpectrumAccumulator& acc, int sign);

// Statistical error of each linear-bin density (binomial).
std::vector<double> dos_standard_error(const SpectrumAccumulator& acc);

struct TailFit {
    double slope = 0.0;
    double stderr_ = 0.0;
    double intercept = 0.0;
    std::size_t bins_used = 0;
};
struct TailExponents {
    TailFit negative;
    TailFit positive;
};

// Least-squares slope of log10 density against log10 |lambda| over bins
// inside [lo, hi], separately per sign. Needs >= 10 populated bins per sign.
TailExponents tail_exponent(const SpectrumAccumulator& acc, double lo, double hi);

// Quantile of the pooled spectrum, interpolated within bins. Uses the
// linear histogram inside its range and the log histograms outside.
double dos_quantile(const SpectrumAccumulator& acc, double p);
// Width of the interval holding the central `mass` of the spectrum.
double support_width(const SpectrumAccumulator& acc, double mass = 0.99);
// Centre of the most populated linear bin.
double dos_mode(const SpectrumAccumulator& acc);

}  // namespace rydspec
