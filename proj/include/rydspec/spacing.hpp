#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rydspec {

class EmptyWindow : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class InsufficientWindows : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Half-open interval [lo, hi).
struct Interval {
    double lo;
    double hi;
    bool contains(double x) const { return x >= lo && x < hi; }
};

// An energy window, possibly a union of disjoint intervals. Spacings are
// only taken between neighbours that lie in the same interval.
struct Window {
    std::string label;
    std::vector<Interval> parts;
    double center = 0.0;  // signed representative energy
    bool contains(double x) const;
};

// Log-spaced windows over |lambda| in [lo, hi], `per_sign` on each side,
// ordered from the most negative to the most positive.
std::vector<Window> log_windows(double lo = 0.05, double hi = 1e3, std::size_t per_sign = 14);
// The centre window |lambda| <= 0.2 and the wing window |lambda| >= 100.
std::vector<Window> literal_windows(double center_half_width = 0.2, double wing_edge = 100.0);

// Ensemble unfolding map: mean number of levels per realization below
// lambda, interpolated by a monotone cubic through log-spaced knots.
class Unfolder {
  public:
    Unfolder(std::span<const std::vector<double>> realizations, std::size_t knots_per_decade = 16,
             double smallest_knot = 1e-3);
    double operator()(double lambda) const;
    const std::vector<double>& knots() const { return x_; }

  private:
    std::vector<double> x_, y_, slope_;
};

// Raw (not yet rescaled) unfolded spacings of one sorted spectrum, appended
// per window.
void collect_spacings(std::span<const double> sorted, const Unfolder& unfold, const std::vector<Window>& windows,
                      std::vector<std::vector<double>>& out);

// Per-window unfolded spacings, each window rescaled to unit mean.
// Throws EmptyWindow if a window has no spacing.
std::vector<std::vector<double>> unfold(std::span<const std::vector<double>> realizations,
                                        const std::vector<Window>& windows);

struct SpacingBinning {
    double s_max = 5.0;
    std::size_t bins = 100;
    bool operator==(const SpacingBinning&) const = default;
};

struct SpacingHistogram {
    std::vector<double> density;  // bins on [0, s_max]; normalised over all spacings
    double s_max = 5.0;
    std::size_t count = 0;
    double raw_mean = 0.0;  // mean before rescaling

    double width() const { return s_max / static_cast<double>(density.size()); }
};

// Spacings per window. Raw unfolded spacings are kept so that the
// unit-mean rescaling can be done exactly after all realizations are in.
class SpacingAccumulator {
  public:
    SpacingAccumulator(std::vector<Window> windows, SpacingBinning binning = {});

    void accumulate(std::span<const double> sorted, const Unfolder& unfold);
    // Windows and binning must match.
    void merge(const SpacingAccumulator& other);

    const std::vector<Window>& windows() const { return windows_; }
    std::size_t count(std::size_t w) const { return raw_[w].size(); }
    // Histogram of the rescaled spacings; throws EmptyWindow.
    SpacingHistogram histogram(std::size_t w) const;
    // Rescaled spacings of one window.
    std::vector<double> spacings(std::size_t w) const;

  private:
    std::vector<Window> windows_;
    SpacingBinning binning_;
    std::vector<std::vector<double>> raw_;
};

SpacingHistogram make_histogram(std::span<const double> spacings, SpacingBinning binning = {});

// (1/xi) * sqrt( integral (f - g)^2 ds ) over the histogram range, with the
// reference averaged over each bin.
double rms_deviation(const SpacingHistogram& f, const std::function<double(double)>& reference);
double delta_poisson(const SpacingHistogram& f);
double delta_wigner(const SpacingHistogram& f);

struct WindowStats {
    double center = 0.0;
    std::size_t count = 0;
    double delta_p = 0.0;
    double delta_wd = 0.0;
};

enum class TransitionStatus { found, none_found, insufficient_windows };

struct SideTransition {
    TransitionStatus status = TransitionStatus::insufficient_windows;
    std::optional<double> energy;
    // For none_found: "wigner-dyson" when Delta_WD < Delta_P everywhere, else "poisson".
    std::string dominant;
    std::vector<double> fit_p;   // cubic coefficients in log|lambda|, lowest order first
    std::vector<double> fit_wd;
    double x_lo = 0.0, x_hi = 0.0;  // fitted range in log10|lambda|
    std::size_t windows_used = 0;
};

struct TransitionResult {
    SideTransition minus;
    SideTransition plus;
    std::vector<WindowStats> windows;
    std::size_t degree = 3;
};

struct TransitionSettings {
    std::size_t min_windows = 6;
    std::size_t min_spacings = 100;
    std::size_t degree = 3;
};

// Intersections of polynomial fits to Delta_P and Delta_WD against
// log|lambda|, per sign. The root closest to the centre wins. Throws
// InsufficientWindows only if neither sign has enough populated windows.
TransitionResult transition_energies(const std::vector<WindowStats>& stats, const TransitionSettings& settings = {});

// Delta statistics for every window of an accumulator (windows with fewer
// than min_count spacings get count set and deltas NaN).
std::vector<WindowStats> window_stats(const SpacingAccumulator& acc, std::size_t min_count = 1);

}  // namespace rydspec
