#include "rydspec/spacing.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "rydspec/analytic.hpp"

namespace rydspec {

bool Window::contains(double x) const {
    return std::any_of(parts.begin(), parts.end(), [&](const Interval& p) { return p.contains(x); });
}

std::vector<Window> log_windows(double lo, double hi, std::size_t per_sign) {
    if (!(lo > 0.0) || !(hi > lo) || per_sign == 0) throw std::invalid_argument("log_windows: bad range");
    std::vector<double> edges(per_sign + 1);
    for (std::size_t k = 0; k <= per_sign; ++k)
        edges[k] = lo * std::pow(hi / lo, static_cast<double>(k) / static_cast<double>(per_sign));
    std::vector<Window> out;
    for (std::size_t k = per_sign; k-- > 0;) {
        std::ostringstream name;
        name << "neg" << k;
        out.push_back({name.str(), {{-edges[k + 1], -edges[k]}}, -std::sqrt(edges[k] * edges[k + 1])});
    }
    for (std::size_t k = 0; k < per_sign; ++k) {
        std::ostringstream name;
        name << "pos" << k;
        out.push_back({name.str(), {{edges[k], edges[k + 1]}}, std::sqrt(edges[k] * edges[k + 1])});
    }
    return out;
}

std::vector<Window> literal_windows(double center_half_width, double wing_edge) {
    const double inf = std::numeric_limits<double>::infinity();
    return {
        {"center", {{-center_half_width, std::nextafter(center_half_width, inf)}}, 0.0},
        {"wings", {{-inf, std::nextafter(-wing_edge, inf)}, {wing_edge, inf}}, wing_edge},
    };
}

Unfolder::Unfolder(std::span<const std::vector<double>> realizations, std::size_t knots_per_decade,
                   double smallest_knot) {
    std::vector<double> pooled;
    for (const auto& r : realizations) pooled.insert(pooled.end(), r.begin(), r.end());
    if (pooled.empty()) throw std::invalid_argument("Unfolder: no eigenvalues");
    std::sort(pooled.begin(), pooled.end());
    const double reals = static_cast<double>(realizations.size());
    const double max_abs = std::max(std::fabs(pooled.front()), std::fabs(pooled.back()));

    const double kpd = static_cast<double>(knots_per_decade);
    const int k_lo = static_cast<int>(std::floor(std::log10(smallest_knot) * kpd));
    const int k_hi = static_cast<int>(std::ceil(std::log10(std::max(max_abs, smallest_knot)) * kpd)) + 1;
    std::vector<double> positive;
    for (int k = k_lo; k <= k_hi; ++k) positive.push_back(std::pow(10.0, k / kpd));
    for (auto it = positive.rbegin(); it != positive.rend(); ++it) x_.push_back(-*it);
    x_.push_back(0.0);
    x_.insert(x_.end(), positive.begin(), positive.end());

    for (double x : x_) {
        const auto n = std::upper_bound(pooled.begin(), pooled.end(), x) - pooled.begin();
        y_.push_back(static_cast<double>(n) / reals);
    }

    // Fritsch-Carlson monotone slopes.
    const std::size_t n = x_.size();
    std::vector<double> secant(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) secant[i] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
    slope_.assign(n, 0.0);
    slope_[0] = secant[0];
    slope_[n - 1] = secant[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (secant[i - 1] * secant[i] <= 0.0) continue;
        const double h0 = x_[i] - x_[i - 1], h1 = x_[i + 1] - x_[i];
        const double w1 = 2.0 * h1 + h0, w2 = h1 + 2.0 * h0;
        slope_[i] = (w1 + w2) / (w1 / secant[i - 1] + w2 / secant[i]);
    }
}

double Unfolder::operator()(double lambda) const {
    if (lambda <= x_.front()) return y_.front();
    if (lambda >= x_.back()) return y_.back();
    const std::size_t i = static_cast<std::size_t>(std::upper_bound(x_.begin(), x_.end(), lambda) - x_.begin()) - 1;
    const double h = x_[i + 1] - x_[i];
    const double t = (lambda - x_[i]) / h;
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * y_[i] + (t3 - 2 * t2 + t) * h * slope_[i] + (-2 * t3 + 3 * t2) * y_[i + 1] +
           (t3 - t2) * h * slope_[i + 1];
}

void collect_spacings(std::span<const double> sorted, const Unfolder& unfold, const std::vector<Window>& windows,
                      std::vector<std::vector<double>>& out) {
    out.resize(windows.size());
    for (std::size_t w = 0; w < windows.size(); ++w) {
        for (const auto& part : windows[w].parts) {
            auto first = std::lower_bound(sorted.begin(), sorted.end(), part.lo);
            auto last = std::lower_bound(first, sorted.end(), part.hi);
            if (last - first < 2) continue;
            double prev = unfold(*first);
            for (auto it = first + 1; it != last; ++it) {
                const double cur = unfold(*it);
                out[w].push_back(cur - prev);
                prev = cur;
            }
        }
    }
}

namespace {

std::vector<double> rescaled(const std::vector<double>& raw, const std::string& label) {
    if (raw.empty()) throw EmptyWindow("window '" + label + "' has no spacings");
    const double mean = std::accumulate(raw.begin(), raw.end(), 0.0) / static_cast<double>(raw.size());
    if (!(mean > 0.0)) throw EmptyWindow("window '" + label + "' has degenerate spacings");
    std::vector<double> out(raw.size());
    std::transform(raw.begin(), raw.end(), out.begin(), [&](double s) { return s / mean; });
    return out;
}

}  // namespace

std::vector<std::vector<double>> unfold(std::span<const std::vector<double>> realizations,
                                        const std::vector<Window>& windows) {
    const Unfolder map(realizations);
    std::vector<std::vector<double>> raw(windows.size());
    for (const auto& r : realizations) {
        std::vector<double> sorted(r);
        std::sort(sorted.begin(), sorted.end());
        collect_spacings(sorted, map, windows, raw);
    }
    std::vector<std::vector<double>> out;
    for (std::size_t w = 0; w < windows.size(); ++w) out.push_back(rescaled(raw[w], windows[w].label));
    return out;
}

SpacingAccumulator::SpacingAccumulator(std::vector<Window> windows, SpacingBinning binning)
    : windows_(std::move(windows)), binning_(binning), raw_(windows_.size()) {}

void SpacingAccumulator::accumulate(std::span<const double> sorted, const Unfolder& unfold) {
    collect_spacings(sorted, unfold, windows_, raw_);
}

void SpacingAccumulator::merge(const SpacingAccumulator& o) {
    if (!(binning_ == o.binning_) || windows_.size() != o.windows_.size())
        throw std::invalid_argument("SpacingAccumulator::merge: schema mismatch");
    for (std::size_t w = 0; w < windows_.size(); ++w) {
        if (windows_[w].label != o.windows_[w].label)
            throw std::invalid_argument("SpacingAccumulator::merge: window mismatch");
        raw_[w].insert(raw_[w].end(), o.raw_[w].begin(), o.raw_[w].end());
    }
}

std::vector<double> SpacingAccumulator::spacings(std::size_t w) const { return rescaled(raw_[w], windows_[w].label); }

SpacingHistogram SpacingAccumulator::histogram(std::size_t w) const {
    const auto s = spacings(w);
    SpacingHistogram h = make_histogram(s, binning_);
    h.raw_mean = std::accumulate(raw_[w].begin(), raw_[w].end(), 0.0) / static_cast<double>(raw_[w].size());
    return h;
}

SpacingHistogram make_histogram(std::span<const double> spacings, SpacingBinning binning) {
    SpacingHistogram h;
    h.s_max = binning.s_max;
    h.density.assign(binning.bins, 0.0);
    h.count = spacings.size();
    const double width = binning.s_max / static_cast<double>(binning.bins);
    double sum = 0.0;
    for (double s : spacings) {
        sum += s;
        if (s < 0.0 || s >= binning.s_max) continue;
        h.density[std::min(static_cast<std::size_t>(s / width), binning.bins - 1)] += 1.0;
    }
    if (h.count > 0) {
        for (auto& d : h.density) d /= static_cast<double>(h.count) * width;
        h.raw_mean = sum / static_cast<double>(h.count);
    }
    return h;
}

double rms_deviation(const SpacingHistogram& f, const std::function<double(double)>& reference) {
    // 4-point Gauss-Legendre average of the reference over each bin.
    static constexpr double node[4] = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                                       0.8611363115940526};
    static constexpr double weight[4] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                                         0.3478548451374538};
    const double width = f.width();
    double sum = 0.0;
    for (std::size_t i = 0; i < f.density.size(); ++i) {
        const double mid = (static_cast<double>(i) + 0.5) * width;
        double avg = 0.0;
        for (int k = 0; k < 4; ++k) avg += 0.5 * weight[k] * reference(mid + 0.5 * width * node[k]);
        const double diff = f.density[i] - avg;
        sum += diff * diff * width;
    }
    return std::sqrt(sum) / kSpacingNormalization;
}

double delta_poisson(const SpacingHistogram& f) { return rms_deviation(f, poisson_spacing); }
double delta_wigner(const SpacingHistogram& f) { return rms_deviation(f, wigner_spacing); }

std::vector<WindowStats> window_stats(const SpacingAccumulator& acc, std::size_t min_count) {
    std::vector<WindowStats> out;
    for (std::size_t w = 0; w < acc.windows().size(); ++w) {
        WindowStats st;
        st.center = acc.windows()[w].center;
        st.count = acc.count(w);
        st.delta_p = st.delta_wd = std::numeric_limits<double>::quiet_NaN();
        if (st.count >= std::max<std::size_t>(min_count, 1)) {
            const auto h = acc.histogram(w);
            st.delta_p = delta_poisson(h);
            st.delta_wd = delta_wigner(h);
        }
        out.push_back(st);
    }
    return out;
}

namespace {

std::vector<double> polyfit(const std::vector<double>& x, const std::vector<double>& y, std::size_t degree) {
    Eigen::MatrixXd a(x.size(), degree + 1);
    Eigen::VectorXd b(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        double p = 1.0;
        for (std::size_t k = 0; k <= degree; ++k) {
            a(i, k) = p;
            p *= x[i];
        }
        b(i) = y[i];
    }
    const Eigen::VectorXd c = a.colPivHouseholderQr().solve(b);
    return {c.data(), c.data() + c.size()};
}

double polyval(const std::vector<double>& c, double x) {
    double v = 0.0;
    for (std::size_t k = c.size(); k-- > 0;) v = v * x + c[k];
    return v;
}

SideTransition fit_side(const std::vector<WindowStats>& stats, int sign, const TransitionSettings& cfg) {
    SideTransition side;
    std::vector<double> x, yp, ywd;
    for (const auto& w : stats) {
        if ((sign < 0) != (w.center < 0.0) || w.center == 0.0) continue;
        if (w.count < cfg.min_spacings || !std::isfinite(w.delta_p) || !std::isfinite(w.delta_wd)) continue;
        x.push_back(std::log10(std::fabs(w.center)));
        yp.push_back(w.delta_p);
        ywd.push_back(w.delta_wd);
    }
    side.windows_used = x.size();
    if (x.size() < cfg.min_windows) {
        side.status = TransitionStatus::insufficient_windows;
        return side;
    }
    const std::size_t degree = std::min(cfg.degree, x.size() - 1);
    side.fit_p = polyfit(x, yp, degree);
    side.fit_wd = polyfit(x, ywd, degree);
    side.x_lo = *std::min_element(x.begin(), x.end());
    side.x_hi = *std::max_element(x.begin(), x.end());

    auto diff = [&](double t) { return polyval(side.fit_p, t) - polyval(side.fit_wd, t); };
    const int steps = 4000;
    double prev_x = side.x_lo, prev = diff(prev_x);
    bool all_positive = prev > 0.0;
    for (int i = 1; i <= steps; ++i) {
        const double t = side.x_lo + (side.x_hi - side.x_lo) * i / steps;
        const double cur = diff(t);
        all_positive = all_positive && cur > 0.0;
        if ((prev <= 0.0) != (cur <= 0.0)) {
            double lo = prev_x, hi = t, flo = prev;
            for (int it = 0; it < 100; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double fm = diff(mid);
                if ((fm <= 0.0) == (flo <= 0.0)) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            // Scanning outward from the centre, the first root is the closest.
            side.status = TransitionStatus::found;
            side.energy = sign * std::pow(10.0, 0.5 * (lo + hi));
            return side;
        }
        prev_x = t;
        prev = cur;
    }
    side.status = TransitionStatus::none_found;
    side.dominant = all_positive ? "wigner-dyson" : "poisson";
    return side;
}

}  // namespace

TransitionResult transition_energies(const std::vector<WindowStats>& stats, const TransitionSettings& settings) {
    TransitionResult r;
    r.windows = stats;
    r.degree = settings.degree;
    r.minus = fit_side(stats, -1, settings);
    r.plus = fit_side(stats, +1, settings);
    if (r.minus.status == TransitionStatus::insufficient_windows &&
        r.plus.status == TransitionStatus::insufficient_windows)
        throw InsufficientWindows("transition_energies: fewer than " + std::to_string(settings.min_windows) +
                                  " populated windows on both sides");
    return r;
}

}  // namespace rydspec
