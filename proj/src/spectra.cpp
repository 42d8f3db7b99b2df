#include "rydspec/spectra.hpp"

#include <Eigen/Dense>
#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace rydspec {

std::vector<double> eigenvalues(const SymmetricMatrix& m) {
    const auto n = static_cast<lapack_int>(m.order());
    std::vector<double> a(m.data().begin(), m.data().end());
    std::vector<double> w(m.order());
    if (n == 0) return w;
    const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'N', 'U', n, a.data(), n, w.data());
    if (info != 0) throw EigenError("dsyevd failed with info = " + std::to_string(info));
    return w;
}

// Eigen rather than dsyevd: some OpenBLAS builds pick a broken level-3
// kernel on AVX-512 hosts, which corrupts the back-transformed vectors
// while leaving the eigenvalues intact.
EigenPairs eigenpairs(const SymmetricMatrix& m) {
    const auto n = static_cast<Eigen::Index>(m.order());
    EigenPairs out;
    if (n == 0) return out;
    const Eigen::Map<const Eigen::MatrixXd> a(m.data().data(), n, n);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
    if (es.info() != Eigen::Success) throw EigenError("eigenpairs: solver did not converge");
    out.values.assign(es.eigenvalues().data(), es.eigenvalues().data() + n);
    out.vectors.assign(es.eigenvectors().data(), es.eigenvectors().data() + n * n);
    return out;
}

std::size_t DosBinning::log_bins() const {
    return static_cast<std::size_t>(std::lround(std::log10(log_hi / log_lo) * static_cast<double>(bins_per_decade)));
}

double DosBinning::log_edge(std::size_t k) const {
    return log_lo * std::pow(10.0, static_cast<double>(k) / static_cast<double>(bins_per_decade));
}

void RunningMoments::add(double x) {
    const double n0 = static_cast<double>(n);
    ++n;
    const double n1 = static_cast<double>(n);
    const double delta = x - mean;
    const double dn = delta / n1;
    const double t = delta * dn * n0;
    mean += dn;
    m3 += t * dn * (n1 - 2.0) - 3.0 * dn * m2;
    m2 += t;
}

RunningMoments RunningMoments::combine(const RunningMoments& a, const RunningMoments& b) {
    if (a.n == 0) return b;
    if (b.n == 0) return a;
    RunningMoments r;
    r.n = a.n + b.n;
    const double na = static_cast<double>(a.n), nb = static_cast<double>(b.n), n = static_cast<double>(r.n);
    const double delta = b.mean - a.mean;
    r.mean = (na * a.mean + nb * b.mean) / n;
    r.m2 = a.m2 + b.m2 + delta * delta * na * nb / n;
    r.m3 = a.m3 + b.m3 + delta * delta * delta * na * nb * (na - nb) / (n * n) +
           3.0 * delta * (na * b.m2 - nb * a.m2) / n;
    return r;
}

double RunningMoments::skewness() const {
    if (n < 3 || m2 <= 0.0) return 0.0;
    const double nn = static_cast<double>(n);
    return std::sqrt(nn) * m3 / std::pow(m2, 1.5);
}

SpectrumAccumulator::SpectrumAccumulator(DosBinning binning)
    : binning_(binning), lin_(binning.lin_bins, 0), neg_(binning.log_bins(), 0), pos_(binning.log_bins(), 0) {
    if (!(binning.lin_hi > binning.lin_lo) || binning.lin_bins == 0 || !(binning.log_lo > 0.0) ||
        !(binning.log_hi > binning.log_lo) || binning.bins_per_decade == 0)
        throw std::invalid_argument("DosBinning: invalid ranges");
}

void SpectrumAccumulator::accumulate(std::span<const double> values) {
    const double width = (binning_.lin_hi - binning_.lin_lo) / static_cast<double>(binning_.lin_bins);
    const double log_lo = std::log10(binning_.log_lo);
    const double bpd = static_cast<double>(binning_.bins_per_decade);
    const std::size_t nlog = neg_.size();
    ++realizations_;
    for (double x : values) {
        ++count_;
        if (x < binning_.lin_lo) {
            ++below_;
        } else if (x >= binning_.lin_hi) {
            ++above_;
        } else {
            const auto k = std::min(static_cast<std::size_t>((x - binning_.lin_lo) / width), lin_.size() - 1);
            ++lin_[k];
            moments_.add(x);
        }
        const double ax = std::fabs(x);
        if (ax < binning_.log_lo) {
            ++log_under_;
            continue;
        }
        const double pos = (std::log10(ax) - log_lo) * bpd;
        if (pos >= static_cast<double>(nlog)) {
            ++(x < 0.0 ? neg_over_ : pos_over_);
            continue;
        }
        const auto k = std::min(static_cast<std::size_t>(std::max(pos, 0.0)), nlog - 1);
        ++(x < 0.0 ? neg_[k] : pos_[k]);
    }
}

void SpectrumAccumulator::merge(const SpectrumAccumulator& o) {
    if (!(binning_ == o.binning_)) throw BinningMismatch("SpectrumAccumulator::merge: binning differs");
    realizations_ += o.realizations_;
    count_ += o.count_;
    below_ += o.below_;
    above_ += o.above_;
    log_under_ += o.log_under_;
    neg_over_ += o.neg_over_;
    pos_over_ += o.pos_over_;
    for (std::size_t i = 0; i < lin_.size(); ++i) lin_[i] += o.lin_[i];
    for (std::size_t i = 0; i < neg_.size(); ++i) {
        neg_[i] += o.neg_[i];
        pos_[i] += o.pos_[i];
    }
    moments_ = RunningMoments::combine(moments_, o.moments_);
}

SpectrumAccumulator SpectrumAccumulator::merged(SpectrumAccumulator a, const SpectrumAccumulator& b) {
    a.merge(b);
    return a;
}

bool SpectrumAccumulator::same_counts(const SpectrumAccumulator& o) const {
    return binning_ == o.binning_ && realizations_ == o.realizations_ && count_ == o.count_ && below_ == o.below_ &&
           above_ == o.above_ && log_under_ == o.log_under_ && neg_over_ == o.neg_over_ && pos_over_ == o.pos_over_ &&
           lin_ == o.lin_ && neg_ == o.neg_ && pos_ == o.pos_;
}

SpectrumAccumulator::State SpectrumAccumulator::state() const {
    State s;
    s.binning = binning_;
    s.realizations = realizations_;
    s.count = count_;
    s.below = below_;
    s.above = above_;
    s.log_under = log_under_;
    s.neg_over = neg_over_;
    s.pos_over = pos_over_;
    s.lin = lin_;
    s.neg = neg_;
    s.pos = pos_;
    s.moments = moments_;
    return s;
}

SpectrumAccumulator SpectrumAccumulator::from_state(const State& s) {
    SpectrumAccumulator a(s.binning);
    if (s.lin.size() != a.lin_.size() || s.neg.size() != a.neg_.size() || s.pos.size() != a.pos_.size())
        throw BinningMismatch("SpectrumAccumulator::from_state: histogram sizes do not match binning");
    a.realizations_ = s.realizations;
    a.count_ = s.count;
    a.below_ = s.below;
    a.above_ = s.above;
    a.log_under_ = s.log_under;
    a.neg_over_ = s.neg_over;
    a.pos_over_ = s.pos_over;
    a.lin_ = s.lin;
    a.neg_ = s.neg;
    a.pos_ = s.pos;
    a.moments_ = s.moments;
    return a;
}

BinnedDensity dos_density(const SpectrumAccumulator& acc) {
    const auto& b = acc.binning();
    const double width = (b.lin_hi - b.lin_lo) / static_cast<double>(b.lin_bins);
    const double total = static_cast<double>(acc.eigenvalue_count());
    BinnedDensity out;
    for (std::size_t i = 0; i < b.lin_bins; ++i) {
        out.left.push_back(b.lin_lo + width * static_cast<double>(i));
        out.right.push_back(b.lin_lo + width * static_cast<double>(i + 1));
        out.count.push_back(acc.linear_counts()[i]);
        out.density.push_back(total > 0 ? static_cast<double>(acc.linear_counts()[i]) / (total * width) : 0.0);
    }
    out.tail_mass = total > 0 ? static_cast<double>(acc.below_linear() + acc.above_linear()) / total : 0.0;
    return out;
}

BinnedDensity dos_log_density(const SpectrumAccumulator& acc, int sign) {
    const auto& b = acc.binning();
    const auto& counts = acc.log_counts(sign);
    const double total = static_cast<double>(acc.eigenvalue_count());
    BinnedDensity out;
    std::uint64_t inside = 0;
    for (std::size_t k = 0; k < counts.size(); ++k) {
        const double lo = b.log_edge(k), hi = b.log_edge(k + 1);
        out.left.push_back(lo);
        out.right.push_back(hi);
        out.count.push_back(counts[k]);
        out.density.push_back(total > 0 ? static_cast<double>(counts[k]) / (total * (hi - lo)) : 0.0);
        inside += counts[k];
    }
    out.tail_mass = total > 0 ? 1.0 - static_cast<double>(inside) / total : 0.0;
    return out;
}

std::vector<double> dos_standard_error(const SpectrumAccumulator& acc) {
    const auto& b = acc.binning();
    const double width = (b.lin_hi - b.lin_lo) / static_cast<double>(b.lin_bins);
    const double total = static_cast<double>(acc.eigenvalue_count());
    std::vector<double> se;
    for (auto c : acc.linear_counts()) {
        const double p = total > 0 ? static_cast<double>(c) / total : 0.0;
        se.push_back(total > 0 ? std::sqrt(p * (1.0 - p) / total) / width : 0.0);
    }
    return se;
}

namespace {

TailFit fit_side(const SpectrumAccumulator& acc, int sign, double lo, double hi) {
    const BinnedDensity d = dos_log_density(acc, sign);
    std::vector<double> xs, ys;
    for (std::size_t k = 0; k < d.density.size(); ++k) {
        if (d.left[k] < lo * (1.0 - 1e-9) || d.right[k] > hi * (1.0 + 1e-9) || d.count[k] == 0) continue;
        xs.push_back(0.5 * (std::log10(d.left[k]) + std::log10(d.right[k])));
        ys.push_back(std::log10(d.density[k]));
    }
    if (xs.size() < 10)
        throw InsufficientTailData("tail_exponent: only " + std::to_string(xs.size()) + " populated bins for sign " +
                                   std::to_string(sign));
    const double n = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    TailFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double rss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (f.intercept + f.slope * xs[i]);
        rss += r * r;
    }
    f.stderr_ = std::sqrt(rss / (n - 2.0) / sxx);
    f.bins_used = xs.size();
    return f;
}

}  // namespace

TailExponents tail_exponent(const SpectrumAccumulator& acc, double lo, double hi) {
    if (!(lo > 0.0) || !(hi > lo)) throw std::invalid_argument("tail_exponent: need 0 < lo < hi");
    return {fit_side(acc, -1, lo, hi), fit_side(acc, +1, lo, hi)};
}

namespace {

struct Segment {
    double lo, hi, count;
};

// Pieces of one tail beyond the linear window, outermost first. Bin counts
// are assigned from the outside in until the known tail mass is used up, so
// the bin straddling the window edge only receives the remainder.
std::vector<Segment> tail_segments(const SpectrumAccumulator& acc, int sign) {
    const auto& b = acc.binning();
    const auto& counts = acc.log_counts(sign);
    const double edge = sign < 0 ? -b.lin_lo : b.lin_hi;
    double mass = static_cast<double>(sign < 0 ? acc.below_linear() : acc.above_linear());
    std::vector<Segment> out;
    const double over = std::min(mass, static_cast<double>(acc.log_overflow(sign)));
    out.push_back({b.log_hi, b.log_hi, over});
    mass -= over;
    for (std::size_t k = counts.size(); k-- > 0 && mass > 0.0;) {
        const double hi = b.log_edge(k + 1);
        if (hi <= edge) break;
        const double c = std::min(mass, static_cast<double>(counts[k]));
        out.push_back({std::max(b.log_edge(k), edge), hi, c});
        mass -= c;
    }
    for (auto& seg : out) {
        if (sign < 0) {
            const double lo = seg.lo;
            seg.lo = -seg.hi;
            seg.hi = -lo;
        }
    }
    return out;
}

}  // namespace

double dos_quantile(const SpectrumAccumulator& acc, double p) {
    if (acc.eigenvalue_count() == 0) throw std::invalid_argument("dos_quantile: empty accumulator");
    const auto& b = acc.binning();
    const double width = (b.lin_hi - b.lin_lo) / static_cast<double>(b.lin_bins);

    std::vector<Segment> segs = tail_segments(acc, -1);  // ascending already
    for (std::size_t i = 0; i < b.lin_bins; ++i)
        segs.push_back({b.lin_lo + width * static_cast<double>(i), b.lin_lo + width * static_cast<double>(i + 1),
                        static_cast<double>(acc.linear_counts()[i])});
    auto upper = tail_segments(acc, +1);
    segs.insert(segs.end(), upper.rbegin(), upper.rend());

    const double target = std::clamp(p, 0.0, 1.0) * static_cast<double>(acc.eigenvalue_count());
    double cum = 0.0;
    for (const auto& seg : segs) {
        if (seg.count > 0.0 && cum + seg.count >= target)
            return seg.lo + (target - cum) / seg.count * (seg.hi - seg.lo);
        cum += seg.count;
    }
    return segs.back().hi;
}

double support_width(const SpectrumAccumulator& acc, double mass) {
    const double tail = 0.5 * (1.0 - mass);
    return dos_quantile(acc, 1.0 - tail) - dos_quantile(acc, tail);
}

double dos_mode(const SpectrumAccumulator& acc) {
    const auto& c = acc.linear_counts();
    const auto it = std::max_element(c.begin(), c.end());
    const auto& b = acc.binning();
    const double width = (b.lin_hi - b.lin_lo) / static_cast<double>(b.lin_bins);
    return b.lin_lo + width * (static_cast<double>(it - c.begin()) + 0.5);
}

}  // namespace rydspec
