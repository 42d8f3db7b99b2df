#include "rydspec/analytic.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "rydspec/cloud.hpp"
#include "rydspec/hyp2f1.hpp"

namespace rydspec {

namespace {

using ld = long double;

ld cube(ld x) { return x * x * x; }

// Unconditional CDF of s = r/d for two uniform points in a ball.
double raw_cdf(double s) {
    const double s3 = s * s * s;
    return s3 * (8.0 - 9.0 * s + 2.0 * s3);
}

// Scaled coupling w = 3 d^3 h / a.
ld scaled_coupling(double h, const GeometryParams& g) {
    return 3.0L * cube(static_cast<ld>(g.diameter)) * h / static_cast<ld>(kCouplingConstant);
}

// Integral of s^m (2 - 3s + s^3) over [s0, 1].
ld moment(int m, ld s0) {
    auto piece = [&](int p) { return (1.0L - std::pow(s0, static_cast<ld>(p))) / p; };
    return 2.0L * piece(m + 1) - 3.0L * piece(m + 2) + piece(m + 4);
}

// Binomial expansion of 1/sqrt(1 + w s^3) inside the defining integral.
ld series_density(ld w, const GeometryParams& g) {
    const ld s0 = std::isinf(g.b) ? 0.0L : 1.0L / static_cast<ld>(g.b);
    ld coef = 1.0L, wk = 1.0L, sum = 0.0L;
    for (int k = 0; k < 200; ++k) {
        const ld term = coef * wk * moment(5 + 3 * k, s0);
        sum += term;
        if (k > 2 && std::fabs(term) < 1e-22L * std::fabs(sum)) break;
        coef *= (-0.5L - k) / (k + 1);
        wk *= w;
    }
    return 32.0L * g.n_atoms / (3.0L * g.chi) * sum;
}

// Constant pieces of the outer branches.
const ld kNegConst = 216.0L * std::sqrt(std::numbers::pi_v<ld>) * std::tgamma(4.0L / 3.0L) / std::tgamma(5.0L / 6.0L);
ld pos_const() {
    static const ld v =
        54.0L * std::cbrt(2.0L) * std::numbers::sqrt3_v<ld> * (-3.0L + 4.0L * hyp2f1_special(Hyp2f1Case::outer, -2.0L));
    return v;
}

// Bracketed expression of the closed form; density = -64N/(1485 chi w^3) * bracket.
ld bracket_blockaded(ld w, ld b) {
    const ld b2 = b * b, b3 = b2 * b;
    const ld u = w / b3;
    const ld poly = 11.0L * (8.0L + u * (-4.0L + 3.0L * u + 10.0L * b3 * (-2.0L + u)));
    const ld quad = 16.0L + (8.0L - 5.0L * u) * u;
    const ld su = std::sqrt(1.0L + u);
    if (w <= -1.0L) {
        return -kNegConst * std::pow(-w, 2.0L / 3.0L) +
               su * (poly + 27.0L * b2 * (quad - 16.0L * hyp2f1_special(Hyp2f1Case::outer, -u)));
    }
    if (w < 2.0L) {
        return -8.0L * std::sqrt(1.0L + w) * (65.0L + w * (-6.0L + w)) + su * (poly + 27.0L * b2 * quad) +
               432.0L * (-b2 * hyp2f1_special(Hyp2f1Case::inner, -u) + hyp2f1_special(Hyp2f1Case::inner, -w));
    }
    return -132.0L * std::numbers::sqrt3_v<ld> + pos_const() * std::pow(w, 2.0L / 3.0L) +
           su * (poly + 27.0L * b2 * (quad - 16.0L * hyp2f1_special(Hyp2f1Case::outer, -u)));
}

// r_b -> 0 limit of the bracket at fixed w.
ld bracket_unblockaded(ld w) {
    const ld lin = 88.0L - 220.0L * w;
    if (w <= -1.0L) return -kNegConst * std::pow(-w, 2.0L / 3.0L) + lin;
    if (w < 2.0L)
        return lin - 8.0L * std::sqrt(1.0L + w) * (65.0L + w * (-6.0L + w)) +
               432.0L * hyp2f1_special(Hyp2f1Case::inner, -w);
    return -132.0L * std::numbers::sqrt3_v<ld> + pos_const() * std::pow(w, 2.0L / 3.0L) + lin;
}

}  // namespace

GeometryParams GeometryParams::make(std::size_t n_atoms, double blockade_radius) {
    if (n_atoms < 1) throw std::invalid_argument("geometry: n_atoms must be >= 1");
    if (!(blockade_radius >= 0.0)) throw std::invalid_argument("geometry: blockade_radius must be >= 0");
    GeometryParams g;
    g.n_atoms = n_atoms;
    g.blockade_radius = blockade_radius;
    g.diameter = 2.0 * cloud_radius(n_atoms);
    if (blockade_radius == 0.0) {
        g.b = std::numeric_limits<double>::infinity();
        g.chi = 1.0;
    } else {
        g.b = g.diameter / blockade_radius;
        if (g.b <= 1.0) throw std::invalid_argument("geometry: blockade radius exceeds cloud diameter");
        g.chi = 1.0 - raw_cdf(1.0 / g.b);
    }
    return g;
}

double anisotropy(double u) {
    if (!(std::fabs(u) <= 1.0)) throw std::domain_error("anisotropy: |u| must be <= 1");
    return kAnisotropyScale * (3.0 * u * u - 1.0);
}

double pair_distance_pdf(double r, const GeometryParams& g) {
    const double d = g.diameter;
    if (r <= g.blockade_radius || r > d) return 0.0;
    const double s = r / d;
    return 12.0 * s * s * (2.0 - 3.0 * s + s * s * s) / (g.chi * d);
}

double pair_distance_cdf(double r, const GeometryParams& g) {
    if (r <= g.blockade_radius) return 0.0;
    if (r >= g.diameter) return 1.0;
    const double base = g.blockade_radius > 0.0 ? raw_cdf(g.blockade_radius / g.diameter) : 0.0;
    return (raw_cdf(r / g.diameter) - base) / g.chi;
}

double pair_distance_quantile(double p, const GeometryParams& g) {
    const double d = g.diameter;
    const double base = g.blockade_radius > 0.0 ? raw_cdf(g.blockade_radius / d) : 0.0;
    const double target = base + p * g.chi;
    double lo = g.blockade_radius, hi = d;
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        if (raw_cdf(mid / d) < target)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

std::pair<double, double> coupling_support(const GeometryParams& g) {
    if (g.blockade_radius == 0.0) return {-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    const double r3 = g.blockade_radius * g.blockade_radius * g.blockade_radius;
    return {-kCouplingConstant / (3.0 * r3), 2.0 * kCouplingConstant / (3.0 * r3)};
}

std::pair<double, double> coupling_seams(const GeometryParams& g) {
    const double d3 = g.diameter * g.diameter * g.diameter;
    return {-kCouplingConstant / (3.0 * d3), 2.0 * kCouplingConstant / (3.0 * d3)};
}

double coupling_pdf_at_zero(const GeometryParams& g) {
    return static_cast<double>(series_density(0.0L, g));
}

double coupling_pdf_closed_form(double h, const GeometryParams& g) {
    const auto [lo, hi] = coupling_support(g);
    if (h <= lo || h >= hi) return 0.0;
    const ld w = scaled_coupling(h, g);
    if (w == 0.0L) return coupling_pdf_at_zero(g);
    const ld br = std::isinf(g.b) ? bracket_unblockaded(w) : bracket_blockaded(w, static_cast<ld>(g.b));
    const ld f = -64.0L * g.n_atoms / (1485.0L * g.chi * cube(w)) * br;
    return static_cast<double>(f);
}

double coupling_pdf(double h, const GeometryParams& g) {
    const auto [lo, hi] = coupling_support(g);
    if (h <= lo || h >= hi) return 0.0;
    const ld w = scaled_coupling(h, g);
    if (std::fabs(w) <= 0.5L) return static_cast<double>(series_density(w, g));
    return coupling_pdf_closed_form(h, g);
}

double coupling_variance(const GeometryParams& g) {
    if (g.blockade_radius == 0.0) throw std::domain_error("coupling_variance: diverges for r_b = 0");
    const ld b = g.b, b2 = b * b, n = static_cast<ld>(g.n_atoms);
    const ld num = 27.0L * b2 * b2 * b2 * (5.0L + b2 * (-9.0L + 4.0L * b) + 6.0L * std::log(b));
    const ld den = 160.0L * n * n * (-2.0L + b2 * (9.0L - 8.0L * b + b2 * b2));
    return static_cast<double>(num / den);
}

double poisson_spacing(double s) { return s < 0.0 ? 0.0 : std::exp(-s); }

double wigner_spacing(double s) {
    if (s < 0.0) return 0.0;
    return 0.5 * std::numbers::pi * s * std::exp(-0.25 * std::numbers::pi * s * s);
}

double semicircle(double lambda, double lw) {
    if (!(lw > 0.0)) throw std::domain_error("semicircle: radius must be > 0");
    if (std::fabs(lambda) >= lw) return 0.0;
    return 2.0 / (std::numbers::pi * lw * lw) * std::sqrt(lw * lw - lambda * lambda);
}

double goe_sigma(const GeometryParams& g) { return std::sqrt(2.0 * coupling_variance(g)); }

double lambda_w(const GeometryParams& g) {
    if (g.blockade_radius == 0.0) throw std::domain_error("lambda_w: unbounded for r_b = 0");
    return std::sqrt(2.0 * static_cast<double>(g.n_atoms)) * goe_sigma(g);
}

}  // namespace rydspec
