#pragma once

#include <cstddef>
#include <utility>

#include "rydspec/common.hpp"

namespace rydspec {

// Geometry of a cloud of N atoms at unit density with blockade radius r_b.
struct GeometryParams {
    std::size_t n_atoms = 0;
    double blockade_radius = 0.0;
    double diameter = 0.0;  // d = 2 * cloud radius
    double b = 0.0;         // d / r_b, +inf for r_b = 0
    double chi = 1.0;       // probability that an unconstrained pair is farther apart than r_b

    static GeometryParams make(std::size_t n_atoms, double blockade_radius);
};

// RMS normalisation: sqrt of the integral of (poisson - wigner)^2 over s >= 0.
inline constexpr double kSpacingNormalization = 0.4730437247;

// kAnisotropyScale * (3u^2 - 1). Throws std::domain_error for |u| > 1.
double anisotropy(double u);

// Density of the distance between two points uniform in the ball,
// conditioned on exceeding r_b. Zero outside (r_b, d].
double pair_distance_pdf(double r, const GeometryParams& g);
// CDF of the same conditional distribution.
double pair_distance_cdf(double r, const GeometryParams& g);
// Inverse CDF by bisection to 1e-12 absolute in r.
double pair_distance_quantile(double p, const GeometryParams& g);

// Density of a single coupling element H_ij. For r_b > 0 the support is
// [-a/(3 r_b^3), 2a/(3 r_b^3)]; for r_b = 0 the support is the real line.
double coupling_pdf(double h, const GeometryParams& g);
// Same density using only the piecewise closed form (no small-argument
// series); loses accuracy close to h = 0. Exposed for seam checks.
double coupling_pdf_closed_form(double h, const GeometryParams& g);
// Value at h = 0.
double coupling_pdf_at_zero(const GeometryParams& g);

// Support of coupling_pdf; infinite for r_b = 0.
std::pair<double, double> coupling_support(const GeometryParams& g);

// Branch boundaries of coupling_pdf in h (ascending, finite ones only).
std::pair<double, double> coupling_seams(const GeometryParams& g);

// Variance of H_ij; throws std::domain_error for r_b = 0 where it diverges.
double coupling_variance(const GeometryParams& g);

double poisson_spacing(double s);
double wigner_spacing(double s);

// Semicircle density of radius lambda_w.
double semicircle(double lambda, double lambda_w);
// Semicircle radius of the variance-matched GOE: sqrt(2N) * sigma.
double lambda_w(const GeometryParams& g);
// sigma with sigma^2 / 2 equal to the coupling variance.
double goe_sigma(const GeometryParams& g);

}  // namespace rydspec
