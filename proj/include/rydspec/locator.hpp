#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rydspec/cmaes.hpp"
#include "rydspec/common.hpp"

namespace rydspec {

using Complex = std::complex<double>;

// Second-order coefficient at r_b = 0: F2(G) = c G^2.
inline const Complex kF2Constant{-1.22338, 1.63759};

// First root of the spherical Bessel function j1.
inline constexpr double kBesselJ1Root = 4.493409457909064;

double spherical_j1(double x);

// Pair generator. Closed form for r_b > 0 with principal branches,
// -i pi g for r_b = 0 (which needs Im g < 0).
Complex f1(Complex g, double rb);
// Same quantity from a one-dimensional quadrature over the orientation.
Complex f1_integral(Complex g, double rb);

// A / (1 - A).
Complex p1_kernel(Complex a);
// Three-centre kernel in terms of A1, A12, A2, A123.
Complex p2_kernel(Complex a1, Complex a12, Complex a2, Complex a123);

struct F2Settings {
    std::size_t directions = 1u << 14;  // low-discrepancy points per replicate
    std::size_t replicates = 4;         // independently shifted copies, for the error bar
    std::uint64_t seed = 977;
    double panel_width = 1.0;  // in log t
    double lower_margin = 22.0;
    double upper_margin = 12.0;
};

struct F2Estimate {
    Complex value;
    Complex standard_error;  // per component, across replicates
    bool flagged = false;    // standard error above 1% of |value|
};

// Triangle generator as a Monte-Carlo integral over directions in the
// six-dimensional space of the two relative positions, with the radial
// integral done by quadrature. The point set is fixed at construction so
// the map g -> F2(g) is deterministic.
class F2Integrator {
  public:
    F2Integrator(double rb, const F2Settings& settings = {});

    F2Estimate evaluate(Complex g, Execution exec = Execution::parallel) const;
    Complex operator()(Complex g) const { return evaluate(g).value; }

    double blockade_radius() const { return rb_; }
    std::size_t size() const { return v1_.size(); }

  private:
    Complex radial(std::size_t k, Complex g) const;

    double rb_;
    F2Settings settings_;
    std::vector<double> v1_, v2_, v12_, log_tmax_;
};

// Standalone radial integral for one direction: the integral over t of
// t^-3 P2 with couplings scaled by t, cut at t_max (inf for none).
Complex f2_ray(Complex g, double v1, double v2, double v12, double t_max, const F2Settings& settings = {});

// Angular kernel of the Fourier-space potential, u = K_z / K.
double fourier_w(double k, double u, double rb);

struct HighConcentrationSettings {
    double x_max = 200.0;          // K_max * r_b
    std::size_t u_nodes = 64;
    double tolerance = 1e-10;
};

struct HighConcentrationValue {
    Complex rhs;          // right-hand side of z - 1/G = rhs
    double tail_fraction;  // |analytic tail| / |total|
};

class HighConcentrationKernel {
  public:
    HighConcentrationKernel(double rb, const HighConcentrationSettings& settings = {});
    HighConcentrationValue evaluate(Complex g, Execution exec = Execution::parallel) const;

  private:
    Complex inner(double s, Complex g) const;  // s = 3u^2 - 1
    double rb_;
    HighConcentrationSettings settings_;
    std::vector<double> u_, w_;
};

struct SolverSettings {
    std::vector<double> epsilon_schedule{0.2, 0.1, 0.05, 0.02};
    double residual_tolerance = 1e-8;
    double stability_tolerance = 0.01;  // relative DOS change between the last two epsilons
    std::size_t fixed_point_iterations = 40;
    double damping = 0.5;
    std::size_t secant_iterations = 80;
    CmaesSettings cmaes;
    F2Settings f2;
    HighConcentrationSettings high;
    Execution exec = Execution::parallel;

    void validate() const;
};

struct PointDiagnostics {
    double residual = 0.0;
    std::size_t evaluations = 0;
    std::string method;  // fixed-point, secant, cmaes
    bool converged = false;
    bool stable = false;
    double dos_change = 0.0;
    std::string flag;  // empty when clean
    std::optional<Complex> alternate_root;
};

struct ResolventSolution {
    std::vector<double> lambda_grid;
    double epsilon = 0.0;
    std::vector<Complex> g_values;
    std::vector<double> dos;
    std::vector<PointDiagnostics> diagnostics;
    std::string method;  // low-1, low-2, high
    double blockade_radius = 0.0;

    bool accepted(std::size_t i) const { return diagnostics[i].converged && diagnostics[i].stable; }
    std::size_t accepted_count() const;
};

class NonConvergence : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Self-energy sigma(G): the equation solved is z G = 1 + sigma(G).
using SelfEnergy = std::function<Complex(Complex)>;

// Root of z G - 1 - sigma(G) near `start`: damped fixed point, then
// complex secant, then CMA-ES on |residual|^2 followed by a secant polish.
Complex solve_point(const SelfEnergy& sigma, Complex z, Complex start, const SolverSettings& settings,
                    PointDiagnostics& diag);

ResolventSolution solve_low(int order, double rb, std::span<const double> lambda_grid, const SolverSettings& settings);
ResolventSolution solve_high(double rb, std::span<const double> lambda_grid, const SolverSettings& settings);

// -Im(G)/pi per grid point.
std::vector<double> dos_from_resolvent(const ResolventSolution& solution);

// Spacing 0.05 around the centre, log-spaced towards the range edge.
std::vector<double> default_lambda_grid(double rb, double half_range = 0.0);

// Trapezoidal integral of the DOS over the grid.
double integrate_dos(const ResolventSolution& solution);
// Quantile of the DOS curve by trapezoidal cumulative integration.
double curve_quantile(std::span<const double> x, std::span<const double> density, double p);

}  // namespace rydspec
