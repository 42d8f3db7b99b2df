#include "rydspec/locator.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/legendre.hpp>
#include <boost/random/sobol.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace rydspec {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr Complex kI{0.0, 1.0};

// Coupling of a separation vector in units where the density is one.
double dipole(double x, double y, double z) {
    const double r2 = x * x + y * y + z * z;
    return kAnisotropyScale * (3.0 * z * z / r2 - 1.0) / (r2 * std::sqrt(r2));
}

// 8-point Gauss-Legendre on [-1, 1].
constexpr double kGl8x[8] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
                             0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
constexpr double kGl8w[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
                             0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};

}  // namespace

double spherical_j1(double x) {
    const double ax = std::fabs(x);
    if (ax < 1e-2) {
        const double x2 = x * x;
        return x / 3.0 * (1.0 - x2 / 10.0 * (1.0 - x2 / 28.0));
    }
    return (std::sin(x) / x - std::cos(x)) / x;
}

Complex f1(Complex g, double rb) {
    if (rb == 0.0) {
        if (!(g.imag() < 0.0)) throw std::domain_error("f1: r_b = 0 requires Im g < 0");
        return -kI * kPi * g;
    }
    const double r3 = rb * rb * rb;
    const Complex t = r3 / (kCouplingConstant * g);
    Complex sum = 0.0;
    for (int s : {+1, -1}) {
        const Complex q = std::sqrt(1.0 / 3.0 + static_cast<double>(s) * t);
        sum += (0.5 * t - s / 3.0) * q * std::atanh(1.0 / q);
    }
    return 8.0 * kPi * r3 / 9.0 - 3.0 * std::numbers::sqrt3 * g * sum;
}

Complex f1_integral(Complex g, double rb) {
    if (rb == 0.0) return f1(g, rb);
    const double r3 = rb * rb * rb;
    auto integrand = [&](double u) {
        const Complex alpha = kCouplingConstant * g * (u * u - 1.0 / 3.0);
        return alpha * std::atanh(alpha / r3);
    };
    using boost::math::quadrature::gauss_kronrod;
    const double seam = 1.0 / std::numbers::sqrt3;
    const Complex a = gauss_kronrod<double, 15>::integrate(integrand, 0.0, seam, 20, 1e-13);
    const Complex b = gauss_kronrod<double, 15>::integrate(integrand, seam, 1.0, 20, 1e-13);
    return 4.0 * kPi / 3.0 * (a + b);
}

Complex p1_kernel(Complex a) { return a / (1.0 - a); }

Complex p2_kernel(Complex a1, Complex a12, Complex a2, Complex a123) {
    const Complex p1 = p1_kernel(a1), p12 = p1_kernel(a12), p2 = p1_kernel(a2);
    const Complex head = (a1 + a2 + 2.0 * a123) / (1.0 - (a1 + a12 + a2 + 2.0 * a123));
    return 0.5 * (head - p1 - p1 / (1.0 - a1) * (p12 + p2) - (p1 + p12) * p2 / (1.0 - a2) - p2);
}

Complex f2_ray(Complex g, double v1, double v2, double v12, double t_max, const F2Settings& s) {
    const double vmax = std::max({std::fabs(v1), std::fabs(v2), std::fabs(v12)});
    double vmin = vmax;
    for (double v : {v1, v2, v12})
        if (v != 0.0) vmin = std::min(vmin, std::fabs(v));
    if (vmax == 0.0) return 0.0;
    double hi = -std::log(vmin) + s.upper_margin;
    if (std::isfinite(t_max)) hi = std::min(hi, std::log(t_max));
    const double lo = std::min(-std::log(vmax) - s.lower_margin, hi - s.lower_margin);
    const int panels = std::max(1, static_cast<int>(std::ceil((hi - lo) / s.panel_width)));
    const double width = (hi - lo) / panels;

    const double q1 = v1 * v1, q2 = v2 * v2, q12 = v12 * v12, triple = v1 * v12 * v2;
    Complex sum = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double mid = lo + (p + 0.5) * width;
        for (int k = 0; k < 8; ++k) {
            const double x = mid + 0.5 * width * kGl8x[k];
            const double t = std::exp(x);
            const Complex gt = g * t;
            const Complex gt2 = gt * gt;
            const Complex val = p2_kernel(gt2 * q1, gt2 * q12, gt2 * q2, gt2 * gt * triple);
            sum += kGl8w[k] * val / (t * t);
        }
    }
    return 0.5 * width * sum;
}

F2Integrator::F2Integrator(double rb, const F2Settings& settings) : rb_(rb), settings_(settings) {
    if (!(rb >= 0.0)) throw std::invalid_argument("F2Integrator: r_b must be >= 0");
    if (settings.directions == 0 || settings.replicates == 0)
        throw std::invalid_argument("F2Integrator: need at least one direction and one replicate");
    const std::size_t total = settings.directions * settings.replicates;
    v1_.resize(total);
    v2_.resize(total);
    v12_.resize(total);
    log_tmax_.resize(total);
    for (std::size_t r = 0; r < settings.replicates; ++r) {
        // Random digital shift of a Sobol sequence, one per replicate.
        Rng rng(stream_seed(settings.seed, r));
        std::uint64_t shift[6];
        for (auto& x : shift) x = rng();
        boost::random::sobol sobol(6);
        for (std::size_t k = 0; k < settings.directions; ++k) {
            double w[6];
            double norm = 0.0;
            for (int d = 0; d < 6; ++d) {
                const std::uint64_t bits = static_cast<std::uint64_t>(sobol()) ^ shift[d];
                const double u = (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
                w[d] = -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * u);
                norm += w[d] * w[d];
            }
            norm = std::sqrt(norm);
            for (double& x : w) x /= norm;
            const std::size_t i = r * settings.directions + k;
            v1_[i] = dipole(w[0], w[1], w[2]);
            v2_[i] = dipole(w[3], w[4], w[5]);
            v12_[i] = dipole(w[0] - w[3], w[1] - w[4], w[2] - w[5]);
            if (rb > 0.0) {
                const double m = std::min({std::hypot(w[0], w[1], w[2]), std::hypot(w[3], w[4], w[5]),
                                           std::hypot(w[0] - w[3], w[1] - w[4], w[2] - w[5])});
                log_tmax_[i] = 3.0 * std::log(m / rb);
            } else {
                log_tmax_[i] = std::numeric_limits<double>::infinity();
            }
        }
    }
}

Complex F2Integrator::radial(std::size_t k, Complex g) const {
    return f2_ray(g, v1_[k], v2_[k], v12_[k], std::exp(log_tmax_[k]), settings_);
}

F2Estimate F2Integrator::evaluate(Complex g, Execution exec) const {
    const std::size_t per = settings_.directions;
    const std::size_t reps = settings_.replicates;
    constexpr std::size_t kChunk = 1024;
    const std::size_t chunks = (per + kChunk - 1) / kChunk;
    std::vector<Complex> partial(chunks * reps);
    auto work = [&](std::size_t c) {
        const std::size_t r = c / chunks, lo = (c % chunks) * kChunk, hi = std::min(per, lo + kChunk);
        Complex s = 0.0;
        for (std::size_t k = lo; k < hi; ++k) s += radial(r * per + k, g);
        partial[c] = s;
    };
    const auto n = static_cast<std::ptrdiff_t>(partial.size());
    if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
        for (std::ptrdiff_t c = 0; c < n; ++c) work(static_cast<std::size_t>(c));
    } else {
        for (std::ptrdiff_t c = 0; c < n; ++c) work(static_cast<std::size_t>(c));
    }

    // Surface of the unit 5-sphere is pi^3; the radial measure contributes 1/3.
    const double scale = kPi * kPi * kPi / 3.0 / static_cast<double>(per);
    std::vector<Complex> rep(reps, 0.0);
    for (std::size_t c = 0; c < partial.size(); ++c) rep[c / chunks] += partial[c];
    Complex mean = 0.0;
    for (auto& v : rep) {
        v *= scale;
        mean += v;
    }
    mean /= static_cast<double>(reps);
    F2Estimate e;
    e.value = mean;
    if (reps > 1) {
        double sr = 0.0, si = 0.0;
        for (const auto& v : rep) {
            sr += (v.real() - mean.real()) * (v.real() - mean.real());
            si += (v.imag() - mean.imag()) * (v.imag() - mean.imag());
        }
        const double denom = static_cast<double>(reps) * static_cast<double>(reps - 1);
        e.standard_error = {std::sqrt(sr / denom), std::sqrt(si / denom)};
    }
    e.flagged = std::abs(e.standard_error) > 0.01 * std::abs(e.value);
    return e;
}

double fourier_w(double k, double u, double rb) {
    if (!(rb > 0.0)) throw std::domain_error("fourier_w: r_b must be > 0");
    const double x = k * rb;
    const double shape = x < 1e-4 ? 1.0 - x * x / 10.0 : 3.0 * spherical_j1(x) / x;
    return 4.5 * std::numbers::sqrt3 * (1.0 / 3.0 - u * u) * shape;
}

HighConcentrationKernel::HighConcentrationKernel(double rb, const HighConcentrationSettings& s) : rb_(rb), settings_(s) {
    if (!(rb > 0.0)) throw std::domain_error("high-concentration kernel needs r_b > 0");
    // Gauss-Legendre nodes on [0, 1].
    const auto n = static_cast<int>(s.u_nodes);
    const auto zeros = boost::math::legendre_p_zeros<double>(n);
    auto add = [&](double x) {
        const double dp = boost::math::legendre_p_prime(n, x);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        u_.push_back(0.5 * (x + 1.0));
        w_.push_back(0.5 * w);
    };
    for (double z : zeros) {
        add(z);
        if (z != 0.0) add(-z);
    }
}

Complex HighConcentrationKernel::inner(double s, Complex g) const {
    const Complex gamma = 4.5 * std::numbers::sqrt3 * s * g;
    if (gamma == 0.0) return 0.0;
    auto f = [&](double x) {
        const double j = spherical_j1(x);
        return x * j * j / (x + gamma * j);
    };
    using boost::math::quadrature::gauss_kronrod;
    Complex sum = 0.0;
    const double x_max = settings_.x_max;
    for (double a = 0.0; a < x_max; a += kPi) {
        const double b = std::min(a + kPi, x_max);
        sum += gauss_kronrod<double, 15>::integrate(f, a, b, 12, settings_.tolerance);
    }
    return sum;
}

HighConcentrationValue HighConcentrationKernel::evaluate(Complex g, Execution exec) const {
    const std::size_t n = u_.size();
    std::vector<Complex> terms(n);
    const auto m = static_cast<std::ptrdiff_t>(n);
    auto work = [&](std::size_t k) {
        const double s = 3.0 * u_[k] * u_[k] - 1.0;
        terms[k] = w_[k] * s * s * inner(s, g);
    };
    if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
        for (std::ptrdiff_t k = 0; k < m; ++k) work(static_cast<std::size_t>(k));
    } else {
        for (std::ptrdiff_t k = 0; k < m; ++k) work(static_cast<std::size_t>(k));
    }
    Complex body = 0.0;
    double s2 = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        body += terms[k];
        const double s = 3.0 * u_[k] * u_[k] - 1.0;
        s2 += w_[k] * s * s;
    }
    // Beyond x_max the integrand averages to j1^2 ~ 1/(2x^2).
    const Complex tail = s2 / (2.0 * settings_.x_max);
    const double gamma_scale = 4.5 * std::numbers::sqrt3;
    const double pref = 9.0 * std::numbers::sqrt3 / (4.0 * kPi * kPi * rb_) * gamma_scale / (rb_ * rb_);
    HighConcentrationValue v;
    v.rhs = pref * g * (body + tail);
    v.tail_fraction = std::abs(tail) / std::max(std::abs(body + tail), 1e-300);
    return v;
}

void SolverSettings::validate() const {
    if (epsilon_schedule.empty()) throw std::invalid_argument("solver.epsilon_schedule must not be empty");
    for (std::size_t i = 0; i < epsilon_schedule.size(); ++i) {
        if (!(epsilon_schedule[i] > 0.0)) throw std::invalid_argument("solver.epsilon_schedule entries must be > 0");
        if (i > 0 && !(epsilon_schedule[i] < epsilon_schedule[i - 1]))
            throw std::invalid_argument("solver.epsilon_schedule must be strictly descending");
    }
    if (!(residual_tolerance > 0.0)) throw std::invalid_argument("solver.residual_tolerance must be > 0");
    if (!(damping > 0.0 && damping <= 1.0)) throw std::invalid_argument("solver.damping must be in (0, 1]");
}

std::size_t ResolventSolution::accepted_count() const {
    std::size_t n = 0;
    for (std::size_t i = 0; i < diagnostics.size(); ++i) n += accepted(i);
    return n;
}

Complex solve_point(const SelfEnergy& sigma, Complex z, Complex start, const SolverSettings& s, PointDiagnostics& diag) {
    std::size_t evals = 0;
    auto residual = [&](Complex g) {
        ++evals;
        return z * g - 1.0 - sigma(g);
    };
    const double tol = s.residual_tolerance;

    Complex best = start;
    Complex r_best = residual(best);
    auto finish = [&](Complex g, Complex r, const char* how) {
        diag.residual = std::abs(r);
        diag.evaluations += evals;
        diag.method = how;
        diag.converged = diag.residual < tol && g.imag() <= 0.0;
        return g;
    };
    if (std::abs(r_best) < tol && best.imag() <= 0.0) return finish(best, r_best, "warm-start");

    // Damped fixed point. sigma(g) is recovered from the residual, so each
    // step costs one evaluation. Slow contraction hands over to the secant.
    {
        Complex g = best;
        Complex sg = z * g - 1.0 - r_best;
        double checkpoint = std::abs(r_best);
        for (std::size_t it = 0; it < s.fixed_point_iterations; ++it) {
            g = (1.0 - s.damping) * g + s.damping * (1.0 + sg) / z;
            const Complex r = residual(g);
            sg = z * g - 1.0 - r;
            if (std::abs(r) < std::abs(r_best) && g.imag() <= 0.0) {
                best = g;
                r_best = r;
            }
            if (std::abs(r_best) < tol) return finish(best, r_best, "fixed-point");
            if (!std::isfinite(std::abs(r))) break;
            if ((it + 1) % 5 == 0) {
                if (!(std::abs(r) < 0.1 * checkpoint)) break;
                checkpoint = std::abs(r);
            }
        }
    }

    // Complex secant; the residual is analytic in G.
    auto secant = [&](Complex g0) {
        Complex g1 = g0 + 1e-4 * (std::abs(g0) + 1e-3) * Complex(1.0, -1.0);
        Complex r0 = residual(g0), r1 = residual(g1);
        for (std::size_t it = 0; it < s.secant_iterations; ++it) {
            if (std::abs(r1) < std::abs(r_best) && g1.imag() <= 0.0) {
                best = g1;
                r_best = r1;
            }
            if (std::abs(r_best) < tol) return true;
            const Complex dr = r1 - r0;
            if (dr == 0.0) break;
            Complex g2 = g1 - r1 * (g1 - g0) / dr;
            // Keep iterates in the lower half-plane.
            if (g2.imag() > 0.0) g2 = Complex(g2.real(), -0.5 * std::fabs(g1.imag()));
            g0 = g1;
            r0 = r1;
            g1 = g2;
            r1 = residual(g1);
            if (!std::isfinite(std::abs(r1))) break;
        }
        if (std::abs(r1) < std::abs(r_best) && g1.imag() <= 0.0) {
            best = g1;
            r_best = r1;
        }
        return std::abs(r_best) < tol;
    };
    if (secant(best)) return finish(best, r_best, "secant");

    // Derivative-free global step on |r|^2 with a penalty outside the lower half-plane.
    auto objective = [&](const Eigen::VectorXd& x) {
        const Complex g(x(0), x(1));
        const Complex r = residual(g);
        double v = std::norm(r);
        if (x(1) > 0.0) v += 1e6 * x(1) * x(1) + 1.0;
        return std::isfinite(v) ? v : std::numeric_limits<double>::max();
    };
    Eigen::VectorXd x0(2);
    x0 << best.real(), std::min(best.imag(), -1e-12);
    CmaesSettings cs = s.cmaes;
    cs.initial_step = std::max(cs.initial_step * std::abs(best), 1e-6);
    const CmaesResult res = cmaes_minimize(objective, x0, cs);
    const Complex gc(res.x(0), res.x(1));
    const Complex rc = residual(gc);
    if (std::abs(rc) < std::abs(r_best) && gc.imag() <= 0.0) {
        best = gc;
        r_best = rc;
    }
    secant(best);
    return finish(best, r_best, "cmaes");
}

namespace {

struct Sweep {
    std::vector<std::size_t> order;  // outermost first
};

std::vector<Sweep> sweeps(std::span<const double> grid) {
    Sweep neg, pos;
    for (std::size_t i = 0; i < grid.size(); ++i) (grid[i] < 0.0 ? neg : pos).order.push_back(i);
    std::sort(neg.order.begin(), neg.order.end(), [&](auto a, auto b) { return grid[a] < grid[b]; });
    std::sort(pos.order.begin(), pos.order.end(), [&](auto a, auto b) { return grid[a] > grid[b]; });
    return {neg, pos};
}

using SigmaFactory = std::function<SelfEnergy()>;

// Runs the epsilon continuation along one sweep.
void run_sweep(const Sweep& sweep, std::span<const double> grid, const SelfEnergy& sigma, const SolverSettings& s,
               ResolventSolution& out, const std::function<void(std::size_t, Complex, PointDiagnostics&)>& post) {
    const auto& eps = s.epsilon_schedule;
    std::optional<Complex> neighbour;
    for (std::size_t idx : sweep.order) {
        const double lambda = grid[idx];
        PointDiagnostics diag;
        Complex g;
        double dos_prev = std::numeric_limits<double>::quiet_NaN();
        double dos_last = dos_prev;
        Complex first_g;
        for (std::size_t e = 0; e < eps.size(); ++e) {
            const Complex z(lambda, eps[e]);
            const Complex start = e == 0 ? neighbour.value_or(1.0 / z) : g;
            PointDiagnostics step;
            g = solve_point(sigma, z, start, s, step);
            if (!step.converged && e == 0 && neighbour) {
                // Cold restart from the free locator before giving up.
                PointDiagnostics retry;
                const Complex g2 = solve_point(sigma, z, 1.0 / z, s, retry);
                if (retry.converged) {
                    g = g2;
                    step = retry;
                }
            }
            diag.evaluations += step.evaluations;
            diag.residual = step.residual;
            diag.method = step.method;
            diag.converged = step.converged;
            if (e == 0) first_g = g;
            dos_prev = dos_last;
            dos_last = -g.imag() / std::numbers::pi;
        }
        if (eps.size() == 1) {
            diag.dos_change = 0.0;
            diag.stable = true;
        } else {
            diag.dos_change = std::fabs(dos_last - dos_prev) / std::max(std::fabs(dos_last), 1e-300);
            diag.stable = diag.dos_change < s.stability_tolerance;
        }
        if (!diag.converged) diag.flag = "non-convergence";
        else if (!diag.stable) diag.flag = "epsilon-unstable";
        if (post) post(idx, g, diag);
        out.g_values[idx] = g;
        out.dos[idx] = -g.imag() / std::numbers::pi;
        out.diagnostics[idx] = diag;
        neighbour = first_g;
    }
}

ResolventSolution solve_with(std::span<const double> grid, const SolverSettings& s, const SelfEnergy& sigma,
                             const std::function<void(std::size_t, Complex, PointDiagnostics&)>& post) {
    s.validate();
    ResolventSolution out;
    out.lambda_grid.assign(grid.begin(), grid.end());
    out.epsilon = s.epsilon_schedule.back();
    out.g_values.assign(grid.size(), 0.0);
    out.dos.assign(grid.size(), 0.0);
    out.diagnostics.assign(grid.size(), {});
    for (const auto& sw : sweeps(grid)) run_sweep(sw, grid, sigma, s, out, post);
    return out;
}

}  // namespace

ResolventSolution solve_low(int order, double rb, std::span<const double> grid, const SolverSettings& s) {
    if (order != 1 && order != 2) throw std::invalid_argument("solve_low: order must be 1 or 2");
    if (!(rb >= 0.0)) throw std::invalid_argument("solve_low: r_b must be >= 0");

    std::shared_ptr<F2Integrator> f2;
    if (order == 2 && rb > 0.0) f2 = std::make_shared<F2Integrator>(rb, s.f2);
    const Execution exec = s.exec;
    SelfEnergy sigma = [=](Complex g) {
        Complex v = rb == 0.0 && g.imag() >= 0.0 ? Complex(std::numeric_limits<double>::quiet_NaN()) : f1(g, rb);
        if (order == 2) v += rb == 0.0 ? kF2Constant * g * g : f2->evaluate(g, exec).value;
        return v;
    };

    auto post = [&](std::size_t idx, Complex g, PointDiagnostics& d) {
        const Complex z(grid[idx], s.epsilon_schedule.back());
        if (rb > 0.0) {
            // Branch monitor: compare the closed form with the orientation integral.
            const Complex a = f1(g, rb), b = f1_integral(g, rb);
            if (std::abs(a - b) > 1e-6 * std::max(1.0, std::abs(b))) {
                SelfEnergy alt = [&](Complex x) {
                    Complex v = f1_integral(x, rb);
                    if (order == 2) v += f2->evaluate(x, exec).value;
                    return v;
                };
                PointDiagnostics redo;
                const Complex g2 = solve_point(alt, z, g, s, redo);
                d.flag = d.flag.empty() ? "f1-branch" : d.flag + ";f1-branch";
                if (redo.converged && g2.imag() <= 0.0) d.alternate_root = g2;
            }
        }
        if (order == 2 && rb == 0.0) {
            // The equation is quadratic: c G^2 - (z + i pi) G + 1 = 0.
            const Complex c = kF2Constant, bq = -(z + kI * kPi);
            const Complex disc = std::sqrt(bq * bq - 4.0 * c);
            const Complex r1 = (-bq + disc) / (2.0 * c), r2 = (-bq - disc) / (2.0 * c);
            const Complex other = std::abs(r1 - g) > std::abs(r2 - g) ? r1 : r2;
            if (other.imag() <= 0.0 && std::abs(other - g) > 1e-6 * std::abs(g)) {
                d.alternate_root = other;
                d.flag = d.flag.empty() ? "multi-root" : d.flag + ";multi-root";
            }
        }
    };

    ResolventSolution out = solve_with(grid, s, sigma, post);
    out.method = order == 1 ? "low-1" : "low-2";
    out.blockade_radius = rb;
    return out;
}

ResolventSolution solve_high(double rb, std::span<const double> grid, const SolverSettings& s) {
    if (!(rb > 0.0)) throw std::domain_error("solve_high: r_b must be > 0");
    const HighConcentrationKernel kernel(rb, s.high);
    const Execution exec = s.exec;
    SelfEnergy sigma = [&](Complex g) { return g * kernel.evaluate(g, exec).rhs; };
    auto post = [&](std::size_t, Complex g, PointDiagnostics& d) {
        if (kernel.evaluate(g, exec).tail_fraction > 0.01) d.flag = d.flag.empty() ? "k-tail" : d.flag + ";k-tail";
    };
    ResolventSolution out = solve_with(grid, s, sigma, post);
    out.method = "high";
    out.blockade_radius = rb;
    return out;
}

std::vector<double> dos_from_resolvent(const ResolventSolution& sol) {
    std::vector<double> d;
    d.reserve(sol.g_values.size());
    for (const auto& g : sol.g_values) d.push_back(std::max(0.0, -g.imag() / std::numbers::pi));
    return d;
}

std::vector<double> default_lambda_grid(double rb, double half_range) {
    double l = half_range;
    if (!(l > 0.0)) {
        if (rb <= 0.0) {
            l = 50.0;
        } else {
            const double bound = 2.0 * kCouplingConstant / (3.0 * rb * rb * rb);
            l = std::clamp(2.0 * bound, 8.0, 50.0);
        }
    }
    const double core = std::min(l, 5.0);
    std::vector<double> grid;
    const int steps = static_cast<int>(std::lround(core / 0.05));
    for (int k = -steps; k <= steps; ++k) grid.push_back(0.05 * k);
    if (l > core) {
        const int per_side = 40;
        for (int k = 1; k <= per_side; ++k) {
            const double x = core * std::pow(l / core, static_cast<double>(k) / per_side);
            grid.push_back(x);
            grid.push_back(-x);
        }
    }
    std::sort(grid.begin(), grid.end());
    return grid;
}

double integrate_dos(const ResolventSolution& sol) {
    std::vector<std::size_t> idx(sol.lambda_grid.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return sol.lambda_grid[a] < sol.lambda_grid[b]; });
    const auto dos = dos_from_resolvent(sol);
    double sum = 0.0;
    for (std::size_t k = 1; k < idx.size(); ++k)
        sum += 0.5 * (dos[idx[k]] + dos[idx[k - 1]]) * (sol.lambda_grid[idx[k]] - sol.lambda_grid[idx[k - 1]]);
    return sum;
}

double curve_quantile(std::span<const double> x, std::span<const double> density, double p) {
    if (x.size() != density.size() || x.size() < 2) throw std::invalid_argument("curve_quantile: bad curve");
    std::vector<double> cum(x.size(), 0.0);
    for (std::size_t k = 1; k < x.size(); ++k) cum[k] = cum[k - 1] + 0.5 * (density[k] + density[k - 1]) * (x[k] - x[k - 1]);
    const double target = p * cum.back();
    for (std::size_t k = 1; k < x.size(); ++k) {
        if (cum[k] >= target) {
            // density linear on the segment, so the cumulative is quadratic
            const double h = x[k] - x[k - 1], d0 = density[k - 1], d1 = density[k];
            const double need = target - cum[k - 1];
            const double a = 0.5 * (d1 - d0) / h;
            double t;
            if (std::fabs(a) * h < 1e-12 * std::max(std::fabs(d0), 1e-300))
                t = d0 > 0.0 ? need / d0 : 0.0;
            else
                t = (-d0 + std::sqrt(std::max(0.0, d0 * d0 + 4.0 * a * need))) / (2.0 * a);
            return x[k - 1] + std::clamp(t, 0.0, h);
        }
    }
    return x.back();
}

}  // namespace rydspec
