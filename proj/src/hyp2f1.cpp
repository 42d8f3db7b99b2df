#include "rydspec/hyp2f1.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace rydspec {

namespace {

struct Triple {
    long double a, b, c;
};

Triple params(Hyp2f1Case c) {
    if (c == Hyp2f1Case::outer) return {-1.0L / 6.0L, 1.0L, 1.0L / 3.0L};
    return {-2.0L / 3.0L, 0.5L, 1.0L / 3.0L};
}

[[noreturn]] void fail(long double x, const char* why) {
    std::ostringstream os;
    os.precision(17);
    os << "hyp2f1: " << why << " at x = " << static_cast<double>(x);
    throw std::domain_error(os.str());
}

}  // namespace

long double hyp2f1_series(long double a, long double b, long double c, long double x) {
    if (!(std::fabs(x) < 1.0L)) fail(x, "series outside unit disc");
    long double term = 1.0L, sum = 1.0L;
    for (int k = 0; k < 20000; ++k) {
        term *= (a + k) * (b + k) / ((c + k) * (k + 1)) * x;
        sum += term;
        if (term == 0.0L) return sum;
        if (std::fabs(term) <= 1e-21L * std::fabs(sum) && k > 4) return sum;
    }
    fail(x, "series did not converge");
}

long double hyp2f1_special(Hyp2f1Case which, long double x) {
    const auto [a, b, c] = params(which);
    if (!std::isfinite(x) || x < -2.0L - 1e-12L || x > 1.0L) fail(x, "argument outside [-2, 1]");
    if (std::fabs(x) < 0.9L) return hyp2f1_series(a, b, c, x);
    if (x < 0.0L) {
        // Pfaff: F(a,b;c;x) = (1-x)^{-a} F(a, c-b; c; x/(x-1)).
        return std::pow(1.0L - x, -a) * hyp2f1_series(a, c - b, c, x / (x - 1.0L));
    }
    // Connection to 1 - x; c - a - b is a half-integer for both cases.
    const long double y = 1.0L - x;
    const long double s = c - a - b;
    const long double g1 = std::tgamma(c) * std::tgamma(s) / (std::tgamma(c - a) * std::tgamma(c - b));
    const long double g2 = std::tgamma(c) * std::tgamma(-s) / (std::tgamma(a) * std::tgamma(b));
    if (y == 0.0L) {
        if (s > 0.0L) return g1;
        fail(x, "singular point");
    }
    return g1 * hyp2f1_series(a, b, 1.0L - s, y) + std::pow(y, s) * g2 * hyp2f1_series(c - a, c - b, 1.0L + s, y);
}

double hyp2f1_special(Hyp2f1Case c, double x) {
    return static_cast<double>(hyp2f1_special(c, static_cast<long double>(x)));
}

}  // namespace rydspec
