#pragma once

// Piecewise double-exponential quadrature for test oracles. Copes with the
// integrable peaks of the coupling density at piece ends.

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <vector>

template <class F>
double integrate_pieces(F f, const std::vector<double>& cuts, double tol = 1e-12) {
    double s = 0.0;
    for (std::size_t i = 1; i < cuts.size(); ++i) {
        const double a = cuts[i - 1], b = cuts[i];
        if (std::isinf(b))
            s += boost::math::quadrature::exp_sinh<double>().integrate(f, a, b, tol);
        else if (std::isinf(a))
            s += boost::math::quadrature::exp_sinh<double>().integrate([&](double x) { return f(-x); }, -b, -a, tol);
        else
            s += boost::math::quadrature::tanh_sinh<double>().integrate(f, a, b, tol);
    }
    return s;
}
