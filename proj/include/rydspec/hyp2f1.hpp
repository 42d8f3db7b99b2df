#pragma once

namespace rydspec {

// The two Gauss hypergeometric functions that appear in the coupling density.
enum class Hyp2f1Case {
    outer,  // 2F1(-1/6, 1; 1/3; x)
    inner,  // 2F1(-2/3, 1/2; 1/3; x)
};

// Valid for x in [-2, 1) (plus x = 1 for the inner case, where it is finite).
// Power series for |x| < 0.9, Pfaff transformation below -0.9 and the
// connection formula around x = 1 above 0.9. Throws std::domain_error with
// the argument if a series fails to converge.
double hyp2f1_special(Hyp2f1Case c, double x);
long double hyp2f1_special(Hyp2f1Case c, long double x);

// Plain Gauss series, |x| < 1. Exposed for cross-checks.
long double hyp2f1_series(long double a, long double b, long double c, long double x);

}  // namespace rydspec
