#pragma once

#include <cmath>
#include <functional>

// Bessel functions of the first kind by their power series, and roots by
// plain bisection.  Deliberately independent of the library.

namespace oracle {

/// J_nu(x) = sum_m (-1)^m (x/2)^(2m+nu) / (m! Gamma(m+nu+1)), for 0 <= x <= 20.
inline double bessel_j(double nu, double x) {
    long double term = std::pow(0.5L * x, nu) / std::tgamma(nu + 1.0L);
    long double sum = term;
    const long double q = -0.25L * x * x;
    for (int m = 1; m < 200; ++m) {
        term *= q / (m * (m + nu));
        sum += term;
        if (std::fabs(term) < 1e-22L * std::fabs(sum)) break;
    }
    return static_cast<double>(sum);
}

/// J_nu'(x) from J_{nu-1} - J_{nu+1}; J_0' = -J_1.
inline double bessel_j_prime(int nu, double x) {
    if (nu == 0) return -bessel_j(1, x);
    return 0.5 * (bessel_j(nu - 1, x) - bessel_j(nu + 1, x));
}

inline double bisect(const std::function<double(double)>& f, double a, double b) {
    double fa = f(a);
    for (int i = 0; i < 200 && b - a > 1e-16 * b; ++i) {
        const double m = 0.5 * (a + b);
        const double fm = f(m);
        if ((fm < 0) == (fa < 0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

/// j_{0,1} ~ 2.4048
inline double first_zero_j0() {
    return bisect([](double x) { return bessel_j(0, x); }, 2.0, 3.0);
}

/// j'_{1,1} ~ 1.8412
inline double first_zero_j1_prime() {
    return bisect([](double x) { return bessel_j_prime(1, x); }, 1.5, 2.2);
}

}  // namespace oracle
