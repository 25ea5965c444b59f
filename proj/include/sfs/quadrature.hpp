#pragma once

#include <functional>
#include <vector>

namespace sfs {

/// Gauss–Legendre rule on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const { return nodes.size(); }
};

/// Nodes and weights of the n-point Gauss–Legendre rule (Newton iteration on
/// P_n from the Chebyshev initial guess).  Results are cached per n.
const GaussRule& gauss_legendre(int n);

/// Applies a rule to f on [a, b].
double integrate(const GaussRule& rule, const std::function<double(double)>& f,
                 double a, double b);

/// Adaptive Gauss–Legendre: bisects until 20-point and split 20-point
/// estimates agree to rel_tol.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol = 1e-12, int max_depth = 40);

}  // namespace sfs
