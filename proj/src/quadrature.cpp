#include "sfs/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace sfs {

namespace {

struct LegendreValue {
    double p;
    double dp;
};

LegendreValue legendre(int n, double x) {
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
    }
    return {p1, n * (x * p1 - p0) / (x * x - 1.0)};
}

GaussRule build_rule(int n) {
    GaussRule rule;
    rule.nodes.assign(n, 0.0);
    rule.weights.assign(n, 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        for (int iter = 0; iter < 100; ++iter) {
            const LegendreValue v = legendre(n, x);
            const double dx = v.p / v.dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const double dp = legendre(n, x).dp;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
    static std::mutex mutex;
    static std::map<int, GaussRule> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, build_rule(n)).first;
    return it->second;
}

double integrate(const GaussRule& rule, const std::function<double(double)>& f,
                 double a, double b) {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double s = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) s += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return half * s;
}

namespace {

double adapt(const GaussRule& rule, const std::function<double(double)>& f, double a,
             double b, double whole, double abs_tol, int depth) {
    const double mid = 0.5 * (a + b);
    const double left = integrate(rule, f, a, mid);
    const double right = integrate(rule, f, mid, b);
    const double split = left + right;
    if (depth <= 0 || std::abs(split - whole) <= abs_tol) return split;
    return adapt(rule, f, a, mid, left, 0.5 * abs_tol, depth - 1) +
           adapt(rule, f, mid, b, right, 0.5 * abs_tol, depth - 1);
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol, int max_depth) {
    const GaussRule& rule = gauss_legendre(20);
    const double whole = integrate(rule, f, a, b);
    const double scale = std::max(std::abs(whole), 1e-300);
    return adapt(rule, f, a, b, whole, rel_tol * scale, max_depth);
}

}  // namespace sfs
