#include "sfs/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sfs/error.hpp"

namespace sfs {

int sturm_count(const SymTridiagonal& t, double x) {
    const int n = t.size();
    constexpr double kTiny = std::numeric_limits<double>::min();
    int count = 0;
    double q = t.diag[0] - x;
    for (int i = 0;; ++i) {
        if (q == 0.0) q = -kTiny;
        if (q < 0.0) ++count;
        if (i + 1 == n) break;
        q = t.diag[i + 1] - x - t.off[i] * t.off[i] / q;
    }
    return count;
}

Interval gershgorin(const SymTridiagonal& t) {
    const int n = t.size();
    Interval g{std::numeric_limits<double>::max(), std::numeric_limits<double>::lowest()};
    for (int i = 0; i < n; ++i) {
        double radius = 0.0;
        if (i > 0) radius += std::abs(t.off[i - 1]);
        if (i + 1 < n) radius += std::abs(t.off[i]);
        g.lo = std::min(g.lo, t.diag[i] - radius);
        g.hi = std::max(g.hi, t.diag[i] + radius);
    }
    const double pad = 1e-14 * std::max({1.0, std::abs(g.lo), std::abs(g.hi)});
    return {g.lo - pad, g.hi + pad};
}

namespace {

double bisect_one(const SymTridiagonal& t, int index, Interval bounds, double tol) {
    double lo = bounds.lo;
    double hi = bounds.hi;
    for (int iter = 0; iter < 400; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (hi - lo <= tol * std::max(1.0, std::abs(mid)) || mid <= lo || mid >= hi) break;
        if (sturm_count(t, mid) > index)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

std::vector<double> bisect_eigenvalues(const SymTridiagonal& t, int first, int count,
                                       double tol, Exec exec) {
    if (first < 0 || count < 0 || first + count > t.size())
        throw DomainError("bisect_eigenvalues: index range outside the spectrum");
    const Interval bounds = gershgorin(t);
    std::vector<double> out(count);
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 1)
        for (int j = 0; j < count; ++j) out[j] = bisect_one(t, first + j, bounds, tol);
    } else {
        for (int j = 0; j < count; ++j) out[j] = bisect_one(t, first + j, bounds, tol);
    }
    return out;
}

std::vector<double> multiply(const SymTridiagonal& t, const std::vector<double>& x) {
    const int n = t.size();
    std::vector<double> y(n);
    for (int i = 0; i < n; ++i) {
        double s = t.diag[i] * x[i];
        if (i > 0) s += t.off[i - 1] * x[i - 1];
        if (i + 1 < n) s += t.off[i] * x[i + 1];
        y[i] = s;
    }
    return y;
}

namespace {

/// LU with partial pivoting of T - shift I (tridiagonal, so U gains one
/// extra superdiagonal).
class ShiftedTridiagonalLU {
public:
    ShiftedTridiagonalLU(const SymTridiagonal& t, double shift) : n_(t.size()) {
        d_.resize(n_);
        u1_.assign(n_, 0.0);
        u2_.assign(n_, 0.0);
        l_.assign(n_, 0.0);
        swapped_.assign(n_, false);
        const double scale = std::max(std::abs(gershgorin(t).lo), std::abs(gershgorin(t).hi));
        const double floor = std::numeric_limits<double>::epsilon() * std::max(scale, 1.0);

        std::vector<double> diag(n_), sub(n_, 0.0), sup(n_, 0.0);
        for (int i = 0; i < n_; ++i) diag[i] = t.diag[i] - shift;
        for (int i = 0; i + 1 < n_; ++i) sub[i] = sup[i] = t.off[i];

        // Row i holds (diag[i], sup[i], sup2[i]) after elimination.
        std::vector<double> sup2(n_, 0.0);
        for (int i = 0; i + 1 < n_; ++i) {
            if (std::abs(sub[i]) > std::abs(diag[i])) {
                // swap rows i and i+1
                swapped_[i] = true;
                std::swap(diag[i], sub[i]);
                std::swap(sup[i], diag[i + 1]);
                std::swap(sup2[i], sup[i + 1]);
            }
            if (diag[i] == 0.0) diag[i] = floor;
            const double m = sub[i] / diag[i];
            l_[i] = m;
            diag[i + 1] -= m * sup[i];
            if (i + 1 < n_ - 1) sup[i + 1] -= m * sup2[i];
        }
        if (diag[n_ - 1] == 0.0) diag[n_ - 1] = floor;
        d_ = diag;
        u1_ = sup;
        u2_ = sup2;
    }

    std::vector<double> solve(std::vector<double> b) const {
        for (int i = 0; i + 1 < n_; ++i) {
            if (swapped_[i]) std::swap(b[i], b[i + 1]);
            b[i + 1] -= l_[i] * b[i];
        }
        for (int i = n_ - 1; i >= 0; --i) {
            double s = b[i];
            if (i + 1 < n_) s -= u1_[i] * b[i + 1];
            if (i + 2 < n_) s -= u2_[i] * b[i + 2];
            b[i] = s / d_[i];
        }
        return b;
    }

private:
    int n_;
    std::vector<double> d_, u1_, u2_, l_;
    std::vector<bool> swapped_;
};

void normalize(std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    const double inv = 1.0 / std::sqrt(s);
    for (double& x : v) x *= inv;
}

}  // namespace

std::vector<double> inverse_iteration(const SymTridiagonal& t, double eigenvalue, int iterations) {
    const int n = t.size();
    if (n == 1) return {1.0};
    const ShiftedTridiagonalLU lu(t, eigenvalue);
    // Deterministic start vector with components in every eigendirection.
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = 1.0 + 0.5 * std::sin(0.7 * i + 0.3);
    normalize(v);
    for (int it = 0; it < iterations; ++it) {
        v = lu.solve(v);
        normalize(v);
    }
    return v;
}

}  // namespace sfs
