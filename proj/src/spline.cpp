#include "sfs/spline.hpp"

#include <algorithm>
#include <stdexcept>

namespace sfs {

namespace {

double one_sided_slope(const std::vector<double>& x, const std::vector<double>& y, bool left) {
    const std::size_t n = x.size();
    if (n < 5) {
        return left ? (y[1] - y[0]) / (x[1] - x[0]) : (y[n - 1] - y[n - 2]) / (x[n - 1] - x[n - 2]);
    }
    if (left) {
        const double h = x[1] - x[0];
        return (-25.0 * y[0] + 48.0 * y[1] - 36.0 * y[2] + 16.0 * y[3] - 3.0 * y[4]) / (12.0 * h);
    }
    const double h = x[n - 1] - x[n - 2];
    return (25.0 * y[n - 1] - 48.0 * y[n - 2] + 36.0 * y[n - 3] - 16.0 * y[n - 4] + 3.0 * y[n - 5]) /
           (12.0 * h);
}

}  // namespace

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y,
                         std::optional<double> left_slope, std::optional<double> right_slope)
    : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 2 || y_.size() != n) throw std::invalid_argument("CubicSpline: need >= 2 matching points");
    slope_.assign(n, 0.0);
    slope_[0] = left_slope.value_or(one_sided_slope(x_, y_, true));
    slope_[n - 1] = right_slope.value_or(one_sided_slope(x_, y_, false));
    if (n == 2) return;

    // C2 continuity at interior knots: tridiagonal system in the slopes.
    const std::size_t m = n - 2;
    std::vector<double> sub(m), diag(m), sup(m), rhs(m);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double hl = x_[i] - x_[i - 1];
        const double hr = x_[i + 1] - x_[i];
        const std::size_t r = i - 1;
        sub[r] = 1.0 / hl;
        diag[r] = 2.0 / hl + 2.0 / hr;
        sup[r] = 1.0 / hr;
        rhs[r] = 3.0 * ((y_[i] - y_[i - 1]) / (hl * hl) + (y_[i + 1] - y_[i]) / (hr * hr));
    }
    rhs[0] -= sub[0] * slope_[0];
    rhs[m - 1] -= sup[m - 1] * slope_[n - 1];
    for (std::size_t r = 1; r < m; ++r) {
        const double w = sub[r] / diag[r - 1];
        diag[r] -= w * sup[r - 1];
        rhs[r] -= w * rhs[r - 1];
    }
    slope_[m] = rhs[m - 1] / diag[m - 1];
    for (std::size_t r = m - 1; r-- > 0;) slope_[r + 1] = (rhs[r] - sup[r] * slope_[r + 2]) / diag[r];
}

std::size_t CubicSpline::segment(double x) const {
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    std::size_t i = it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
    return std::min(i, x_.size() - 2);
}

double CubicSpline::value(double x) const {
    const std::size_t i = segment(x);
    const double h = x_[i + 1] - x_[i];
    const double t = (x - x_[i]) / h;
    const double t2 = t * t;
    const double t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * y_[i] + (t3 - 2 * t2 + t) * h * slope_[i] +
           (-2 * t3 + 3 * t2) * y_[i + 1] + (t3 - t2) * h * slope_[i + 1];
}

double CubicSpline::derivative(double x) const {
    const std::size_t i = segment(x);
    const double h = x_[i + 1] - x_[i];
    const double t = (x - x_[i]) / h;
    const double t2 = t * t;
    return ((6 * t2 - 6 * t) * y_[i] + (-6 * t2 + 6 * t) * y_[i + 1]) / h +
           (3 * t2 - 4 * t + 1) * slope_[i] + (3 * t2 - 2 * t) * slope_[i + 1];
}

}  // namespace sfs
