#pragma once

#include <optional>
#include <vector>

namespace sfs {

/// Clamped cubic spline through (x_i, y_i) in Hermite form.  When an end
/// slope is not supplied it is taken from a fourth-order one-sided
/// difference of the data, which assumes locally uniform spacing.
class CubicSpline {
public:
    CubicSpline() = default;
    CubicSpline(std::vector<double> x, std::vector<double> y,
                std::optional<double> left_slope = std::nullopt,
                std::optional<double> right_slope = std::nullopt);

    double value(double x) const;
    double derivative(double x) const;

    double front() const { return x_.front(); }
    double back() const { return x_.back(); }
    const std::vector<double>& knots() const { return x_; }
    const std::vector<double>& values() const { return y_; }

private:
    std::size_t segment(double x) const;

    std::vector<double> x_;
    std::vector<double> y_;
    std::vector<double> slope_;
};

}  // namespace sfs
