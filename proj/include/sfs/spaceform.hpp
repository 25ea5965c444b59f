#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace sfs {

/// The three simply connected space forms of curvature +1, 0, -1.
enum class SpaceForm { Spherical, Euclidean, Hyperbolic };

std::string_view to_string(SpaceForm form);
SpaceForm parse_space_form(std::string_view name);

/// Generalised sine: sin r, r or sinh r.  The warping function of the
/// metric dr^2 + sin_m(r)^2 g_{S^{n-1}} in geodesic polar coordinates.
double sin_m(SpaceForm form, double r);

/// d/dr sin_m: cos r, 1 or cosh r.
double cos_m(SpaceForm form, double r);

/// d^2/dr^2 sin_m: -sin r, 0 or sinh r.
double sin_m_second(SpaceForm form, double r);

/// Surface measure of the unit sphere S^{n-1} in R^n: 2 pi^{n/2} / Gamma(n/2).
double unit_sphere_area(int n);

/// Riemannian volume of the annulus r1 < r < r2 in the n-dimensional form.
double annulus_volume(SpaceForm form, int n, double r1, double r2);

/// Inverse of annulus_volume in the outer radius.
double match_outer_radius(SpaceForm form, int n, double r1, double target_volume);

/// Geodesic polar point: distance r from the base point and the angles
/// (phi_2, ..., phi_n) of the unit initial velocity.
struct GeodesicPoint {
    double r = 0.0;
    std::vector<double> angles;

    int dim() const { return static_cast<int>(angles.size()) + 1; }
};

/// Geodesic normal coordinates (X_1, ..., X_n) centred at the base point.
struct NormalCoords {
    std::vector<double> x;

    int dim() const { return static_cast<int>(x.size()); }
    double norm() const;
};

NormalCoords to_normal_coords(const GeodesicPoint& point);

/// Inverse chart.  phi_n is reported in [0, 2 pi), the interior angles in
/// [0, pi].  The overload taking a form also enforces the chart domain
/// (|X| < pi on the sphere).
GeodesicPoint from_normal_coords(const NormalCoords& coords);
GeodesicPoint from_normal_coords(const NormalCoords& coords, SpaceForm form);

/// Rotation by quarter_turns * (pi/2) in the (X_i, X_j) coordinate plane,
/// counter-clockwise; axes are 0-based.
NormalCoords rotate(const NormalCoords& coords, int i, int j, int quarter_turns);

/// Residual h h'' - (h')^2 + 1 of the warped-product ODE at r.  Vanishes
/// identically exactly for the three admissible weights sin_m.
struct RadialWeight {
    std::function<double(double)> value;
    std::function<double(double)> first;
    std::function<double(double)> second;
};

RadialWeight warping_weight(SpaceForm form);
double warped_product_residual(const RadialWeight& h, double r);

}  // namespace sfs
