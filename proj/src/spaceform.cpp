#include "sfs/spaceform.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sfs/error.hpp"
#include "sfs/quadrature.hpp"

namespace sfs {

namespace {

constexpr double kPi = std::numbers::pi;

void check_radius(SpaceForm form, double r) {
    if (!(r >= 0.0)) throw DomainError("negative geodesic radius");
    if (form == SpaceForm::Spherical && r > kPi) throw DomainError("spherical radius exceeds pi");
}

void check_annulus(SpaceForm form, int n, double r1, double r2) {
    if (n < 2) throw DomainError("dimension must be at least 2");
    if (!(r1 >= 0.0) || !(r2 > r1)) throw DomainError("annulus requires 0 <= r1 < r2");
    if (form == SpaceForm::Spherical && r2 > kPi / 2 + 1e-14)
        throw DomainError("spherical annulus must lie in the hemisphere r <= pi/2");
}

}  // namespace

std::string_view to_string(SpaceForm form) {
    switch (form) {
        case SpaceForm::Spherical: return "spherical";
        case SpaceForm::Euclidean: return "euclidean";
        case SpaceForm::Hyperbolic: return "hyperbolic";
    }
    return "unknown";
}

SpaceForm parse_space_form(std::string_view name) {
    if (name == "spherical" || name == "sphere" || name == "S") return SpaceForm::Spherical;
    if (name == "euclidean" || name == "flat" || name == "R") return SpaceForm::Euclidean;
    if (name == "hyperbolic" || name == "H") return SpaceForm::Hyperbolic;
    throw InputError("unknown space form '" + std::string(name) + "'");
}

double sin_m(SpaceForm form, double r) {
    check_radius(form, r);
    switch (form) {
        case SpaceForm::Spherical: return std::sin(r);
        case SpaceForm::Euclidean: return r;
        case SpaceForm::Hyperbolic: return std::sinh(r);
    }
    return 0.0;
}

double cos_m(SpaceForm form, double r) {
    check_radius(form, r);
    switch (form) {
        case SpaceForm::Spherical: return std::cos(r);
        case SpaceForm::Euclidean: return 1.0;
        case SpaceForm::Hyperbolic: return std::cosh(r);
    }
    return 0.0;
}

double sin_m_second(SpaceForm form, double r) {
    check_radius(form, r);
    switch (form) {
        case SpaceForm::Spherical: return -std::sin(r);
        case SpaceForm::Euclidean: return 0.0;
        case SpaceForm::Hyperbolic: return std::sinh(r);
    }
    return 0.0;
}

double unit_sphere_area(int n) {
    if (n < 1) throw DomainError("unit_sphere_area: n must be positive");
    return 2.0 * std::pow(kPi, 0.5 * n) / std::tgamma(0.5 * n);
}

double annulus_volume(SpaceForm form, int n, double r1, double r2) {
    check_annulus(form, n, r1, r2);
    const auto integrand = [form, n](double r) { return std::pow(sin_m(form, r), n - 1); };
    return unit_sphere_area(n) * integrate_adaptive(integrand, r1, r2, 1e-13);
}

double match_outer_radius(SpaceForm form, int n, double r1, double target_volume) {
    if (!(target_volume > 0.0)) throw DomainError("target volume must be positive");
    if (n < 2) throw DomainError("dimension must be at least 2");
    if (!(r1 >= 0.0)) throw DomainError("inner radius must be nonnegative");

    double lo = r1;
    double hi;
    if (form == SpaceForm::Spherical) {
        if (r1 >= kPi / 2) throw UnattainableVolumeError("inner radius already at the hemisphere");
        hi = kPi / 2;
        if (annulus_volume(form, n, r1, hi) < target_volume * (1.0 - 1e-12))
            throw UnattainableVolumeError(
                "volume exceeds the largest annulus inside the hemisphere r <= pi/2");
    } else {
        hi = r1 + 1.0;
        while (annulus_volume(form, n, r1, hi) < target_volume) {
            hi = r1 + 2.0 * (hi - r1);
            if (hi > 1e6) throw UnattainableVolumeError("target volume too large");
        }
    }
    // Bisection down to the floating-point resolution of the radius.
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (annulus_volume(form, n, r1, mid) < target_volume)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double NormalCoords::norm() const {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

NormalCoords to_normal_coords(const GeodesicPoint& point) {
    const int n = point.dim();
    if (n < 2) throw DomainError("normal coordinates need n >= 2");
    NormalCoords out;
    out.x.resize(n);
    double prod = point.r;  // r * sin(phi_2) * ... * sin(phi_i)
    for (int i = 0; i < n - 1; ++i) {
        out.x[i] = prod * std::cos(point.angles[i]);
        prod *= std::sin(point.angles[i]);
    }
    out.x[n - 1] = prod;
    return out;
}

GeodesicPoint from_normal_coords(const NormalCoords& coords) {
    const int n = coords.dim();
    if (n < 2) throw DomainError("normal coordinates need n >= 2");
    GeodesicPoint p;
    p.r = coords.norm();
    p.angles.assign(n - 1, 0.0);
    // tail[i] = |(X_i, ..., X_n)|
    std::vector<double> tail(n + 1, 0.0);
    for (int i = n - 1; i >= 0; --i) tail[i] = std::hypot(tail[i + 1], coords.x[i]);
    for (int i = 0; i < n - 2; ++i) {
        double phi = std::atan2(tail[i + 1], coords.x[i]);
        p.angles[i] = std::clamp(phi, 0.0, kPi);
    }
    double last = std::atan2(coords.x[n - 1], coords.x[n - 2]);
    if (last < 0.0) last += 2.0 * kPi;
    if (last >= 2.0 * kPi) last -= 2.0 * kPi;
    p.angles[n - 2] = last;
    return p;
}

GeodesicPoint from_normal_coords(const NormalCoords& coords, SpaceForm form) {
    if (form == SpaceForm::Spherical && !(coords.norm() < kPi))
        throw DomainError("normal coordinates outside the spherical chart |X| < pi");
    return from_normal_coords(coords);
}

NormalCoords rotate(const NormalCoords& coords, int i, int j, int quarter_turns) {
    const int n = coords.dim();
    if (i < 0 || j < 0 || i >= n || j >= n || i >= j)
        throw DomainError("rotate: axes must satisfy 0 <= i < j < n");
    NormalCoords out = coords;
    const double xi = coords.x[i];
    const double xj = coords.x[j];
    switch (((quarter_turns % 4) + 4) % 4) {
        case 0: break;
        case 1: out.x[i] = -xj, out.x[j] = xi; break;
        case 2: out.x[i] = -xi, out.x[j] = -xj; break;
        case 3: out.x[i] = xj, out.x[j] = -xi; break;
    }
    return out;
}

RadialWeight warping_weight(SpaceForm form) {
    return {[form](double r) { return sin_m(form, r); },
            [form](double r) { return cos_m(form, r); },
            [form](double r) { return sin_m_second(form, r); }};
}

double warped_product_residual(const RadialWeight& h, double r) {
    const double v = h.value(r);
    const double d = h.first(r);
    return v * h.second(r) - d * d + 1.0;
}

}  // namespace sfs
