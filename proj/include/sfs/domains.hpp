#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "sfs/exec.hpp"
#include "sfs/report.hpp"
#include "sfs/slsolver.hpp"
#include "sfs/spaceform.hpp"

namespace sfs {

/// Symmetry class of a domain with respect to the base point, stated in
/// geodesic normal coordinates: invariance under X -> -X (Central), under
/// the half turns (Order2) or the quarter turns (Order4) of every
/// coordinate plane.
enum class Symmetry { None, Central, Order2, Order4 };

std::string_view to_string(Symmetry s);
Symmetry parse_symmetry(std::string_view name);
/// Rotation order s of the class: 1 (None), 2 (Central, Order2), 4 (Order4).
int rotation_order(Symmetry s);

/// n = 2 boundary mode a cos(m theta) + b sin(m theta).
struct Harmonic {
    int m = 0;
    double a = 0.0;
    double b = 0.0;
};

/// n = 3 boundary term c * w1^p1 w2^p2 w3^p3 of the unit direction w; with
/// `permute` the term is summed over the distinct permutations of the
/// exponents.
struct DirectionalTerm {
    std::array<int, 3> powers{};
    double c = 0.0;
    bool permute = false;
};

/// Star-shaped radial boundary r = rho(w) over directions w in S^{n-1}.
struct BoundaryProfile {
    double base = 1.0;
    std::vector<Harmonic> harmonics;     ///< n = 2
    std::vector<DirectionalTerm> terms;  ///< n = 3

    double operator()(std::span<const double> direction) const;
    double at_angle(double theta) const;  ///< n = 2 shortcut
    bool is_constant() const { return harmonics.empty() && terms.empty(); }
};

/// Omega = Omega_out \ closure(Omega_in) in geodesic polar coordinates around
/// the base point; rho_in absent means Omega_in is empty.
struct DomainSpec {
    SpaceForm form = SpaceForm::Euclidean;
    int n = 2;
    Symmetry symmetry = Symmetry::None;
    BoundaryProfile rho_out;
    std::optional<BoundaryProfile> rho_in;

    double outer(std::span<const double> direction) const { return rho_out(direction); }
    double inner(std::span<const double> direction) const {
        return rho_in ? (*rho_in)(direction) : 0.0;
    }
    bool has_hole() const { return rho_in.has_value(); }

    /// Checks n, 0 < rho_in < rho_out, the hemisphere bound on the sphere,
    /// harmonic compatibility and (unless disabled) the declared symmetry
    /// on a dense sample to 1e-12.
    void validate(bool check_symmetry = true) const;

    /// Largest ball around the base point inside Omega_in (0 without hole).
    double inscribed_inner_radius() const;
    double sup_outer() const;

    static DomainSpec annulus(SpaceForm form, int n, double r1, double r2);
    static DomainSpec ball(SpaceForm form, int n, double radius);
};

/// Dense deterministic direction sample used for validation and extrema.
std::vector<std::vector<double>> sample_directions(int n, int count);

/// Angular ray of the tensor quadrature: unit direction and the measure of
/// its solid-angle cell.
struct Ray {
    std::vector<double> direction;
    double weight = 0.0;
    double inner = 0.0;
    double outer = 0.0;
};

struct QuadratureOptions {
    int radial = 64;   ///< Gauss–Legendre nodes per radial segment
    int angular = 256; ///< trapezoid nodes in the periodic angle
    int polar = 64;    ///< Gauss–Legendre nodes in the polar angle (n = 3)
};

struct QuadratureGrid {
    int n = 2;
    QuadratureOptions options;
    std::vector<Ray> rays;
};

QuadratureGrid make_grid(const DomainSpec& spec, const QuadratureOptions& options = {});

/// One quadrature node: geodesic radius, normal coordinates and dV weight.
struct QuadratureNode {
    double r;
    std::span<const double> x;
    double weight;
};

/// Per-ray accumulation of `count` integrands and of their absolute values.
/// Radial segments are split at `breakpoints`.  Ray sums are combined by a
/// pairwise reduction, so the result does not depend on the thread count
/// and matches the serial reference bit for bit.
struct IntegralSet {
    std::vector<double> values;
    std::vector<double> magnitudes;  ///< integrals of |f|
};

using NodeIntegrand = std::function<void(const QuadratureNode&, std::span<double>)>;

IntegralSet integrate_domain(const DomainSpec& spec, const QuadratureGrid& grid, int count,
                             const NodeIntegrand& integrand,
                             std::span<const double> breakpoints = {},
                             Exec exec = Exec::Parallel);

/// Radial profile g(r) with derivative and optional kink locations.
struct RadialFunction {
    std::function<double(double)> value;
    std::function<double(double)> derivative;
    std::vector<double> breakpoints;

    static RadialFunction constant(double c);
    static RadialFunction from(const ExtendedEigenfunction& g);
};

double volume(const DomainSpec& spec, const QuadratureGrid& grid, Exec exec = Exec::Parallel);

struct MomentResult {
    double value = 0.0;
    double scale = 0.0;  ///< integral of the absolute integrand

    double relative() const { return scale > 0.0 ? std::abs(value) / scale : std::abs(value); }
};

/// int_Omega g(r) prod_i X_i^{powers[i]} dV.
MomentResult integrate_moment(const DomainSpec& spec, const QuadratureGrid& grid,
                              const RadialFunction& g, std::span<const int> powers,
                              Exec exec = Exec::Parallel);

/// <grad(g X_i), grad(g X_j)> in closed form at a point with |X| = r.
double grad_pair_density(SpaceForm form, double r, double g, double dg, double xi, double xj);
/// |grad(g X_i / r)|^2 in closed form.
double grad_norm_density(SpaceForm form, double r, double g, double dg, double xi);

/// int_Omega <grad(g X_i), grad(g X_j)> dV for i != j (0-based axes).  The
/// scale integrates the magnitudes of the radial and angular terms separately.
MomentResult grad_pair_integral(const DomainSpec& spec, const QuadratureGrid& grid,
                                const RadialFunction& g, int i, int j,
                                Exec exec = Exec::Parallel);

/// Quotient int (G'^2 + k(k+n-2)/sin_m^2 G^2) / int G^2 over Omega, where G
/// is the (k,1) Neumann eigenfunction of the comparison annulus continued
/// constantly past r2.  Requires vol(Omega) = vol(annulus) to 1e-8 and the
/// inner ball inside the hole.
double rayleigh_gk(const DomainSpec& spec, const QuadratureGrid& grid, int k,
                   const SLEigenpair& pair, const SLProblem& problem,
                   Exec exec = Exec::Parallel);

struct IdentityResidual {
    double max_residual = 0.0;
    int nodes = 0;
};

/// Pointwise check over all quadrature nodes of
///   sum_i |grad(G X_i / r)|^2 = G'^2 + (n-1) G^2 / sin_m^2.
IdentityResidual sum_gradient_identity_check(const DomainSpec& spec, const QuadratureGrid& grid,
                                             const SLEigenpair& pair, const SLProblem& problem);

/// Vanishing / equality integrals implied by a symmetry class, each as a
/// relative residual |value| / int |integrand|.  `as_class` may differ from
/// the declared class (negative controls).
std::vector<CheckResult> orthogonality_checks(const DomainSpec& spec, const QuadratureGrid& grid,
                                              const RadialFunction& g, Symmetry as_class,
                                              double tolerance = 1e-10,
                                              Exec exec = Exec::Parallel);

/// Random star-shaped domain of the given class.  The boundary perturbation
/// is at most `amplitude` times the gap width (or the radius for balls).
DomainSpec random_domain(SpaceForm form, int n, Symmetry symmetry, double amplitude, bool hole,
                         std::mt19937_64& rng);

}  // namespace sfs
