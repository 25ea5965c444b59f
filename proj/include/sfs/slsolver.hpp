#pragma once

#include <string_view>
#include <vector>

#include "sfs/exec.hpp"
#include "sfs/spaceform.hpp"
#include "sfs/spline.hpp"
#include "sfs/tridiagonal.hpp"

namespace sfs {

enum class BoundaryCondition { Neumann, Dirichlet };

std::string_view to_string(BoundaryCondition bc);
BoundaryCondition parse_boundary_condition(std::string_view name);

/// Radial eigenproblem for angular mode k on [r1, r2]:
///   -(w u')' + k(k+n-2)/sin_m^2 * w u = mu * w u,   w = sin_m^{n-1}.
/// With r1 = 0 the inner boundary condition is replaced by regularity at
/// the pole: zero flux for k = 0, u(0) = 0 for k >= 1.
struct SLProblem {
    SpaceForm form = SpaceForm::Euclidean;
    int n = 2;
    int k = 0;
    double r1 = 0.0;
    double r2 = 1.0;
    BoundaryCondition bc = BoundaryCondition::Neumann;

    /// k(k+n-2), the eigenvalue of the degree-k spherical harmonics.
    double angular_eigenvalue() const { return static_cast<double>(k) * (k + n - 2); }
    void validate() const;
};

struct SolverConfig {
    int grid_points = 2048;  ///< number of uniform cells of the coarse grid
    bool richardson = true;  ///< extrapolate eigenvalues from grids N and 2N
    double eig_tol = 1e-12;  ///< bisection bracket width (relative above 1)
    int max_j = 6;
    bool regular_origin = true;  ///< impose u(0) = 0 for k >= 1 when r1 = 0
    Exec exec = Exec::Parallel;

    void validate() const;
};

struct SLEigenpair {
    double eigenvalue = 0.0;
    int j = 1;  ///< 1-based position in the increasing sequence
    int k = 0;
    BoundaryCondition bc = BoundaryCondition::Neumann;
    std::vector<double> grid;    ///< every node r_0 = r1, ..., r_N = r2
    std::vector<double> values;  ///< u(r_i), normalised: int u^2 sin_m^{n-1} dr = 1
    bool simple = true;          ///< gap to neighbours exceeds 1e3 * eig_tol
};

/// Flux-form discretisation: K u = mu M u with tridiagonal K and diagonal M
/// restricted to the unknown nodes.
struct DiscreteSL {
    std::vector<double> grid;       ///< all nodes
    int first_unknown = 0;          ///< index into grid of the first retained node
    std::vector<double> k_diag;     ///< stiffness diagonal (retained nodes)
    std::vector<double> k_off;      ///< stiffness off-diagonal
    std::vector<double> mass;       ///< lumped mass (retained nodes)
    std::vector<double> conductance;  ///< w(r_{i+1/2}) / h per cell, full grid
    std::vector<double> reaction;     ///< k(k+n-2)/sin_m^2 * mass per node, full grid
    std::vector<double> full_mass;    ///< lumped mass per node, full grid

    int unknowns() const { return static_cast<int>(mass.size()); }
    /// M^{-1/2} K M^{-1/2}
    SymTridiagonal symmetric_form() const;
    /// Full-grid nodal values u = M^{-1/2} v of a symmetric-form vector.
    std::vector<double> nodal_values(const std::vector<double>& v) const;
    /// u^T K u / u^T M u evaluated in difference form (no cancellation
    /// between diagonal and off-diagonal stiffness terms).
    double rayleigh(const std::vector<double>& nodal) const;
};

DiscreteSL discretize(const SLProblem& problem, const SolverConfig& config);

/// First config.max_j eigenpairs in increasing order.
std::vector<SLEigenpair> solve(const SLProblem& problem, const SolverConfig& config = {});

/// Eigenvalues only, on a single grid of `cells` cells (no extrapolation).
std::vector<double> discrete_eigenvalues(const SLProblem& problem, int cells, int count,
                                         double eig_tol = 1e-12, Exec exec = Exec::Parallel);

/// Spline interpolant of an eigenfunction using the exact end slopes
/// where the boundary condition provides one.
CubicSpline interpolate(const SLEigenpair& pair, const SLProblem& problem);

/// Rayleigh quotient int (u'^2 + k(k+n-2)/sin_m^2 u^2) w / int u^2 w of the
/// interpolated eigenfunction, integrated cell-wise by Gauss–Legendre.
double rayleigh_quotient(const SLEigenpair& pair, const SLProblem& problem);

/// Point b in (r1, r2) with mu_{k,1} = k(k+n-2) / sin_m^2(b).
double locate_b(const SLEigenpair& pair, const SLProblem& problem);

/// Number of sign changes of the sampled eigenfunction, ignoring samples
/// below 1e-10 of the maximum modulus.
int sign_changes(const SLEigenpair& pair);

/// The (k,1) Neumann eigenfunction on [r1, r2] continued by the constant
/// u(r2) for r > r2.
class ExtendedEigenfunction {
public:
    ExtendedEigenfunction(const SLEigenpair& pair, const SLProblem& problem, double r_max);

    double value(double r) const;
    double derivative(double r) const;

    double inner_radius() const { return r1_; }
    double outer_radius() const { return r2_; }
    double max_radius() const { return r_max_; }

private:
    void check(double r) const;

    CubicSpline spline_;
    double r1_;
    double r2_;
    double r_max_;
};

ExtendedEigenfunction extend_gk(const SLEigenpair& pair, const SLProblem& problem, double r_max);

}  // namespace sfs
