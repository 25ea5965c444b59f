#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "sfs/domains.hpp"
#include "sfs/exec.hpp"
#include "sfs/report.hpp"
#include "sfs/slsolver.hpp"

namespace sfs {

struct MeshOptions {
    int base_radial = 8;      ///< radial cells at level 0
    int base_angular = 64;    ///< angular cells at level 0
    double pole_radius = 1e-3;
};

/// Structured triangulation of the chart image {rho_in(t) <= r <= rho_out(t)}
/// in (r, theta) coordinates, periodic in theta.  Vertex (i, j) sits at
/// theta_j = 2 pi j / angular and r = rho_in + (i / radial)(rho_out - rho_in).
struct PolarMesh {
    int level = 0;
    int radial = 0;
    int angular = 0;
    std::vector<double> r;
    std::vector<double> theta;
    std::vector<std::array<int, 3>> triangles;
    std::vector<std::array<int, 2>> boundary_edges;

    std::size_t vertex_count() const { return r.size(); }
    int index(int i, int j) const { return i * angular + ((j % angular) + angular) % angular; }
    /// Chart mesh size 2 pi / angular.
    double h() const;
    /// Signed chart area of triangle t with theta unwrapped across the seam.
    double chart_area(std::size_t t) const;
};

/// Throws DomainError when min(rho_out - rho_in) < 10 h or n != 2.
PolarMesh generate_mesh(const DomainSpec& spec, int level, const MeshOptions& options = {});

/// P1 stiffness and mass for the metric dr^2 + sin_m(r)^2 dtheta^2.
struct FemSystem {
    Eigen::SparseMatrix<double> stiffness;
    Eigen::SparseMatrix<double> mass;
};

/// Element matrices are computed independently (in parallel for
/// Exec::Parallel) and scattered in a fixed order, so both paths agree bit
/// for bit.
FemSystem assemble(const PolarMesh& mesh, SpaceForm form, Exec exec = Exec::Parallel);

struct EigenOptions {
    int count = 8;
    double tolerance = 1e-9;  ///< relative residual bound
    int max_iterations = 400;
    int dense_limit = 600;    ///< dense solver at or below this many unknowns
    double shift = -1.0;
};

struct EigenSolution {
    std::vector<double> values;
    Eigen::MatrixXd vectors;  ///< M-orthonormal, one column per value
    double residual = 0.0;  ///< worst |Ku - mu Mu| / max(|Ku|, |Mu|)
    int iterations = 0;
    bool dense = false;
};

/// Smallest `count` eigenvalues of K u = mu M u.  Dense reduction for small
/// systems, otherwise shift-invert block subspace iteration with
/// Rayleigh-Ritz.  Throws ConvergenceError when the residual bound fails.
EigenSolution eigensolve(const FemSystem& system, const EigenOptions& options = {},
                         const Eigen::MatrixXd* start = nullptr);

/// Bilinear transfer of nodal vectors from `coarse` to the next level.
Eigen::MatrixXd prolongate(const PolarMesh& coarse, const PolarMesh& fine, const Eigen::MatrixXd& v);

struct FemLevel {
    int level = 0;
    double h = 0.0;
    int unknowns = 0;
    std::vector<double> eigenvalues;
    double residual = 0.0;
};

struct FemEigenResult {
    std::vector<FemLevel> levels;
    std::vector<double> extrapolated;  ///< (4 mu_L - mu_{L-1}) / 3 at the finest pair
    std::vector<double> error;         ///< |ext_L - ext_{L-1}| (needs three levels)

    const std::vector<double>& eigenvalues() const { return levels.back().eigenvalues; }
};

FemEigenResult solve_levels(const DomainSpec& spec, const std::vector<int>& levels,
                            const EigenOptions& eig = {}, const MeshOptions& mesh = {},
                            Exec exec = Exec::Parallel);

struct TheoremConfig {
    std::vector<int> levels{1, 2, 3};
    EigenOptions eig;
    MeshOptions mesh;
    SolverConfig sl;
    QuadratureOptions quadrature;
    Exec exec = Exec::Parallel;
};

struct TheoremReport {
    std::string spec_hash;
    Symmetry symmetry = Symmetry::None;
    SpaceForm form = SpaceForm::Euclidean;
    double volume = 0.0;
    double r1 = 0.0;
    double r2 = 0.0;
    double mu_annulus = 0.0;  ///< mu_2 of the comparison annulus = mu_{1,1}
    FemEigenResult fem;
    double tau = 0.0;
    std::vector<double> margins;  ///< mu_annulus (1 + tau) - mu_i(Omega), i = 2.. checked
    std::vector<CheckResult> checks;

    bool passed() const;
};

/// mu_i(Omega) <= mu_2(annulus)(1 + tau) for i = 2 (and i = 3 under order-4
/// symmetry), with the comparison annulus volume-matched around the
/// largest ball inside the hole.
TheoremReport verify_theorem(const DomainSpec& spec, const TheoremConfig& config = {});

}  // namespace sfs
