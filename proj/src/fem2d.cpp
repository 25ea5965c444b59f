#include "sfs/fem2d.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include "sfs/error.hpp"
#include "sfs/io.hpp"
#include "sfs/spaceform.hpp"
#include "sfs/spectrum.hpp"

namespace sfs {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

using SpMat = Eigen::SparseMatrix<double>;

struct ChartTriangle {
    std::array<double, 3> r;
    std::array<double, 3> t;
};

ChartTriangle chart_triangle(const PolarMesh& mesh, const std::array<int, 3>& tri) {
    ChartTriangle c;
    double top = 0.0;
    for (int a = 0; a < 3; ++a) {
        c.r[a] = mesh.r[tri[a]];
        c.t[a] = mesh.theta[tri[a]];
        top = std::max(top, c.t[a]);
    }
    for (double& t : c.t)
        if (top - t > std::numbers::pi) t += kTwoPi;
    return c;
}

double signed_area(const ChartTriangle& c) {
    return 0.5 * ((c.r[1] - c.r[0]) * (c.t[2] - c.t[0]) - (c.r[2] - c.r[0]) * (c.t[1] - c.t[0]));
}

using Local = std::array<double, 9>;

void element_matrices(SpaceForm form, const ChartTriangle& c, Local& k, Local& m) {
    const double area = signed_area(c);
    if (!(area > 0.0)) throw DomainError("degenerate or inverted triangle in mesh");
    std::array<double, 3> gr, gt;
    for (int a = 0; a < 3; ++a) {
        const int b = (a + 1) % 3;
        const int d = (a + 2) % 3;
        gr[a] = (c.t[b] - c.t[d]) / (2.0 * area);
        gt[a] = (c.r[d] - c.r[b]) / (2.0 * area);
    }
    // mid-edge rule; edge q joins vertices q and q+1
    double s_sum = 0.0;
    double inv_sum = 0.0;
    std::array<double, 3> s_edge;
    for (int q = 0; q < 3; ++q) {
        const double rm = 0.5 * (c.r[q] + c.r[(q + 1) % 3]);
        s_edge[q] = sin_m(form, rm);
        s_sum += s_edge[q];
        inv_sum += 1.0 / s_edge[q];
    }
    const double w = area / 3.0;
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
            k[3 * a + b] = w * (gr[a] * gr[b] * s_sum + gt[a] * gt[b] * inv_sum);
            double mass = 0.0;
            for (int q = 0; q < 3; ++q) {
                const int e0 = q;
                const int e1 = (q + 1) % 3;
                const double pa = (a == e0 || a == e1) ? 0.5 : 0.0;
                const double pb = (b == e0 || b == e1) ? 0.5 : 0.0;
                mass += pa * pb * s_edge[q];
            }
            m[3 * a + b] = w * mass;
        }
    }
}

double min_gap(const DomainSpec& spec, double floor_radius) {
    double gap = HUGE_VAL;
    for (const auto& w : sample_directions(2, 4096))
        gap = std::min(gap, spec.outer(w) - std::max(spec.inner(w), floor_radius));
    return gap;
}

Eigen::MatrixXd start_block(int rows, int cols) {
    Eigen::MatrixXd x(rows, cols);
    for (int c = 0; c < cols; ++c)
        for (int i = 0; i < rows; ++i)
            x(i, c) = c == 0 ? 1.0 : std::sin(0.37 * (i + 1) * (c + 1) + 0.11 * c);
    return x;
}

/// Worst relative residual of the first `count` columns.
double residuals(const SpMat& k, const SpMat& m, const Eigen::MatrixXd& x,
                 const Eigen::VectorXd& mu, int count) {
    double worst = 0.0;
    for (int c = 0; c < count; ++c) {
        const Eigen::VectorXd kx = k * x.col(c);
        const Eigen::VectorXd mx = m * x.col(c);
        const double scale = std::max(kx.norm(), mx.norm());
        worst = std::max(worst, (kx - mu(c) * mx).norm() / scale);
    }
    return worst;
}

}  // namespace

double PolarMesh::h() const { return kTwoPi / angular; }

double PolarMesh::chart_area(std::size_t t) const {
    return signed_area(chart_triangle(*this, triangles[t]));
}

PolarMesh generate_mesh(const DomainSpec& spec, int level, const MeshOptions& options) {
    if (spec.n != 2) throw DomainError("finite-element meshes are two-dimensional (n = 2)");
    if (level < 0 || level > 8) throw DomainError("mesh level must lie in [0, 8]");
    PolarMesh mesh;
    mesh.level = level;
    mesh.radial = options.base_radial << level;
    mesh.angular = options.base_angular << level;
    if (mesh.angular % (4 * rotation_order(spec.symmetry)) != 0)
        throw DomainError("angular resolution must be divisible by 4 s");

    const double floor_radius = spec.has_hole() ? 0.0 : options.pole_radius;
    const double gap = min_gap(spec, floor_radius);
    if (gap < 10.0 * mesh.h()) {
        std::ostringstream msg;
        msg << "degenerate domain: minimal radial width " << gap << " is below 10 h = "
            << 10.0 * mesh.h() << " at level " << level;
        throw DomainError(msg.str());
    }

    const int nr = mesh.radial;
    const int na = mesh.angular;
    mesh.r.resize(static_cast<std::size_t>(nr + 1) * na);
    mesh.theta.resize(mesh.r.size());
    for (int j = 0; j < na; ++j) {
        const double t = kTwoPi * j / na;
        const double lo = spec.has_hole() ? spec.rho_in->at_angle(t) : floor_radius;
        const double hi = spec.rho_out.at_angle(t);
        for (int i = 0; i <= nr; ++i) {
            const int v = mesh.index(i, j);
            mesh.r[v] = i == nr ? hi : lo + (hi - lo) * i / nr;
            mesh.theta[v] = t;
        }
    }
    mesh.triangles.reserve(2 * static_cast<std::size_t>(nr) * na);
    for (int i = 0; i < nr; ++i) {
        for (int j = 0; j < na; ++j) {
            const int v00 = mesh.index(i, j);
            const int v10 = mesh.index(i + 1, j);
            const int v01 = mesh.index(i, j + 1);
            const int v11 = mesh.index(i + 1, j + 1);
            mesh.triangles.push_back({v00, v10, v11});
            mesh.triangles.push_back({v00, v11, v01});
        }
    }
    for (int j = 0; j < na; ++j) {
        mesh.boundary_edges.push_back({mesh.index(0, j), mesh.index(0, j + 1)});
        mesh.boundary_edges.push_back({mesh.index(nr, j), mesh.index(nr, j + 1)});
    }
    return mesh;
}

FemSystem assemble(const PolarMesh& mesh, SpaceForm form, Exec exec) {
    const int count = static_cast<int>(mesh.triangles.size());
    std::vector<Local> ks(count), ms(count);
    if (exec == Exec::Parallel) {
        bool failed = false;
#pragma omp parallel for schedule(static)
        for (int t = 0; t < count; ++t) {
            try {
                element_matrices(form, chart_triangle(mesh, mesh.triangles[t]), ks[t], ms[t]);
            } catch (...) {
#pragma omp atomic write
                failed = true;
            }
        }
        if (failed) throw DomainError("singular mass: degenerate or inverted triangle in mesh");
    } else {
        for (int t = 0; t < count; ++t)
            element_matrices(form, chart_triangle(mesh, mesh.triangles[t]), ks[t], ms[t]);
    }

    std::vector<Eigen::Triplet<double>> kt, mt;
    kt.reserve(9 * static_cast<std::size_t>(count));
    mt.reserve(kt.capacity());
    for (int t = 0; t < count; ++t) {
        const auto& tri = mesh.triangles[t];
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) {
                kt.emplace_back(tri[a], tri[b], ks[t][3 * a + b]);
                mt.emplace_back(tri[a], tri[b], ms[t][3 * a + b]);
            }
    }
    const auto n = static_cast<Eigen::Index>(mesh.vertex_count());
    FemSystem sys;
    sys.stiffness.resize(n, n);
    sys.mass.resize(n, n);
    sys.stiffness.setFromTriplets(kt.begin(), kt.end());
    sys.mass.setFromTriplets(mt.begin(), mt.end());
    return sys;
}

Eigen::MatrixXd prolongate(const PolarMesh& coarse, const PolarMesh& fine, const Eigen::MatrixXd& v) {
    if (fine.radial != 2 * coarse.radial || fine.angular != 2 * coarse.angular)
        throw DomainError("prolongate needs consecutive refinement levels");
    Eigen::MatrixXd out(static_cast<Eigen::Index>(fine.vertex_count()), v.cols());
    for (int i = 0; i <= fine.radial; ++i) {
        const int i0 = i / 2;
        const int i1 = (i + 1) / 2;
        for (int j = 0; j < fine.angular; ++j) {
            const int j0 = j / 2;
            const int j1 = (j + 1) / 2;
            out.row(fine.index(i, j)) =
                0.25 * (v.row(coarse.index(i0, j0)) + v.row(coarse.index(i0, j1)) +
                        v.row(coarse.index(i1, j0)) + v.row(coarse.index(i1, j1)));
        }
    }
    return out;
}

EigenSolution eigensolve(const FemSystem& system, const EigenOptions& options,
                         const Eigen::MatrixXd* start) {
    const SpMat& k = system.stiffness;
    const SpMat& m = system.mass;
    const int n = static_cast<int>(k.rows());
    if (options.count < 2) throw DomainError("eigensolve needs count >= 2");
    if (options.count >= n) throw DomainError("eigensolve: count must be well below the system size");

    EigenSolution out;
    if (n <= options.dense_limit) {
        const Eigen::MatrixXd kd(k);
        const Eigen::MatrixXd md(m);
        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(kd, md);
        if (ges.info() != Eigen::Success) throw ConvergenceError("dense generalized eigensolver failed", 0.0);
        out.dense = true;
        out.values.assign(ges.eigenvalues().data(), ges.eigenvalues().data() + options.count);
        out.vectors = ges.eigenvectors().leftCols(options.count);
        out.residual = residuals(k, m, ges.eigenvectors(), ges.eigenvalues(), options.count);
        if (out.residual > options.tolerance)
            throw ConvergenceError("dense eigensolver residual above tolerance", out.residual);
        return out;
    }

    const SpMat shifted = k - options.shift * m;
    Eigen::SimplicialLDLT<SpMat> ldlt(shifted);
    if (ldlt.info() != Eigen::Success) throw ConvergenceError("factorization of K - sigma M failed", 0.0);

    const int block = std::min(options.count + 8, n);
    Eigen::MatrixXd x = start_block(n, block);
    if (start) {
        if (start->rows() != n) throw DomainError("start block has the wrong number of rows");
        const auto cols = std::min<Eigen::Index>(start->cols(), block);
        x.leftCols(cols) = start->leftCols(cols);
    }
    double res = HUGE_VAL;
    Eigen::VectorXd mu;
    for (int it = 1; it <= options.max_iterations; ++it) {
        const Eigen::MatrixXd y = ldlt.solve(m * x);
        Eigen::MatrixXd kr = y.transpose() * (k * y);
        Eigen::MatrixXd mr = y.transpose() * (m * y);
        kr = 0.5 * (kr + kr.transpose()).eval();
        mr = 0.5 * (mr + mr.transpose()).eval();
        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(kr, mr);
        if (ges.info() != Eigen::Success) throw ConvergenceError("Rayleigh-Ritz step failed", res);
        x = y * ges.eigenvectors();
        mu = ges.eigenvalues();
        res = residuals(k, m, x, mu, options.count);
        out.iterations = it;
        if (res <= options.tolerance) break;
    }
    out.residual = res;
    if (res > options.tolerance) {
        std::ostringstream msg;
        msg << "subspace iteration did not converge: " << n << " unknowns, " << out.iterations
            << " iterations, residual " << res;
        throw ConvergenceError(msg.str(), res);
    }
    out.values.assign(mu.data(), mu.data() + options.count);
    out.vectors = x.leftCols(options.count);
    return out;
}

FemEigenResult solve_levels(const DomainSpec& spec, const std::vector<int>& levels,
                            const EigenOptions& eig, const MeshOptions& mesh_options, Exec exec) {
    if (levels.empty()) throw DomainError("solve_levels needs at least one level");
    FemEigenResult result;
    PolarMesh previous;
    Eigen::MatrixXd warm;
    for (int level : levels) {
        const PolarMesh mesh = generate_mesh(spec, level, mesh_options);
        const FemSystem sys = assemble(mesh, spec.form, exec);
        const bool chained = warm.size() > 0 && level == previous.level + 1;
        if (chained) warm = prolongate(previous, mesh, warm);
        EigenSolution sol;
        try {
            sol = eigensolve(sys, eig, chained ? &warm : nullptr);
        } catch (const ConvergenceError& e) {
            std::ostringstream msg;
            msg << e.what() << " (level " << level << ")";
            throw ConvergenceError(msg.str(), e.residual());
        }
        result.levels.push_back(
            {level, mesh.h(), static_cast<int>(mesh.vertex_count()), sol.values, sol.residual});
        warm = std::move(sol.vectors);
        previous = mesh;
    }
    const std::size_t count = result.levels.back().eigenvalues.size();
    const auto extrapolate = [&](std::size_t fine, std::size_t i) {
        return (4.0 * result.levels[fine].eigenvalues[i] - result.levels[fine - 1].eigenvalues[i]) / 3.0;
    };
    const std::size_t last = result.levels.size() - 1;
    result.extrapolated.resize(count);
    result.error.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        if (last == 0) {
            result.extrapolated[i] = result.levels[0].eigenvalues[i];
            result.error[i] = std::abs(result.extrapolated[i]);
            continue;
        }
        result.extrapolated[i] = extrapolate(last, i);
        result.error[i] = last >= 2 ? std::abs(result.extrapolated[i] - extrapolate(last - 1, i))
                                    : std::abs(result.extrapolated[i] - result.levels[last].eigenvalues[i]);
    }
    return result;
}

bool TheoremReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

TheoremReport verify_theorem(const DomainSpec& spec, const TheoremConfig& config) {
    spec.validate();
    if (spec.n != 2) throw DomainError("theorem verification runs the n = 2 finite-element solver");
    if (spec.symmetry == Symmetry::None)
        throw DomainError("theorem verification needs a central, order-2 or order-4 symmetric domain");

    TheoremReport rep;
    rep.spec_hash = spec_hash(spec);
    rep.symmetry = spec.symmetry;
    rep.form = spec.form;
    const QuadratureGrid grid = make_grid(spec, config.quadrature);
    rep.volume = volume(spec, grid, config.exec);
    rep.r1 = spec.inscribed_inner_radius();
    rep.r2 = match_outer_radius(spec.form, 2, rep.r1, rep.volume);

    const AnnulusSpectrum annulus = assemble(spec.form, 2, rep.r1, rep.r2, 3, 2, config.sl);
    rep.mu_annulus = annulus.mu(2);

    rep.fem = solve_levels(spec, config.levels, config.eig, config.mesh, config.exec);
    const int checked = spec.symmetry == Symmetry::Order4 ? 2 : 1;

    double rel_error = 0.0;
    for (int i = 1; i <= checked; ++i)
        rel_error = std::max(rel_error, rep.fem.error[i] / rep.fem.extrapolated[i]);
    rep.tau = std::max(3.0 * rel_error + 10.0 * config.sl.eig_tol, 1e-4);

    const double bound = rep.mu_annulus * (1.0 + rep.tau);
    for (int i = 1; i <= checked; ++i) {
        const double mu = rep.fem.extrapolated[i];
        rep.margins.push_back(bound - mu);
        std::ostringstream name;
        name << "mu" << i + 1 << "_below_annulus";
        rep.checks.push_back({name.str(), mu / rep.mu_annulus - 1.0, rep.tau, mu <= bound, ""});
    }
    if (spec.symmetry == Symmetry::Order4) {
        const double lhs = 1.0 / rep.fem.extrapolated[1] + 1.0 / rep.fem.extrapolated[2];
        const double rhs = 2.0 / rep.mu_annulus;
        rep.checks.push_back(
            {"harmonic_mean", 1.0 - lhs / rhs, rep.tau, lhs >= rhs * (1.0 - rep.tau), ""});
    }
    const double mu1 = rep.fem.eigenvalues()[0];
    rep.checks.push_back({"constant_mode", std::abs(mu1), 1e-8, std::abs(mu1) <= 1e-8, ""});
    return rep;
}

}  // namespace sfs
