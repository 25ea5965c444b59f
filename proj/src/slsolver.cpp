#include "sfs/slsolver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "sfs/error.hpp"
#include "sfs/quadrature.hpp"

namespace sfs {

std::string_view to_string(BoundaryCondition bc) {
    return bc == BoundaryCondition::Neumann ? "neumann" : "dirichlet";
}

BoundaryCondition parse_boundary_condition(std::string_view name) {
    if (name == "neumann" || name == "N") return BoundaryCondition::Neumann;
    if (name == "dirichlet" || name == "D") return BoundaryCondition::Dirichlet;
    throw InputError("unknown boundary condition '" + std::string(name) + "'");
}

void SLProblem::validate() const {
    if (n < 2) throw DomainError("SL problem: dimension must be at least 2");
    if (k < 0) throw DomainError("SL problem: mode index must be nonnegative");
    if (!(r1 >= 0.0) || !(r2 > r1)) throw DomainError("SL problem: need 0 <= r1 < r2");
    if (form == SpaceForm::Spherical && r2 > std::numbers::pi / 2 + 1e-12)
        throw DomainError("SL problem: spherical r2 must not exceed pi/2");
}

void SolverConfig::validate() const {
    if (grid_points < 64) throw DomainError("solver config: grid_points must be >= 64");
    if (max_j < 1) throw DomainError("solver config: max_j must be >= 1");
    if (!(eig_tol > 0.0)) throw DomainError("solver config: eig_tol must be positive");
}

SymTridiagonal DiscreteSL::symmetric_form() const {
    const int m = unknowns();
    SymTridiagonal t;
    t.diag.resize(m);
    t.off.resize(std::max(m - 1, 0));
    for (int i = 0; i < m; ++i) t.diag[i] = k_diag[i] / mass[i];
    for (int i = 0; i + 1 < m; ++i) t.off[i] = k_off[i] / std::sqrt(mass[i] * mass[i + 1]);
    return t;
}

std::vector<double> DiscreteSL::nodal_values(const std::vector<double>& v) const {
    std::vector<double> u(grid.size(), 0.0);
    for (int i = 0; i < unknowns(); ++i) u[first_unknown + i] = v[i] / std::sqrt(mass[i]);
    return u;
}

double DiscreteSL::rayleigh(const std::vector<double>& u) const {
    double energy = 0.0;
    double norm = 0.0;
    for (std::size_t c = 0; c < conductance.size(); ++c) {
        const double d = u[c + 1] - u[c];
        energy += conductance[c] * d * d;
    }
    for (std::size_t i = 0; i < u.size(); ++i) {
        energy += reaction[i] * u[i] * u[i];
        norm += full_mass[i] * u[i] * u[i];
    }
    return energy / norm;
}

DiscreteSL discretize(const SLProblem& problem, const SolverConfig& config) {
    problem.validate();
    config.validate();
    const int cells = config.grid_points;
    const double h = (problem.r2 - problem.r1) / cells;
    const int n = problem.n;
    const auto weight = [&](double r) { return std::pow(sin_m(problem.form, r), n - 1); };
    const double angular = problem.angular_eigenvalue();
    const bool at_pole = problem.r1 == 0.0;

    if (at_pole && problem.k >= 1 && !config.regular_origin)
        throw DomainError("singular weight at r = 0: mode k >= 1 needs the origin condition u(0) = 0");

    std::vector<double> grid(cells + 1);
    for (int i = 0; i <= cells; ++i) grid[i] = problem.r1 + h * i;
    grid[cells] = problem.r2;

    // Full-grid stiffness (flux form) and lumped mass.
    std::vector<double> kd(cells + 1, 0.0), ko(cells, 0.0), mass(cells + 1, 0.0);
    std::vector<double> conductance(cells), reaction(cells + 1, 0.0);
    for (int i = 0; i < cells; ++i) {
        const double c = weight(0.5 * (grid[i] + grid[i + 1])) / h;
        conductance[i] = c;
        kd[i] += c;
        kd[i + 1] += c;
        ko[i] = -c;
    }
    for (int i = 0; i <= cells; ++i) {
        const double share = (i == 0 || i == cells) ? 0.5 : 1.0;
        mass[i] = share * h * weight(grid[i]);
    }
    if (at_pole) {
        mass[0] = integrate(gauss_legendre(8), weight, 0.0, 0.5 * h);
    }
    if (angular > 0.0) {
        for (int i = 0; i <= cells; ++i) {
            if (grid[i] == 0.0) continue;
            const double s = sin_m(problem.form, grid[i]);
            reaction[i] = angular / (s * s) * mass[i];
            kd[i] += reaction[i];
        }
    }

    int first = 0;
    int last = cells;
    const bool dirichlet = problem.bc == BoundaryCondition::Dirichlet;
    if (at_pole ? problem.k >= 1 : dirichlet) first = 1;
    if (dirichlet) last = cells - 1;

    DiscreteSL out;
    out.grid = std::move(grid);
    out.first_unknown = first;
    out.k_diag.assign(kd.begin() + first, kd.begin() + last + 1);
    out.k_off.assign(ko.begin() + first, ko.begin() + last);
    out.mass.assign(mass.begin() + first, mass.begin() + last + 1);
    out.conductance = std::move(conductance);
    out.reaction = std::move(reaction);
    out.full_mass = std::move(mass);
    return out;
}

std::vector<double> discrete_eigenvalues(const SLProblem& problem, int cells, int count,
                                         double eig_tol, Exec exec) {
    SolverConfig cfg;
    cfg.grid_points = cells;
    const DiscreteSL sys = discretize(problem, cfg);
    if (count > sys.unknowns()) throw DomainError("more eigenvalues requested than unknowns");
    return bisect_eigenvalues(sys.symmetric_form(), 0, count, eig_tol, exec);
}

namespace {

double trapezoid_norm2(const SLProblem& problem, const std::vector<double>& grid,
                       const std::vector<double>& u) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        const double wl = std::pow(sin_m(problem.form, grid[i]), problem.n - 1);
        const double wr = std::pow(sin_m(problem.form, grid[i + 1]), problem.n - 1);
        s += 0.5 * (grid[i + 1] - grid[i]) * (wl * u[i] * u[i] + wr * u[i + 1] * u[i + 1]);
    }
    return s;
}

}  // namespace

namespace {

struct GridSolution {
    DiscreteSL system;
    std::vector<double> bisected;            ///< count + 1 bisection values
    std::vector<double> polished;            ///< count Rayleigh-polished values
    std::vector<std::vector<double>> nodal;  ///< count eigenvectors, full grid
};

GridSolution solve_on_grid(const SLProblem& problem, const SolverConfig& config, int count) {
    GridSolution g{discretize(problem, config), {}, {}, {}};
    if (count + 1 > g.system.unknowns()) throw DomainError("more eigenvalues requested than unknowns");
    const SymTridiagonal t = g.system.symmetric_form();
    g.bisected = bisect_eigenvalues(t, 0, count + 1, config.eig_tol, config.exec);

    const Interval spread = gershgorin(t);
    const double scale = std::max({1.0, std::abs(spread.lo), std::abs(spread.hi)});
    for (int j = 0; j < count; ++j) {
        const std::vector<double> v = inverse_iteration(t, g.bisected[j], 3);
        const std::vector<double> tv = multiply(t, v);
        double residual = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i)
            residual = std::max(residual, std::abs(tv[i] - g.bisected[j] * v[i]));
        if (residual > 1e-8 * scale) {
            std::ostringstream msg;
            msg << "inverse iteration did not converge (cells=" << config.grid_points
                << ", k=" << problem.k << ", j=" << j + 1 << ", residual=" << residual << ")";
            throw ConvergenceError(msg.str(), residual);
        }
        g.nodal.push_back(g.system.nodal_values(v));
        g.polished.push_back(g.system.rayleigh(g.nodal.back()));
    }
    return g;
}

}  // namespace

std::vector<SLEigenpair> solve(const SLProblem& problem, const SolverConfig& config) {
    problem.validate();
    config.validate();
    const int count = config.max_j;

    SolverConfig fine_cfg = config;
    if (config.richardson) fine_cfg.grid_points = 2 * config.grid_points;
    const GridSolution fine = solve_on_grid(problem, fine_cfg, count);

    std::vector<double> values = fine.polished;
    if (config.richardson) {
        const GridSolution coarse = solve_on_grid(problem, config, count);
        for (int j = 0; j < count; ++j) values[j] = (4.0 * fine.polished[j] - coarse.polished[j]) / 3.0;
    }

    const double gap_floor = 1e3 * config.eig_tol * std::max(1.0, std::abs(fine.bisected[count]));
    const int last = fine.system.first_unknown + fine.system.unknowns() - 1;

    std::vector<SLEigenpair> pairs(count);
    for (int j = 0; j < count; ++j) {
        SLEigenpair& pair = pairs[j];
        pair.eigenvalue = values[j];
        pair.j = j + 1;
        pair.k = problem.k;
        pair.bc = problem.bc;
        pair.grid = fine.system.grid;
        pair.values = fine.nodal[j];

        const double norm = std::sqrt(trapezoid_norm2(problem, pair.grid, pair.values));
        const double sign = pair.values[last] < 0.0 ? -1.0 : 1.0;
        for (double& u : pair.values) u *= sign / norm;

        const double below = j > 0 ? fine.bisected[j] - fine.bisected[j - 1] : HUGE_VAL;
        const double above = fine.bisected[j + 1] - fine.bisected[j];
        pair.simple = std::min(below, above) > gap_floor;
    }
    return pairs;
}

CubicSpline interpolate(const SLEigenpair& pair, const SLProblem& problem) {
    std::optional<double> left;
    std::optional<double> right;
    if (problem.r1 == 0.0) {
        if (problem.k == 0) left = 0.0;
    } else if (pair.bc == BoundaryCondition::Neumann) {
        left = 0.0;
    }
    if (pair.bc == BoundaryCondition::Neumann) right = 0.0;
    return CubicSpline(pair.grid, pair.values, left, right);
}

double rayleigh_quotient(const SLEigenpair& pair, const SLProblem& problem) {
    const CubicSpline u = interpolate(pair, problem);
    const GaussRule& rule = gauss_legendre(4);
    const double angular = problem.angular_eigenvalue();
    double energy = 0.0;
    double norm = 0.0;
    for (std::size_t c = 0; c + 1 < pair.grid.size(); ++c) {
        const double a = pair.grid[c];
        const double b = pair.grid[c + 1];
        const double half = 0.5 * (b - a);
        const double mid = 0.5 * (a + b);
        double e = 0.0;
        double m = 0.0;
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const double r = mid + half * rule.nodes[q];
            const double s = sin_m(problem.form, r);
            const double w = std::pow(s, problem.n - 1);
            const double val = u.value(r);
            const double der = u.derivative(r);
            e += rule.weights[q] * (der * der + angular / (s * s) * val * val) * w;
            m += rule.weights[q] * val * val * w;
        }
        energy += half * e;
        norm += half * m;
    }
    return energy / norm;
}

double locate_b(const SLEigenpair& pair, const SLProblem& problem) {
    if (problem.k < 1 || pair.j != 1 || pair.bc != BoundaryCondition::Neumann || problem.r1 <= 0.0)
        throw DomainError("locate_b needs the (k,1) Neumann eigenpair with k >= 1 and r1 > 0");
    const double s = std::sqrt(problem.angular_eigenvalue() / pair.eigenvalue);
    double b = 0.0;
    switch (problem.form) {
        case SpaceForm::Spherical:
            if (s > 1.0) throw ConvergenceError("locate_b: no root (sin b > 1)", s - 1.0);
            b = std::asin(s);
            break;
        case SpaceForm::Euclidean: b = s; break;
        case SpaceForm::Hyperbolic: b = std::asinh(s); break;
    }
    if (!(b > problem.r1 && b < problem.r2)) {
        std::ostringstream msg;
        msg << "locate_b: root " << b << " outside (" << problem.r1 << ", " << problem.r2
            << ") - eigenvalue inconsistent with the boundary conditions";
        throw ConvergenceError(msg.str(), b);
    }
    return b;
}

int sign_changes(const SLEigenpair& pair) {
    double peak = 0.0;
    for (double u : pair.values) peak = std::max(peak, std::abs(u));
    const double floor = 1e-10 * peak;
    int changes = 0;
    int last_sign = 0;
    for (double u : pair.values) {
        if (std::abs(u) <= floor) continue;
        const int s = u > 0.0 ? 1 : -1;
        if (last_sign != 0 && s != last_sign) ++changes;
        last_sign = s;
    }
    return changes;
}

ExtendedEigenfunction::ExtendedEigenfunction(const SLEigenpair& pair, const SLProblem& problem,
                                             double r_max)
    : spline_(interpolate(pair, problem)),
      r1_(pair.grid.front()),
      r2_(pair.grid.back()),
      r_max_(r_max) {
    if (pair.bc != BoundaryCondition::Neumann || pair.j != 1)
        throw DomainError("extend_gk needs a (k,1) Neumann eigenpair");
    if (r_max < r2_) throw DomainError("extend_gk: r_max must be at least r2");
}

void ExtendedEigenfunction::check(double r) const {
    const double slack = 1e-12 * std::max(1.0, r_max_);
    if (r < r1_ - slack || r > r_max_ + slack)
        throw DomainError("extended eigenfunction queried outside [r1, r_max]");
}

double ExtendedEigenfunction::value(double r) const {
    check(r);
    if (r >= r2_) return spline_.values().back();
    return spline_.value(std::max(r, r1_));
}

double ExtendedEigenfunction::derivative(double r) const {
    check(r);
    if (r >= r2_) return 0.0;
    return spline_.derivative(std::max(r, r1_));
}

ExtendedEigenfunction extend_gk(const SLEigenpair& pair, const SLProblem& problem, double r_max) {
    return ExtendedEigenfunction(pair, problem, r_max);
}

}  // namespace sfs
