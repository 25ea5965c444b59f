#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "oracles/bessel.hpp"
#include "sfs/error.hpp"
#include "sfs/fem2d.hpp"
#include "sfs/spectrum.hpp"

using namespace sfs;
using std::numbers::pi;

namespace {
const SpaceForm kForms[] = {SpaceForm::Spherical, SpaceForm::Euclidean, SpaceForm::Hyperbolic};

DomainSpec perturbed(SpaceForm form) {
    DomainSpec s = DomainSpec::annulus(form, 2, 0.5, 1.4);
    s.symmetry = Symmetry::Order4;
    s.rho_out.harmonics = {{4, 0.06, 0.03}};
    s.rho_in->harmonics = {{8, 0.02, 0.0}};
    s.validate();
    return s;
}

double quadratic_form(const Eigen::SparseMatrix<double>& a, const Eigen::VectorXd& u) {
    return u.dot(a * u);
}
}  // namespace

TEST_CASE("mesh structure") {
    const auto s = DomainSpec::annulus(SpaceForm::Euclidean, 2, 1.0, 2.0);
    const PolarMesh m0 = generate_mesh(s, 0);
    CHECK(m0.level == 0);
    CHECK(m0.radial == 8);
    CHECK(m0.angular == 64);
    CHECK(m0.vertex_count() == static_cast<std::size_t>(9 * 64));
    CHECK(m0.triangles.size() == static_cast<std::size_t>(2 * 8 * 64));
    CHECK(m0.boundary_edges.size() == static_cast<std::size_t>(2 * 64));
    CHECK(m0.h() == doctest::Approx(2 * pi / 64));
    for (std::size_t t = 0; t < m0.triangles.size(); ++t) CHECK(m0.chart_area(t) > 0.0);
    const PolarMesh m1 = generate_mesh(s, 1);
    CHECK(m1.triangles.size() == 4 * m0.triangles.size());
    CHECK(m1.angular % 16 == 0);
}

TEST_CASE("order-4 meshes are invariant under the quarter turn") {
    const PolarMesh m = generate_mesh(perturbed(SpaceForm::Hyperbolic), 1);
    const int quarter = m.angular / 4;
    for (int i = 0; i <= m.radial; ++i)
        for (int j = 0; j < m.angular; ++j) {
            const int a = m.index(i, j);
            const int b = m.index(i, j + quarter);
            CHECK(std::abs(m.r[a] - m.r[b]) <= 1e-12);
            CHECK(std::abs(std::remainder(m.theta[b] - m.theta[a] - pi / 2, 2 * pi)) <= 1e-12);
        }
}

TEST_CASE("mesh errors") {
    CHECK_THROWS_AS(generate_mesh(DomainSpec::annulus(SpaceForm::Euclidean, 2, 1.0, 1.5), 0), DomainError);
    CHECK_NOTHROW(generate_mesh(DomainSpec::annulus(SpaceForm::Euclidean, 2, 1.0, 1.5), 1));
    CHECK_THROWS_AS(generate_mesh(DomainSpec::annulus(SpaceForm::Euclidean, 3, 1.0, 2.0), 1), DomainError);
    CHECK_THROWS_AS(generate_mesh(DomainSpec::annulus(SpaceForm::Euclidean, 2, 1.0, 2.0), -1), DomainError);
}

TEST_CASE("ball meshes start at the pole radius") {
    const PolarMesh m = generate_mesh(DomainSpec::ball(SpaceForm::Spherical, 2, 1.0), 0);
    CHECK(m.r[m.index(0, 5)] == doctest::Approx(1e-3));
}

TEST_CASE("assembly invariants") {
    for (SpaceForm f : kForms) {
        const auto s = perturbed(f);
        const PolarMesh m = generate_mesh(s, 1);
        const FemSystem sys = assemble(m, f);
        const Eigen::SparseMatrix<double> kt = sys.stiffness.transpose();
        const Eigen::SparseMatrix<double> mt = sys.mass.transpose();
        CHECK((sys.stiffness - kt).norm() == 0.0);
        CHECK((sys.mass - mt).norm() == 0.0);
        const Eigen::VectorXd one = Eigen::VectorXd::Ones(m.vertex_count());
        CHECK((sys.stiffness * one).cwiseAbs().maxCoeff() <= 1e-12);
        const double mass_total = one.dot(sys.mass * one);
        const double vol = volume(s, make_grid(s));
        CHECK(std::abs(mass_total - vol) <= 1e-3 * vol);
        if (f == SpaceForm::Euclidean) {
            const FemSystem flat = assemble(generate_mesh(DomainSpec::annulus(f, 2, 1.0, 2.0), 1), f);
            const Eigen::VectorXd ones = Eigen::VectorXd::Ones(flat.mass.rows());
            CHECK(std::abs(ones.dot(flat.mass * ones) - 3 * pi) <= 1e-9 * 3 * pi);
        }
    }
}

TEST_CASE("assembly integrates a coordinate function") {
    // x = r cos(theta) on the flat annulus [1,2]: |grad x|^2 = 1, int x^2 = 15 pi / 4
    const auto s = DomainSpec::annulus(SpaceForm::Euclidean, 2, 1.0, 2.0);
    double prev_k = 1.0, prev_m = 1.0;
    for (int level = 1; level <= 3; ++level) {
        const PolarMesh m = generate_mesh(s, level);
        const FemSystem sys = assemble(m, SpaceForm::Euclidean);
        Eigen::VectorXd x(m.vertex_count());
        for (std::size_t v = 0; v < m.vertex_count(); ++v) x[v] = m.r[v] * std::cos(m.theta[v]);
        const double ek = std::abs(quadratic_form(sys.stiffness, x) - 3 * pi) / (3 * pi);
        const double em = std::abs(quadratic_form(sys.mass, x) - 15 * pi / 4) / (15 * pi / 4);
        CHECK(ek < 1e-2);
        CHECK(em < 1e-2);
        if (level > 1) {
            CHECK(ek < prev_k / 3);
            CHECK(em < prev_m / 3);
        }
        prev_k = ek;
        prev_m = em;
    }
}

TEST_CASE("serial and parallel assembly agree bitwise") {
    const PolarMesh m = generate_mesh(perturbed(SpaceForm::Spherical), 2);
    const FemSystem a = assemble(m, SpaceForm::Spherical, Exec::Serial);
    const FemSystem b = assemble(m, SpaceForm::Spherical, Exec::Parallel);
    CHECK((a.stiffness - b.stiffness).norm() == 0.0);
    CHECK((a.mass - b.mass).norm() == 0.0);
}

TEST_CASE("dense and iterative eigensolvers agree") {
    const PolarMesh m = generate_mesh(perturbed(SpaceForm::Euclidean), 1);
    const FemSystem sys = assemble(m, SpaceForm::Euclidean);
    EigenOptions dense;
    dense.dense_limit = 100000;
    EigenOptions sparse;
    sparse.dense_limit = 0;
    const EigenSolution a = eigensolve(sys, dense);
    const EigenSolution b = eigensolve(sys, sparse);
    CHECK(a.dense);
    CHECK_FALSE(b.dense);
    REQUIRE(a.values.size() == 8);
    for (int i = 0; i < 8; ++i) CHECK(std::abs(a.values[i] - b.values[i]) <= 1e-8 * (1 + a.values[i]));
    CHECK(a.residual <= 1e-9);
    CHECK(b.residual <= 1e-9);
    CHECK(std::abs(a.values[0]) <= 1e-8);
    for (int i = 1; i < 8; ++i) CHECK(a.values[i] >= a.values[i - 1]);
}

TEST_CASE("eigensolver errors") {
    const FemSystem sys = assemble(generate_mesh(perturbed(SpaceForm::Euclidean), 1), SpaceForm::Euclidean);
    EigenOptions one;
    one.count = 1;
    CHECK_THROWS_AS(eigensolve(sys, one), DomainError);
    EigenOptions starve;
    starve.dense_limit = 0;
    starve.max_iterations = 1;
    CHECK_THROWS_AS(eigensolve(sys, starve), ConvergenceError);
    const Eigen::MatrixXd bad = Eigen::MatrixXd::Ones(3, 8);
    EigenOptions sparse;
    sparse.dense_limit = 0;
    CHECK_THROWS_AS(eigensolve(sys, sparse, &bad), DomainError);
}

TEST_CASE("prolongation preserves constants") {
    const auto s = perturbed(SpaceForm::Euclidean);
    const PolarMesh c = generate_mesh(s, 1);
    const PolarMesh f = generate_mesh(s, 2);
    const Eigen::MatrixXd v = Eigen::MatrixXd::Constant(c.vertex_count(), 2, 3.0);
    const Eigen::MatrixXd p = prolongate(c, f, v);
    CHECK(p.rows() == static_cast<Eigen::Index>(f.vertex_count()));
    CHECK((p.array() - 3.0).abs().maxCoeff() <= 1e-14);
    CHECK_THROWS_AS(prolongate(c, generate_mesh(s, 3), v), DomainError);
}

TEST_CASE("unit disk against the Bessel oracle") {
    const double jp = oracle::first_zero_j1_prime();
    const FemEigenResult r = solve_levels(DomainSpec::ball(SpaceForm::Euclidean, 2, 1.0), {1, 2, 3});
    const auto& mu = r.eigenvalues();
    CHECK(std::abs(mu[1] - jp * jp) <= 1e-2);
    CHECK(std::abs(mu[2] - jp * jp) <= 1e-2);
    CHECK(std::abs(r.extrapolated[1] - jp * jp) <= 1e-3);
    CHECK(std::abs(r.extrapolated[2] - jp * jp) <= 1e-3);
    CHECK(r.error.size() == r.extrapolated.size());
}

TEST_CASE("hemisphere cap") {
    const FemEigenResult r = solve_levels(DomainSpec::ball(SpaceForm::Spherical, 2, pi / 2), {3});
    CHECK(std::abs(r.eigenvalues()[1] - 2.0) <= 1e-2);
    CHECK(std::abs(r.eigenvalues()[2] - 2.0) <= 1e-2);
}

TEST_CASE("pole radius study") {
    // a Neumann hole of radius r0 against the ball, on the radial problem
    const double r0 = MeshOptions{}.pole_radius;
    for (SpaceForm f : kForms) {
        SLProblem p;
        p.form = f;
        p.k = 1;
        const double ball = solve(p)[0].eigenvalue;
        p.r1 = r0;
        const double shift = ball - solve(p)[0].eigenvalue;
        p.r1 = r0 / 2;
        const double half = ball - solve(p)[0].eigenvalue;
        CHECK(shift > 0.0);
        CHECK(shift / ball < 1e-5);
        CHECK(shift / half == doctest::Approx(4.0).epsilon(0.1));
    }
}

TEST_CASE("exact annuli: cross-oracle and convergence order") {
    for (SpaceForm f : kForms) {
        const double r1 = 0.5, r2 = 1.4;
        const AnnulusSpectrum exact = assemble(f, 2, r1, r2, 8, 8);
        const FemEigenResult r = solve_levels(DomainSpec::annulus(f, 2, r1, r2), {1, 2, 3});
        const auto& mu = r.eigenvalues();
        for (int i = 2; i <= 6; ++i) {
            const double ref = exact.mu(i);
            CHECK(std::abs(mu[i - 1] - ref) / ref <= 5e-3);
        }
        CHECK(std::abs(mu[1] - mu[2]) / mu[1] <= 5e-3);
        // log-log slope over the three levels, converging from above
        std::vector<double> x, y;
        for (const auto& l : r.levels) {
            const double err = l.eigenvalues[1] - exact.mu(2);
            CHECK(err > 0.0);
            x.push_back(std::log(l.h));
            y.push_back(std::log(err));
        }
        const double xm = (x[0] + x[1] + x[2]) / 3, ym = (y[0] + y[1] + y[2]) / 3;
        double sxy = 0.0, sxx = 0.0;
        for (int i = 0; i < 3; ++i) {
            sxy += (x[i] - xm) * (y[i] - ym);
            sxx += (x[i] - xm) * (x[i] - xm);
        }
        CHECK(sxy / sxx == doctest::Approx(2.0).epsilon(0.15));
    }
}

TEST_CASE("flat annulus matches the radial solver") {
    SLProblem p;
    p.r1 = 1.0;
    p.r2 = 2.0;
    p.k = 1;
    const double mu11 = solve(p)[0].eigenvalue;
    const FemEigenResult r = solve_levels(DomainSpec::annulus(SpaceForm::Euclidean, 2, 1.0, 2.0), {3});
    CHECK(std::abs(r.eigenvalues()[1] - mu11) / mu11 <= 5e-4);
}

TEST_CASE("theorem verification: equality case") {
    const auto s = DomainSpec::annulus(SpaceForm::Hyperbolic, 2, 0.5, 1.4);
    const TheoremReport r = verify_theorem(s);
    CHECK(r.passed());
    CHECK(r.r1 == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.r2 == doctest::Approx(1.4).epsilon(1e-9));
    CHECK(std::abs(r.fem.extrapolated[1] - r.mu_annulus) <= r.tau * r.mu_annulus);
    CHECK(r.tau <= 5e-3);
    CHECK(r.tau >= 1e-4);
    CHECK(r.spec_hash.size() == 16);
}

TEST_CASE("theorem verification: perturbed order-4 annulus") {
    const TheoremReport r = verify_theorem(perturbed(SpaceForm::Hyperbolic));
    CHECK(r.passed());
    REQUIRE(r.margins.size() == 2);
    for (double m : r.margins) CHECK(m > r.tau * r.mu_annulus);
    for (const auto& c : r.checks) {
        CAPTURE(c.name);
        CHECK(c.passed);
    }
}

TEST_CASE("theorem verification: perturbed cap") {
    DomainSpec s = DomainSpec::ball(SpaceForm::Spherical, 2, 1.2);
    s.symmetry = Symmetry::Order4;
    s.rho_out.harmonics = {{4, 0.08, 0.0}};
    s.validate();
    const TheoremReport r = verify_theorem(s);
    CHECK(r.passed());
    CHECK(r.r1 == 0.0);
}

TEST_CASE("theorem verification preconditions") {
    auto asym = DomainSpec::annulus(SpaceForm::Euclidean, 2, 1.0, 2.0);
    asym.symmetry = Symmetry::None;
    CHECK_THROWS_AS(verify_theorem(asym), DomainError);
    CHECK_THROWS_AS(verify_theorem(DomainSpec::annulus(SpaceForm::Euclidean, 3, 1.0, 2.0)), DomainError);
    CHECK_THROWS_AS(verify_theorem(DomainSpec::ball(SpaceForm::Spherical, 2, 1.7)), DomainError);
}
