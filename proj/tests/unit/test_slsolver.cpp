#include <doctest.h>

#include <chrono>
#include <cmath>
#include <numbers>

#include "oracles/bessel.hpp"
#include "sfs/error.hpp"
#include "sfs/slsolver.hpp"

using namespace sfs;
using std::numbers::pi;

namespace {
SLProblem problem(SpaceForm f, int n, int k, double r1, double r2,
                  BoundaryCondition bc = BoundaryCondition::Neumann) {
    SLProblem p;
    p.form = f;
    p.n = n;
    p.k = k;
    p.r1 = r1;
    p.r2 = r2;
    p.bc = bc;
    return p;
}

SolverConfig config(int max_j, int grid = 2048) {
    SolverConfig c;
    c.max_j = max_j;
    c.grid_points = grid;
    return c;
}
}  // namespace

TEST_CASE("Bessel oracle sanity") {
    CHECK(oracle::first_zero_j0() == doctest::Approx(2.404825557695773).epsilon(1e-13));
    CHECK(oracle::first_zero_j1_prime() == doctest::Approx(1.841183781340659).epsilon(1e-13));
}

TEST_CASE("hemisphere mode 1 is exactly 2") {
    const auto t0 = std::chrono::steady_clock::now();
    const auto pairs = solve(problem(SpaceForm::Spherical, 2, 1, 0.0, pi / 2), config(1));
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    CHECK(std::abs(pairs[0].eigenvalue - 2.0) <= 1e-6);
    CHECK(seconds < 1.0);
    // u = sin r up to normalisation
    const auto& p = pairs[0];
    const double scale = p.values.back();
    for (std::size_t i = 0; i < p.grid.size(); i += 97)
        CHECK(std::abs(p.values[i] - scale * std::sin(p.grid[i])) <= 1e-4 * scale);
}

TEST_CASE("unit disk against Bessel zeros") {
    const double jp = oracle::first_zero_j1_prime();
    const double j0 = oracle::first_zero_j0();
    const auto neu = solve(problem(SpaceForm::Euclidean, 2, 1, 0.0, 1.0), config(1));
    CHECK(std::abs(neu[0].eigenvalue - jp * jp) <= 1e-6);
    const auto dir = solve(problem(SpaceForm::Euclidean, 2, 0, 0.0, 1.0, BoundaryCondition::Dirichlet), config(1));
    CHECK(std::abs(dir[0].eigenvalue - j0 * j0) <= 1e-6);
}

TEST_CASE("constant mode on a coarse grid") {
    const auto ev = discrete_eigenvalues(problem(SpaceForm::Euclidean, 2, 0, 1.0, 2.0), 64, 2);
    CHECK(std::abs(ev[0]) <= 1e-12);
    CHECK(ev[1] > 1.0);
}

TEST_CASE("ball with k >= 1 imposes u(0) = 0") {
    SolverConfig c = config(1, 256);
    const auto pairs = solve(problem(SpaceForm::Spherical, 2, 1, 0.0, pi / 2), c);
    CHECK(pairs[0].grid.front() == 0.0);
    CHECK(pairs[0].values.front() == 0.0);
    c.regular_origin = false;
    CHECK_THROWS_AS(solve(problem(SpaceForm::Spherical, 2, 1, 0.0, pi / 2), c), DomainError);
}

TEST_CASE("second-order convergence") {
    const SLProblem cases[] = {problem(SpaceForm::Euclidean, 2, 1, 1.0, 2.0),
                               problem(SpaceForm::Hyperbolic, 3, 2, 0.5, 1.5),
                               problem(SpaceForm::Spherical, 2, 0, 0.3, 1.2, BoundaryCondition::Dirichlet)};
    for (const auto& p : cases) {
        // error of grid N against its own 4N reference
        auto error = [&p](int cells) {
            return std::abs(discrete_eigenvalues(p, cells, 1)[0] - discrete_eigenvalues(p, 4 * cells, 1)[0]);
        };
        const double e64 = error(64);
        const double e128 = error(128);
        const double e256 = error(256);
        CHECK(e64 / e128 == doctest::Approx(4.0).epsilon(0.15));
        CHECK(e128 / e256 == doctest::Approx(4.0).epsilon(0.15));
    }
}

TEST_CASE("eigenpairs: order, nodes, normalisation, Rayleigh") {
    const SLProblem cases[] = {problem(SpaceForm::Euclidean, 2, 1, 1.0, 2.0),
                               problem(SpaceForm::Spherical, 3, 0, 0.2, 1.0),
                               problem(SpaceForm::Hyperbolic, 2, 3, 0.5, 1.5)};
    for (const auto& p : cases) {
        const auto pairs = solve(p, config(6));
        REQUIRE(pairs.size() == 6);
        for (std::size_t j = 0; j < pairs.size(); ++j) {
            const auto& e = pairs[j];
            CHECK(e.j == static_cast<int>(j) + 1);
            CHECK(e.simple);
            CHECK(sign_changes(e) == static_cast<int>(j));
            if (j > 0) CHECK(e.eigenvalue > pairs[j - 1].eigenvalue + 1e-8);
            CHECK(e.values.back() > 0.0);
            double norm = 0.0;
            for (std::size_t i = 0; i + 1 < e.grid.size(); ++i) {
                const double h = e.grid[i + 1] - e.grid[i];
                const double a = e.values[i] * e.values[i] * std::pow(sin_m(p.form, e.grid[i]), p.n - 1);
                const double b = e.values[i + 1] * e.values[i + 1] * std::pow(sin_m(p.form, e.grid[i + 1]), p.n - 1);
                norm += 0.5 * h * (a + b);
            }
            CHECK(norm == doctest::Approx(1.0).epsilon(1e-9));
            if (e.eigenvalue > 1e-8)
                CHECK(std::abs(rayleigh_quotient(e, p) - e.eigenvalue) <= 1e-9 * e.eigenvalue);
        }
    }
}

TEST_CASE("serial and parallel solves agree") {
    const SLProblem p = problem(SpaceForm::Hyperbolic, 3, 1, 0.5, 1.5);
    SolverConfig a = config(5, 512);
    SolverConfig b = a;
    a.exec = Exec::Serial;
    b.exec = Exec::Parallel;
    const auto x = solve(p, a);
    const auto y = solve(p, b);
    for (std::size_t j = 0; j < x.size(); ++j) {
        CHECK(x[j].eigenvalue == y[j].eigenvalue);
        CHECK(x[j].values == y[j].values);
    }
}

TEST_CASE("invalid problems") {
    CHECK_THROWS_AS(solve(problem(SpaceForm::Euclidean, 1, 0, 0.0, 1.0)), DomainError);
    CHECK_THROWS_AS(solve(problem(SpaceForm::Euclidean, 2, -1, 0.0, 1.0)), DomainError);
    CHECK_THROWS_AS(solve(problem(SpaceForm::Euclidean, 2, 0, 1.0, 1.0)), DomainError);
    CHECK_THROWS_AS(solve(problem(SpaceForm::Spherical, 2, 0, 0.0, 2.0)), DomainError);
    CHECK_THROWS_AS(solve(problem(SpaceForm::Euclidean, 2, 0, 0.0, 1.0), config(1, 32)), DomainError);
    CHECK_THROWS_AS(solve(problem(SpaceForm::Euclidean, 2, 0, 0.0, 1.0), config(0)), DomainError);
    CHECK_THROWS_AS(parse_boundary_condition("robin"), InputError);
    CHECK(parse_boundary_condition("dirichlet") == BoundaryCondition::Dirichlet);
}

TEST_CASE("locate_b") {
    {
        const SLProblem p = problem(SpaceForm::Euclidean, 2, 1, 1.0, 2.0);
        const auto e = solve(p, config(1))[0];
        const double b = locate_b(e, p);
        CHECK(b == doctest::Approx(1.0 / std::sqrt(e.eigenvalue)).epsilon(1e-12));
        CHECK(b > p.r1);
        CHECK(b < p.r2);
    }
    {
        const SLProblem p = problem(SpaceForm::Spherical, 2, 1, 0.3, 1.2);
        const auto e = solve(p, config(1))[0];
        const double b = locate_b(e, p);
        CHECK(b == doctest::Approx(std::asin(std::sqrt(1.0 / e.eigenvalue))).epsilon(1e-12));
        const double s = sin_m(p.form, b);
        CHECK(std::abs(e.eigenvalue - 1.0 / (s * s)) <= 1e-9 * e.eigenvalue);
    }
    for (SpaceForm f : {SpaceForm::Spherical, SpaceForm::Euclidean, SpaceForm::Hyperbolic}) {
        for (int k = 1; k <= 3; ++k) {
            const SLProblem p = problem(f, 3, k, 0.5, 1.5);
            const auto e = solve(p, config(1))[0];
            const double b = locate_b(e, p);
            CHECK(b > p.r1);
            CHECK(b < p.r2);
        }
    }
    const SLProblem ball = problem(SpaceForm::Euclidean, 2, 1, 0.0, 1.0);
    CHECK_THROWS_AS(locate_b(solve(ball, config(1))[0], ball), DomainError);
}

TEST_CASE("extended eigenfunction") {
    const SLProblem p = problem(SpaceForm::Hyperbolic, 2, 1, 0.5, 1.5);
    const auto e = solve(p, config(1))[0];
    const ExtendedEigenfunction g = extend_gk(e, p, 3.0);
    CHECK(g.inner_radius() == 0.5);
    CHECK(g.outer_radius() == 1.5);
    CHECK(g.max_radius() == 3.0);
    CHECK(g.value(1.5) == doctest::Approx(e.values.back()).epsilon(1e-14));
    CHECK(std::abs(g.value(1.5 + 1e-12) - g.value(1.5)) <= 1e-10);
    CHECK(g.value(2.7) == g.value(1.5));
    CHECK(g.derivative(2.0) == 0.0);
    CHECK(std::abs(g.derivative(1.5)) <= 1e-6);
    const std::size_t mid = e.grid.size() / 2;
    CHECK(g.value(e.grid[mid]) == doctest::Approx(e.values[mid]).epsilon(1e-12));
    CHECK_THROWS_AS(g.value(0.4), DomainError);
    CHECK_THROWS_AS(g.value(3.1), DomainError);
    CHECK_THROWS_AS(extend_gk(e, p, 1.0), DomainError);
    const auto second = solve(p, config(2))[1];
    CHECK_THROWS_AS(extend_gk(second, p, 3.0), DomainError);
}
