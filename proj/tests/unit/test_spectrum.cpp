#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles/bessel.hpp"
#include "oracles/harmonic_rank.hpp"
#include "sfs/error.hpp"
#include "sfs/spectrum.hpp"

using namespace sfs;
using std::numbers::pi;

TEST_CASE("harmonic_dim examples") {
    CHECK(harmonic_dim(3, 2) == 5);
    for (int k = 1; k <= 10; ++k) CHECK(harmonic_dim(2, k) == 2);
    for (int n = 2; n <= 8; ++n) {
        CHECK(harmonic_dim(n, 0) == 1);
        CHECK(harmonic_dim(n, 1) == n);
    }
    CHECK_THROWS_AS(harmonic_dim(1, 0), DomainError);
    CHECK_THROWS_AS(harmonic_dim(3, -1), DomainError);
}

TEST_CASE("harmonic_dim matches the polynomial rank oracle") {
    for (int n = 2; n <= 5; ++n)
        for (int k = 0; k <= 6; ++k) {
            CAPTURE(n);
            CAPTURE(k);
            CHECK(harmonic_dim(n, k) == oracle::harmonic_dim_bruteforce(n, k));
        }
}

TEST_CASE("assembled spectrum structure") {
    struct Case {
        SpaceForm form;
        int n;
        double r1, r2;
    };
    const Case cases[] = {{SpaceForm::Euclidean, 2, 1.0, 2.0},   {SpaceForm::Spherical, 3, 0.2, 1.0},
                          {SpaceForm::Hyperbolic, 4, 0.5, 1.5},  {SpaceForm::Euclidean, 5, 1.0, 2.0},
                          {SpaceForm::Spherical, 2, 0.3, 1.2},   {SpaceForm::Hyperbolic, 3, 0.5, 1.5}};
    for (const auto& c : cases) {
        CAPTURE(c.n);
        SolverConfig cfg;
        cfg.grid_points = 512;
        const AnnulusSpectrum s = assemble(c.form, c.n, c.r1, c.r2, 8, 8, cfg);
        REQUIRE(s.covers(12));
        const auto& first = s.entries.front();
        CHECK(first.k == 0);
        CHECK(first.j == 1);
        CHECK(first.multiplicity == 1);
        CHECK(std::abs(first.value) <= 1e-10);
        const auto& second = s.entries[1];
        CHECK(second.k == 1);
        CHECK(second.j == 1);
        CHECK(second.multiplicity == c.n);
        for (int i = 2; i <= c.n + 1; ++i) {
            CHECK(&s.entry_of(i) == &second);
            CHECK(s.mu(i) == second.value);
        }
        CHECK(s.mu(c.n + 2) > s.mu(2));
        const auto flat = s.flattened();
        for (std::size_t i = 1; i < flat.size(); ++i) CHECK(flat[i] >= flat[i - 1]);
        CHECK(flat[1] > 0.0);
        const double sr = sin_m(c.form, c.r2);
        const double bound = 8.0 * (8 + c.n - 2) / (sr * sr);
        for (int i = 1; i <= 12; ++i) CHECK(s.mu(i) < bound);
        for (const auto& e : s.entries) CHECK(e.value < s.cutoff);
    }
}

TEST_CASE("assembly ties are ordered by (k, j)") {
    SolverConfig cfg;
    cfg.grid_points = 256;
    const AnnulusSpectrum s = assemble(SpaceForm::Euclidean, 2, 1.0, 2.0, 6, 6, cfg);
    for (std::size_t i = 1; i < s.entries.size(); ++i) {
        const auto& a = s.entries[i - 1];
        const auto& b = s.entries[i];
        CHECK((a.value < b.value || (a.value == b.value && (a.k < b.k || (a.k == b.k && a.j < b.j)))));
    }
}

TEST_CASE("ball spectrum matches the disk") {
    const AnnulusSpectrum s = assemble(SpaceForm::Euclidean, 2, 0.0, 1.0, 6, 6);
    const double jp = oracle::first_zero_j1_prime();
    CHECK(std::abs(s.mu(2) - jp * jp) <= 1e-6);
    CHECK(s.mu(3) == s.mu(2));
}

TEST_CASE("truncation guard") {
    SolverConfig cfg;
    cfg.grid_points = 256;
    const AnnulusSpectrum s = assemble(SpaceForm::Euclidean, 2, 1.0, 2.0, 1, 8, cfg);
    CHECK_FALSE(s.covers(12));
    CHECK_THROWS_AS(s.mu(12), DomainError);
    CHECK_THROWS_AS(s.mu(0), DomainError);
    CHECK_THROWS_AS(assemble(SpaceForm::Euclidean, 2, 1.0, 2.0, 0, 8, cfg), DomainError);
}

TEST_CASE("certification passes on the standard configurations") {
    struct Case {
        SpaceForm form;
        int n;
        double r1, r2;
        int j_max;
    };
    const Case cases[] = {{SpaceForm::Hyperbolic, 2, 0.5, 1.5, 4},
                          {SpaceForm::Euclidean, 3, 1.0, 2.0, 3},
                          {SpaceForm::Spherical, 2, 0.2, 1.4, 3}};
    for (const auto& c : cases) {
        const CertificationReport r = certify_lemmas(c.form, c.n, c.r1, c.r2, c.j_max);
        for (const auto& chk : r.checks) {
            CAPTURE(chk.name);
            CAPTURE(chk.detail);
            CHECK(chk.passed);
        }
        CHECK(r.all_passed());
        CHECK(r.check("neumann_dirichlet_identity").residual < 1e-6);
        CHECK(r.check("pointwise_comparison").passed);
        CHECK_THROWS_AS(r.check("no_such_check"), DomainError);
    }
}

TEST_CASE("certification on a ball skips the hole-only checks") {
    const CertificationReport r = certify_lemmas(SpaceForm::Euclidean, 2, 0.0, 1.0, 3);
    CHECK(r.all_passed());
    CHECK_THROWS_AS(r.check("b_location_residual"), DomainError);
}
