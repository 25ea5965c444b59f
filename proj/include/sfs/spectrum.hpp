#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sfs/report.hpp"
#include "sfs/slsolver.hpp"

namespace sfs {

/// Dimension of the space of degree-k spherical harmonics on S^{n-1}, i.e.
/// the multiplicity of the eigenvalue k(k+n-2) of the sphere Laplacian.
std::int64_t harmonic_dim(int n, int k);

struct SpectrumEntry {
    double value = 0.0;
    int k = 0;
    int j = 1;
    std::int64_t multiplicity = 1;
};

/// Neumann spectrum of the annulus B_{r2} \ B_{r1} (a ball when r1 = 0)
/// assembled from the radial mode spectra.  Entries are sorted by value,
/// ties broken by (k, j); only values strictly below `cutoff` are kept,
/// and every Neumann eigenvalue below the cutoff is among them.
struct AnnulusSpectrum {
    SpaceForm form = SpaceForm::Euclidean;
    int n = 2;
    double r1 = 0.0;
    double r2 = 1.0;
    double cutoff = 0.0;
    std::vector<SpectrumEntry> entries;

    /// Number of eigenvalues counted with multiplicity.
    std::int64_t certified_count() const;
    bool covers(std::int64_t m) const { return certified_count() >= m; }
    /// mu_1 <= mu_2 <= ... repeated according to multiplicity.
    std::vector<double> flattened() const;
    /// mu_i, 1-based; throws if i exceeds the certified prefix.
    double mu(std::int64_t i) const;
    /// The entry that produces mu_i.
    const SpectrumEntry& entry_of(std::int64_t i) const;
};

AnnulusSpectrum assemble(SpaceForm form, int n, double r1, double r2, int k_max, int j_max,
                         const SolverConfig& config = {});

struct CertificationReport {
    SpaceForm form = SpaceForm::Euclidean;
    int n = 2;
    double r1 = 0.0;
    double r2 = 1.0;
    int j_max = 0;
    int cells = 0;
    std::vector<CheckResult> checks;

    bool all_passed() const;
    const CheckResult& check(const std::string& name) const;
};

/// Runs the structural checks on the mode spectra of one annulus: the
/// Neumann/Dirichlet identity mu_{0,j+1} = lambda_{1,j}, strict interlacing
/// in k and against Dirichlet, node counts, Rayleigh consistency and, for
/// r1 > 0, the three monotonicity properties of the (k,1) eigenfunctions.
CertificationReport certify_lemmas(SpaceForm form, int n, double r1, double r2, int j_max,
                                   const SolverConfig& config = {});

}  // namespace sfs
