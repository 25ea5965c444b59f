#pragma once

#include <string>

#include <json.hpp>

#include "sfs/domains.hpp"
#include "sfs/fem2d.hpp"
#include "sfs/slsolver.hpp"
#include "sfs/spectrum.hpp"

namespace sfs {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Floating output for tables: 12 significant digits.
std::string format_number(double x);

struct SLRequest {
    SLProblem problem;
    SolverConfig config;
};

/// Keys form, n, k, r1, r2, bc and optional grid_points, max_j.
SLRequest sl_request_from_json(const Json& j);
Json to_json(const SLProblem& problem, const SolverConfig& config);
Json to_json(const SLEigenpair& pair, bool with_samples = true);
/// Header "r,u".
std::string eigenpair_csv(const SLEigenpair& pair);

/// {form, n, symmetry_order, rho_out: {base, harmonics: [{m, a, b}],
/// terms: [{powers, c, permute}]}, rho_in}.  Validates the result.
DomainSpec domain_from_json(const Json& j, bool check_symmetry = true);
Json to_json(const DomainSpec& spec);
/// FNV-1a 64 of the canonical spec JSON, as 16 hex digits.
std::string spec_hash(const DomainSpec& spec);

Json to_json(const CheckResult& check);
Json to_json(const AnnulusSpectrum& spectrum);
/// Header "i,value,k,j,multiplicity"; one row per spectrum entry.
std::string spectrum_csv(const AnnulusSpectrum& spectrum);
Json to_json(const CertificationReport& report);

Json to_json(const FemEigenResult& result);
Json to_json(const TheoremReport& report);
std::string mesh_vertices_csv(const PolarMesh& mesh);
std::string mesh_triangles_csv(const PolarMesh& mesh);
/// Columns level, h, mu_1 .. mu_m, whitespace separated for gnuplot.
std::string convergence_dat(const FemEigenResult& result);
/// Columns r, x_1 .. x_n, weight.
std::string quadrature_nodes_csv(const DomainSpec& spec, const QuadratureGrid& grid);

}  // namespace sfs
