#include "sfs/io.hpp"

#include <cstdint>
#include <cstdio>
#include <sstream>

#include "sfs/error.hpp"

namespace sfs {

namespace {

template <class T>
T field(const Json& j, const char* key) {
    if (!j.contains(key)) throw InputError(std::string("missing key '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw InputError(std::string("bad value for key '") + key + "'");
    }
}

template <class T>
T field_or(const Json& j, const char* key, T fallback) {
    return j.contains(key) ? field<T>(j, key) : fallback;
}

Symmetry symmetry_from_json(const Json& v) {
    if (v.is_number_integer()) {
        switch (v.get<int>()) {
            case 1: return Symmetry::None;
            case 2: return Symmetry::Order2;
            case 4: return Symmetry::Order4;
            default: throw InputError("symmetry_order must be 1, 2, 4 or a class name");
        }
    }
    if (v.is_string()) return parse_symmetry(v.get<std::string>());
    throw InputError("symmetry_order must be 1, 2, 4 or a class name");
}

BoundaryProfile profile_from_json(const Json& j) {
    if (!j.is_object()) throw InputError("boundary profile must be an object");
    BoundaryProfile p;
    p.base = field<double>(j, "base");
    if (j.contains("harmonics")) {
        for (const auto& h : j.at("harmonics"))
            p.harmonics.push_back(
                {field<int>(h, "m"), field_or<double>(h, "a", 0.0), field_or<double>(h, "b", 0.0)});
    }
    if (j.contains("terms")) {
        for (const auto& t : j.at("terms")) {
            const auto powers = field<std::vector<int>>(t, "powers");
            if (powers.size() != 3) throw InputError("term powers need three exponents");
            p.terms.push_back({{powers[0], powers[1], powers[2]},
                               field<double>(t, "c"),
                               field_or<bool>(t, "permute", false)});
        }
    }
    return p;
}

Json profile_to_json(const BoundaryProfile& p) {
    Json j;
    j["base"] = p.base;
    Json hs = Json::array();
    for (const auto& h : p.harmonics) hs.push_back({{"m", h.m}, {"a", h.a}, {"b", h.b}});
    j["harmonics"] = hs;
    if (!p.terms.empty()) {
        Json ts = Json::array();
        for (const auto& t : p.terms)
            ts.push_back({{"powers", t.powers}, {"c", t.c}, {"permute", t.permute}});
        j["terms"] = ts;
    }
    return j;
}

Json number_array(const std::vector<double>& v) {
    Json a = Json::array();
    for (double x : v) a.push_back(x);
    return a;
}

}  // namespace

std::string format_number(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

SLRequest sl_request_from_json(const Json& j) {
    SLRequest req;
    try {
        req.problem.form = parse_space_form(field<std::string>(j, "form"));
        req.problem.bc = parse_boundary_condition(field_or<std::string>(j, "bc", "neumann"));
    } catch (const InputError&) {
        throw;
    } catch (const std::exception& e) {
        throw InputError(e.what());
    }
    req.problem.n = field<int>(j, "n");
    req.problem.k = field<int>(j, "k");
    req.problem.r1 = field<double>(j, "r1");
    req.problem.r2 = field<double>(j, "r2");
    req.config.grid_points = field_or<int>(j, "grid_points", req.config.grid_points);
    req.config.max_j = field_or<int>(j, "max_j", req.config.max_j);
    return req;
}

Json to_json(const SLProblem& problem, const SolverConfig& config) {
    Json j;
    j["form"] = std::string(to_string(problem.form));
    j["n"] = problem.n;
    j["k"] = problem.k;
    j["r1"] = problem.r1;
    j["r2"] = problem.r2;
    j["bc"] = std::string(to_string(problem.bc));
    j["grid_points"] = config.grid_points;
    j["max_j"] = config.max_j;
    return j;
}

Json to_json(const SLEigenpair& pair, bool with_samples) {
    Json j;
    j["eigenvalue"] = pair.eigenvalue;
    j["j"] = pair.j;
    j["k"] = pair.k;
    j["bc"] = std::string(to_string(pair.bc));
    j["simple"] = pair.simple;
    if (with_samples) {
        j["grid"] = number_array(pair.grid);
        j["values"] = number_array(pair.values);
    }
    return j;
}

std::string eigenpair_csv(const SLEigenpair& pair) {
    std::ostringstream out;
    out << "r,u\n";
    char buf[80];
    for (std::size_t i = 0; i < pair.grid.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", pair.grid[i], pair.values[i]);
        out << buf;
    }
    return out.str();
}

DomainSpec domain_from_json(const Json& j, bool check_symmetry) {
    if (!j.is_object()) throw InputError("domain spec must be a JSON object");
    DomainSpec spec;
    try {
        spec.form = parse_space_form(field<std::string>(j, "form"));
    } catch (const InputError&) {
        throw;
    } catch (const std::exception& e) {
        throw InputError(e.what());
    }
    spec.n = field<int>(j, "n");
    spec.symmetry = j.contains("symmetry_order") ? symmetry_from_json(j.at("symmetry_order"))
                                                 : Symmetry::None;
    if (!j.contains("rho_out")) throw InputError("missing key 'rho_out'");
    spec.rho_out = profile_from_json(j.at("rho_out"));
    if (j.contains("rho_in") && !j.at("rho_in").is_null()) spec.rho_in = profile_from_json(j.at("rho_in"));
    spec.validate(check_symmetry);
    return spec;
}

Json to_json(const DomainSpec& spec) {
    Json j;
    j["form"] = std::string(to_string(spec.form));
    j["n"] = spec.n;
    j["symmetry_order"] = std::string(to_string(spec.symmetry));
    j["rho_out"] = profile_to_json(spec.rho_out);
    j["rho_in"] = spec.rho_in ? profile_to_json(*spec.rho_in) : Json(nullptr);
    return j;
}

std::string spec_hash(const DomainSpec& spec) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : to_json(spec).dump()) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

Json to_json(const CheckResult& check) {
    Json j;
    j["name"] = check.name;
    j["kind"] = check.kind == CheckKind::Margin ? "margin" : "residual";
    j["residual"] = check.residual;
    j["tolerance"] = check.tolerance;
    j["passed"] = check.passed;
    if (!check.detail.empty()) j["detail"] = check.detail;
    return j;
}

Json to_json(const AnnulusSpectrum& s) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["form"] = std::string(to_string(s.form));
    j["n"] = s.n;
    j["r1"] = s.r1;
    j["r2"] = s.r2;
    j["cutoff"] = s.cutoff;
    j["certified_count"] = s.certified_count();
    Json entries = Json::array();
    for (const auto& e : s.entries)
        entries.push_back({{"value", e.value}, {"k", e.k}, {"j", e.j}, {"multiplicity", e.multiplicity}});
    j["entries"] = entries;
    return j;
}

std::string spectrum_csv(const AnnulusSpectrum& s) {
    std::ostringstream out;
    out << "i,value,k,j,multiplicity\n";
    char buf[120];
    for (std::size_t i = 0; i < s.entries.size(); ++i) {
        const auto& e = s.entries[i];
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%d,%d,%lld\n", i + 1, e.value, e.k, e.j,
                      static_cast<long long>(e.multiplicity));
        out << buf;
    }
    return out.str();
}

Json to_json(const CertificationReport& r) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["form"] = std::string(to_string(r.form));
    j["n"] = r.n;
    j["r1"] = r.r1;
    j["r2"] = r.r2;
    j["j_max"] = r.j_max;
    j["cells"] = r.cells;
    j["all_passed"] = r.all_passed();
    Json checks = Json::array();
    for (const auto& c : r.checks) checks.push_back(to_json(c));
    j["checks"] = checks;
    return j;
}

Json to_json(const FemEigenResult& result) {
    Json j;
    Json levels = Json::array();
    for (const auto& l : result.levels)
        levels.push_back({{"level", l.level},
                          {"h", l.h},
                          {"unknowns", l.unknowns},
                          {"residual", l.residual},
                          {"eigenvalues", number_array(l.eigenvalues)}});
    j["levels"] = levels;
    j["extrapolated"] = number_array(result.extrapolated);
    j["error"] = number_array(result.error);
    return j;
}

Json to_json(const TheoremReport& r) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["spec_hash"] = r.spec_hash;
    j["form"] = std::string(to_string(r.form));
    j["symmetry_order"] = std::string(to_string(r.symmetry));
    j["volume"] = r.volume;
    j["r1"] = r.r1;
    j["r2"] = r.r2;
    j["mu_annulus"] = r.mu_annulus;
    const Json fem = to_json(r.fem);
    j["levels"] = fem["levels"];
    j["extrapolated"] = fem["extrapolated"];
    j["error"] = fem["error"];
    j["tau"] = r.tau;
    j["margins"] = number_array(r.margins);
    Json checks = Json::array();
    for (const auto& c : r.checks) checks.push_back(to_json(c));
    j["checks"] = checks;
    j["verdict"] = r.passed() ? "PASS" : "FAIL";
    return j;
}

std::string mesh_vertices_csv(const PolarMesh& mesh) {
    std::ostringstream out;
    out << "index,r,theta\n";
    char buf[96];
    for (std::size_t v = 0; v < mesh.vertex_count(); ++v) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", v, mesh.r[v], mesh.theta[v]);
        out << buf;
    }
    return out.str();
}

std::string mesh_triangles_csv(const PolarMesh& mesh) {
    std::ostringstream out;
    out << "a,b,c\n";
    for (const auto& t : mesh.triangles) out << t[0] << ',' << t[1] << ',' << t[2] << '\n';
    return out.str();
}

std::string convergence_dat(const FemEigenResult& result) {
    std::ostringstream out;
    out << "# level h";
    const std::size_t m = result.levels.empty() ? 0 : result.levels.front().eigenvalues.size();
    for (std::size_t i = 1; i <= m; ++i) out << " mu" << i;
    out << '\n';
    char buf[40];
    for (const auto& l : result.levels) {
        std::snprintf(buf, sizeof buf, "%d %.12g", l.level, l.h);
        out << buf;
        for (double v : l.eigenvalues) {
            std::snprintf(buf, sizeof buf, " %.12g", v);
            out << buf;
        }
        out << '\n';
    }
    return out.str();
}

std::string quadrature_nodes_csv(const DomainSpec& spec, const QuadratureGrid& grid) {
    std::ostringstream out;
    out << "r";
    for (int d = 1; d <= spec.n; ++d) out << ",x" << d;
    out << ",weight\n";
    std::vector<std::string> rows;
    const auto record = [&](const QuadratureNode& node, std::span<double> values) {
        char buf[64];
        std::string row;
        std::snprintf(buf, sizeof buf, "%.17g", node.r);
        row += buf;
        for (double x : node.x) {
            std::snprintf(buf, sizeof buf, ",%.17g", x);
            row += buf;
        }
        std::snprintf(buf, sizeof buf, ",%.17g\n", node.weight);
        row += buf;
        rows.push_back(std::move(row));
        values[0] = 0.0;
    };
    integrate_domain(spec, grid, 1, record, {}, Exec::Serial);
    for (const auto& r : rows) out << r;
    return out.str();
}

}  // namespace sfs
