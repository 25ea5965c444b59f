#include "sfs/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "sfs/domains.hpp"
#include "sfs/error.hpp"
#include "sfs/exec.hpp"
#include "sfs/fem2d.hpp"
#include "sfs/io.hpp"
#include "sfs/slsolver.hpp"
#include "sfs/spectrum.hpp"

namespace sfs::cli {

namespace {

namespace fs = std::filesystem;

Json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError("malformed JSON in '" + path + "': " + e.what());
    }
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write '" + path.string() + "'");
    out << text;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

void apply_threads(const std::optional<int>& flag) {
    if (flag) {
        if (*flag < 1) throw InputError("--threads must be positive");
        set_thread_limit(*flag);
        return;
    }
    if (const char* env = std::getenv("SFS_THREADS")) {
        char* end = nullptr;
        const long t = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || t < 1) throw InputError("SFS_THREADS must be a positive integer");
        set_thread_limit(static_cast<int>(t));
    }
}

std::optional<fs::path> prepare_out(const std::string& dir) {
    if (dir.empty()) return std::nullopt;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw InputError("cannot create output directory '" + dir + "'");
    return fs::path(dir);
}

struct Common {
    std::optional<int> threads;
    std::string out_dir;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--threads", c.threads, "Thread cap (falls back to SFS_THREADS)");
    cmd->add_option("--out", c.out_dir, "Directory for JSON/CSV reports");
}

// ---------------------------------------------------------------- sl

struct SlArgs {
    Common common;
    std::string config;
    std::optional<std::string> form, bc;
    std::optional<int> n, k, max_j, grid_points;
    std::optional<double> r1, r2;
};

int cmd_sl(const SlArgs& a, std::ostream& out) {
    apply_threads(a.common.threads);
    Json j = a.config.empty() ? Json::object() : read_json(a.config);
    if (a.form) j["form"] = *a.form;
    if (a.bc) j["bc"] = *a.bc;
    if (a.n) j["n"] = *a.n;
    if (a.k) j["k"] = *a.k;
    if (a.r1) j["r1"] = *a.r1;
    if (a.r2) j["r2"] = *a.r2;
    if (a.max_j) j["max_j"] = *a.max_j;
    if (a.grid_points) j["grid_points"] = *a.grid_points;
    for (const char* key : {"form", "n", "k", "r1", "r2"})
        if (!j.contains(key)) throw InputError(std::string("missing --") + key);
    const SLRequest req = sl_request_from_json(j);
    req.problem.validate();
    req.config.validate();

    const auto pairs = solve(req.problem, req.config);
    out << "# form=" << to_string(req.problem.form) << " n=" << req.problem.n
        << " k=" << req.problem.k << " r1=" << format_number(req.problem.r1)
        << " r2=" << format_number(req.problem.r2) << " bc=" << to_string(req.problem.bc) << "\n";
    out << "j eigenvalue\n";
    for (const auto& p : pairs) out << p.j << ' ' << format_number(p.eigenvalue) << "\n";

    if (const auto dir = prepare_out(a.common.out_dir)) {
        Json report;
        report["schema_version"] = kSchemaVersion;
        report["problem"] = to_json(req.problem, req.config);
        Json list = Json::array();
        for (const auto& p : pairs) list.push_back(to_json(p));
        report["eigenpairs"] = list;
        write_file(*dir / "sl.json", dump(report));
        for (const auto& p : pairs) {
            std::ostringstream name;
            name << "sl_k" << p.k << "_j" << p.j << ".csv";
            write_file(*dir / name.str(), eigenpair_csv(p));
        }
    }
    return kOk;
}

// ---------------------------------------------------------------- spectrum

struct SpectrumArgs {
    Common common;
    std::string form = "euclidean";
    int n = 2;
    double r1 = 0.0;
    std::optional<double> r2;
    int kmax = 8;
    int jmax = 8;
    int count = 12;
    int grid_points = 2048;
    bool certify = false;
};

int cmd_spectrum(const SpectrumArgs& a, std::ostream& out, std::ostream& err) {
    apply_threads(a.common.threads);
    if (!a.r2) throw InputError("missing --r2");
    if (a.count < 1) throw InputError("--count must be positive");
    const SpaceForm form = parse_space_form(a.form);
    SolverConfig config;
    config.grid_points = a.grid_points;
    config.validate();
    const AnnulusSpectrum s = assemble(form, a.n, a.r1, *a.r2, a.kmax, a.jmax, config);

    const auto shown = std::min<std::int64_t>(a.count, s.certified_count());
    out << "# form=" << to_string(form) << " n=" << a.n << " r1=" << format_number(a.r1)
        << " r2=" << format_number(*a.r2) << " cutoff=" << format_number(s.cutoff) << "\n";
    out << "i value k j multiplicity\n";
    for (std::int64_t i = 1; i <= shown; ++i) {
        const SpectrumEntry& e = s.entry_of(i);
        out << i << ' ' << format_number(e.value) << ' ' << e.k << ' ' << e.j << ' ' << e.multiplicity
            << "\n";
    }

    Json report;
    report["schema_version"] = kSchemaVersion;
    report["spectrum"] = to_json(s);
    int code = kOk;
    if (a.certify) {
        const CertificationReport cert = certify_lemmas(form, a.n, a.r1, *a.r2, std::min(a.jmax, 5), config);
        for (const auto& c : cert.checks) {
            out << c.name << ": " << (c.passed ? "PASS" : "FAIL")
                << (c.kind == CheckKind::Margin ? " (min margin " : " (max residual ")
                << format_number(c.residual)
                << (c.kind == CheckKind::Margin ? ", must exceed " : ", tolerance ")
                << format_number(c.tolerance) << ")";
            if (!c.detail.empty()) out << " at " << c.detail;
            out << "\n";
        }
        report["certification"] = to_json(cert);
        if (!cert.all_passed()) code = kCheckFailed;
    }
    if (const auto dir = prepare_out(a.common.out_dir)) {
        write_file(*dir / "spectrum.json", dump(report));
        write_file(*dir / "spectrum.csv", spectrum_csv(s));
    }
    if (!s.covers(a.count)) {
        err << "warning: cutoff too low: only " << s.certified_count() << " eigenvalues certified below "
            << format_number(s.cutoff) << ", " << a.count << " requested (raise --kmax/--jmax)\n";
        return kSolverFailure;
    }
    return code;
}

// ---------------------------------------------------------------- verify

struct VerifyArgs {
    Common common;
    std::string spec_path;
    std::string family;
    std::string form;
    std::string hole = "both";
    std::uint64_t seed = 1;
    std::vector<int> levels{1, 2, 3};
    std::optional<int> max_iterations;
    bool skip_symmetry_check = false;
};

struct Family {
    Symmetry symmetry = Symmetry::Order4;
    int count = 5;
    double amplitude = 0.1;
};

Family parse_family(const std::string& text) {
    Family f;
    std::string normalized = text;
    std::replace(normalized.begin(), normalized.end(), ',', ' ');
    std::istringstream in(normalized);
    std::string token;
    while (in >> token) {
        const auto eq = token.find('=');
        if (eq == std::string::npos) throw InputError("family entry '" + token + "' is not key=value");
        const std::string key = token.substr(0, eq);
        const std::string value = token.substr(eq + 1);
        try {
            if (key == "s") {
                f.symmetry = value == "c" ? Symmetry::Central : parse_symmetry(value);
            } else if (key == "count") {
                f.count = std::stoi(value);
            } else if (key == "amplitude") {
                f.amplitude = std::stod(value);
            } else {
                throw InputError("unknown family key '" + key + "'");
            }
        } catch (const std::logic_error&) {
            throw InputError("bad value in family entry '" + token + "'");
        }
    }
    if (f.symmetry == Symmetry::None) throw InputError("family symmetry must be central, 2 or 4");
    if (f.count < 1) throw InputError("family count must be positive");
    if (!(f.amplitude >= 0.0 && f.amplitude <= 0.2)) throw InputError("family amplitude must lie in [0, 0.2]");
    return f;
}

int cmd_verify(const VerifyArgs& a, std::ostream& out) {
    apply_threads(a.common.threads);
    if (a.spec_path.empty() == a.family.empty())
        throw InputError("give exactly one of --spec or --random-family");

    std::vector<DomainSpec> specs;
    Json source;
    if (!a.spec_path.empty()) {
        const Json j = read_json(a.spec_path);
        if (j.is_array()) {
            for (const auto& e : j) specs.push_back(domain_from_json(e, !a.skip_symmetry_check));
        } else {
            specs.push_back(domain_from_json(j, !a.skip_symmetry_check));
        }
        source["spec"] = a.spec_path;
    } else {
        const Family fam = parse_family(a.family);
        std::vector<SpaceForm> forms{SpaceForm::Euclidean, SpaceForm::Spherical, SpaceForm::Hyperbolic};
        if (!a.form.empty()) forms = {parse_space_form(a.form)};
        if (a.hole != "both" && a.hole != "yes" && a.hole != "no")
            throw InputError("--hole must be yes, no or both");
        std::mt19937_64 rng(a.seed);
        for (SpaceForm f : forms)
            for (int i = 0; i < fam.count; ++i) {
                const bool hole = a.hole == "both" ? i % 2 == 0 : a.hole == "yes";
                specs.push_back(random_domain(f, 2, fam.symmetry, fam.amplitude, hole, rng));
            }
        source["family"] = {{"symmetry_order", std::string(to_string(fam.symmetry))},
                            {"count", fam.count},
                            {"amplitude", fam.amplitude},
                            {"seed", a.seed}};
    }

    TheoremConfig config;
    config.levels = a.levels;
    if (a.max_iterations) {
        if (*a.max_iterations < 1) throw InputError("--max-iterations must be positive");
        config.eig.max_iterations = *a.max_iterations;
    }
    Json reports = Json::array();
    int passed = 0;
    const auto dir = prepare_out(a.common.out_dir);
    for (std::size_t i = 0; i < specs.size(); ++i) {
        const TheoremReport rep = verify_theorem(specs[i], config);
        const bool ok = rep.passed();
        passed += ok;
        out << "[" << i + 1 << "] " << to_string(rep.form) << ' ' << to_string(rep.symmetry)
            << (specs[i].has_hole() ? " hole" : " ball") << " spec=" << rep.spec_hash << ": "
            << (ok ? "PASS" : "FAIL") << " mu2(annulus)=" << format_number(rep.mu_annulus);
        for (std::size_t m = 0; m < rep.margins.size(); ++m)
            out << " mu" << m + 2 << "=" << format_number(rep.fem.extrapolated[m + 1]) << " margin"
                << m + 2 << "=" << format_number(rep.margins[m]);
        out << " tau=" << format_number(rep.tau) << "\n";
        Json j = to_json(rep);
        j["spec"] = to_json(specs[i]);
        reports.push_back(j);
        if (dir) {
            std::ostringstream name;
            name << "convergence_" << i + 1 << ".dat";
            write_file(*dir / name.str(), convergence_dat(rep.fem));
        }
    }
    out << passed << "/" << specs.size() << " PASS\n";
    if (dir) {
        Json report;
        report["schema_version"] = kSchemaVersion;
        report["source"] = source;
        report["levels"] = a.levels;
        report["reports"] = reports;
        report["passed"] = passed;
        report["total"] = specs.size();
        write_file(*dir / "verify.json", dump(report));
    }
    return passed == static_cast<int>(specs.size()) ? kOk : kCheckFailed;
}

// ---------------------------------------------------------------- moments

struct MomentsArgs {
    Common common;
    std::string spec_path;
    std::string random_class;
    std::string form = "euclidean";
    int n = 2;
    std::uint64_t seed = 1;
    bool hole = true;
    double amplitude = 0.1;
    std::string as_class;
    std::string profile = "one";
    bool rayleigh = false;
    double tolerance = 1e-10;
    int radial = 64;
    int angular = 256;
    int polar = 64;
    bool skip_symmetry_check = false;
};

int cmd_moments(const MomentsArgs& a, std::ostream& out) {
    apply_threads(a.common.threads);
    if (a.spec_path.empty() == a.random_class.empty())
        throw InputError("give exactly one of --spec or --random");
    DomainSpec spec;
    if (!a.spec_path.empty()) {
        spec = domain_from_json(read_json(a.spec_path), !a.skip_symmetry_check);
    } else {
        std::mt19937_64 rng(a.seed);
        spec = random_domain(parse_space_form(a.form), a.n, parse_symmetry(a.random_class), a.amplitude,
                             a.hole, rng);
    }
    const Symmetry as_class = a.as_class.empty() ? spec.symmetry : parse_symmetry(a.as_class);
    const QuadratureGrid grid = make_grid(spec, {a.radial, a.angular, a.polar});
    const double vol = volume(spec, grid);
    const double r1 = spec.inscribed_inner_radius();
    const double r2 = match_outer_radius(spec.form, spec.n, r1, vol);

    SolverConfig sl;
    sl.max_j = 1;
    const auto mode = [&](int k) {
        const SLProblem p{spec.form, spec.n, k, r1, r2, BoundaryCondition::Neumann};
        return std::make_pair(p, solve(p, sl).front());
    };

    RadialFunction g = RadialFunction::constant(1.0);
    if (a.profile == "gk") {
        const auto [p, pair] = mode(1);
        g = RadialFunction::from(extend_gk(pair, p, std::max(spec.sup_outer(), r2)));
    } else if (a.profile != "one") {
        throw InputError("--profile must be one or gk");
    }

    out << "# form=" << to_string(spec.form) << " n=" << spec.n << " symmetry=" << to_string(spec.symmetry)
        << " checked_as=" << to_string(as_class) << " volume=" << format_number(vol)
        << " R1=" << format_number(r1) << " R2=" << format_number(r2) << "\n";
    Json report;
    report["schema_version"] = kSchemaVersion;
    report["spec"] = to_json(spec);
    report["spec_hash"] = spec_hash(spec);
    report["checked_as"] = std::string(to_string(as_class));
    report["profile"] = a.profile;
    report["volume"] = vol;
    report["r1"] = r1;
    report["r2"] = r2;

    bool ok = true;
    Json checks = Json::array();
    for (const auto& c : orthogonality_checks(spec, grid, g, as_class, a.tolerance)) {
        out << c.name << ": " << (c.passed ? "PASS" : "FAIL") << " (relative "
            << format_number(c.residual) << ", tolerance " << format_number(c.tolerance) << ")";
        if (!c.detail.empty()) out << " at " << c.detail;
        out << "\n";
        ok = ok && c.passed;
        checks.push_back(to_json(c));
    }
    report["checks"] = checks;

    if (a.rayleigh) {
        Json quotients = Json::array();
        for (int k = 1; k <= 3; ++k) {
            const auto [p, pair] = mode(k);
            const double q = rayleigh_gk(spec, grid, k, pair, p);
            const double margin = pair.eigenvalue - q;
            const bool below = q <= pair.eigenvalue * (1.0 + 1e-8);
            out << "rayleigh k=" << k << ": " << (below ? "PASS" : "FAIL")
                << " quotient=" << format_number(q) << " mu=" << format_number(pair.eigenvalue)
                << " margin=" << format_number(margin) << "\n";
            ok = ok && below;
            quotients.push_back(
                {{"k", k}, {"quotient", q}, {"mu", pair.eigenvalue}, {"margin", margin}, {"passed", below}});
        }
        report["rayleigh"] = quotients;
    }
    report["passed"] = ok;
    if (const auto dir = prepare_out(a.common.out_dir)) {
        write_file(*dir / "moments.json", dump(report));
        write_file(*dir / "quadrature_nodes.csv", quadrature_nodes_csv(spec, grid));
    }
    return ok ? kOk : kCheckFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Neumann and Dirichlet Laplacian eigenvalues on space-form annuli and symmetric domains",
                 "sfs"};
    app.require_subcommand(1);

    SlArgs sl;
    auto* sl_cmd = app.add_subcommand("sl", "Radial eigenvalues of one angular mode");
    add_common(sl_cmd, sl.common);
    sl_cmd->add_option("--config", sl.config, "JSON problem file (flags override)");
    sl_cmd->add_option("--form", sl.form, "spherical | euclidean | hyperbolic");
    sl_cmd->add_option("--n", sl.n, "Dimension");
    sl_cmd->add_option("--k", sl.k, "Angular mode");
    sl_cmd->add_option("--r1", sl.r1, "Inner radius (0 for a ball)");
    sl_cmd->add_option("--r2", sl.r2, "Outer radius");
    sl_cmd->add_option("--bc", sl.bc, "neumann | dirichlet");
    sl_cmd->add_option("--max-j", sl.max_j, "Number of eigenvalues");
    sl_cmd->add_option("--grid-points", sl.grid_points, "Cells of the coarse grid");

    SpectrumArgs sp;
    auto* sp_cmd = app.add_subcommand("spectrum", "Assembled Neumann spectrum of an annulus or ball");
    add_common(sp_cmd, sp.common);
    sp_cmd->add_option("--form", sp.form);
    sp_cmd->add_option("--n", sp.n);
    sp_cmd->add_option("--r1", sp.r1);
    sp_cmd->add_option("--r2", sp.r2);
    sp_cmd->add_option("--kmax", sp.kmax, "Largest angular mode");
    sp_cmd->add_option("--jmax", sp.jmax, "Radial eigenvalues per mode");
    sp_cmd->add_option("--count", sp.count, "Eigenvalues to list");
    sp_cmd->add_option("--grid-points", sp.grid_points);
    sp_cmd->add_flag("--certify", sp.certify, "Append the structural certification report");

    VerifyArgs vf;
    auto* vf_cmd = app.add_subcommand("verify", "Finite-element comparison of a symmetric domain with its annulus");
    add_common(vf_cmd, vf.common);
    vf_cmd->add_option("--spec", vf.spec_path, "DomainSpec JSON (object or array)");
    vf_cmd->add_option("--random-family", vf.family, "e.g. \"s=4 count=5 amplitude=0.1\"");
    vf_cmd->add_option("--form", vf.form, "Restrict the random family to one space form");
    vf_cmd->add_option("--hole", vf.hole, "yes | no | both");
    vf_cmd->add_option("--seed", vf.seed);
    vf_cmd->add_option("--levels", vf.levels, "Refinement levels")->delimiter(',');
    vf_cmd->add_option("--max-iterations", vf.max_iterations, "Subspace iteration cap per level");
    vf_cmd->add_flag("--skip-symmetry-check", vf.skip_symmetry_check);

    MomentsArgs mo;
    auto* mo_cmd = app.add_subcommand("moments", "Symmetry integrals and test-function quotients");
    add_common(mo_cmd, mo.common);
    mo_cmd->add_option("--spec", mo.spec_path, "DomainSpec JSON");
    mo_cmd->add_option("--random", mo.random_class, "Random domain of this symmetry class");
    mo_cmd->add_option("--form", mo.form);
    mo_cmd->add_option("--n", mo.n);
    mo_cmd->add_option("--seed", mo.seed);
    mo_cmd->add_option("--hole", mo.hole);
    mo_cmd->add_option("--amplitude", mo.amplitude);
    mo_cmd->add_option("--as-class", mo.as_class, "Check against another class");
    mo_cmd->add_option("--profile", mo.profile, "one | gk");
    mo_cmd->add_flag("--rayleigh", mo.rayleigh, "Quotients of G_k for k = 1, 2, 3");
    mo_cmd->add_option("--tolerance", mo.tolerance);
    mo_cmd->add_option("--radial", mo.radial);
    mo_cmd->add_option("--angular", mo.angular);
    mo_cmd->add_option("--polar", mo.polar);
    mo_cmd->add_flag("--skip-symmetry-check", mo.skip_symmetry_check);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kInvalidInput;
    }

    CLI::App* active = app.get_subcommands().front();
    try {
        if (sl_cmd->parsed()) return cmd_sl(sl, out);
        if (sp_cmd->parsed()) return cmd_spectrum(sp, out, err);
        if (vf_cmd->parsed()) return cmd_verify(vf, out);
        if (mo_cmd->parsed()) return cmd_moments(mo, out);
    } catch (const ConvergenceError& e) {
        err << "error: " << e.what() << "\n";
        return kSolverFailure;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n" << active->help() << "\n";
        return kInvalidInput;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << "\n";
        return kInvalidInput;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kSolverFailure;
    }
    return kInvalidInput;
}

}  // namespace sfs::cli
