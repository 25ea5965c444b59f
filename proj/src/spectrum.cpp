#include "sfs/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "sfs/error.hpp"

namespace sfs {

namespace {

std::int64_t binomial(std::int64_t a, std::int64_t b) {
    if (b < 0 || a < b) return 0;
    b = std::min(b, a - b);
    std::int64_t result = 1;
    for (std::int64_t i = 1; i <= b; ++i) result = result * (a - b + i) / i;
    return result;
}

}  // namespace

std::int64_t harmonic_dim(int n, int k) {
    if (n < 2 || k < 0) throw DomainError("harmonic_dim: need n >= 2 and k >= 0");
    if (k == 0) return 1;
    if (k == 1) return n;
    return binomial(k + n - 1, n - 1) - binomial(k + n - 3, n - 1);
}

std::int64_t AnnulusSpectrum::certified_count() const {
    std::int64_t total = 0;
    for (const auto& e : entries) total += e.multiplicity;
    return total;
}

std::vector<double> AnnulusSpectrum::flattened() const {
    std::vector<double> out;
    for (const auto& e : entries)
        for (std::int64_t m = 0; m < e.multiplicity; ++m) out.push_back(e.value);
    return out;
}

const SpectrumEntry& AnnulusSpectrum::entry_of(std::int64_t i) const {
    if (i < 1) throw DomainError("eigenvalue index is 1-based");
    std::int64_t seen = 0;
    for (const auto& e : entries) {
        seen += e.multiplicity;
        if (seen >= i) return e;
    }
    throw DomainError("eigenvalue index beyond the certified prefix of the spectrum");
}

double AnnulusSpectrum::mu(std::int64_t i) const { return entry_of(i).value; }

AnnulusSpectrum assemble(SpaceForm form, int n, double r1, double r2, int k_max, int j_max,
                         const SolverConfig& config) {
    if (k_max < 1 || j_max < 1) throw DomainError("assemble: need k_max >= 1 and j_max >= 1");
    SolverConfig mode_cfg = config;
    mode_cfg.max_j = j_max;
    mode_cfg.exec = Exec::Serial;

    std::vector<std::vector<SLEigenpair>> modes(k_max + 1);
    std::vector<std::string> errors(k_max + 1);
    const auto run = [&](int k) {
        try {
            modes[k] = solve({form, n, k, r1, r2, BoundaryCondition::Neumann}, mode_cfg);
        } catch (const std::exception& e) {
            errors[k] = e.what();
        }
    };
    if (config.exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 1)
        for (int k = 0; k <= k_max; ++k) run(k);
    } else {
        for (int k = 0; k <= k_max; ++k) run(k);
    }
    for (const auto& e : errors)
        if (!e.empty()) throw ConvergenceError("assemble: " + e, 0.0);

    AnnulusSpectrum spec;
    spec.form = form;
    spec.n = n;
    spec.r1 = r1;
    spec.r2 = r2;

    // Every omitted eigenvalue is >= the cutoff: within a mode beyond j_max by
    // monotonicity in j, and for k > k_max by the lower bound
    // mu_{k,1} >= k(k+n-2) / sin_m^2(r2).
    const double s2 = sin_m(form, r2) * sin_m(form, r2);
    double cutoff = static_cast<double>(k_max + 1) * (k_max + n - 1) / s2;
    for (int k = 0; k <= k_max; ++k) cutoff = std::min(cutoff, modes[k].back().eigenvalue);
    spec.cutoff = cutoff;

    for (int k = 0; k <= k_max; ++k) {
        for (const auto& pair : modes[k]) {
            double value = pair.eigenvalue;
            if (k == 0 && pair.j == 1) value = 0.0;  // constants
            if (value < cutoff) spec.entries.push_back({value, k, pair.j, harmonic_dim(n, k)});
        }
    }
    std::sort(spec.entries.begin(), spec.entries.end(), [](const auto& a, const auto& b) {
        if (a.value != b.value) return a.value < b.value;
        if (a.k != b.k) return a.k < b.k;
        return a.j < b.j;
    });
    return spec;
}

bool CertificationReport::all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

const CheckResult& CertificationReport::check(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return c;
    throw DomainError("no check named " + name);
}

namespace {

constexpr int kModeMax = 4;

struct ModeKey {
    int k;
    BoundaryCondition bc;
    bool operator<(const ModeKey& o) const { return k != o.k ? k < o.k : bc < o.bc; }
};

std::string kj(int k, int j) {
    std::ostringstream s;
    s << "(k=" << k << ", j=" << j << ")";
    return s.str();
}

/// Tracks the worst value of a "must be <= tolerance" quantity.
struct Worst {
    double value = 0.0;
    std::string where;
    bool any = false;

    void update(double v, const std::string& at) {
        if (!any || v > value) value = v, where = at, any = true;
    }
};

/// Tracks the smallest margin of a "must be > tolerance" quantity.
struct Smallest {
    double value = HUGE_VAL;
    std::string where;

    void update(double v, const std::string& at) {
        if (v < value) value = v, where = at;
    }
};

CheckResult upper_check(std::string name, const Worst& w, double tol) {
    const bool ok = w.value <= tol;
    return {std::move(name), w.value, tol, ok, ok ? "" : "worst at " + w.where};
}

CheckResult margin_check(std::string name, const Smallest& s, double tol) {
    const bool ok = s.value > tol;
    return {std::move(name), s.value, tol, ok, ok ? "" : "smallest margin at " + s.where,
            CheckKind::Margin};
}

}  // namespace

CertificationReport certify_lemmas(SpaceForm form, int n, double r1, double r2, int j_max,
                                   const SolverConfig& config) {
    if (j_max < 1) throw DomainError("certify_lemmas: j_max must be >= 1");
    CertificationReport report;
    report.form = form;
    report.n = n;
    report.r1 = r1;
    report.r2 = r2;
    report.j_max = j_max;
    report.cells = config.richardson ? 2 * config.grid_points : config.grid_points;

    // mu_{0,j+1} needs j_max + 1 Neumann k = 0 values.
    SolverConfig mode_cfg = config;
    mode_cfg.max_j = j_max + 1;
    mode_cfg.exec = Exec::Serial;

    std::vector<ModeKey> keys;
    for (int k = 0; k <= kModeMax + 1; ++k)
        for (auto bc : {BoundaryCondition::Neumann, BoundaryCondition::Dirichlet})
            keys.push_back({k, bc});
    std::vector<std::vector<SLEigenpair>> solved(keys.size());
#pragma omp parallel for schedule(dynamic, 1) if (config.exec == Exec::Parallel)
    for (std::size_t t = 0; t < keys.size(); ++t)
        solved[t] = solve({form, n, keys[t].k, r1, r2, keys[t].bc}, mode_cfg);
    std::map<ModeKey, const std::vector<SLEigenpair>*> modes;
    for (std::size_t t = 0; t < keys.size(); ++t) modes[keys[t]] = &solved[t];
    const auto mu = [&](int k, int j) { return (*modes.at({k, BoundaryCondition::Neumann}))[j - 1]; };
    const auto lambda = [&](int k, int j) {
        return (*modes.at({k, BoundaryCondition::Dirichlet}))[j - 1];
    };

    {
        Worst eq;
        Smallest strict;
        for (int j = 1; j <= j_max; ++j) {
            const double a = mu(0, j + 1).eigenvalue;
            const double b = lambda(1, j).eigenvalue;
            eq.update(std::abs(a - b), kj(0, j + 1) + " vs Dirichlet " + kj(1, j));
            strict.update(a - mu(1, j).eigenvalue, kj(1, j));
        }
        report.checks.push_back(upper_check("neumann_dirichlet_identity", eq, 1e-6));
        report.checks.push_back(margin_check("mode1_below_radial", strict, 1e-8));
    }
    {
        Smallest in_k;
        Smallest vs_dirichlet;
        for (int k = 0; k <= kModeMax; ++k) {
            for (int j = 1; j <= j_max; ++j) {
                in_k.update(mu(k + 1, j).eigenvalue - mu(k, j).eigenvalue, kj(k, j));
                vs_dirichlet.update(lambda(k, j).eigenvalue - mu(k, j).eigenvalue, kj(k, j));
            }
        }
        report.checks.push_back(margin_check("interlacing_in_k", in_k, 1e-8));
        report.checks.push_back(margin_check("neumann_below_dirichlet", vs_dirichlet, 1e-8));
    }
    {
        Worst nodes;
        Worst rayleigh;
        bool all_simple = true;
        std::string not_simple;
        for (const auto& [key, pairs] : modes) {
            for (const auto& p : *pairs) {
                const SLProblem prob{form, n, key.k, r1, r2, key.bc};
                const std::string at = kj(key.k, p.j) + " " + std::string(to_string(key.bc));
                nodes.update(std::abs(sign_changes(p) - (p.j - 1)), at);
                if (p.simple == false && all_simple) all_simple = false, not_simple = at;
                const double rq = rayleigh_quotient(p, prob);
                const double denom = std::max(std::abs(p.eigenvalue), 1.0);
                rayleigh.update(std::abs(rq - p.eigenvalue) / denom, at);
            }
        }
        report.checks.push_back(upper_check("node_count", nodes, 0.0));
        report.checks.push_back(upper_check("rayleigh_consistency", rayleigh, 1e-9));
        report.checks.push_back({"simple_eigenvalues", all_simple ? 0.0 : 1.0, 0.0, all_simple,
                                 all_simple ? "" : "near-degenerate " + not_simple});
    }

    if (r1 > 0.0) {
        Worst b_residual;
        Smallest b_interior;
        Smallest increasing;
        Smallest comparison;
        for (int k = 1; k <= 3; ++k) {
            const SLProblem prob{form, n, k, r1, r2, BoundaryCondition::Neumann};
            const SLEigenpair& p = mu(k, 1);
            const double angular = prob.angular_eigenvalue();
            try {
                const double b = locate_b(p, prob);
                const double s = sin_m(form, b);
                b_residual.update(std::abs(p.eigenvalue - angular / (s * s)) / p.eigenvalue, kj(k, 1));
                b_interior.update(std::min(b - r1, r2 - b), kj(k, 1));
            } catch (const std::exception& e) {
                b_residual.update(HUGE_VAL, kj(k, 1) + ": " + e.what());
                b_interior.update(-HUGE_VAL, kj(k, 1));
            }

            const auto& u = p.values;
            const std::size_t last = u.size() - 1;
            for (std::size_t i = 0; i < last; ++i) increasing.update(u[i + 1] - u[i], kj(k, 1));

            const double s2 = sin_m(form, r2) * sin_m(form, r2);
            const double rhs = (angular / s2 - p.eigenvalue) * u[last] * u[last];
            for (std::size_t i = 1; i < last; ++i) {
                const double si = sin_m(form, p.grid[i]);
                const double lhs = (angular / (si * si) - p.eigenvalue) * u[i] * u[i];
                comparison.update((lhs - rhs) / std::max(1.0, std::abs(rhs)), kj(k, 1));
            }
        }
        report.checks.push_back(upper_check("b_location_residual", b_residual, 1e-9));
        report.checks.push_back(margin_check("b_strictly_interior", b_interior, 0.0));
        report.checks.push_back(margin_check("first_eigenfunction_increasing", increasing, 0.0));
        report.checks.push_back(margin_check("pointwise_comparison", comparison, -1e-10));
    }
    return report;
}

}  // namespace sfs
