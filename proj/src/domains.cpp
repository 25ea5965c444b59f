#include "sfs/domains.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "sfs/error.hpp"
#include "sfs/quadrature.hpp"

namespace sfs {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSymmetryTol = 1e-12;

double monomial(std::span<const double> w, const std::array<int, 3>& p) {
    return std::pow(w[0], p[0]) * std::pow(w[1], p[1]) * std::pow(w[2], p[2]);
}

std::vector<std::array<int, 3>> distinct_permutations(std::array<int, 3> p) {
    std::sort(p.begin(), p.end());
    std::vector<std::array<int, 3>> out;
    do {
        out.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
}

using DirectionMap = std::function<std::vector<double>(const std::vector<double>&)>;

std::vector<DirectionMap> generators(Symmetry s, int n) {
    std::vector<DirectionMap> out;
    if (s == Symmetry::None) return out;
    if (s == Symmetry::Central) {
        out.push_back([](const std::vector<double>& w) {
            std::vector<double> v = w;
            for (double& x : v) x = -x;
            return v;
        });
        return out;
    }
    const int turns = s == Symmetry::Order2 ? 2 : 1;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            out.push_back([i, j, turns](const std::vector<double>& w) {
                return rotate(NormalCoords{w}, i, j, turns).x;
            });
    return out;
}

std::vector<double> polar_direction(double phi2, double phi3) {
    return {std::cos(phi2), std::sin(phi2) * std::cos(phi3), std::sin(phi2) * std::sin(phi3)};
}

double golden_min(const std::function<double(double)>& f, double a, double b, int iters = 80) {
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - g * (b - a);
    double d = a + g * (b - a);
    double fc = f(c);
    double fd = f(d);
    for (int i = 0; i < iters; ++i) {
        if (fc < fd) {
            b = d, d = c, fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c, c = d, fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    return std::min(fc, fd);
}

/// Minimum of f over unit directions: dense sample, then local refinement in
/// the angular chart (golden section for n = 2, shrinking coordinate scans
/// for n = 3).
double minimize_over_directions(int n, const std::function<double(std::span<const double>)>& f) {
    if (n == 2) {
        const int samples = 4096;
        const double step = 2.0 * kPi / samples;
        double best = HUGE_VAL;
        double best_theta = 0.0;
        for (int i = 0; i < samples; ++i) {
            const double t = step * i;
            const double v = f(std::vector<double>{std::cos(t), std::sin(t)});
            if (v < best) best = v, best_theta = t;
        }
        const auto along = [&](double t) { return f(std::vector<double>{std::cos(t), std::sin(t)}); };
        return std::min(best, golden_min(along, best_theta - step, best_theta + step));
    }
    const int np = 181;
    const int na = 360;
    double best = HUGE_VAL;
    double p2 = 0.0;
    double p3 = 0.0;
    for (int a = 0; a < np; ++a) {
        for (int b = 0; b < na; ++b) {
            const double phi2 = kPi * a / (np - 1);
            const double phi3 = 2.0 * kPi * b / na;
            const double v = f(polar_direction(phi2, phi3));
            if (v < best) best = v, p2 = phi2, p3 = phi3;
        }
    }
    double width = kPi / (np - 1);
    for (int round = 0; round < 6; ++round) {
        const auto in_phi2 = [&](double t) { return f(polar_direction(t, p3)); };
        double local = HUGE_VAL;
        for (int s = -20; s <= 20; ++s) {
            const double t = p2 + width * s / 20.0;
            const double v = in_phi2(t);
            if (v < local) local = v, p2 = t;
        }
        const auto in_phi3 = [&](double t) { return f(polar_direction(p2, t)); };
        for (int s = -20; s <= 20; ++s) {
            const double t = p3 + width * s / 20.0;
            const double v = in_phi3(t);
            if (v < local) local = v, p3 = t;
        }
        best = std::min(best, local);
        width *= 0.25;
    }
    return best;
}

}  // namespace

std::string_view to_string(Symmetry s) {
    switch (s) {
        case Symmetry::None: return "none";
        case Symmetry::Central: return "central";
        case Symmetry::Order2: return "order2";
        case Symmetry::Order4: return "order4";
    }
    return "none";
}

Symmetry parse_symmetry(std::string_view name) {
    if (name == "none" || name == "1") return Symmetry::None;
    if (name == "central") return Symmetry::Central;
    if (name == "order2" || name == "2") return Symmetry::Order2;
    if (name == "order4" || name == "4") return Symmetry::Order4;
    throw InputError("unknown symmetry class '" + std::string(name) + "'");
}

int rotation_order(Symmetry s) {
    switch (s) {
        case Symmetry::None: return 1;
        case Symmetry::Central:
        case Symmetry::Order2: return 2;
        case Symmetry::Order4: return 4;
    }
    return 1;
}

double BoundaryProfile::at_angle(double theta) const {
    double r = base;
    for (const auto& h : harmonics) r += h.a * std::cos(h.m * theta) + h.b * std::sin(h.m * theta);
    return r;
}

double BoundaryProfile::operator()(std::span<const double> w) const {
    if (w.size() == 2) return at_angle(std::atan2(w[1], w[0]));
    double r = base;
    for (const auto& t : terms) {
        if (t.permute) {
            for (const auto& p : distinct_permutations(t.powers)) r += t.c * monomial(w, p);
        } else {
            r += t.c * monomial(w, t.powers);
        }
    }
    return r;
}

std::vector<std::vector<double>> sample_directions(int n, int count) {
    std::vector<std::vector<double>> out;
    out.reserve(count);
    if (n == 2) {
        for (int i = 0; i < count; ++i) {
            const double t = 2.0 * kPi * (i + 0.1234) / count;
            out.push_back({std::cos(t), std::sin(t)});
        }
        return out;
    }
    // Fibonacci sphere
    const double golden = kPi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < count; ++i) {
        const double z = 1.0 - 2.0 * (i + 0.5) / count;
        const double rho = std::sqrt(1.0 - z * z);
        const double t = golden * i;
        out.push_back({z, rho * std::cos(t), rho * std::sin(t)});
    }
    return out;
}

void DomainSpec::validate(bool check_symmetry) const {
    if (n != 2 && n != 3) throw DomainError("domain specs support n = 2 and n = 3");
    for (const BoundaryProfile* p : {&rho_out, rho_in ? &*rho_in : nullptr}) {
        if (!p) continue;
        if (n == 2 && !p->terms.empty()) throw InputError("n = 2 profiles take harmonics, not terms");
        if (n == 3 && !p->harmonics.empty()) throw InputError("n = 3 profiles take terms, not harmonics");
        const int s = rotation_order(symmetry);
        for (const auto& h : p->harmonics) {
            if (h.m < 1) throw InputError("harmonic order m must be >= 1");
            if (h.m % s != 0) {
                std::ostringstream msg;
                msg << "harmonic m=" << h.m << " incompatible with symmetry " << to_string(symmetry);
                throw InputError(msg.str());
            }
        }
        for (const auto& t : p->terms) {
            const auto& q = t.powers;
            if (q[0] < 0 || q[1] < 0 || q[2] < 0) throw InputError("negative exponent in term");
            const bool even_degree = (q[0] + q[1] + q[2]) % 2 == 0;
            const bool same_parity = q[0] % 2 == q[1] % 2 && q[1] % 2 == q[2] % 2;
            const bool all_even = same_parity && q[0] % 2 == 0;
            const bool symmetric_orbit = t.permute || (q[0] == q[1] && q[1] == q[2]);
            bool ok = true;
            if (symmetry == Symmetry::Central) ok = even_degree;
            if (symmetry == Symmetry::Order2) ok = same_parity;
            if (symmetry == Symmetry::Order4) ok = all_even && symmetric_orbit;
            if (!ok) throw InputError("directional term incompatible with symmetry " +
                                      std::string(to_string(symmetry)));
        }
    }

    const auto dirs = sample_directions(n, n == 2 ? 2048 : 2000);
    for (const auto& w : dirs) {
        const double ro = rho_out(w);
        const double ri = inner(w);
        if (rho_in && !(ri > 0.0)) throw DomainError("inner boundary must stay at positive radius");
        if (!(ro > ri)) throw DomainError("outer boundary must lie outside the inner boundary");
    }
    if (form == SpaceForm::Spherical && sup_outer() > kPi / 2 + 1e-12)
        throw DomainError(
            "hemisphere bound violated: a spherical domain must lie inside the geodesic ball of "
            "radius pi/2 around the base point");

    if (!check_symmetry) return;
    for (const auto& g : generators(symmetry, n)) {
        for (const auto& w : dirs) {
            const auto v = g(w);
            for (const BoundaryProfile* p : {&rho_out, rho_in ? &*rho_in : nullptr}) {
                if (!p) continue;
                const double a = (*p)(w);
                const double b = (*p)(v);
                if (std::abs(a - b) > kSymmetryTol * std::max(1.0, std::abs(a)))
                    throw DomainError("boundary profile is not invariant under the declared " +
                                      std::string(to_string(symmetry)) + " symmetry");
            }
        }
    }
}

double DomainSpec::inscribed_inner_radius() const {
    if (!rho_in) return 0.0;
    if (rho_in->is_constant()) return rho_in->base;
    return minimize_over_directions(n, [this](std::span<const double> w) { return (*rho_in)(w); });
}

double DomainSpec::sup_outer() const {
    if (rho_out.is_constant()) return rho_out.base;
    return -minimize_over_directions(n, [this](std::span<const double> w) { return -rho_out(w); });
}

DomainSpec DomainSpec::annulus(SpaceForm form, int n, double r1, double r2) {
    DomainSpec s;
    s.form = form;
    s.n = n;
    s.symmetry = Symmetry::Order4;
    s.rho_out.base = r2;
    s.rho_in = BoundaryProfile{r1, {}, {}};
    return s;
}

DomainSpec DomainSpec::ball(SpaceForm form, int n, double radius) {
    DomainSpec s;
    s.form = form;
    s.n = n;
    s.symmetry = Symmetry::Order4;
    s.rho_out.base = radius;
    return s;
}

QuadratureGrid make_grid(const DomainSpec& spec, const QuadratureOptions& options) {
    if (options.radial < 1 || options.angular < 4 || options.polar < 1)
        throw DomainError("quadrature options too small");
    QuadratureGrid grid;
    grid.n = spec.n;
    grid.options = options;
    const double dphi = 2.0 * kPi / options.angular;
    if (spec.n == 2) {
        for (int j = 0; j < options.angular; ++j) {
            const double t = dphi * j;
            Ray ray{{std::cos(t), std::sin(t)}, dphi, 0.0, 0.0};
            grid.rays.push_back(std::move(ray));
        }
    } else if (spec.n == 3) {
        const GaussRule& rule = gauss_legendre(options.polar);
        for (std::size_t a = 0; a < rule.size(); ++a) {
            const double phi2 = 0.5 * kPi * (1.0 + rule.nodes[a]);
            const double w2 = 0.5 * kPi * rule.weights[a] * std::sin(phi2);
            for (int b = 0; b < options.angular; ++b) {
                Ray ray{polar_direction(phi2, dphi * b), w2 * dphi, 0.0, 0.0};
                grid.rays.push_back(std::move(ray));
            }
        }
    } else {
        throw DomainError("quadrature grids support n = 2 and n = 3");
    }
    for (auto& ray : grid.rays) {
        ray.inner = spec.inner(ray.direction);
        ray.outer = spec.outer(ray.direction);
    }
    return grid;
}

IntegralSet integrate_domain(const DomainSpec& spec, const QuadratureGrid& grid, int count,
                             const NodeIntegrand& integrand, std::span<const double> breakpoints,
                             Exec exec) {
    const int rays = static_cast<int>(grid.rays.size());
    const int n = grid.n;
    const GaussRule& rule = gauss_legendre(grid.options.radial);
    std::vector<double> sums(static_cast<std::size_t>(rays) * count, 0.0);
    std::vector<double> mags(sums.size(), 0.0);

    const auto ray_kernel = [&](int index, std::vector<double>& x, std::vector<double>& out) {
        const Ray& ray = grid.rays[index];
        std::vector<double> cuts{ray.inner};
        for (double b : breakpoints)
            if (b > ray.inner && b < ray.outer) cuts.push_back(b);
        cuts.push_back(ray.outer);
        std::sort(cuts.begin(), cuts.end());
        double* s = &sums[static_cast<std::size_t>(index) * count];
        double* m = &mags[static_cast<std::size_t>(index) * count];
        for (std::size_t seg = 0; seg + 1 < cuts.size(); ++seg) {
            const double half = 0.5 * (cuts[seg + 1] - cuts[seg]);
            const double mid = 0.5 * (cuts[seg + 1] + cuts[seg]);
            for (std::size_t q = 0; q < rule.size(); ++q) {
                const double r = mid + half * rule.nodes[q];
                for (int d = 0; d < n; ++d) x[d] = r * ray.direction[d];
                const double w =
                    rule.weights[q] * half * std::pow(sin_m(spec.form, r), n - 1) * ray.weight;
                std::fill(out.begin(), out.end(), 0.0);
                integrand(QuadratureNode{r, x, w}, out);
                for (int c = 0; c < count; ++c) {
                    s[c] += w * out[c];
                    m[c] += w * std::abs(out[c]);
                }
            }
        }
    };

    if (exec == Exec::Parallel) {
#pragma omp parallel
        {
            std::vector<double> x(n), out(count);
#pragma omp for schedule(static)
            for (int i = 0; i < rays; ++i) ray_kernel(i, x, out);
        }
    } else {
        std::vector<double> x(n), out(count);
        for (int i = 0; i < rays; ++i) ray_kernel(i, x, out);
    }

    IntegralSet result;
    result.values.resize(count);
    result.magnitudes.resize(count);
    std::vector<double> column(rays);
    for (int c = 0; c < count; ++c) {
        for (int i = 0; i < rays; ++i) column[i] = sums[static_cast<std::size_t>(i) * count + c];
        result.values[c] = pairwise_sum(column);
        for (int i = 0; i < rays; ++i) column[i] = mags[static_cast<std::size_t>(i) * count + c];
        result.magnitudes[c] = pairwise_sum(column);
    }
    return result;
}

RadialFunction RadialFunction::constant(double c) {
    return {[c](double) { return c; }, [](double) { return 0.0; }, {}};
}

RadialFunction RadialFunction::from(const ExtendedEigenfunction& g) {
    return {[g](double r) { return g.value(r); }, [g](double r) { return g.derivative(r); },
            {g.outer_radius()}};
}

double volume(const DomainSpec& spec, const QuadratureGrid& grid, Exec exec) {
    const auto one = [](const QuadratureNode&, std::span<double> out) { out[0] = 1.0; };
    return integrate_domain(spec, grid, 1, one, {}, exec).values[0];
}

MomentResult integrate_moment(const DomainSpec& spec, const QuadratureGrid& grid,
                              const RadialFunction& g, std::span<const int> powers, Exec exec) {
    if (static_cast<int>(powers.size()) != spec.n)
        throw DomainError("moment exponent tuple must have one entry per coordinate");
    const std::vector<int> p(powers.begin(), powers.end());
    const auto f = [&](const QuadratureNode& node, std::span<double> out) {
        double v = g.value(node.r);
        for (std::size_t d = 0; d < p.size(); ++d) v *= std::pow(node.x[d], p[d]);
        out[0] = v;
    };
    const IntegralSet s = integrate_domain(spec, grid, 1, f, g.breakpoints, exec);
    return {s.values[0], s.magnitudes[0]};
}

double grad_pair_density(SpaceForm form, double r, double g, double dg, double xi, double xj) {
    const double s = sin_m(form, r);
    const double radial = (r * dg + g) / r;
    return (radial * radial - g * g / (s * s)) * xi * xj;
}

namespace {

/// Sum of the magnitudes of the two terms of grad_pair_density; the relative
/// scale for cross integrals whose integrand cancels identically.
double grad_pair_scale(SpaceForm form, double r, double g, double dg, double xi, double xj) {
    const double s = sin_m(form, r);
    const double radial = (r * dg + g) / r;
    return (radial * radial + g * g / (s * s)) * std::abs(xi * xj);
}

}  // namespace

double grad_norm_density(SpaceForm form, double r, double g, double dg, double xi) {
    const double s = sin_m(form, r);
    const double c = xi / r;
    return dg * dg * c * c + g * g / (s * s) * (1.0 - c * c);
}

MomentResult grad_pair_integral(const DomainSpec& spec, const QuadratureGrid& grid,
                                const RadialFunction& g, int i, int j, Exec exec) {
    if (i == j || i < 0 || j < 0 || i >= spec.n || j >= spec.n)
        throw DomainError("grad_pair_integral needs distinct axes in [0, n)");
    const auto f = [&](const QuadratureNode& node, std::span<double> out) {
        const double gv = g.value(node.r);
        const double dg = g.derivative(node.r);
        out[0] = grad_pair_density(spec.form, node.r, gv, dg, node.x[i], node.x[j]);
        out[1] = grad_pair_scale(spec.form, node.r, gv, dg, node.x[i], node.x[j]);
    };
    const IntegralSet s = integrate_domain(spec, grid, 2, f, g.breakpoints, exec);
    return {s.values[0], s.values[1]};
}

double rayleigh_gk(const DomainSpec& spec, const QuadratureGrid& grid, int k,
                   const SLEigenpair& pair, const SLProblem& problem, Exec exec) {
    if (problem.k != k || pair.k != k || pair.j != 1 || pair.bc != BoundaryCondition::Neumann)
        throw DomainError("rayleigh_gk needs the (k,1) Neumann eigenpair of mode k");
    if (problem.form != spec.form || problem.n != spec.n)
        throw DomainError("rayleigh_gk: eigenpair computed for a different space form or dimension");
    if (spec.has_hole()) {
        if (problem.r1 > spec.inscribed_inner_radius() + 1e-12)
            throw DomainError("rayleigh_gk: inner ball B_R1 must lie inside the hole");
    } else if (problem.r1 != 0.0) {
        throw DomainError("rayleigh_gk: domains without hole are compared with balls (R1 = 0)");
    }
    const double vol = volume(spec, grid, exec);
    const double target = annulus_volume(spec.form, spec.n, problem.r1, problem.r2);
    if (std::abs(vol - target) > 1e-8 * target)
        throw DomainError("rayleigh_gk: domain volume differs from the comparison annulus");

    const ExtendedEigenfunction gk =
        extend_gk(pair, problem, std::max(spec.sup_outer(), problem.r2));
    const double angular = problem.angular_eigenvalue();
    const auto f = [&](const QuadratureNode& node, std::span<double> out) {
        const double s = sin_m(spec.form, node.r);
        const double v = gk.value(node.r);
        const double d = gk.derivative(node.r);
        out[0] = d * d + angular / (s * s) * v * v;
        out[1] = v * v;
    };
    const double bp[] = {problem.r2};
    const IntegralSet sums = integrate_domain(spec, grid, 2, f, bp, exec);
    return sums.values[0] / sums.values[1];
}

IdentityResidual sum_gradient_identity_check(const DomainSpec& spec, const QuadratureGrid& grid,
                                             const SLEigenpair& pair, const SLProblem& problem) {
    const ExtendedEigenfunction gk =
        extend_gk(pair, problem, std::max(spec.sup_outer(), problem.r2));
    const GaussRule& rule = gauss_legendre(grid.options.radial);
    IdentityResidual res;
    for (const Ray& ray : grid.rays) {
        const double lo = std::max(ray.inner, problem.r1);
        const double half = 0.5 * (ray.outer - lo);
        const double mid = 0.5 * (ray.outer + lo);
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const double r = mid + half * rule.nodes[q];
            const double g = gk.value(r);
            const double dg = gk.derivative(r);
            double lhs = 0.0;
            for (int i = 0; i < spec.n; ++i)
                lhs += grad_norm_density(spec.form, r, g, dg, r * ray.direction[i]);
            const double s = sin_m(spec.form, r);
            const double rhs = dg * dg + (spec.n - 1) * g * g / (s * s);
            const double scale = std::max(rhs, std::numeric_limits<double>::min());
            res.max_residual = std::max(res.max_residual, std::abs(lhs - rhs) / scale);
            ++res.nodes;
        }
    }
    return res;
}

namespace {

struct MomentPlan {
    std::vector<std::vector<int>> powers;
    std::vector<std::array<int, 2>> grad_pairs;

    int add(std::vector<int> p) {
        for (std::size_t i = 0; i < powers.size(); ++i)
            if (powers[i] == p) return static_cast<int>(i);
        powers.push_back(std::move(p));
        return static_cast<int>(powers.size()) - 1;
    }
    int add_grad(int i, int j) {
        grad_pairs.push_back({i, j});
        return static_cast<int>(powers.size() + grad_pairs.size()) - 1;
    }
};

std::vector<int> unit_powers(int n, std::initializer_list<std::pair<int, int>> entries) {
    std::vector<int> p(n, 0);
    for (auto [axis, e] : entries) p[axis] += e;
    return p;
}

std::string axes(int i, int j, int m) {
    std::ostringstream s;
    s << "i=" << i + 1 << " j=" << j + 1 << " m=" << m;
    return s.str();
}

}  // namespace

std::vector<CheckResult> orthogonality_checks(const DomainSpec& spec, const QuadratureGrid& grid,
                                              const RadialFunction& g, Symmetry as_class,
                                              double tolerance, Exec exec) {
    const int n = spec.n;
    std::vector<CheckResult> checks;
    if (as_class == Symmetry::None) return checks;

    const bool order4 = as_class == Symmetry::Order4;
    // Order 4 contains the half turns; for n = 2 the half turn is X -> -X.
    const bool central_checks = as_class == Symmetry::Central || (n == 2 && as_class != Symmetry::None);
    const bool order2_checks = n >= 3 && (as_class == Symmetry::Order2 || order4);

    MomentPlan plan;
    struct Item {
        std::string check;
        int index;
        std::string where;
    };
    std::vector<Item> items;
    if (central_checks) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int m = 0; m <= 2 && i != j; ++m)
                    items.push_back({"central_mixed_moments",
                                     plan.add(unit_powers(n, {{i, 1}, {j, 2 * m}})), axes(i, j, 2 * m)});
        for (int i = 0; i < n; ++i)
            for (int m = 0; m <= 2; ++m)
                items.push_back({"central_odd_powers", plan.add(unit_powers(n, {{i, 2 * m + 1}})),
                                 axes(i, i, 2 * m + 1)});
    }
    if (order2_checks) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int m = 0; m <= 3 && i != j; ++m)
                    items.push_back({"order2_mixed_moments",
                                     plan.add(unit_powers(n, {{i, 1}, {j, m}})), axes(i, j, m)});
        for (int i = 0; i < n; ++i)
            for (int m = 0; m <= 2; ++m)
                items.push_back({"order2_odd_powers", plan.add(unit_powers(n, {{i, 2 * m + 1}})),
                                 axes(i, i, 2 * m + 1)});
    }
    std::vector<int> second(n), fourth(n);
    if (order4) {
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                items.push_back({"order4_cross_moments", plan.add(unit_powers(n, {{i, 1}, {j, 1}})),
                                 axes(i, j, 1)});
        for (int i = 0; i < n; ++i) {
            second[i] = plan.add(unit_powers(n, {{i, 2}}));
            fourth[i] = plan.add(unit_powers(n, {{i, 4}}));
        }
    }
    // gradient cross terms are indexed after all monomials
    std::vector<Item> grad_items;
    if (order4)
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) grad_items.push_back({"order4_gradient_cross", 0, axes(i, j, 1)});
    const int monomials = static_cast<int>(plan.powers.size());
    {
        int slot = monomials;
        for (int i = 0; i < n && order4; ++i)
            for (int j = i + 1; j < n; ++j) {
                plan.grad_pairs.push_back({i, j});
                grad_items[slot - monomials].index = slot;
                ++slot;
            }
    }
    for (auto& it : grad_items) items.push_back(it);

    const int pairs = static_cast<int>(plan.grad_pairs.size());
    const int total = monomials + 2 * pairs;
    const auto f = [&](const QuadratureNode& node, std::span<double> out) {
        const double gv = g.value(node.r);
        for (int c = 0; c < monomials; ++c) {
            double v = gv;
            const auto& p = plan.powers[c];
            for (int d = 0; d < n; ++d)
                if (p[d]) v *= std::pow(node.x[d], p[d]);
            out[c] = v;
        }
        if (!plan.grad_pairs.empty()) {
            const double dg = g.derivative(node.r);
            for (std::size_t t = 0; t < plan.grad_pairs.size(); ++t) {
                const auto [i, j] = plan.grad_pairs[t];
                out[monomials + t] = grad_pair_density(spec.form, node.r, gv, dg, node.x[i], node.x[j]);
                out[monomials + pairs + t] = grad_pair_scale(spec.form, node.r, gv, dg, node.x[i], node.x[j]);
            }
        }
    };
    const IntegralSet sums = integrate_domain(spec, grid, total, f, g.breakpoints, exec);

    const auto record = [&](const std::string& name, double residual, const std::string& where) {
        for (auto& c : checks) {
            if (c.name != name) continue;
            if (residual > c.residual) c.residual = residual, c.detail = where;
            c.passed = c.residual <= tolerance;
            return;
        }
        checks.push_back({name, residual, tolerance, residual <= tolerance, where});
    };
    for (const auto& it : items) {
        const double mag = it.index >= monomials ? sums.values[it.index + pairs] : sums.magnitudes[it.index];
        const double rel = mag > 0.0 ? std::abs(sums.values[it.index]) / mag : 0.0;
        record(it.check, rel, it.where);
    }
    if (order4) {
        for (int i = 1; i < n; ++i) {
            const double s2 = sums.magnitudes[second[0]];
            const double s4 = sums.magnitudes[fourth[0]];
            record("order4_equal_second_moments",
                   std::abs(sums.values[second[i]] - sums.values[second[0]]) / s2, axes(0, i, 2));
            record("order4_equal_fourth_moments",
                   std::abs(sums.values[fourth[i]] - sums.values[fourth[0]]) / s4, axes(0, i, 4));
        }
    }
    for (auto& c : checks)
        if (c.passed) c.detail.clear();
    return checks;
}

DomainSpec random_domain(SpaceForm form, int n, Symmetry symmetry, double amplitude, bool hole,
                         std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto between = [&](double a, double b) { return a + (b - a) * unit(rng); };

    DomainSpec spec;
    spec.form = form;
    spec.n = n;
    spec.symmetry = symmetry;
    double r_in = 0.0;
    double r_out;
    if (form == SpaceForm::Spherical) {
        r_out = hole ? between(1.05, 1.3) : between(0.9, 1.3);
        if (hole) r_in = between(0.3, 0.4);
    } else {
        if (hole) r_in = between(0.3, 0.6);
        r_out = hole ? r_in + between(0.7, 1.0) : between(0.8, 1.2);
    }
    const double budget = amplitude * (r_out - r_in);

    const auto perturb = [&](double base) {
        BoundaryProfile p;
        p.base = base;
        if (n == 2) {
            const int s = rotation_order(symmetry);
            std::vector<int> orders{s, 2 * s};
            if (symmetry == Symmetry::None) orders = {1, 2, 3};
            const double each = budget / (2.0 * orders.size());
            for (int m : orders) p.harmonics.push_back({m, each * between(-1, 1), each * between(-1, 1)});
        } else {
            std::vector<DirectionalTerm> pool;
            switch (symmetry) {
                case Symmetry::None:
                    pool = {{{1, 0, 0}, 0, false}, {{0, 1, 1}, 0, false}, {{2, 1, 0}, 0, false}};
                    break;
                case Symmetry::Central:
                    pool = {{{1, 1, 0}, 0, false}, {{0, 1, 1}, 0, false}, {{2, 0, 0}, 0, false},
                            {{3, 1, 0}, 0, false}};
                    break;
                case Symmetry::Order2:
                    pool = {{{1, 1, 1}, 0, false}, {{2, 0, 0}, 0, false}, {{0, 2, 2}, 0, false},
                            {{3, 1, 1}, 0, false}};
                    break;
                case Symmetry::Order4:
                    pool = {{{4, 0, 0}, 0, true}, {{2, 2, 0}, 0, true}, {{2, 2, 2}, 0, false}};
                    break;
            }
            for (auto& t : pool) {
                const double orbit = t.permute ? 3.0 : 1.0;
                t.c = budget / (pool.size() * orbit) * between(-1, 1);
                p.terms.push_back(t);
            }
        }
        return p;
    };
    spec.rho_out = perturb(r_out);
    if (hole) spec.rho_in = perturb(r_in);
    spec.validate();
    return spec;
}

}  // namespace sfs
