// Acceptance report: one PASS/FAIL line per criterion, measured value next to its tolerance.

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hsd/bvp.hpp"
#include "hsd/cli.hpp"
#include "hsd/error.hpp"
#include "hsd/factorize.hpp"
#include "hsd/index.hpp"
#include "hsd/parallel.hpp"
#include "hsd/sobolev.hpp"
#include "hsd/solver.hpp"
#include "hsd/spectral.hpp"
#include "oracles.hpp"

using namespace hsd;
using oracle::cplx;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

class Verdict {
public:
    void check(bool ok, const std::string& what, double value, double limit) {
        pass_ = pass_ && ok;
        char buf[160];
        std::snprintf(buf, sizeof buf, "%s=%.3g (<%.3g)%s", what.c_str(), value, limit, ok ? "" : " !");
        add(buf);
    }
    void below(const std::string& what, double value, double limit) { check(value < limit, what, value, limit); }
    void flag(bool ok, const std::string& what) {
        pass_ = pass_ && ok;
        add(what + (ok ? "" : " !"));
    }
    bool pass() const { return pass_; }
    const std::string& detail() const { return detail_; }

private:
    void add(const std::string& s) { detail_ += (detail_.empty() ? "" : "; ") + s; }
    bool pass_ = true;
    std::string detail_;
};

double rel_max(const SampledField& a, const SampledField& b, double scale) {
    return oracle::max_abs_diff(a.values, b.values) / scale;
}

double interior_max_diff(const SampledField& a, const SampledField& b, double band) {
    double m = 0.0;
    for (int j = 0; j < a.grid.points(); ++j)
        if (std::abs(a.grid.xi_node(j)) <= band) m = std::max(m, std::abs(a.values[j] - b.values[j]));
    return m;
}

// --- projectors -----------------------------------------------------------------------------

void projector_suite(Verdict& v) {
    const auto t0 = Clock::now();
    const SpectralGrid g(1, 1024, 64.0);
    std::mt19937_64 rng(101);
    double idem = 0.0, sum = 0.0;
    for (int k = 0; k < 50; ++k) {
        const SampledField f = taper(oracle::random_smooth_xi(g, rng));
        const double scale = f.max_abs();
        const SampledField plus = projector(f, Sign::Plus);
        const SampledField minus = projector(f, Sign::Minus);
        idem = std::max(idem, rel_max(projector(plus, Sign::Plus), plus, scale));
        idem = std::max(idem, rel_max(projector(minus, Sign::Minus), minus, scale));
        sum = std::max(sum, rel_max(plus + minus, f, scale));
    }
    v.below("idempotence", idem, 1e-6);
    v.below("plus+minus-identity", sum, 1e-14);

    const SampledField anchor = fourier_forward(sample_x(g, [](const std::vector<double>&, double x) {
        return cplx(x > 0.0 ? std::exp(-x) : 0.0);
    }));
    v.below("anchor-plus", interior_max_diff(projector(anchor, Sign::Plus), anchor, 0.9 * g.xi_extent()), 1e-3);
    v.below("anchor-minus", projector(anchor, Sign::Minus).max_abs(), 1e-3);
    v.below("runtime_s", seconds_since(t0), 10.0);
}

// --- index ----------------------------------------------------------------------------------

std::vector<cplx> poly_from_roots(const std::vector<cplx>& roots, cplx gain) {
    std::vector<cplx> c{gain};
    for (const cplx& r : roots) {
        std::vector<cplx> next(c.size() + 1, 0.0);
        for (std::size_t k = 0; k < c.size(); ++k) {
            next[k + 1] += c[k];
            next[k] -= r * c[k];
        }
        c = next;
    }
    return c;
}

void index_oracle(Verdict& v) {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double h = 0.5;
    const SpectralGrid g(1, 1024, oracle::pi / h);
    WindingOptions opt;
    opt.mode = WindingMode::PerPeriod;
    opt.period = 2.0 * oracle::pi / h;
    int mismatches = 0;
    for (int trial = 0; trial < 20; ++trial) {
        const int degree = 1 + static_cast<int>(u(rng) * 6.0) % 6;
        std::vector<cplx> roots;
        for (int k = 0; k < degree; ++k) {
            const double radius = u(rng) < 0.5 ? 0.2 + 0.75 * u(rng) : 1.05 + 1.95 * u(rng);
            roots.push_back(std::polar(radius, 2.0 * oracle::pi * u(rng)));
        }
        const std::vector<cplx> c = poly_from_roots(roots, std::polar(0.5 + u(rng), 6.0 * u(rng)));
        std::vector<ShiftTerm> terms;
        for (std::size_t j = 0; j < c.size(); ++j) terms.push_back({c[j], {static_cast<double>(j) * h}});
        const DifferenceOperator d(terms);
        if (winding_number(symbol_eval(SymbolSpec{d}, g), opt).ae != winding_oracle_roots(d)) ++mismatches;
    }
    v.check(mismatches == 0, "mismatches/20", mismatches, 1.0);

    const IndexReport w = winding_number(symbol_eval(SymbolSpec{RationalPreset::omega_power(1)}, SpectralGrid(1, 1024, 64.0)));
    v.below("omega1-line-winding-error", std::abs(w.raw_winding - 1.0), 0.1);
    v.below("runtime_s", seconds_since(t0), 5.0);
}

// --- factorization --------------------------------------------------------------------------

DifferenceOperator random_dominant(std::mt19937_64& rng, int dim) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<ShiftTerm> terms;
    std::vector<double> zero(static_cast<std::size_t>(dim), 0.0);
    terms.push_back({cplx(2.0 + u(rng), 0.3 * u(rng)), zero});
    const double budget = 0.9 * std::abs(terms[0].coeff);
    const int steps[] = {1, 2, 3, 5};
    for (int k = 0; k < 4; ++k) {
        std::vector<double> shift = zero;
        shift.back() = steps[k];
        if (dim == 2) shift[0] = 0.25 * k * (u(rng) > 0 ? 1 : -1);
        const double mag = 0.25 * budget * (0.5 + 0.5 * std::abs(u(rng)));
        terms.push_back({std::polar(mag, 3.0 * u(rng)), shift});
    }
    return DifferenceOperator(terms);
}

void factorization_suite(Verdict& v) {
    const auto t0 = Clock::now();
    struct Case {
        std::string name;
        SymbolSpec spec;
        SpectralGrid grid;
    };
    const SpectralGrid periodic(1, 512, 16.0 * oracle::pi);
    std::vector<Case> cases{{"identity", SymbolSpec{DifferenceOperator::identity(1)}, SpectralGrid(1, 256, 16.0)}};
    std::mt19937_64 rng(99);
    for (int k = 0; k < 5; ++k) cases.push_back({"dominant", SymbolSpec{random_dominant(rng, 1)}, periodic});
    cases.push_back({"dominant-2d", SymbolSpec{random_dominant(rng, 2)}, SpectralGrid(2, 64, 4.0 * oracle::pi)});
    for (int ae : {-3, -2, -1, 1, 2, 3})
        cases.push_back({"omega", SymbolSpec{RationalPreset::omega_power(ae)}, SpectralGrid(1, 1024, 64.0)});
    cases.push_back({"rational", SymbolSpec{RationalPreset::quadratic_ratio(2.0, 1.0)}, SpectralGrid(1, 4096, 256.0)});

    double recon = 0.0, leak = 0.0;
    std::string worst_recon, worst_leak;
    for (const Case& c : cases) {
        const FactorizationResult f = factorize(c.spec, c.grid);
        if (f.reconstruction_residual >= recon) recon = f.reconstruction_residual, worst_recon = c.name;
        const double l = std::max(f.one_sided_plus, f.one_sided_minus);
        if (l >= leak) leak = l, worst_leak = c.name;
    }
    v.below("reconstruction[" + worst_recon + "]", recon, 1e-6);
    v.below("one-sided-leakage[" + worst_leak + "]", leak, 1e-6);
    v.below("runtime_s", seconds_since(t0), 10.0);
}

// --- unique regime --------------------------------------------------------------------------

double bump(double x) { return x >= 0.0 ? std::exp(-0.5 * (x - 3.0) * (x - 3.0) / 0.25) : 0.0; }

double geometric_series(double x, double h) {
    double acc = 0.0, w = 1.0;
    for (int j = 0; j < 200 && w > 1e-18; ++j, w *= 0.5) acc += w * bump(x + j * h);
    return acc;
}

SampledField bump_rhs(const SpectralGrid& g) {
    return sample_x(g, [](const std::vector<double>& xp, double xm) {
        double r2 = 0.0;
        for (double c : xp) r2 += c * c;
        return cplx(bump(xm) * std::exp(-0.5 * r2));
    });
}

double geometric_error(const SampledField& u, double h, double scale) {
    const SpectralGrid& g = u.grid;
    const double upper = 0.8 * g.x_max();
    double worst = 0.0;
    for (std::size_t s = 0; s < g.slices(); ++s) {
        double weight = 1.0;
        bool inside = true;
        for (double c : g.x_prime(s)) {
            weight *= std::exp(-0.5 * c * c);
            inside = inside && std::abs(c) <= upper;
        }
        if (!inside) continue;
        for (int j = 0; j < g.points(); ++j) {
            const double x = g.x_node(j);
            if (x <= 0.0 || x > upper) continue;
            worst = std::max(worst, std::abs(u.slice(s)[j] - weight * geometric_series(x, h)));
        }
    }
    return worst / scale;
}

void geometric_case(Verdict& v, int dim, int points, double extent, int steps, double budget) {
    const auto t0 = Clock::now();
    const SpectralGrid g(dim, points, extent);
    const double h = steps * g.dx();
    std::vector<double> zero(static_cast<std::size_t>(dim), 0.0), shift = zero;
    shift.back() = h;
    const HalfSpaceProblem p({DifferenceOperator(std::vector<ShiftTerm>{{1.0, zero}, {-0.5, shift}})}, g);
    const SampledField rhs = bump_rhs(g);
    const SolveResult zero_ext = solve_unique(p, rhs, 0.0);
    SolveOptions opt;
    opt.extension = Extension::Reflect;
    const SolveResult refl = solve_unique(p, rhs, 0.0, opt);
    const std::string tag = std::to_string(dim) + "d-";
    v.below(tag + "oracle-error", geometric_error(zero_ext.u_plus, h, rhs.max_abs()), 1e-5);
    v.below(tag + "leakage", zero_ext.support_leakage, 1e-3);
    v.below(tag + "zero-vs-reflect", rel_max(zero_ext.u_plus, refl.u_plus, zero_ext.u_plus.max_abs()), 1e-4);
    v.below(tag + "runtime_s", seconds_since(t0), budget);
}

void unique_suite(Verdict& v) {
    geometric_case(v, 1, 1024, 64.0, 8, 5.0);
    geometric_case(v, 2, 256, 16.0, 2, 60.0);
}

// --- minus regime homogeneous ---------------------------------------------------------------

void minus_homogeneous(Verdict& v) {
    const SpectralGrid g(1, 2048, 128.0);
    const HalfSpaceProblem p({RationalPreset::omega_power(-1)}, g);
    const SampledField hom = homogeneous_solution(p, -0.2, {{cplx(1.0, 0.0)}});
    const SampledField u = fourier_inverse(hom);
    v.below("plus-side-residual", plus_side_residual(p.factors.sigma * hom, SolveOptions{}) / u.max_abs(), 1e-4);
    // 1 / (xi + i) is the transform of -i theta(x) e^{-x}.
    double worst = 0.0;
    for (int j = 0; j < g.points(); ++j) {
        const double x = g.x_node(j);
        if (std::abs(x) < 1.0 || std::abs(x) > 0.8 * g.x_max()) continue;
        const cplx want = x > 0 ? cplx(0.0, -std::exp(-x)) : cplx(0.0);
        worst = std::max(worst, std::abs(u.values[j] - want));
    }
    v.below("one-pole-error", worst, 1e-3);
}

// --- trace boundary problems ----------------------------------------------------------------

void trace_round_trip(Verdict& v) {
    struct MinusCase {
        int n;
        double s;
    };
    const std::vector<double> all_planes{-1.3, 0.4, 1.7};
    const cplx vals[] = {{1.0, 0.0}, {0.5, -1.0}, {-0.25, 0.75}};
    const SpectralGrid g(1, 2048, 128.0);
    double trip = 0.0, manufactured = 0.0;
    for (const MinusCase mc : {MinusCase{1, -0.2}, MinusCase{2, 0.1}, MinusCase{3, 0.1}}) {
        const HalfSpaceProblem p({RationalPreset::omega_power(-mc.n)}, g);
        const std::vector<double> planes(all_planes.begin(), all_planes.begin() + mc.n);
        std::vector<std::vector<cplx>> data;
        for (int k = 0; k < mc.n; ++k) data.push_back({vals[k]});

        const BvpResult r = solve_bvp_traces(p, mc.s, {planes, data, {}});
        for (int k = 0; k < mc.n; ++k)
            trip = std::max(trip, std::abs(trace_at_plane(r.solution.u_plus, planes[k])[0] - data[k][0]) /
                                      std::abs(data[k][0]));

        const SampledField w = fourier_inverse(homogeneous_solution(p, mc.s, data));
        TraceConditions bc{planes, {}, {}};
        for (double pj : planes) bc.r.push_back(trace_at_plane(w, pj));
        manufactured = std::max(manufactured, rel_max(solve_bvp_traces(p, mc.s, bc).solution.u_plus, w, w.max_abs()));
    }
    v.below("trace-round-trip", trip, 1e-3);
    v.below("manufactured", manufactured, 1e-3);

    std::mt19937_64 rng(2);
    std::uniform_int_distribution<int> coef(-9, 9);
    double vand = 0.0;
    for (int n = 1; n <= 5; ++n) {
        std::vector<double> p;
        for (int j = 0; j < n; ++j) p.push_back(-2.0 + j * (n > 1 ? 4.0 / (n - 1) : 0.0) + (j == 0 ? 0.125 : 0.0));
        std::vector<cplx> c(static_cast<std::size_t>(n));
        for (auto& ck : c) ck = cplx(coef(rng), coef(rng)) / 4.0;
        std::vector<std::vector<cplx>> rhs;
        for (double pj : p) {
            cplx acc = 0.0, pw = 1.0;
            for (const cplx& ck : c) acc += ck * pw, pw *= pj;
            rhs.push_back({acc});
        }
        const VandermondeSolution sol = vandermonde_solve(p, rhs);
        for (int k = 0; k < n; ++k) vand = std::max(vand, std::abs(sol.coefficients[k][0] - c[k]));
    }
    v.below("vandermonde-recovery", vand, 1e-10);
}

// --- pseudodifferential gates ---------------------------------------------------------------

PseudoCondition lambda_condition(Sign sign, std::vector<cplx> r) {
    const double sg = sign_value(sign);
    return {[sg](double xp, double xm) { return 1.0 / cplx(xm, sg * (xp + 1.0)); }, -1.0, std::move(r)};
}

int run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "hsdiff");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    return cli::main_entry(static_cast<int>(argv.size()), argv.data());
}

fs::path fixture(const std::string& name) { return fs::path(HSD_FIXTURE_DIR) / (name + ".json"); }

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / "hsd_acceptance" / name;
    fs::remove_all(p);
    return p;
}

void pseudo_gates(Verdict& v) {
    const HalfSpaceProblem p({RationalPreset::omega_power(-2)}, SpectralGrid(1, 2048, 128.0));
    const cplx zero = pseudo_bc_matrix(p, 1.0, {lambda_condition(Sign::Plus, {1.0})}).entries[0][0];
    const cplx res = pseudo_bc_matrix(p, 1.0, {lambda_condition(Sign::Minus, {1.0})}).entries[0][0];
    v.below("residue-zero", std::abs(zero), 1e-3);
    v.below("residue-pole", std::abs(res - cplx(0.0, -oracle::pi / 2.0)), 1e-3);

    const SpectralGrid g2(2, 512, 64.0);
    const HalfSpaceProblem p2({RationalPreset::omega_power(-2)}, g2);
    const BcMatrix m2 = pseudo_bc_matrix(p2, 1.0, {lambda_condition(Sign::Minus, std::vector<cplx>(g2.slices()))});
    double worst = 0.0;
    for (std::size_t s = 0; s < g2.slices(); ++s) {
        const double c = g2.xi_prime_norm(s) + 1.0;
        if (c > 8.0) continue;
        worst = std::max(worst, std::abs(m2.entries[s][0] - cplx(0.0, -oracle::pi / (2.0 * c * c))));
    }
    v.below("residue-pole-2d", worst, 1e-3);

    bool refused = false;
    try {
        const HalfSpaceProblem q({RationalPreset::omega_power(-1)}, SpectralGrid(1, 1024, 64.0));
        pseudo_bc_matrix(q, -0.2, {lambda_condition(Sign::Minus, {1.0})});
    } catch (const Error& e) {
        refused = e.kind() == ErrorKind::Input;
    }
    v.flag(refused, "precondition-refused");

    const fs::path dir = scratch("singular");
    const int code = run_cli({"--input", fixture("pseudo_singular").string(), "--outdir", dir.string(), "--command", "bvp"});
    v.flag(code == 2, "singular-exit-code=" + std::to_string(code));
    v.flag(!fs::exists(dir / "solution.csv"), "no-solution-written");
}

// --- norms ----------------------------------------------------------------------------------

double grid_l2(const SampledField& u) {
    double acc = 0.0;
    for (const cplx& z : u.values) acc += std::norm(z);
    return std::sqrt(acc * std::pow(u.grid.dx(), u.grid.dim()));
}

SampledField random_field(const SpectralGrid& g, std::mt19937_64& rng) {
    std::normal_distribution<double> n01;
    SampledField f(g, Side::X);
    for (auto& z : f.values) z = cplx(n01(rng), n01(rng));
    return f;
}

double gaussian_h1_quadrature() {
    const int n = 200000;
    const double L = 40.0, h = L / n;
    auto f = [](double xi) {
        const double ft = oracle::gaussian_ft(xi);
        return (1.0 + std::abs(xi)) * (1.0 + std::abs(xi)) * ft * ft / (2.0 * oracle::pi);
    };
    double acc = f(0.0) + f(L);
    for (int k = 1; k < n; ++k) acc += (k % 2 ? 4.0 : 2.0) * f(k * h);
    return std::sqrt(2.0 * acc * h / 3.0);
}

void norm_suite(Verdict& v) {
    std::mt19937_64 rng(3);
    double parseval = 0.0;
    for (int dim : {1, 2}) {
        const SampledField u = random_field(SpectralGrid(dim, dim == 1 ? 512 : 64, 16.0), rng);
        parseval = std::max(parseval, std::abs(sobolev_norm(u, 0.0).norm_value - grid_l2(u)) / grid_l2(u));
    }
    v.below("parseval", parseval, 1e-10);

    const SampledField gauss = sample_x(SpectralGrid(1, 8192, 8.0), [](const std::vector<double>&, double x) {
        return cplx(oracle::gaussian(x));
    });
    v.below("gaussian-h1", std::abs(sobolev_norm(gauss, 1.0).norm_value - gaussian_h1_quadrature()), 1e-6);

    const SampledField half = sample_x(SpectralGrid(1, 2048, 128.0), [](const std::vector<double>&, double x) {
        return cplx(x > 0 ? std::exp(-x) : 0.0);
    });
    v.below("half-exp-l2", std::abs(plus_norm_upper(half, 0.0).norm_value - 1.0 / std::sqrt(2.0)), 1e-4);
}

// --- boundedness ----------------------------------------------------------------------------

void boundedness(Verdict& v) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_int_distribution<int> step(-12, 12);
    int violations = 0;
    double tightest = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const int dim = trial % 5 == 4 ? 2 : 1;
        const SpectralGrid g(dim, dim == 1 ? 1024 : 64, 16.0);
        std::vector<ShiftTerm> terms{{cplx(u(rng), u(rng)), std::vector<double>(static_cast<std::size_t>(dim), 0.0)}};
        for (int k = 0; k < 4; ++k) {
            std::vector<double> shift(static_cast<std::size_t>(dim));
            for (double& c : shift) c = step(rng) * g.dx();
            shift.back() = std::abs(shift.back());
            terms.push_back({cplx(u(rng), u(rng)), shift});
        }
        const DifferenceOperator d(terms);
        const SampledField f = random_field(g, rng);
        const double lhs = grid_l2(apply_operator(d, f));
        const double rhs = summability_norm(d) * grid_l2(f);
        if (!(lhs <= rhs)) ++violations;
        tightest = std::max(tightest, lhs / rhs);
    }
    v.check(violations == 0, "violations/50", violations, 1.0);
    v.flag(true, "max-ratio=" + std::to_string(tightest));
}

// --- determinism ----------------------------------------------------------------------------

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<double> numbers_in(const std::string& text) {
    std::vector<double> out;
    const char* c = text.c_str();
    while (*c) {
        char* end = nullptr;
        const double x = std::strtod(c, &end);
        if (end != c && (std::isdigit(static_cast<unsigned char>(*c)) || *c == '-' || *c == '.')) {
            out.push_back(x);
            c = end;
        } else {
            ++c;
        }
    }
    return out;
}

cli::RunOutcome run_fixture(const fs::path& path, const fs::path& dir) {
    const std::string name = path.stem().string();
    const char* command = name.find("analyze") != std::string::npos     ? "analyze"
                          : name.find("factorize") != std::string::npos ? "factorize"
                                                                        : "verify";
    try {
        return cli::run(cli::load_problem(path), cli::parse_command(command), dir);
    } catch (const Error& e) {
        return cli::report_failure(command, e, dir);
    }
}

void determinism(Verdict& v) {
    std::vector<fs::path> fixtures;
    for (const auto& e : fs::directory_iterator(HSD_FIXTURE_DIR))
        if (e.path().extension() == ".json") fixtures.push_back(e.path());
    std::sort(fixtures.begin(), fixtures.end());
    const int saved = thread_count();
    int differing = 0;
    double drift = 0.0;
    for (const fs::path& f : fixtures) {
        fs::path dirs[2];
        for (int k = 0; k < 2; ++k) {
            set_thread_count(k == 0 ? 1 : 4);
            dirs[k] = scratch(f.stem().string() + (k == 0 ? "_t1" : "_t4"));
            run_fixture(f, dirs[k]);
        }
        for (const auto& e : fs::directory_iterator(dirs[0])) {
            const std::string file = e.path().filename().string();
            if (file == "timings.json") continue;
            const std::string a = slurp(e.path()), b = slurp(dirs[1] / file);
            if (a != b) {
                ++differing;
                std::fprintf(stderr, "determinism: %s/%s differs\n", f.stem().string().c_str(), file.c_str());
            }
            const std::vector<double> na = numbers_in(a), nb = numbers_in(b);
            if (na.size() != nb.size()) {
                drift = INFINITY;
                continue;
            }
            for (std::size_t i = 0; i < na.size(); ++i) drift = std::max(drift, std::abs(na[i] - nb[i]));
        }
    }
    set_thread_count(saved);
    v.check(differing == 0, "differing-files", differing, 1.0);
    v.below("numeric-drift", drift, 1e-12);
    v.flag(true, "fixtures=" + std::to_string(fixtures.size()));
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<void(Verdict&)>>> criteria{
        {"projector suite", projector_suite},
        {"index oracle equivalence", index_oracle},
        {"factorization reconstruction", factorization_suite},
        {"unique-regime geometric series", unique_suite},
        {"minus-regime homogeneous solution", minus_homogeneous},
        {"trace boundary round trip", trace_round_trip},
        {"pseudodifferential gates", pseudo_gates},
        {"norms", norm_suite},
        {"difference operator boundedness", boundedness},
        {"determinism across thread counts", determinism},
    };
    int failures = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        Verdict v;
        const auto t0 = Clock::now();
        try {
            criteria[k].second(v);
        } catch (const std::exception& e) {
            v.flag(false, std::string("exception: ") + e.what());
        }
        if (!v.pass()) ++failures;
        std::printf("%s criterion %zu (%s) [%.2fs]: %s\n", v.pass() ? "PASS" : "FAIL", k + 1, criteria[k].first,
                    seconds_since(t0), v.detail().c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
