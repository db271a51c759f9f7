#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "hsd/cli.hpp"
#include "hsd/diffop.hpp"
#include "hsd/sobolev.hpp"
#include "hsd/spectral.hpp"

#ifndef HSD_VERSION
#define HSD_VERSION "0.0.0"
#endif

namespace hsd::cli {

namespace {

using Clock = std::chrono::steady_clock;

class Timer {
public:
    explicit Timer(json& sink) : sink_(sink) {}
    template <typename F>
    auto operator()(const char* stage, F&& f) {
        const auto t0 = Clock::now();
        struct Record {
            json& sink;
            const char* stage;
            Clock::time_point t0;
            ~Record() { sink[stage] = std::chrono::duration<double>(Clock::now() - t0).count(); }
        } rec{sink_, stage, t0};
        return f();
    }

private:
    json& sink_;
};

json finite(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json complex_json(cplx z) { return json::array({finite(z.real()), finite(z.imag())}); }

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Input, "cannot write " + path.string());
    out << text;
}

std::string coordinate_header(const SpectralGrid& g, const char* var) {
    std::string h;
    for (int d = 1; d <= g.dim(); ++d) h += std::string(var) + std::to_string(d) + ",";
    return h;
}

// Emits one row per grid node: coordinates followed by the given columns.
template <typename Columns>
std::string grid_csv(const SpectralGrid& g, Side side, const std::string& header, Columns&& columns) {
    std::string out = coordinate_header(g, side == Side::X ? "x" : "xi") + header + "\n";
    for (std::size_t s = 0; s < g.slices(); ++s) {
        const std::vector<double> prime = side == Side::X ? g.x_prime(s) : g.xi_prime(s);
        for (int j = 0; j < g.points(); ++j) {
            for (double c : prime) out += fmt(c) + ",";
            out += fmt(side == Side::X ? g.x_node(j) : g.xi_node(j));
            for (double v : columns(s * static_cast<std::size_t>(g.points()) + j)) out += "," + fmt(v);
            out += "\n";
        }
    }
    return out;
}

std::vector<double> parts(cplx z) { return {z.real(), z.imag()}; }

SampledField load_samples(const ProblemSpec& spec) {
    const SpectralGrid& g = spec.grid;
    std::ifstream in(spec.rhs->samples);
    if (!in) throw Error(ErrorKind::Input, "rhs.path: cannot open " + spec.rhs->samples.string());
    SampledField v(g, Side::X);
    std::string line;
    std::size_t row = 0, lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<double> cols;
        std::stringstream ss(line);
        std::string cell;
        bool numeric = true;
        while (std::getline(ss, cell, ',')) {
            char* end = nullptr;
            const double v = std::strtod(cell.c_str(), &end);
            if (end == cell.c_str() || *end != '\0') numeric = false;
            cols.push_back(v);
        }
        if (!numeric) {
            if (row == 0 && lineno == 1) continue;  // header
            throw Error(ErrorKind::Input, "rhs.path: line " + std::to_string(lineno) + " is not numeric");
        }
        if (cols.size() != 2 && cols.size() != static_cast<std::size_t>(g.dim()) + 2)
            throw Error(ErrorKind::Input, "rhs.path: line " + std::to_string(lineno) + " has the wrong column count");
        if (row >= g.size()) throw Error(ErrorKind::Input, "rhs.path: more rows than grid nodes");
        if (cols.size() > 2) {
            const std::size_t s = row / g.points();
            std::vector<double> want = g.x_prime(s);
            want.push_back(g.x_node(static_cast<int>(row % g.points())));
            for (std::size_t d = 0; d < want.size(); ++d)
                if (std::abs(cols[d] - want[d]) > 1e-9 * std::max(1.0, std::abs(want[d])))
                    throw Error(ErrorKind::Input, "rhs.path: line " + std::to_string(lineno) + " is off the x-grid");
        }
        v.values[row++] = cplx(cols[cols.size() - 2], cols.back());
    }
    if (row != g.size()) throw Error(ErrorKind::Input, "rhs.path: expected " + std::to_string(g.size()) + " rows");
    return v;
}

PseudoCondition to_condition(const ConditionSymbol& cs, std::vector<cplx> r) {
    return {[cs](double xp, double xm) {
                const double c = xp + 1.0;
                return cs.gain * std::pow(cplx(xm, c), cs.plus_power) * std::pow(cplx(xm, -c), cs.minus_power);
            },
            static_cast<double>(cs.plus_power + cs.minus_power), std::move(r)};
}

const char* symbol_kind(const SymbolSpec& s) {
    if (std::holds_alternative<DifferenceOperator>(s.source)) return "operator";
    if (std::holds_alternative<RationalPreset>(s.source)) return "rational";
    return "product";
}

json coefficient_summary(const std::vector<std::vector<cplx>>& c, const SpectralGrid& g) {
    std::size_t central = 0;
    for (std::size_t s = 0; s < g.slices(); ++s)
        if (g.xi_prime_norm(s) < g.xi_prime_norm(central)) central = s;
    json out = json::array();
    for (const auto& ck : c) {
        double m = 0.0;
        for (const cplx& v : ck) m = std::max(m, std::abs(v));
        out.push_back({{"max_abs", finite(m)}, {"central", complex_json(ck[central])}});
    }
    return out;
}

json norm_json(const NormReport& r) {
    return {{"s", r.s}, {"value", finite(r.norm_value)}, {"tail_fraction", finite(r.window_tail_fraction)},
            {"tail_warning", r.tail_warning}, {"kind", r.kind}};
}

struct Pipeline {
    const ProblemSpec& spec;
    Command command;
    std::filesystem::path outdir;
    json& report;
    Timer time;
    json checks = json::object();
    bool failed = false;
    std::vector<std::string> warnings;

    void check(const std::string& name, double value, double tolerance) {
        const bool pass = std::isfinite(value) && value <= tolerance;
        checks[name] = {{"value", finite(value)}, {"tolerance", tolerance}, {"pass", pass}};
        failed = failed || !pass;
    }

    FactorizeOptions factorize_options() const {
        FactorizeOptions o;
        o.reconstruction_tolerance = spec.tol.reconstruction;
        o.one_sidedness_tolerance = spec.tol.one_sidedness;
        o.winding.rounding_tolerance = spec.tol.rounding;
        o.winding.ellipticity_threshold = spec.tol.ellipticity;
        return o;
    }

    SolveOptions solve_options() const {
        SolveOptions o;
        o.residual_tolerance = spec.tol.residual;
        o.support_tolerance = spec.tol.support;
        o.boundary_layer = spec.tol.boundary_layer;
        o.interior_fraction = spec.tol.interior_fraction;
        o.residual_taper = spec.tol.residual_taper;
        o.throw_on_failure = false;
        o.factorize = factorize_options();
        if (spec.rhs) o.extension = spec.rhs->extension;
        return o;
    }

    void validate_command() const {
        if (command == Command::Analyze && spec.rhs) throw Error(ErrorKind::Input, "rhs: forbidden for analyze");
        if (command == Command::Solve && !spec.rhs) throw Error(ErrorKind::Input, "rhs: required for solve");
        if (command == Command::Bvp && !spec.bc) throw Error(ErrorKind::Input, "bc: required for bvp");
    }

    SobolevRegime analyze() {
        const SpectralGrid& g = spec.grid;
        const SampledField sigma = time("symbol", [&] { return symbol_eval(spec.symbol, g); });
        const EllipticityReport ell = ellipticity_check(sigma);
        report["ellipticity"] = {{"margin", finite(ell.min_modulus)},
                                 {"xi_at", ell.xi_at},
                                 {"threshold", spec.tol.ellipticity}};
        write_text(outdir / "symbol.csv", grid_csv(g, Side::Xi, "re,im,abs", [&](std::size_t i) {
                       const cplx z = sigma.values[i];
                       return std::vector<double>{z.real(), z.imag(), std::abs(z)};
                   }));
        if (!(ell.min_modulus > spec.tol.ellipticity))
            throw Error(ErrorKind::NonElliptic, "symbol is not elliptic on the grid (min |sigma| = " +
                                                    fmt(ell.min_modulus) + ")");

        WindingOptions wo;
        wo.rounding_tolerance = spec.tol.rounding;
        wo.ellipticity_threshold = spec.tol.ellipticity;
        const IndexReport idx = time("index", [&] { return spec_index(spec.symbol, g, wo); });
        report["index"] = {{"ae", idx.ae},
                           {"raw_winding", finite(idx.raw_winding)},
                           {"mode", to_string(idx.mode)},
                           {"slices_used", idx.per_slice.size()},
                           {"skipped_slices", idx.skipped_slices}};
        std::string csv = "slice,xi_prime_norm,winding\n";
        for (std::size_t k = 0; k < idx.per_slice.size(); ++k)
            csv += std::to_string(idx.slice_ids[k]) + "," + fmt(g.xi_prime_norm(idx.slice_ids[k])) + "," +
                   fmt(idx.per_slice[k]) + "\n";
        write_text(outdir / "winding.csv", csv);

        const SobolevRegime reg = classify_regime(spec.s, idx.ae);
        report["regime"] = {{"kind", to_string(reg.kind)}, {"n", reg.n}, {"trace_orders", reg.trace_orders},
                            {"s", spec.s}, {"ae", idx.ae}};
        return reg;
    }

    void record_factors(const FactorizationResult& f) {
        json methods = json::object();
        for (SplitMethod m : f.methods) {
            const std::string key = to_string(m);
            methods[key] = methods.value(key, 0) + 1;
        }
        report["factorization"] = {{"ae", f.ae},
                                   {"reconstruction_residual", finite(f.reconstruction_residual)},
                                   {"one_sided_plus", finite(f.one_sided_plus)},
                                   {"one_sided_minus", finite(f.one_sided_minus)},
                                   {"methods", methods}};
        write_text(outdir / "factors.csv",
                   grid_csv(f.sigma.grid, Side::Xi, "sigma_plus_re,sigma_plus_im,sigma_minus_re,sigma_minus_im,omega_re,omega_im",
                            [&](std::size_t i) {
                                return std::vector<double>{f.sigma_plus.values[i].real(), f.sigma_plus.values[i].imag(),
                                                           f.sigma_minus.values[i].real(), f.sigma_minus.values[i].imag(),
                                                           f.omega.values[i].real(), f.omega.values[i].imag()};
                            }));
        check("reconstruction", f.reconstruction_residual, spec.tol.reconstruction);
        check("one_sided_plus", f.one_sided_plus, spec.tol.one_sidedness);
        check("one_sided_minus", f.one_sided_minus, spec.tol.one_sidedness);
    }

    void record_solution(const SolveResult& r, const SampledField* v) {
        const SpectralGrid& g = r.u_plus.grid;
        write_text(outdir / "solution.csv", grid_csv(g, Side::X, "re,im", [&](std::size_t i) {
                       return parts(r.u_plus.values[i]);
                   }));
        const MembershipReport mem = membership_check(r.u_plus, Support::Plus, spec.tol.support);
        json norms = {{"solution", norm_json(sobolev_norm(r.u_plus_xi, spec.s))},
                      {"solution_l2", norm_json(sobolev_norm(r.u_plus_xi, 0.0))}};
        if (v) norms["rhs_plus_upper"] = norm_json(plus_norm_upper(*v, spec.s, spec.tol.support));
        report["norms"] = norms;
        report["solve"] = {{"regime", to_string(r.regime.kind)},
                           {"residual", finite(r.residual)},
                           {"residual_method", r.residual_method},
                           {"residual_ok", r.residual_ok},
                           {"support_leakage", finite(r.support_leakage)},
                           {"membership", {{"member", mem.member}, {"leakage", finite(mem.leakage)}}},
                           {"extension", to_string(r.extension_used)},
                           {"rhs_edge_ratio", finite(r.h_edge_ratio)},
                           {"boundary_terms", r.boundary_terms},
                           {"coefficients", coefficient_summary(r.coefficients, g)}};
        if (v && r.regime.kind == RegimeKind::Minus && !spec.bc)
            warnings.push_back("minus regime without boundary conditions: free functions set to zero");
        check("residual", r.residual, spec.tol.residual);
        check("support", mem.leakage, spec.tol.support);
    }

    void solve(const HalfSpaceProblem& p) {
        const SampledField v = make_rhs(spec);
        const SolveResult r = time("solve", [&] { return hsd::solve(p, v, spec.s, {}, solve_options()); });
        record_solution(r, &v);
    }

    void bvp(const HalfSpaceProblem& p, const SobolevRegime& reg) {
        const SpectralGrid& g = spec.grid;
        if (reg.kind != RegimeKind::Minus)
            throw Error(reg.kind == RegimeKind::Forbidden ? ErrorKind::NonSolvable : ErrorKind::Input,
                        std::string("bc: boundary conditions apply only in the minus regime; regime is ") +
                            to_string(reg.kind));
        const BcSpec& bc = *spec.bc;
        if (static_cast<int>(bc.data.size()) != reg.n)
            throw Error(ErrorKind::Input, "bc: the minus regime has " + std::to_string(reg.n) +
                                              " free functions but " + std::to_string(bc.data.size()) +
                                              " conditions were given");
        BvpOptions bo;
        bo.trace_tolerance = spec.tol.trace;
        bo.determinant_threshold = spec.tol.determinant;
        bo.solve = solve_options();

        std::optional<SampledField> v;
        std::optional<SolveResult> particular;
        if (spec.rhs) {
            v = make_rhs(spec);
            particular = time("particular", [&] { return hsd::solve(p, *v, spec.s, {}, bo.solve); });
        }
        std::vector<std::vector<cplx>> data;
        for (const BoundaryData& d : bc.data) data.push_back(d.sample(g));

        BvpResult out(g);
        if (bc.kind == BcSpec::Kind::Traces) {
            TraceConditions tc{bc.p, data, bc.mixing};
            if (particular) {
                const int n = static_cast<int>(bc.p.size());
                std::vector<std::vector<cplx>> tr;
                for (double pj : bc.p) tr.push_back(trace_at_plane(particular->u_plus, pj));
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) {
                        const cplx m = bc.mixing.empty() ? cplx(i == j ? 1.0 : 0.0) : bc.mixing[i * n + j];
                        for (std::size_t s = 0; s < g.slices(); ++s) tc.r[i][s] -= m * tr[j][s];
                    }
            }
            out = time("bvp", [&] { return solve_bvp_traces(p, spec.s, tc, bo); });
            report["bvp"] = {{"kind", "traces"}, {"vandermonde_condition", finite(out.vandermonde_condition)}};
        } else {
            std::vector<PseudoCondition> conds;
            for (std::size_t j = 0; j < bc.symbols.size(); ++j) {
                PseudoCondition c = to_condition(bc.symbols[j], data[j]);
                if (particular) {
                    const std::vector<cplx> rp = restrict_at_boundary(particular->u_plus_xi, c);
                    for (std::size_t s = 0; s < g.slices(); ++s) c.r[s] -= rp[s];
                }
                conds.push_back(std::move(c));
            }
            out = time("bvp", [&] { return solve_bvp_pseudo(p, spec.s, conds, bo); });
            report["bvp"] = {{"kind", "pseudodiff"},
                             {"inf_abs_det", finite(out.matrix.inf_abs_det)},
                             {"argmin_slice", out.matrix.argmin_slice},
                             {"tail_ratio", finite(out.matrix.tail_ratio)},
                             {"tail_ratio_max", finite(out.matrix.tail_ratio_max)},
                             {"determinant_threshold", spec.tol.determinant}};
        }
        report["bvp"]["condition_error"] = finite(out.condition_error);
        report["bvp"]["data_orders"] = out.data_orders;
        report["bvp"]["homogeneous_residual"] = finite(out.solution.residual);
        for (const std::string& w : out.warnings) warnings.push_back(w);
        check("conditions", out.condition_error, spec.tol.trace);

        SolveResult total = out.solution;
        if (particular) {
            total.u_plus_xi = particular->u_plus_xi + out.solution.u_plus_xi;
            total.u_plus = particular->u_plus + out.solution.u_plus;
            total.residual = std::max(particular->residual, out.solution.residual);
            total.residual_ok = particular->residual_ok && out.solution.residual_ok;
            total.support_leakage = support_leakage(total.u_plus);
        }
        record_solution(total, v ? &*v : nullptr);
    }

    int execute() {
        validate_command();
        const SobolevRegime reg = analyze();
        if (command == Command::Analyze) return 0;
        if (reg.kind == RegimeKind::Forbidden && command != Command::Factorize)
            throw Error(ErrorKind::NonSolvable, "s + ae is a half-integer: the half-space problem is not Fredholm");
        const HalfSpaceProblem p = time("factorize", [&] {
            return HalfSpaceProblem(spec.symbol, spec.grid, factorize_options());
        });
        record_factors(p.factors);
        if (command == Command::Solve || command == Command::Bvp || command == Command::Verify) {
            if (spec.bc && (command != Command::Solve || reg.kind == RegimeKind::Minus)) bvp(p, reg);
            else if (spec.bc) throw Error(ErrorKind::Input, "bc: boundary conditions apply only in the minus regime");
            else if (spec.rhs) solve(p);
        }
        return failed ? 3 : 0;
    }
};

}  // namespace

int exit_code_for(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::Input: return 1;
        case ErrorKind::NonSolvable:
        case ErrorKind::NonElliptic: return 2;
        case ErrorKind::Numerical:
        case ErrorKind::Resolution: return 3;
    }
    return 3;
}

SampledField make_rhs(const ProblemSpec& spec) {
    if (!spec.rhs) throw Error(ErrorKind::Input, "rhs: required");
    const RhsSpec& r = *spec.rhs;
    if (r.kind == RhsKind::Samples) return load_samples(spec);
    return sample_x(spec.grid, [&r](const std::vector<double>& xp, double xm) {
        if (xm < r.offset) return cplx(0.0);
        double q = 0.0;
        for (double c : xp) q += c * c;
        const double prime = std::exp(-0.5 * q / (r.prime_width * r.prime_width));
        const double line = r.kind == RhsKind::GaussianBump
                                ? std::exp(-0.5 * (xm - r.center) * (xm - r.center) / (r.width * r.width))
                                : std::exp(-r.rate * (xm - r.offset));
        return r.amplitude * (prime * line);
    });
}

RunOutcome report_failure(const std::string& command, const Error& error, const std::filesystem::path& outdir) {
    std::filesystem::create_directories(outdir);
    RunOutcome out;
    out.exit_code = exit_code_for(error.kind());
    out.report = {{"tool_version", HSD_VERSION},
                  {"command", command},
                  {"status", out.exit_code == 1 ? "input_error" : "non_solvable"},
                  {"error", {{"kind", to_string(error.kind())}, {"message", error.what()}}},
                  {"warnings", json::array()},
                  {"exit_code", out.exit_code}};
    out.timings = json::object();
    write_text(outdir / "report.json", out.report.dump(2) + "\n");
    return out;
}

RunOutcome run(const ProblemSpec& spec, Command command, const std::filesystem::path& outdir) {
    std::filesystem::create_directories(outdir);
    RunOutcome out;
    json& report = out.report;
    report["tool_version"] = HSD_VERSION;
    report["command"] = to_string(command);
    report["input_digest"] = "fnv1a64:" + spec.digest;
    report["tolerances"] = spec.tol.to_json();
    report["problem"] = {{"grid", {{"dim", spec.grid.dim()}, {"points", spec.grid.points()},
                                   {"xi_extent", spec.grid.xi_extent()}}},
                         {"symbol", symbol_kind(spec.symbol)},
                         {"s", spec.s},
                         {"rhs", static_cast<bool>(spec.rhs)},
                         {"bc", static_cast<bool>(spec.bc)}};

    Pipeline pipe{spec, command, outdir, report, Timer(out.timings)};
    const auto t0 = Clock::now();
    try {
        out.exit_code = pipe.execute();
        report["status"] = out.exit_code == 0 ? "ok" : "numerical_failure";
    } catch (const Error& e) {
        out.exit_code = exit_code_for(e.kind());
        report["status"] = out.exit_code == 2 ? "non_solvable" : out.exit_code == 1 ? "input_error" : "numerical_failure";
        report["error"] = {{"kind", to_string(e.kind())}, {"message", e.what()}};
    }
    out.timings["total"] = std::chrono::duration<double>(Clock::now() - t0).count();
    if (!pipe.checks.empty()) report["checks"] = pipe.checks;
    report["warnings"] = pipe.warnings;
    report["exit_code"] = out.exit_code;

    write_text(outdir / "report.json", report.dump(2) + "\n");
    write_text(outdir / "timings.json", out.timings.dump(2) + "\n");
    return out;
}

}  // namespace hsd::cli
