#include "hsd/solver.hpp"

#include <algorithm>
#include <cmath>

#include "hsd/diffop.hpp"
#include "hsd/error.hpp"
#include "hsd/spectral.hpp"

namespace hsd {

const char* to_string(RegimeKind k) noexcept {
    switch (k) {
        case RegimeKind::Unique: return "unique";
        case RegimeKind::Plus: return "plus";
        case RegimeKind::Minus: return "minus";
        case RegimeKind::Forbidden: return "forbidden";
    }
    return "?";
}

const char* to_string(Extension e) noexcept {
    return e == Extension::Zero ? "zero" : "reflect";
}

SobolevRegime classify_regime(double s, int ae) {
    if (!std::isfinite(s)) throw Error(ErrorKind::Input, "Sobolev order must be finite");
    SobolevRegime r;
    r.s = s;
    r.ae = ae;
    const double t = s + ae;
    const double frac = std::abs(t) - std::floor(std::abs(t));
    if (std::abs(frac - 0.5) < 1e-9) {
        r.kind = RegimeKind::Forbidden;
        return r;
    }
    if (std::abs(t) < 0.5) {
        r.kind = RegimeKind::Unique;
        return r;
    }
    r.n = static_cast<int>(std::lround(std::abs(t)));
    r.kind = t > 0 ? RegimeKind::Plus : RegimeKind::Minus;
    for (int k = 1; k <= r.n; ++k)
        r.trace_orders.push_back(r.kind == RegimeKind::Plus ? t - k + 0.5 : t + k - 0.5);
    return r;
}

SampledField extend(const SampledField& v, Extension method, double support_tolerance) {
    if (v.side != Side::X) throw Error(ErrorKind::Input, "extend: right-hand side must be x-side samples");
    const SpectralGrid& g = v.grid;
    const int n = g.points();
    const double peak = v.max_abs();
    double wrong = 0.0;
    for (std::size_t s = 0; s < g.slices(); ++s) {
        const cplx* row = v.slice(s);
        for (int j = 0; j < n / 2; ++j) wrong = std::max(wrong, std::abs(row[j]));
    }
    if (wrong > support_tolerance * std::max(peak, 1e-300))
        throw Error(ErrorKind::Input, "right-hand side is not supported in x_m >= 0");

    SampledField out(g, v.values, Side::X, Support::Full);
    for (std::size_t s = 0; s < g.slices(); ++s) {
        cplx* row = out.slice(s);
        for (int j = 0; j < n / 2; ++j) {
            row[j] = method == Extension::Zero ? cplx(0.0)
                                               : row[n - 1 - j] * std::exp(g.x_node(j));
        }
    }
    return out;
}

HalfSpaceProblem::HalfSpaceProblem(SymbolSpec s, const SpectralGrid& g, const FactorizeOptions& opt)
    : spec(std::move(s)), factors(factorize(spec, g, opt)) {}

double support_leakage(const SampledField& u) {
    const SpectralGrid& g = u.grid;
    const int n = g.points();
    double minus = 0.0, total = 0.0;
    for (std::size_t s = 0; s < g.slices(); ++s) {
        const cplx* row = u.slice(s);
        for (int j = 0; j < n; ++j) {
            const double a = std::norm(row[j]);
            total += a;
            if (g.x_node(j) < -g.dx()) minus += a;
        }
    }
    return total > 0.0 ? std::sqrt(minus / total) : 0.0;
}

namespace {

bool interior_slice(const SpectralGrid& g, std::size_t s, double limit) {
    for (double c : g.x_prime(s))
        if (std::abs(c) > limit) return false;
    return true;
}

double interior_max(const SampledField& r, double lower, const SolveOptions& opt) {
    const SpectralGrid& g = r.grid;
    const double upper = opt.interior_fraction * g.x_max();
    double worst = 0.0;
    for (std::size_t s = 0; s < g.slices(); ++s) {
        if (!interior_slice(g, s, upper)) continue;
        const cplx* row = r.slice(s);
        for (int j = 0; j < g.points(); ++j) {
            const double x = g.x_node(j);
            if (x >= lower && x <= upper) worst = std::max(worst, std::abs(row[j]));
        }
    }
    return worst;
}

// Proper part of Lambda_-^ae Lambda_+^{-k} for 1 <= k <= ae, as a sum of negative powers of Lambda_+.
SampledField proper_part(const SpectralGrid& g, int ae, int k) {
    SampledField out(g, Side::Xi);
    for (int j = 0; j < k; ++j) {
        double binom = 1.0;
        for (int t = 0; t < j; ++t) binom = binom * (ae - t) / (t + 1);
        const int e = ae - j;
        const SampledField term = sample_xi(g, [binom, e](double xp, double) {
            return binom * std::pow(cplx(0.0, -2.0 * (xp + 1.0)), e);
        });
        out = out + term * lambda_power(g, Sign::Plus, j - k);
    }
    return out;
}

SampledField reduced_rhs(const HalfSpaceProblem& p, const SampledField& lv) {
    const SampledField V = fourier_forward(lv);
    return V * lambda_power(p.grid(), Sign::Minus, -p.factors.ae) / p.factors.sigma_minus;
}

double edge_ratio(const SampledField& h) {
    const SpectralGrid& g = h.grid;
    const int n = g.points();
    const int band = std::max(1, n / 50);
    double edge = 0.0;
    for (std::size_t s = 0; s < g.slices(); ++s) {
        const cplx* row = h.slice(s);
        for (int j = 0; j < band; ++j)
            edge = std::max({edge, std::abs(row[j]), std::abs(row[n - 1 - j])});
    }
    return edge / std::max(h.max_abs(), 1e-300);
}

void check_residual(const HalfSpaceProblem& p, const SampledField& v, const SampledField& xi_residual,
                    SolveResult& r, const SolveOptions& opt) {
    const EquationResidual e = equation_residual(p, r.u_plus, v, xi_residual, opt);
    r.residual = e.value / std::max(v.max_abs(), 1e-300);
    r.residual_method = e.method;
    r.residual_ok = r.residual <= opt.residual_tolerance;
    if (!r.residual_ok && opt.throw_on_failure)
        throw Error(ErrorKind::Numerical, "solution residual " + std::to_string(r.residual) +
                                              " exceeds tolerance " + std::to_string(opt.residual_tolerance));
}

void finish(SolveResult& r) {
    r.u_plus_xi.support = Support::Plus;
    r.u_plus = fourier_inverse(r.u_plus_xi);
    r.u_plus.support = Support::Plus;
    r.support_leakage = support_leakage(r.u_plus);
}

void require_regime(const SobolevRegime& reg, RegimeKind want) {
    if (reg.kind == RegimeKind::Forbidden)
        throw Error(ErrorKind::NonSolvable, "s + ae is a half-integer: the half-space problem is not Fredholm");
    if (reg.kind != want)
        throw Error(ErrorKind::Input, std::string("regime is ") + to_string(reg.kind) + ", not " + to_string(want));
}

// Shared by the unique and plus regimes: Pi_+ h split into n' coefficients; the first
// ae of them multiply polynomials and are kept symbolic.
SolveResult solve_projected(const HalfSpaceProblem& p, const SampledField& v, const SobolevRegime& reg,
                            const SolveOptions& opt) {
    const SpectralGrid& g = p.grid();
    const FactorizationResult& f = p.factors;
    const int ae = f.ae;
    SolveResult r(g);
    r.regime = reg;
    r.extension_used = opt.extension;

    const SampledField lv = extend(v, opt.extension, opt.support_tolerance);
    const SampledField h = reduced_rhs(p, lv);
    r.h_edge_ratio = edge_ratio(h);

    const int n = reg.kind == RegimeKind::Plus ? reg.n : 0;
    const int np = std::max(n, ae);
    SampledField boundary_residual(g, Side::Xi);
    if (np == 0) {
        r.u_plus_xi = lambda_power(g, Sign::Plus, ae) * projector(h, Sign::Plus) / f.sigma_plus;
    } else {
        const Decomposition d = decompose(h, np, Sign::Plus);
        r.coefficients = d.coefficients;
        r.boundary_terms = std::max(ae, 0);
        // Terms with k > ae stay inside the discrete projection; only the polynomial
        // (boundary) terms are separated out.
        SampledField reg_part = ae > 0 ? projector(h * lambda_power(g, Sign::Plus, ae), Sign::Plus)
                                       : lambda_power(g, Sign::Plus, ae) * projector(h, Sign::Plus);
        const cplx I(0.0, 1.0);
        for (int k = 1; k <= ae; ++k) {
            const SampledField ck = broadcast_slices(g, d.coefficients[k - 1]);
            boundary_residual = boundary_residual + I * (ck * proper_part(g, ae, k) * f.sigma_minus);
        }
        r.u_plus_xi = reg_part / f.sigma_plus;
    }
    finish(r);
    const SampledField V = fourier_forward(lv);
    check_residual(p, v, f.sigma * r.u_plus_xi + boundary_residual - V, r, opt);
    return r;
}

}  // namespace

EquationResidual equation_residual(const HalfSpaceProblem& p, const SampledField& u_plus, const SampledField& v,
                                   const SampledField& xi_residual, const SolveOptions& opt) {
    const auto* op = std::get_if<DifferenceOperator>(&p.spec.source);
    if (op && is_commensurate(*op, p.grid()))
        return {interior_max(apply_operator(*op, u_plus) - v, 0.0, opt), "x-side"};
    return {plus_side_residual(xi_residual, opt), "fourier"};
}

double plus_side_residual(const SampledField& r, const SolveOptions& opt) {
    return interior_max(fourier_inverse(taper(r, opt.residual_taper)), opt.boundary_layer, opt);
}

SolveResult solve_unique(const HalfSpaceProblem& p, const SampledField& v, double s, const SolveOptions& opt) {
    const SobolevRegime reg = classify_regime(s, p.factors.ae);
    require_regime(reg, RegimeKind::Unique);
    return solve_projected(p, v, reg, opt);
}

SolveResult solve_plus(const HalfSpaceProblem& p, const SampledField& v, double s, const SolveOptions& opt) {
    const SobolevRegime reg = classify_regime(s, p.factors.ae);
    require_regime(reg, RegimeKind::Plus);
    return solve_projected(p, v, reg, opt);
}

SampledField homogeneous_solution(const HalfSpaceProblem& p, double s, const std::vector<std::vector<cplx>>& free) {
    const SpectralGrid& g = p.grid();
    const int ae = p.factors.ae;
    const SobolevRegime reg = classify_regime(s, ae);
    require_regime(reg, RegimeKind::Minus);
    if (static_cast<int>(free.size()) != reg.n)
        throw Error(ErrorKind::Input, "expected " + std::to_string(reg.n) + " free functions, got " +
                                          std::to_string(free.size()));
    if (ae + reg.n > 0)
        throw Error(ErrorKind::Input, "homogeneous family is distributional (ae + n > 0)");
    SampledField poly(g, Side::Xi);
    for (int k = 1; k <= reg.n; ++k) {
        const SampledField mono = sample_xi(g, [k](double, double xm) { return std::pow(cplx(xm), k - 1); });
        poly = poly + broadcast_slices(g, free[k - 1]) * mono;
    }
    SampledField out = lambda_power(g, Sign::Plus, ae) * poly / p.factors.sigma_plus;
    out.support = Support::Plus;
    return out;
}

SolveResult solve_minus_general(const HalfSpaceProblem& p, const SampledField& v, double s,
                                const std::vector<std::vector<cplx>>& free, const SolveOptions& opt) {
    const SpectralGrid& g = p.grid();
    const FactorizationResult& f = p.factors;
    const SobolevRegime reg = classify_regime(s, f.ae);
    require_regime(reg, RegimeKind::Minus);
    const SampledField hom = homogeneous_solution(p, s, free);

    SolveResult r(g);
    r.regime = reg;
    r.extension_used = opt.extension;
    r.coefficients = free;

    const SampledField lv = extend(v, opt.extension, opt.support_tolerance);
    const SampledField h = reduced_rhs(p, lv);
    r.h_edge_ratio = edge_ratio(h);
    const SampledField shifted = projector(h * lambda_power(g, Sign::Plus, -reg.n), Sign::Plus);
    r.u_plus_xi = lambda_power(g, Sign::Plus, f.ae + reg.n) * shifted / f.sigma_plus + hom;
    finish(r);
    check_residual(p, v, f.sigma * r.u_plus_xi - fourier_forward(lv), r, opt);
    return r;
}

SolveResult solve(const HalfSpaceProblem& p, const SampledField& v, double s,
                  const std::vector<std::vector<cplx>>& free, const SolveOptions& opt) {
    const SobolevRegime reg = classify_regime(s, p.factors.ae);
    switch (reg.kind) {
        case RegimeKind::Unique: return solve_unique(p, v, s, opt);
        case RegimeKind::Plus: return solve_plus(p, v, s, opt);
        case RegimeKind::Minus: {
            if (!free.empty()) return solve_minus_general(p, v, s, free, opt);
            const std::vector<std::vector<cplx>> zeros(reg.n, std::vector<cplx>(p.grid().slices(), 0.0));
            return solve_minus_general(p, v, s, zeros, opt);
        }
        case RegimeKind::Forbidden: break;
    }
    throw Error(ErrorKind::NonSolvable, "s + ae is a half-integer: the half-space problem is not Fredholm");
}

}  // namespace hsd
