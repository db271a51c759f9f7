#include "hsd/bvp.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "hsd/error.hpp"
#include "hsd/parallel.hpp"
#include "hsd/spectral.hpp"

namespace hsd {

namespace {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

constexpr double kInteriorSlice = 0.5;   // xi'-slices checked by the condition round trip
constexpr double kOrderSpread = 1e6;     // allowed spread of |A| / (1 + |xi|)^gamma

bool within(const SpectralGrid& g, std::size_t slice, double fraction) {
    for (double c : g.xi_prime(slice))
        if (std::abs(c) > fraction * g.xi_extent()) return false;
    return true;
}

void require_minus(const SobolevRegime& reg, std::size_t count) {
    if (reg.kind != RegimeKind::Minus)
        throw Error(reg.kind == RegimeKind::Forbidden ? ErrorKind::NonSolvable : ErrorKind::Input,
                    std::string("boundary conditions close the minus regime; regime is ") + to_string(reg.kind));
    if (static_cast<int>(count) != reg.n)
        throw Error(ErrorKind::Input, "expected " + std::to_string(reg.n) + " boundary conditions, got " +
                                          std::to_string(count));
}

void require_slices(const SpectralGrid& g, const std::vector<cplx>& r) {
    if (r.size() != g.slices())
        throw Error(ErrorKind::Input, "boundary data must have one value per xi'-slice");
}

double max_abs(const std::vector<std::vector<cplx>>& rows) {
    double m = 0.0;
    for (const auto& row : rows)
        for (const cplx& v : row) m = std::max(m, std::abs(v));
    return m;
}

double relative_error(const SpectralGrid& g, const std::vector<std::vector<cplx>>& got,
                      const std::vector<std::vector<cplx>>& want) {
    double worst = 0.0;
    for (std::size_t j = 0; j < want.size(); ++j)
        for (std::size_t s = 0; s < g.slices(); ++s)
            if (within(g, s, kInteriorSlice)) worst = std::max(worst, std::abs(got[j][s] - want[j][s]));
    const double scale = max_abs(want);
    return scale > 0.0 ? worst / scale : worst;
}

// Fills the solution block and the homogeneous-equation residual relative to max |u|.
void finish_solution(const HalfSpaceProblem& p, const SobolevRegime& reg, const std::vector<std::vector<cplx>>& c,
                     const BvpOptions& opt, BvpResult& out) {
    SolveResult& sol = out.solution;
    sol.regime = reg;
    sol.coefficients = c;
    sol.u_plus_xi = homogeneous_solution(p, reg.s, c);
    sol.u_plus = fourier_inverse(sol.u_plus_xi);
    sol.u_plus.support = Support::Plus;
    sol.support_leakage = support_leakage(sol.u_plus);
    const SampledField zero(p.grid(), Side::X);
    const EquationResidual e = equation_residual(p, sol.u_plus, zero, p.factors.sigma * sol.u_plus_xi, opt.solve);
    const double scale = sol.u_plus.max_abs();
    sol.residual = scale > 0.0 ? e.value / scale : e.value;
    sol.residual_method = e.method;
    sol.residual_ok = sol.residual <= opt.solve.residual_tolerance;
}

void enforce(const BvpResult& out, const BvpOptions& opt) {
    if (!opt.solve.throw_on_failure) return;
    if (!out.solution.residual_ok)
        throw Error(ErrorKind::Numerical, "homogeneous residual " + std::to_string(out.solution.residual) +
                                              " exceeds tolerance");
    if (!out.condition_ok)
        throw Error(ErrorKind::Numerical, "boundary conditions reproduced with error " +
                                              std::to_string(out.condition_error));
}

}  // namespace

std::vector<cplx> trace_at_plane(const SampledField& u_plus, double p) {
    if (u_plus.side != Side::X) throw Error(ErrorKind::Input, "trace_at_plane: expected x-side samples");
    const SpectralGrid& g = u_plus.grid;
    const int n = g.points();
    std::vector<cplx> phase(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) phase[j] = std::polar(g.dx(), g.x_node(j) * p);
    std::vector<cplx> t(g.slices());
    for (std::size_t s = 0; s < g.slices(); ++s) {
        const cplx* row = u_plus.slice(s);
        cplx acc = 0.0;
        for (int j = 0; j < n; ++j) acc += phase[j] * row[j];
        t[s] = acc;
    }
    if (g.dim() == 1) return t;
    const SpectralGrid lower(g.dim() - 1, n, g.xi_extent());
    return fourier_forward(SampledField(lower, std::move(t), Side::X)).values;
}

VandermondeSolution vandermonde_solve(const std::vector<double>& p, const std::vector<std::vector<cplx>>& rhs) {
    const int n = static_cast<int>(p.size());
    if (n == 0) throw Error(ErrorKind::Input, "vandermonde_solve: no nodes");
    if (n > kVandermondeMaxOrder) throw Error(ErrorKind::Input, "vandermonde_solve: more than 12 nodes");
    if (static_cast<int>(rhs.size()) != n) throw Error(ErrorKind::Input, "vandermonde_solve: rhs count mismatch");
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (p[i] == p[j]) throw Error(ErrorKind::Input, "vandermonde_solve: duplicate nodes");
    const std::size_t slices = rhs.front().size();
    for (const auto& r : rhs)
        if (r.size() != slices) throw Error(ErrorKind::Input, "vandermonde_solve: ragged right-hand sides");

    Eigen::MatrixXd v(n, n);
    for (int j = 0; j < n; ++j) {
        double pw = 1.0;
        for (int k = 0; k < n; ++k, pw *= p[j]) v(j, k) = pw;
    }
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(v);
    const auto& sv = svd.singularValues();

    VandermondeSolution out;
    out.condition = sv(0) / sv(n - 1);
    out.ill_conditioned = out.condition > kVandermondeWarn;
    const Eigen::FullPivLU<Matrix> lu(v.cast<cplx>());
    out.coefficients.assign(static_cast<std::size_t>(n), std::vector<cplx>(slices));
    Vector b(n);
    for (std::size_t s = 0; s < slices; ++s) {
        for (int j = 0; j < n; ++j) b(j) = rhs[j][s];
        const Vector c = lu.solve(b);
        for (int k = 0; k < n; ++k) out.coefficients[k][s] = c(k);
    }
    return out;
}

BvpResult solve_bvp_traces(const HalfSpaceProblem& p, double s, const TraceConditions& bc, const BvpOptions& opt) {
    const SpectralGrid& g = p.grid();
    const FactorizationResult& f = p.factors;
    const SobolevRegime reg = classify_regime(s, f.ae);
    require_minus(reg, bc.p.size());
    if (bc.r.size() != bc.p.size()) throw Error(ErrorKind::Input, "trace conditions: p and r counts differ");
    for (const auto& r : bc.r) require_slices(g, r);
    const int n = reg.n;
    const bool mixed = !bc.mixing.empty();
    if (mixed && bc.mixing.size() != static_cast<std::size_t>(n * n))
        throw Error(ErrorKind::Input, "trace conditions: mixing matrix must be n x n");

    // weight_j = Lambda_+(p_j)^{-ae} sigma_+(p_j), so that u~_+(p_j) = sum_k c_k p_j^{k-1} / weight_j.
    std::vector<std::vector<cplx>> weight(static_cast<std::size_t>(n), std::vector<cplx>(g.slices()));
    parallel_for(g.slices(), [&](std::size_t sl) {
        const double c = g.xi_prime_norm(sl) + 1.0;
        for (int j = 0; j < n; ++j)
            weight[j][sl] = std::pow(cplx(bc.p[j], c), -f.ae) * sigma_plus_at(f, sl, bc.p[j]);
    });

    BvpResult out(g);
    std::vector<std::vector<cplx>> coeff;
    if (!mixed) {
        std::vector<std::vector<cplx>> rhs = bc.r;
        for (int j = 0; j < n; ++j)
            for (std::size_t sl = 0; sl < g.slices(); ++sl) rhs[j][sl] *= weight[j][sl];
        VandermondeSolution vs = vandermonde_solve(bc.p, rhs);
        out.vandermonde_condition = vs.condition;
        if (vs.ill_conditioned) {
            std::ostringstream msg;
            msg << "Vandermonde condition estimate " << vs.condition << " exceeds " << kVandermondeWarn;
            out.warnings.push_back(msg.str());
        }
        coeff = std::move(vs.coefficients);
    } else {
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (bc.p[i] == bc.p[j]) throw Error(ErrorKind::Input, "trace conditions: duplicate planes");
        coeff.assign(static_cast<std::size_t>(n), std::vector<cplx>(g.slices()));
        parallel_for(g.slices(), [&](std::size_t sl) {
            Matrix b = Matrix::Zero(n, n);
            Vector r(n);
            for (int i = 0; i < n; ++i) {
                r(i) = bc.r[i][sl];
                for (int j = 0; j < n; ++j) {
                    cplx pw = 1.0;
                    for (int k = 0; k < n; ++k, pw *= bc.p[j])
                        b(i, k) += bc.mixing[i * n + j] * pw / weight[j][sl];
                }
            }
            const Vector c = b.fullPivLu().solve(r);
            for (int k = 0; k < n; ++k) coeff[k][sl] = c(k);
        });
    }

    finish_solution(p, reg, coeff, opt, out);
    for (int j = 0; j < n; ++j) out.data_orders.push_back(s - 0.5);

    std::vector<std::vector<cplx>> traces;
    for (int j = 0; j < n; ++j) traces.push_back(trace_at_plane(out.solution.u_plus, bc.p[j]));
    if (mixed) {
        std::vector<std::vector<cplx>> combined(static_cast<std::size_t>(n), std::vector<cplx>(g.slices(), 0.0));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (std::size_t sl = 0; sl < g.slices(); ++sl) combined[i][sl] += bc.mixing[i * n + j] * traces[j][sl];
        traces = std::move(combined);
    }
    out.condition_error = relative_error(g, traces, bc.r);
    out.condition_ok = out.condition_error <= opt.trace_tolerance;
    enforce(out, opt);
    return out;
}

std::vector<cplx> restrict_at_boundary(const SampledField& u_xi, const PseudoCondition& a) {
    if (u_xi.side != Side::Xi) throw Error(ErrorKind::Input, "restrict_at_boundary: expected xi-side samples");
    const SpectralGrid& g = u_xi.grid;
    const double scale = g.dxi() / (2.0 * std::numbers::pi);
    std::vector<cplx> out(g.slices());
    for (std::size_t s = 0; s < g.slices(); ++s) {
        const double xp = g.xi_prime_norm(s);
        const cplx* row = u_xi.slice(s);
        cplx acc = 0.0;
        for (int j = 0; j < g.points(); ++j) acc += a.symbol(xp, g.xi_node(j)) * row[j];
        out[s] = acc * scale;
    }
    return out;
}

BcMatrix pseudo_bc_matrix(const HalfSpaceProblem& p, double s, const std::vector<PseudoCondition>& bc) {
    const SpectralGrid& g = p.grid();
    const FactorizationResult& f = p.factors;
    const SobolevRegime reg = classify_regime(s, f.ae);
    require_minus(reg, bc.size());
    const int n = reg.n;
    const int pts = g.points();
    for (int j = 0; j < n; ++j) {
        if (!bc[j].symbol) throw Error(ErrorKind::Input, "pseudodifferential condition without a symbol");
        if (bc[j].gamma + f.ae + n >= -1.0) {
            std::ostringstream msg;
            msg << "condition " << j + 1 << ": gamma + ae + k = " << bc[j].gamma + f.ae + n
                << " is not below -1; the defining integral diverges";
            throw Error(ErrorKind::Input, msg.str());
        }
        double lo = INFINITY, hi = 0.0;
        for (std::size_t sl = 0; sl < g.slices(); ++sl) {
            const double xp = g.xi_prime_norm(sl);
            for (int i = 0; i < pts; ++i) {
                const double xm = g.xi_node(i);
                const double q = std::abs(bc[j].symbol(xp, xm)) / std::pow(1.0 + xp + std::abs(xm), bc[j].gamma);
                lo = std::min(lo, q);
                hi = std::max(hi, q);
            }
        }
        if (!(lo > 0.0) || hi / lo > kOrderSpread)
            throw Error(ErrorKind::Input, "condition " + std::to_string(j + 1) + ": symbol does not have order gamma");
    }

    BcMatrix m;
    m.n = n;
    m.entries.assign(g.slices(), std::vector<cplx>(static_cast<std::size_t>(n * n)));
    std::vector<double> tails(g.slices(), 0.0), dets(g.slices(), 0.0);
    const int edge = std::max(1, pts / 50);
    parallel_for(g.slices(), [&](std::size_t sl) {
        const double xp = g.xi_prime_norm(sl);
        const cplx* sp = f.sigma_plus.slice(sl);
        double tail = 0.0;
        for (int j = 0; j < n; ++j) {
            for (int k = 1; k <= n; ++k) {
                cplx acc = 0.0;
                double peak = 0.0, rim = 0.0;
                for (int i = 0; i < pts; ++i) {
                    const double xm = g.xi_node(i);
                    const cplx v = bc[j].symbol(xp, xm) * std::pow(cplx(xm, xp + 1.0), f.ae) / sp[i] *
                                   std::pow(xm, k - 1);
                    acc += v;
                    peak = std::max(peak, std::abs(v));
                    if (std::min(i, pts - 1 - i) < edge) rim = std::max(rim, std::abs(v));
                }
                m.entries[sl][j * n + k - 1] = acc * g.dxi();
                if (peak > 0.0) tail = std::max(tail, rim / peak);
            }
        }
        tails[sl] = tail;
        Matrix a(n, n);
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) a(j, k) = m.entries[sl][j * n + k];
        dets[sl] = std::abs(a.determinant());
    });
    m.inf_abs_det = INFINITY;
    std::size_t central = 0;
    for (std::size_t sl = 0; sl < g.slices(); ++sl) {
        if (dets[sl] < m.inf_abs_det) {
            m.inf_abs_det = dets[sl];
            m.argmin_slice = sl;
        }
        if (g.xi_prime_norm(sl) < g.xi_prime_norm(central)) central = sl;
        m.tail_ratio_max = std::max(m.tail_ratio_max, tails[sl]);
    }
    m.tail_ratio = tails[central];
    if (m.tail_ratio > kIntegrandTailLimit) {
        std::ostringstream msg;
        msg << "boundary-condition integrand has not decayed at the window edge (edge/peak " << m.tail_ratio
            << "); enlarge the xi window";
        throw Error(ErrorKind::Resolution, msg.str());
    }
    return m;
}

BvpResult solve_bvp_pseudo(const HalfSpaceProblem& p, double s, const std::vector<PseudoCondition>& bc,
                           const BvpOptions& opt) {
    const SpectralGrid& g = p.grid();
    const SobolevRegime reg = classify_regime(s, p.factors.ae);
    require_minus(reg, bc.size());
    for (const auto& c : bc) require_slices(g, c.r);
    BcMatrix m = pseudo_bc_matrix(p, s, bc);
    if (!(m.inf_abs_det > opt.determinant_threshold)) {
        std::ostringstream msg;
        msg << "boundary-condition determinant condition fails: inf |det a| = " << m.inf_abs_det
            << " <= " << opt.determinant_threshold << " at xi'-slice " << m.argmin_slice;
        throw Error(ErrorKind::NonSolvable, msg.str());
    }
    const int n = m.n;
    std::vector<std::vector<cplx>> coeff(static_cast<std::size_t>(n), std::vector<cplx>(g.slices()));
    parallel_for(g.slices(), [&](std::size_t sl) {
        Matrix a(n, n);
        Vector r(n);
        for (int j = 0; j < n; ++j) {
            r(j) = 2.0 * std::numbers::pi * bc[j].r[sl];
            for (int k = 0; k < n; ++k) a(j, k) = m.entries[sl][j * n + k];
        }
        const Vector c = a.fullPivLu().solve(r);
        for (int k = 0; k < n; ++k) coeff[k][sl] = c(k);
    });

    BvpResult out(g);
    out.matrix = std::move(m);
    finish_solution(p, reg, coeff, opt, out);
    std::vector<std::vector<cplx>> got, want;
    for (const auto& c : bc) {
        got.push_back(restrict_at_boundary(out.solution.u_plus_xi, c));
        want.push_back(c.r);
        out.data_orders.push_back(s - c.gamma - 0.5);
    }
    out.condition_error = relative_error(g, got, want);
    out.condition_ok = out.condition_error <= opt.trace_tolerance;
    enforce(out, opt);
    return out;
}

}  // namespace hsd
