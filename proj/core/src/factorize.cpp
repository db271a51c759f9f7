#include "hsd/factorize.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>

#include "fft.hpp"
#include "hsd/error.hpp"
#include "hsd/parallel.hpp"
#include "hsd/spectral.hpp"

namespace hsd {

const char* to_string(SplitMethod m) noexcept {
    switch (m) {
        case SplitMethod::Periodic: return "periodic";
        case SplitMethod::Decaying: return "decaying";
        case SplitMethod::Tapered: return "tapered";
    }
    return "unknown";
}

namespace {

constexpr double kMaxLogReal = 50.0;
constexpr double kEdgeBand = 0.02;
constexpr double kDecayRatio = 0.05;
constexpr double kWrapFactor = 4.0;

int band_nodes(int n, double fraction) { return std::max(1, static_cast<int>(std::lround(fraction * n))); }

// Continuous log along one slice, starting from the principal branch at the leftmost node.
std::vector<cplx> unwrapped_log(const cplx* row, int n) {
    std::vector<cplx> L(static_cast<std::size_t>(n));
    L[0] = std::log(row[0]);
    for (int j = 1; j < n; ++j) {
        const double step = std::arg(row[j] / row[j - 1]);
        if (std::abs(step) >= std::numbers::pi / 2.0)
            throw Error(ErrorKind::Resolution, "log unwrapping: phase jump exceeds pi/2; refine the xi-grid");
        L[static_cast<std::size_t>(j)] = cplx(std::log(std::abs(row[j])), L[static_cast<std::size_t>(j - 1)].imag() + step);
    }
    const double closure = std::arg(row[0] / row[n - 1]);
    const double turns = (L[static_cast<std::size_t>(n - 1)].imag() - L[0].imag() + closure) / (2.0 * std::numbers::pi);
    if (std::abs(turns) >= 0.5) {
        std::ostringstream msg;
        msg << "zero-index factorization: symbol winds " << turns << " times over the window";
        throw Error(ErrorKind::Input, msg.str());
    }
    for (const cplx& v : L)
        if (std::abs(v.real()) > kMaxLogReal)
            throw Error(ErrorKind::Numerical, "zero-index factorization: |Re log sigma| exceeds 50 (exp overflow risk)");
    return L;
}

struct SlicePlan {
    SplitMethod method = SplitMethod::Periodic;
    cplx limit = 0.0;  // L at infinity (Decaying / Tapered)
    // Conjugate-side values of L - limit just right and left of x_m = 0 (Decaying).
    cplx edge_plus = 0.0;
    cplx edge_minus = 0.0;
};

// L(xi) ~ sum_k coef[k] xi^{-k} for large |xi|.
struct TailFit {
    std::vector<cplx> coef;
    cplx at(double xi) const {
        cplx acc = 0.0, p = 1.0;
        for (const cplx& c : coef) {
            acc += c * p;
            p /= xi;
        }
        return acc;
    }
    // (1 / 2 pi) * integral of (L - coef[0]) over |xi| > extent.
    cplx outside_mean(double extent) const {
        cplx acc = 0.0;
        for (std::size_t k = 2; k < coef.size(); k += 2)
            acc += 2.0 * coef[k] / ((static_cast<double>(k) - 1.0) * std::pow(extent, static_cast<double>(k) - 1.0));
        return acc / (2.0 * std::numbers::pi);
    }
};

TailFit fit_tail(const std::vector<cplx>& L, double dxi) {
    constexpr int kTerms = 5;
    const int n = static_cast<int>(L.size());
    std::vector<int> rows;
    for (int j = 0; j < n; ++j)
        if (std::abs(j - n / 2) >= n / 4) rows.push_back(j);
    const double scale = 0.5 * n * dxi;
    Eigen::MatrixXcd a(static_cast<Eigen::Index>(rows.size()), kTerms);
    Eigen::VectorXcd b(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const double t = scale / ((rows[r] - n / 2) * dxi);
        double p = 1.0;
        for (int k = 0; k < kTerms; ++k, p *= t) a(static_cast<Eigen::Index>(r), k) = p;
        b(static_cast<Eigen::Index>(r)) = L[static_cast<std::size_t>(rows[r])];
    }
    const Eigen::VectorXcd coef = a.colPivHouseholderQr().solve(b);
    TailFit fit;
    double p = 1.0;
    for (int k = 0; k < kTerms; ++k, p *= scale) fit.coef.push_back(coef(k) * p);
    return fit;
}

SlicePlan choose_method(const std::vector<cplx>& L, double dxi) {
    const int n = static_cast<int>(L.size());
    SlicePlan plan;
    plan.limit = 0.5 * (L.front() + L.back());
    const int edge = band_nodes(n, kEdgeBand);
    double peak = 0.0, tail = 0.0;
    cplx sum = 0.0;
    for (int j = 0; j < n; ++j) {
        const cplx d = L[static_cast<std::size_t>(j)] - plan.limit;
        const double a = std::abs(d);
        peak = std::max(peak, a);
        if (std::min(j, n - j) < edge) tail = std::max(tail, a);
        sum += d;
    }
    if (peak == 0.0 || tail <= kDecayRatio * peak) {
        plan.method = SplitMethod::Decaying;
        // Asymptotic fit L ~ limit + a/xi + b/xi^2 + ... over the outer half of the window.
        // The mean is the average of the conjugate one-sided values at x_m = 0 and the
        // odd tail a = i J gives their jump J.
        const TailFit fit = fit_tail(L, dxi);
        plan.limit = fit.coef[0];
        // Periodic trapezoid over the window, corrected for the unmatched endpoint and
        // for the part of the integral outside the window.
        const double extent = 0.5 * n * dxi;
        cplx sum_fit = 0.5 * (fit.at(extent) - L.front());
        for (const cplx& v : L) sum_fit += v - plan.limit;
        const cplx mean = sum_fit * dxi / (2.0 * std::numbers::pi) + fit.outside_mean(extent);
        const cplx jump = cplx(0.0, -1.0) * fit.coef[1];
        plan.edge_plus = mean + 0.5 * jump;
        plan.edge_minus = mean - 0.5 * jump;
        return plan;
    }
    const double edge_step = std::max(std::abs(L[1] - L[0]), std::abs(L[static_cast<std::size_t>(n - 1)] - L[static_cast<std::size_t>(n - 2)]));
    const double wrap = std::abs(L.front() - L.back());
    if (wrap <= kWrapFactor * edge_step) {
        plan.method = SplitMethod::Periodic;
        plan.limit = 0.0;
        return plan;
    }
    plan.method = SplitMethod::Tapered;
    return plan;
}

// Largest wrong-side magnitude of a split part relative to its peak, on the node-aligned conjugate grid.
double wrong_side_leakage(const SampledField& part, Sign keep) {
    const SampledField conj = fourier_inverse_last(part, Alignment::Symbol);
    const int n = part.grid.points();
    const int half = n / 2;
    double peak = 0.0, wrong = 0.0;
    for (std::size_t s = 0; s < part.grid.slices(); ++s) {
        const cplx* row = conj.slice(s);
        for (int k = 0; k < n; ++k) {
            const double a = std::abs(row[k]);
            peak = std::max(peak, a);
            if (k == 0 || k == half) continue;
            const bool plus = k > half;
            if (plus != (keep == Sign::Plus)) wrong = std::max(wrong, a);
        }
    }
    return peak > 0.0 ? wrong / peak : 0.0;
}

}  // namespace

SampledField omega_eval(const SpectralGrid& g, int ae) {
    return sample_xi(g, [ae](double xp, double xm) {
        const double c = xp + 1.0;
        const cplx w = cplx(xm, -c) / cplx(xm, c);
        cplx r = 1.0;
        for (int k = 0; k < std::abs(ae); ++k) r *= w;
        return ae >= 0 ? r : 1.0 / r;
    });
}

SampledField strip_index(const SampledField& sigma, int ae, const WindingOptions& opt) {
    if (sigma.side != Side::Xi) throw Error(ErrorKind::Input, "strip_index: symbol must be xi-side");
    SampledField out = ae == 0 ? sigma : sigma / omega_eval(sigma.grid, ae);
    const IndexReport r = winding_number(out, opt);
    for (std::size_t k = 0; k < r.per_slice.size(); ++k)
        if (std::abs(r.per_slice[k]) >= opt.rounding_tolerance) {
            std::ostringstream msg;
            msg << "strip_index: residual winding " << r.per_slice[k] << " on slice " << r.slice_ids[k]
                << " (inconsistent ae = " << ae << ")";
            throw Error(ErrorKind::Input, msg.str());
        }
    return out;
}

ZeroIndexFactors factorize_zero_index(const SampledField& sigma0, const FactorizeOptions& opt) {
    if (sigma0.side != Side::Xi) throw Error(ErrorKind::Input, "factorize_zero_index: symbol must be xi-side");
    const SpectralGrid& g = sigma0.grid;
    const int n = g.points();
    const EllipticityReport e = ellipticity_check(sigma0);
    if (e.min_modulus <= opt.winding.ellipticity_threshold)
        throw Error(ErrorKind::NonElliptic, "factorize_zero_index: symbol vanishes on the grid");

    const std::vector<double> taper_w = taper_weights(n, opt.taper_fraction);
    SampledField to_split(g, Side::Xi);
    std::vector<SlicePlan> plans(g.slices());
    parallel_for(g.slices(), [&](std::size_t s) {
        const std::vector<cplx> L = unwrapped_log(sigma0.slice(s), n);
        SlicePlan plan = choose_method(L, g.dxi());
        const double c = g.xi_prime_norm(s) + 1.0;
        cplx* split_row = to_split.slice(s);
        for (int j = 0; j < n; ++j) {
            const cplx d = L[static_cast<std::size_t>(j)] - plan.limit;
            switch (plan.method) {
                case SplitMethod::Periodic: split_row[j] = d; break;
                case SplitMethod::Decaying: {
                    const double xi = g.xi_node(j);
                    split_row[j] = d - cplx(0.0, 1.0) * plan.edge_plus / cplx(xi, c) +
                                   cplx(0.0, 1.0) * plan.edge_minus / cplx(xi, -c);
                    break;
                }
                case SplitMethod::Tapered: split_row[j] = d * taper_w[static_cast<std::size_t>(j)]; break;
            }
        }
        plans[s] = plan;
    });

    const SampledField core_plus = projector(to_split, Sign::Plus, Alignment::Symbol);
    const SampledField core_minus = to_split - core_plus;

    ZeroIndexFactors out{SampledField(g, Side::Xi), SampledField(g, Side::Xi), SampledField(g, Side::Xi),
                         SampledField(g, Side::Xi), core_plus, std::vector<cplx>(g.slices()),
                         std::vector<cplx>(g.slices()), {}, 0.0, 0.0};
    out.methods.resize(g.slices());
    parallel_for(g.slices(), [&](std::size_t s) {
        const SlicePlan& plan = plans[s];
        const double c = g.xi_prime_norm(s) + 1.0;
        cplx* lp = out.log_plus.slice(s);
        cplx* lm = out.log_minus.slice(s);
        const cplx* cp = core_plus.slice(s);
        const cplx* cm = core_minus.slice(s);
        cplx mean_minus = 0.0;
        for (int j = 0; j < n; ++j) {
            const double xi = g.xi_node(j);
            cplx rp = 0.0, rm = 0.0;
            if (plan.method == SplitMethod::Decaying) {
                rp = cplx(0.0, 1.0) * plan.edge_plus / cplx(xi, c);
                rm = cplx(0.0, -1.0) * plan.edge_minus / cplx(xi, -c);
            }
            lp[j] = cp[j] + rp + plan.limit;
            lm[j] = cm[j] + rm;
            mean_minus += lm[j];
        }
        mean_minus /= static_cast<double>(n);
        for (int j = 0; j < n; ++j) {
            lp[j] += mean_minus;
            lm[j] -= mean_minus;
        }
        out.plus_moment[s] = plan.method == SplitMethod::Decaying ? plan.edge_plus : cplx(0.0);
        out.plus_constant[s] = plan.limit + mean_minus;
        out.methods[s] = plan.method;
        cplx* sp = out.sigma_plus.slice(s);
        cplx* sm = out.sigma_minus.slice(s);
        for (int j = 0; j < n; ++j) {
            sp[j] = std::exp(lp[j]);
            sm[j] = std::exp(lm[j]);
        }
    });
    out.sigma_plus.support = Support::Plus;
    out.sigma_minus.support = Support::Minus;
    out.one_sided_plus = wrong_side_leakage(core_plus, Sign::Plus);
    out.one_sided_minus = wrong_side_leakage(core_minus, Sign::Minus);
    return out;
}

WindingOptions winding_options_for(const SymbolSpec& spec, const SpectralGrid& g, WindingOptions base) {
    base.mode = WindingMode::LineWindow;
    if (const auto* d = std::get_if<DifferenceOperator>(&spec.source)) {
        if (const std::optional<double> h = last_axis_step(*d)) {
            const double period = 2.0 * std::numbers::pi / *h;
            const double samples = period / g.dxi();
            if (std::abs(samples - std::round(samples)) < 1e-9 * samples && std::round(samples) <= g.points()) {
                base.mode = WindingMode::PerPeriod;
                base.period = period;
            }
        }
    }
    return base;
}

IndexReport spec_index(const SymbolSpec& spec, const SpectralGrid& g, const WindingOptions& base) {
    if (const auto* p = std::get_if<ProductSpec>(&spec.source)) {
        IndexReport total;
        std::map<std::size_t, double> by_slice;
        bool first = true;
        for (const SymbolSpec& f : p->factors) {
            const IndexReport r = spec_index(f, g, base);
            total.ae += r.ae;
            total.raw_winding += r.raw_winding;
            if (r.mode == WindingMode::LineWindow) total.mode = WindingMode::LineWindow;
            std::map<std::size_t, double> next;
            for (std::size_t k = 0; k < r.slice_ids.size(); ++k) {
                const std::size_t id = r.slice_ids[k];
                if (first) next[id] = r.per_slice[k];
                else if (auto it = by_slice.find(id); it != by_slice.end()) next[id] = it->second + r.per_slice[k];
            }
            by_slice = std::move(next);
            if (first && r.mode == WindingMode::PerPeriod) total.mode = WindingMode::PerPeriod;
            first = false;
        }
        for (const auto& [id, w] : by_slice) {
            total.slice_ids.push_back(id);
            total.per_slice.push_back(w);
        }
        return total;
    }
    return winding_number(symbol_eval(spec, g), winding_options_for(spec, g, base));
}

double reconstruction_residual(const FactorizationResult& f, double untrusted_fraction) {
    const SpectralGrid& g = f.sigma.grid;
    const int n = g.points();
    const int band = static_cast<int>(std::lround(untrusted_fraction * n));
    double worst = 0.0;
    for (std::size_t s = 0; s < g.slices(); ++s) {
        const cplx* sig = f.sigma.slice(s);
        const cplx* om = f.omega.slice(s);
        const cplx* sp = f.sigma_plus.slice(s);
        const cplx* sm = f.sigma_minus.slice(s);
        for (int j = 0; j < n; ++j) {
            if (std::min(j, n - j) < band) continue;
            worst = std::max(worst, std::abs(om[j] * sp[j] * sm[j] - sig[j]) / std::abs(sig[j]));
        }
    }
    return worst;
}

namespace {

FactorizationResult factorize_leaf(const SymbolSpec& spec, const SpectralGrid& g, const FactorizeOptions& opt) {
    SampledField sigma = symbol_eval(spec, g);
    const WindingOptions wopt = winding_options_for(spec, g, opt.winding);
    IndexReport index = winding_number(sigma, wopt);
    if (wopt.mode == WindingMode::PerPeriod && index.ae != 0) {
        std::ostringstream msg;
        msg << "periodic symbol winds " << index.ae
            << " times per period; its line index is undefined and it cannot be factorized";
        throw Error(ErrorKind::NonSolvable, msg.str());
    }
    SampledField omega = omega_eval(g, index.ae);
    const SampledField sigma0 = strip_index(sigma, index.ae, wopt);
    ZeroIndexFactors z = factorize_zero_index(sigma0, opt);
    FactorizationResult r{std::move(sigma), std::move(z.sigma_plus), std::move(z.sigma_minus), std::move(omega),
                          index.ae, std::move(index), std::move(z.log_plus), std::move(z.log_minus),
                          std::move(z.log_plus_core), std::move(z.plus_moment), std::move(z.plus_constant),
                          0.0, z.one_sided_plus, z.one_sided_minus, std::move(z.methods)};
    return r;
}

}  // namespace

FactorizationResult factorize(const SymbolSpec& spec, const SpectralGrid& g, const FactorizeOptions& opt) {
    validate(spec);
    FactorizationResult r = [&] {
        const auto* p = std::get_if<ProductSpec>(&spec.source);
        if (!p) return factorize_leaf(spec, g, opt);
        FactorizationResult acc = factorize(p->factors.front(), g, opt);
        for (std::size_t k = 1; k < p->factors.size(); ++k) {
            const FactorizationResult f = factorize(p->factors[k], g, opt);
            acc.sigma = acc.sigma * f.sigma;
            acc.sigma_plus = acc.sigma_plus * f.sigma_plus;
            acc.sigma_minus = acc.sigma_minus * f.sigma_minus;
            acc.omega = acc.omega * f.omega;
            acc.ae += f.ae;
            acc.log_plus = acc.log_plus + f.log_plus;
            acc.log_minus = acc.log_minus + f.log_minus;
            acc.log_plus_core = acc.log_plus_core + f.log_plus_core;
            for (std::size_t s = 0; s < g.slices(); ++s) {
                acc.plus_moment[s] += f.plus_moment[s];
                acc.plus_constant[s] += f.plus_constant[s];
                if (f.methods[s] != SplitMethod::Periodic) acc.methods[s] = f.methods[s];
            }
            acc.one_sided_plus = std::max(acc.one_sided_plus, f.one_sided_plus);
            acc.one_sided_minus = std::max(acc.one_sided_minus, f.one_sided_minus);
        }
        acc.omega = omega_eval(g, acc.ae);
        acc.index = spec_index(spec, g, opt.winding);
        return acc;
    }();
    r.sigma_plus.support = Support::Plus;
    r.sigma_minus.support = Support::Minus;
    r.reconstruction_residual = reconstruction_residual(r, opt.untrusted_fraction);
    if (r.reconstruction_residual > opt.reconstruction_tolerance) {
        std::ostringstream msg;
        msg << "factorization reconstruction residual " << r.reconstruction_residual << " exceeds "
            << opt.reconstruction_tolerance;
        throw Error(ErrorKind::Numerical, msg.str());
    }
    return r;
}

cplx sigma_plus_at(const FactorizationResult& f, std::size_t slice, double xi_m) {
    const SpectralGrid& g = f.sigma.grid;
    const int n = g.points();
    std::vector<cplx> conj(static_cast<std::size_t>(n));
    detail::transform_line(f.log_plus_core.slice(slice), conj.data(), n, g.xi_extent(), detail::Direction::Inverse, 0);
    cplx core = 0.0;
    for (int k = 0; k < n; ++k) {
        const double x = (k - n / 2) * g.dx();
        core += std::polar(1.0, x * xi_m) * conj[static_cast<std::size_t>(k)];
    }
    core *= g.dx();
    const double c = g.xi_prime_norm(slice) + 1.0;
    const cplx log_value = core + cplx(0.0, 1.0) * f.plus_moment[slice] / cplx(xi_m, c) + f.plus_constant[slice];
    return std::exp(log_value);
}

}  // namespace hsd
