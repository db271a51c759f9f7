#include "hsd/sobolev.hpp"

#include <cmath>
#include <numbers>

#include "hsd/error.hpp"
#include "hsd/parallel.hpp"
#include "hsd/solver.hpp"
#include "hsd/spectral.hpp"

namespace hsd {

NormReport sobolev_norm(const SampledField& u, double s) {
    if (!std::isfinite(s)) throw Error(ErrorKind::Input, "Sobolev order must be finite");
    const SampledField f = u.side == Side::X ? fourier_forward(u) : u;
    const SpectralGrid& g = f.grid;
    const int n = g.points();
    const double cut = 0.9 * g.xi_extent();

    std::vector<double> mass(g.slices(), 0.0), tail(g.slices(), 0.0);
    parallel_for(g.slices(), [&](std::size_t sl) {
        const std::vector<double> xp = g.xi_prime(sl);
        double xp2 = 0.0;
        bool outer = false;
        for (double c : xp) {
            xp2 += c * c;
            outer = outer || std::abs(c) > cut;
        }
        const cplx* row = f.slice(sl);
        double acc = 0.0, acc_tail = 0.0;
        for (int j = 0; j < n; ++j) {
            const double xm = g.xi_node(j);
            const double w = std::pow(1.0 + std::sqrt(xp2 + xm * xm), 2.0 * s);
            const double v = std::norm(row[j]) * w;
            acc += v;
            if (outer || std::abs(xm) > cut) acc_tail += v;
        }
        mass[sl] = acc;
        tail[sl] = acc_tail;
    });
    double total = 0.0, total_tail = 0.0;
    for (std::size_t k = 0; k < mass.size(); ++k) {
        total += mass[k];
        total_tail += tail[k];
    }
    const double cell = std::pow(g.dxi() / (2.0 * std::numbers::pi), g.dim());
    NormReport r;
    r.s = s;
    r.norm_value = std::sqrt(total * cell);
    r.window_tail_fraction = total > 0.0 ? total_tail / total : 0.0;
    r.tail_warning = r.window_tail_fraction > kNormTailWarning;
    return r;
}

NormReport plus_norm_upper(const SampledField& v, double s, double support_tolerance) {
    NormReport r = sobolev_norm(extend(v, Extension::Zero, support_tolerance), s);
    r.kind = "zero-extension upper bound";
    return r;
}

MembershipReport membership_check(const SampledField& u, Support side, double tolerance) {
    if (u.side != Side::X) throw Error(ErrorKind::Input, "membership_check: expected x-side samples");
    if (side == Support::Full) return {true, 0.0};
    const SpectralGrid& g = u.grid;
    double wrong = 0.0, total = 0.0;
    for (std::size_t sl = 0; sl < g.slices(); ++sl) {
        const cplx* row = u.slice(sl);
        for (int j = 0; j < g.points(); ++j) {
            const double a = std::norm(row[j]);
            total += a;
            const double x = g.x_node(j);
            if (side == Support::Plus ? x < 0.0 : x > 0.0) wrong += a;
        }
    }
    MembershipReport r;
    r.leakage = total > 0.0 ? std::sqrt(wrong / total) : 0.0;
    r.member = r.leakage < tolerance;
    return r;
}

}  // namespace hsd
