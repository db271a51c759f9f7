#include "hsd/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fft.hpp"
#include "hsd/error.hpp"
#include "hsd/parallel.hpp"

namespace hsd {

namespace {

void require_side(const SampledField& f, Side side, const char* op) {
    if (f.side != side)
        throw Error(ErrorKind::Input, std::string(op) + ": field is on the wrong side");
}

SampledField transform_all(const SampledField& f, detail::Direction dir) {
    SampledField out(f.grid, f.values, dir == detail::Direction::Forward ? Side::Xi : Side::X, f.support);
    for (int axis = 0; axis < f.grid.dim(); ++axis)
        detail::transform_axis(out.values.data(), f.grid, axis, dir, 1);
    return out;
}

// Weight of the conjugate x_m-node n under a projector.
double side_weight(int n, int points, Sign sign, Alignment align) {
    const int half = points / 2;
    if (align == Alignment::Field) {
        const bool plus = n >= half;
        return (plus == (sign == Sign::Plus)) ? 1.0 : 0.0;
    }
    if (n == half || n == 0) return 0.5;
    const bool plus = n > half;
    return (plus == (sign == Sign::Plus)) ? 1.0 : 0.0;
}

// Multiplies each xi_m line by weight(n) in the conjugate variable.
template <typename W>
SampledField conjugate_multiply(const SampledField& f, Alignment align, W weight) {
    const SpectralGrid& g = f.grid;
    const int n = g.points();
    const int twice_offset = align == Alignment::Field ? 1 : 0;
    std::vector<double> w(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) w[static_cast<std::size_t>(k)] = weight(k);
    SampledField out(g, Side::Xi);
    parallel_for(g.slices(), [&](std::size_t s) {
        std::vector<cplx> line(static_cast<std::size_t>(n));
        detail::transform_line(f.slice(s), line.data(), n, g.xi_extent(), detail::Direction::Inverse, twice_offset);
        for (int k = 0; k < n; ++k) line[static_cast<std::size_t>(k)] *= w[static_cast<std::size_t>(k)];
        detail::transform_line(line.data(), out.slice(s), n, g.xi_extent(), detail::Direction::Forward, twice_offset);
    });
    return out;
}

}  // namespace

SampledField fourier_forward(const SampledField& f) {
    require_side(f, Side::X, "fourier_forward");
    return transform_all(f, detail::Direction::Forward);
}

SampledField fourier_inverse(const SampledField& f) {
    require_side(f, Side::Xi, "fourier_inverse");
    return transform_all(f, detail::Direction::Inverse);
}

SampledField fourier_forward_last(const SampledField& f, Alignment align) {
    require_side(f, Side::X, "fourier_forward_last");
    SampledField out(f.grid, f.values, Side::Xi, f.support);
    detail::transform_axis(out.values.data(), f.grid, f.grid.dim() - 1, detail::Direction::Forward,
                           align == Alignment::Field ? 1 : 0);
    return out;
}

SampledField fourier_inverse_last(const SampledField& f, Alignment align) {
    require_side(f, Side::Xi, "fourier_inverse_last");
    SampledField out(f.grid, f.values, Side::X, f.support);
    detail::transform_axis(out.values.data(), f.grid, f.grid.dim() - 1, detail::Direction::Inverse,
                           align == Alignment::Field ? 1 : 0);
    return out;
}

SampledField hilbert_transform(const SampledField& f, Alignment align) {
    require_side(f, Side::Xi, "hilbert_transform");
    const int n = f.grid.points();
    return conjugate_multiply(f, align, [&](int k) {
        return side_weight(k, n, Sign::Plus, align) - side_weight(k, n, Sign::Minus, align);
    });
}

SampledField projector(const SampledField& f, Sign sign, Alignment align) {
    require_side(f, Side::Xi, "projector");
    const int n = f.grid.points();
    SampledField out = conjugate_multiply(f, align, [&](int k) { return side_weight(k, n, Sign::Plus, align); });
    if (sign == Sign::Minus) out = f - out;
    out.support = sign == Sign::Plus ? Support::Plus : Support::Minus;
    return out;
}

std::vector<double> taper_weights(int points, double fraction) {
    if (fraction < 0.0 || fraction >= 0.5)
        throw Error(ErrorKind::Input, "taper fraction must lie in [0, 0.5)");
    std::vector<double> w(static_cast<std::size_t>(points), 1.0);
    const int band = static_cast<int>(std::lround(fraction * points));
    if (band == 0) return w;
    for (int j = 0; j < points; ++j) {
        const int d = std::min(j, points - j);
        if (d < band) w[static_cast<std::size_t>(j)] = 0.5 * (1.0 - std::cos(std::numbers::pi * d / band));
    }
    return w;
}

SampledField taper(const SampledField& f, double fraction) {
    require_side(f, Side::Xi, "taper");
    const std::vector<double> w = taper_weights(f.grid.points(), fraction);
    SampledField out = f;
    const std::size_t n = w.size();
    for (std::size_t s = 0; s < f.grid.slices(); ++s) {
        cplx* row = out.slice(s);
        for (std::size_t j = 0; j < n; ++j) row[j] *= w[j];
    }
    return out;
}

MeanValue mean_functional(const SampledField& f, bool strict, double edge_tolerance) {
    require_side(f, Side::Xi, "mean_functional");
    const SpectralGrid& g = f.grid;
    const int n = g.points();
    const int edge = std::max(1, static_cast<int>(std::lround(0.02 * n)));
    const double scale = g.dxi() / (2.0 * std::numbers::pi);
    MeanValue out;
    out.values.resize(g.slices());
    std::vector<double> ratios(g.slices(), 0.0);
    parallel_for(g.slices(), [&](std::size_t s) {
        const cplx* row = f.slice(s);
        cplx acc = 0.0;
        double peak = 0.0, edge_peak = 0.0;
        for (int j = 0; j < n; ++j) {
            acc += row[j];
            const double a = std::abs(row[j]);
            peak = std::max(peak, a);
            if (std::min(j, n - j) < edge) edge_peak = std::max(edge_peak, a);
        }
        out.values[s] = acc * scale;
        ratios[s] = peak > 0.0 ? edge_peak / peak : 0.0;
    });
    out.edge_ratio = *std::max_element(ratios.begin(), ratios.end());
    if (strict && out.edge_ratio > edge_tolerance) {
        std::ostringstream msg;
        msg << "mean_functional: integrand does not decay at the window edge (edge/peak "
            << out.edge_ratio << " > " << edge_tolerance << ")";
        throw Error(ErrorKind::Resolution, msg.str());
    }
    return out;
}

SampledField lambda_multiplier(const SpectralGrid& g, Sign sign) {
    const double sg = sign_value(sign);
    return sample_xi(g, [sg](double xp, double xm) { return cplx(xm, sg * (xp + 1.0)); });
}

SampledField lambda_power(const SpectralGrid& g, Sign sign, int power) {
    const double sg = sign_value(sign);
    return sample_xi(g, [sg, power](double xp, double xm) {
        const cplx base(xm, sg * (xp + 1.0));
        cplx r = 1.0;
        const int p = std::abs(power);
        for (int k = 0; k < p; ++k) r *= base;
        return power >= 0 ? r : 1.0 / r;
    });
}

SampledField broadcast_slices(const SpectralGrid& g, const std::vector<cplx>& per_slice) {
    if (per_slice.size() != g.slices())
        throw Error(ErrorKind::Input, "per-slice function has the wrong length");
    SampledField out(g, Side::Xi);
    for (std::size_t s = 0; s < g.slices(); ++s) std::fill_n(out.slice(s), g.points(), per_slice[s]);
    return out;
}

Decomposition decompose(const SampledField& f, int n, Sign sign) {
    require_side(f, Side::Xi, "decompose");
    if (n < 1) throw Error(ErrorKind::Input, "decompose: n must be positive");
    const SampledField lambda = lambda_multiplier(f.grid, sign);
    Decomposition d{sign, {}, SampledField(f.grid, Side::Xi), 0.0};
    SampledField power = f;  // Lambda^{k-1} f
    for (int k = 1; k <= n; ++k) {
        MeanValue mv = mean_functional(power);
        d.edge_ratio = std::max(d.edge_ratio, mv.edge_ratio);
        if (mv.edge_ratio > kDecomposeGrowthLimit) {
            std::ostringstream msg;
            msg << "decompose: Lambda^" << (k - 1) << " f does not decay over the window (edge/peak "
                << mv.edge_ratio << "); enlarge the window or reduce n";
            throw Error(ErrorKind::Resolution, msg.str());
        }
        d.coefficients.push_back(std::move(mv.values));
        power = power * lambda;
    }
    d.remainder = projector(power, sign) * lambda_power(f.grid, sign, -n);
    d.remainder.support = sign == Sign::Plus ? Support::Plus : Support::Minus;
    return d;
}

SampledField reassemble(const Decomposition& d) {
    const SpectralGrid& g = d.remainder.grid;
    const cplx factor = d.sign == Sign::Plus ? cplx(0.0, 1.0) : cplx(0.0, -1.0);
    SampledField out = d.remainder;
    for (std::size_t k = 0; k < d.coefficients.size(); ++k) {
        const SampledField term = broadcast_slices(g, d.coefficients[k]) *
                                  lambda_power(g, d.sign, -static_cast<int>(k + 1));
        out = out + factor * term;
    }
    out.support = d.remainder.support;
    return out;
}

}  // namespace hsd
