#pragma once

// Closed forms and brute-force references used as independent test oracles.

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "hsd/grid.hpp"

namespace oracle {

using cplx = std::complex<double>;
inline constexpr double pi = std::numbers::pi;

inline double gaussian(double x) { return std::exp(-0.5 * x * x); }
inline double gaussian_ft(double xi) { return std::sqrt(2.0 * pi) * std::exp(-0.5 * xi * xi); }

// Transform of theta(x) e^{-x} under the library kernel e^{+i x xi}.
inline cplx half_exp_ft(double xi) { return 1.0 / cplx(1.0, -xi); }

// Direct O(N^2) Riemann sum of the forward transform of a 1D x-side field.
inline std::vector<cplx> direct_forward(const hsd::SampledField& f) {
    const auto& g = f.grid;
    const int n = g.points();
    std::vector<cplx> out(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        cplx acc = 0.0;
        for (int k = 0; k < n; ++k) acc += std::polar(1.0, g.x_node(k) * g.xi_node(j)) * f.values[static_cast<std::size_t>(k)];
        out[static_cast<std::size_t>(j)] = acc * g.dx();
    }
    return out;
}

// Smooth random xi-side field: a few Gaussians with random centres and complex weights.
inline hsd::SampledField random_smooth_xi(const hsd::SpectralGrid& g, std::mt19937_64& rng, double spread = 0.3) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    struct Bump { double c, w; cplx a; };
    std::vector<Bump> bumps;
    for (int k = 0; k < 4; ++k)
        bumps.push_back({u(rng) * spread * g.xi_extent(), 1.0 + 0.5 * (u(rng) + 1.0), cplx(u(rng), u(rng))});
    return hsd::sample_xi(g, [&](double xp, double xm) {
        cplx acc = 0.0;
        for (const Bump& b : bumps) acc += b.a * std::exp(-0.5 * ((xm - b.c) * (xm - b.c) + xp * xp) / (b.w * b.w));
        return acc;
    });
}

inline double max_abs_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace oracle
