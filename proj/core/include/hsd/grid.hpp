#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace hsd {

using cplx = std::complex<double>;

/**
 * Uniform tensor grid in the dual variable xi = (xi', xi_m) together with
 * its conjugate x-grid.
 *
 * Per axis the xi-grid holds N nodes xi_j = (j - N/2) dxi covering
 * [-Xi, Xi) with dxi = 2 Xi / N. The x-grid is cell-centred:
 * x_n = (n - N/2 + 1/2) dx with dx = pi / Xi, so that dx * dxi * N = 2 pi
 * and no x-node sits on the boundary hyperplane x_m = 0.
 *
 * Values are stored row-major with the last axis (x_m / xi_m) fastest, so a
 * "slice" (fixed xi' or fixed x') is a contiguous run of N samples.
 */
class SpectralGrid {
public:
    SpectralGrid(int dim, int points_per_axis, double xi_extent);

    int dim() const noexcept { return dim_; }
    int points() const noexcept { return n_; }
    double xi_extent() const noexcept { return xi_extent_; }
    double dxi() const noexcept { return 2.0 * xi_extent_ / n_; }
    double dx() const noexcept;

    /// Total number of samples N^m.
    std::size_t size() const noexcept { return size_; }
    /// Number of last-axis lines N^(m-1).
    std::size_t slices() const noexcept { return size_ / static_cast<std::size_t>(n_); }

    double xi_node(int j) const noexcept { return (j - n_ / 2) * dxi(); }
    double x_node(int n) const noexcept { return (n - n_ / 2 + 0.5) * dx(); }
    /// Largest x-coordinate on the grid.
    double x_max() const noexcept { return x_node(n_ - 1); }

    /// Per-axis node indices of the leading (primed) coordinates of a slice.
    std::vector<int> slice_indices(std::size_t slice) const;
    /// |xi'| of the given slice (0 for m = 1).
    double xi_prime_norm(std::size_t slice) const;
    /// Coordinates xi' of the given slice.
    std::vector<double> xi_prime(std::size_t slice) const;
    /// Coordinates x' of the given x-side slice.
    std::vector<double> x_prime(std::size_t slice) const;

    friend bool operator==(const SpectralGrid&, const SpectralGrid&) = default;

private:
    int dim_;
    int n_;
    double xi_extent_;
    std::size_t size_;
};

enum class Side { X, Xi };

/// Support assertion in the last variable: full line, x_m >= 0, or x_m <= 0.
enum class Support { Full, Plus, Minus };

enum class Sign { Plus, Minus };

inline int sign_value(Sign s) noexcept { return s == Sign::Plus ? 1 : -1; }

/// Complex samples on a SpectralGrid, tagged by domain side and support.
struct SampledField {
    SpectralGrid grid;
    std::vector<cplx> values;
    Side side = Side::Xi;
    Support support = Support::Full;

    SampledField(SpectralGrid g, Side s, Support sup = Support::Full);
    SampledField(SpectralGrid g, std::vector<cplx> v, Side s, Support sup = Support::Full);

    static SampledField zeros(const SpectralGrid& g, Side s) { return SampledField(g, s); }

    cplx* slice(std::size_t k) noexcept { return values.data() + k * grid.points(); }
    const cplx* slice(std::size_t k) const noexcept { return values.data() + k * grid.points(); }

    double max_abs() const noexcept;
};

/// Pointwise arithmetic between fields on the same grid and side.
SampledField operator*(const SampledField& a, const SampledField& b);
SampledField operator+(const SampledField& a, const SampledField& b);
SampledField operator-(const SampledField& a, const SampledField& b);
SampledField operator*(cplx c, const SampledField& a);
/// Pointwise quotient; throws NonElliptic on an exactly zero divisor.
SampledField operator/(const SampledField& a, const SampledField& b);

/// Evaluates f(xi', xi_m) at every xi-node; f receives |xi'| and xi_m.
template <typename F>
SampledField sample_xi(const SpectralGrid& g, F&& f) {
    SampledField out(g, Side::Xi);
    const int n = g.points();
    for (std::size_t s = 0; s < g.slices(); ++s) {
        const double xp = g.xi_prime_norm(s);
        cplx* row = out.slice(s);
        for (int j = 0; j < n; ++j) row[j] = f(xp, g.xi_node(j));
    }
    return out;
}

/// Evaluates f(x', x_m) at every x-node; f receives the x' coordinates and x_m.
template <typename F>
SampledField sample_x(const SpectralGrid& g, F&& f) {
    SampledField out(g, Side::X);
    const int n = g.points();
    for (std::size_t s = 0; s < g.slices(); ++s) {
        const std::vector<double> xp = g.x_prime(s);
        cplx* row = out.slice(s);
        for (int j = 0; j < n; ++j) row[j] = f(xp, g.x_node(j));
    }
    return out;
}

}  // namespace hsd
