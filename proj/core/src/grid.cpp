#include "hsd/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "hsd/error.hpp"

namespace hsd {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::Input: return "input";
        case ErrorKind::NonSolvable: return "non_solvable";
        case ErrorKind::Numerical: return "numerical";
        case ErrorKind::NonElliptic: return "non_elliptic";
        case ErrorKind::Resolution: return "resolution";
    }
    return "unknown";
}

SpectralGrid::SpectralGrid(int dim, int points_per_axis, double xi_extent)
    : dim_(dim), n_(points_per_axis), xi_extent_(xi_extent), size_(1) {
    if (dim < 1 || dim > 3)
        throw Error(ErrorKind::Input, "grid dimension must be 1, 2 or 3, got " + std::to_string(dim));
    if (points_per_axis < 4 || points_per_axis % 2 != 0)
        throw Error(ErrorKind::Input, "points per axis must be even and >= 4");
    if (!(xi_extent > 0.0) || !std::isfinite(xi_extent))
        throw Error(ErrorKind::Input, "xi extent must be positive");
    for (int d = 0; d < dim; ++d) size_ *= static_cast<std::size_t>(n_);
}

double SpectralGrid::dx() const noexcept { return std::numbers::pi / xi_extent_; }

std::vector<int> SpectralGrid::slice_indices(std::size_t slice) const {
    std::vector<int> idx(static_cast<std::size_t>(dim_ - 1));
    for (int d = dim_ - 2; d >= 0; --d) {
        idx[static_cast<std::size_t>(d)] = static_cast<int>(slice % static_cast<std::size_t>(n_));
        slice /= static_cast<std::size_t>(n_);
    }
    return idx;
}

std::vector<double> SpectralGrid::xi_prime(std::size_t slice) const {
    std::vector<double> out;
    for (int j : slice_indices(slice)) out.push_back(xi_node(j));
    return out;
}

std::vector<double> SpectralGrid::x_prime(std::size_t slice) const {
    std::vector<double> out;
    for (int j : slice_indices(slice)) out.push_back(x_node(j));
    return out;
}

double SpectralGrid::xi_prime_norm(std::size_t slice) const {
    double acc = 0.0;
    for (int j : slice_indices(slice)) {
        const double v = xi_node(j);
        acc += v * v;
    }
    return std::sqrt(acc);
}

SampledField::SampledField(SpectralGrid g, Side s, Support sup)
    : grid(g), values(g.size()), side(s), support(sup) {}

SampledField::SampledField(SpectralGrid g, std::vector<cplx> v, Side s, Support sup)
    : grid(g), values(std::move(v)), side(s), support(sup) {
    if (values.size() != grid.size())
        throw Error(ErrorKind::Input, "field sample count does not match grid size");
}

double SampledField::max_abs() const noexcept {
    double m = 0.0;
    for (const cplx& v : values) m = std::max(m, std::abs(v));
    return m;
}

namespace {

void check_compatible(const SampledField& a, const SampledField& b) {
    if (!(a.grid == b.grid) || a.side != b.side)
        throw Error(ErrorKind::Input, "fields live on different grids or sides");
}

template <typename Op>
SampledField combine(const SampledField& a, const SampledField& b, Op op) {
    check_compatible(a, b);
    SampledField out(a.grid, a.side);
    for (std::size_t i = 0; i < a.values.size(); ++i) out.values[i] = op(a.values[i], b.values[i]);
    return out;
}

}  // namespace

SampledField operator*(const SampledField& a, const SampledField& b) {
    return combine(a, b, [](cplx p, cplx q) { return p * q; });
}

SampledField operator+(const SampledField& a, const SampledField& b) {
    return combine(a, b, [](cplx p, cplx q) { return p + q; });
}

SampledField operator-(const SampledField& a, const SampledField& b) {
    return combine(a, b, [](cplx p, cplx q) { return p - q; });
}

SampledField operator*(cplx c, const SampledField& a) {
    SampledField out = a;
    out.support = a.support;
    for (cplx& v : out.values) v *= c;
    return out;
}

SampledField operator/(const SampledField& a, const SampledField& b) {
    return combine(a, b, [](cplx p, cplx q) {
        if (q == cplx(0.0)) throw Error(ErrorKind::NonElliptic, "division by a vanishing symbol sample");
        return p / q;
    });
}

}  // namespace hsd
