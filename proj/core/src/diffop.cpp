#include "hsd/diffop.hpp"

#include <cmath>
#include <limits>

#include "hsd/error.hpp"
#include "hsd/parallel.hpp"

namespace hsd {

namespace {

constexpr double kCommensurateTol = 1e-9;

bool near_integer(double v, long long& out) {
    const double r = std::round(v);
    if (std::abs(v - r) > kCommensurateTol * std::max(1.0, std::abs(v))) return false;
    out = static_cast<long long>(r);
    return true;
}

}  // namespace

DifferenceOperator::DifferenceOperator(std::vector<ShiftTerm> terms) : terms_(std::move(terms)) {
    if (terms_.empty()) throw Error(ErrorKind::Input, "difference operator needs at least one term");
    const std::size_t m = terms_.front().shift.size();
    if (m == 0) throw Error(ErrorKind::Input, "shift vectors must be nonempty");
    for (const ShiftTerm& t : terms_) {
        if (t.shift.size() != m) throw Error(ErrorKind::Input, "shift vectors have inconsistent lengths");
        for (double c : t.shift)
            if (!std::isfinite(c)) throw Error(ErrorKind::Input, "shift components must be finite");
        if (t.shift.back() < 0.0)
            throw Error(ErrorKind::Input, "shift last component must be >= 0 (closed half-space)");
        if (!std::isfinite(t.coeff.real()) || !std::isfinite(t.coeff.imag()))
            throw Error(ErrorKind::Input, "coefficients must be finite");
    }
}

DifferenceOperator DifferenceOperator::identity(int dim) {
    return DifferenceOperator({ShiftTerm{1.0, std::vector<double>(static_cast<std::size_t>(dim), 0.0)}});
}

cplx DifferenceOperator::symbol(const std::vector<double>& xi) const {
    cplx acc = 0.0;
    for (const ShiftTerm& t : terms_) {
        double phase = 0.0;
        for (std::size_t d = 0; d < t.shift.size(); ++d) phase += t.shift[d] * xi[d];
        acc += t.coeff * std::polar(1.0, -phase);
    }
    return acc;
}

double summability_norm(const DifferenceOperator& d) {
    double acc = 0.0;
    for (const ShiftTerm& t : d.terms()) acc += std::abs(t.coeff);
    return acc;
}

bool is_commensurate(const DifferenceOperator& d, const SpectralGrid& g) {
    long long k = 0;
    for (const ShiftTerm& t : d.terms())
        for (double c : t.shift)
            if (!near_integer(c / g.dx(), k)) return false;
    return true;
}

SampledField apply_operator(const DifferenceOperator& d, const SampledField& u) {
    if (u.side != Side::X) throw Error(ErrorKind::Input, "apply_operator: field must be x-side");
    const SpectralGrid& g = u.grid;
    if (d.dim() != g.dim()) throw Error(ErrorKind::Input, "apply_operator: operator and grid dimensions differ");
    const int n = g.points();
    const int m = g.dim();
    std::vector<std::vector<long long>> offsets;
    for (const ShiftTerm& t : d.terms()) {
        std::vector<long long> off(static_cast<std::size_t>(m));
        for (int a = 0; a < m; ++a)
            if (!near_integer(t.shift[static_cast<std::size_t>(a)] / g.dx(), off[static_cast<std::size_t>(a)]))
                throw Error(ErrorKind::Input,
                            "apply_operator: shift is not a multiple of the grid spacing; use symbol-side application");
        offsets.push_back(std::move(off));
    }
    SampledField out(g, Side::X);
    parallel_for(g.slices(), [&](std::size_t s) {
        std::vector<int> idx = g.slice_indices(s);
        cplx* row = out.slice(s);
        for (std::size_t k = 0; k < offsets.size(); ++k) {
            const std::vector<long long>& off = offsets[k];
            std::size_t src_slice = 0;
            bool inside = true;
            for (int a = 0; a + 1 < m; ++a) {
                const long long j = idx[static_cast<std::size_t>(a)] + off[static_cast<std::size_t>(a)];
                if (j < 0 || j >= n) {
                    inside = false;
                    break;
                }
                src_slice = src_slice * static_cast<std::size_t>(n) + static_cast<std::size_t>(j);
            }
            if (!inside) continue;
            const cplx* src = u.slice(src_slice);
            const long long shift = off.back();
            const cplx a = d.terms()[k].coeff;
            for (int j = 0; j < n; ++j) {
                const long long from = j + shift;
                if (from >= 0 && from < n) row[j] += a * src[from];
            }
        }
    });
    return out;
}

std::optional<double> last_axis_step(const DifferenceOperator& d) {
    double smallest = std::numeric_limits<double>::infinity();
    for (const ShiftTerm& t : d.terms())
        if (t.shift.back() > 0.0) smallest = std::min(smallest, t.shift.back());
    if (!std::isfinite(smallest)) return std::nullopt;
    for (int q = 1; q <= 64; ++q) {
        const double h = smallest / q;
        bool ok = true;
        long long k = 0;
        for (const ShiftTerm& t : d.terms())
            if (!near_integer(t.shift.back() / h, k)) {
                ok = false;
                break;
            }
        if (ok) return h;
    }
    return std::nullopt;
}

EllipticityReport ellipticity_check(const SampledField& sigma) {
    if (sigma.side != Side::Xi) throw Error(ErrorKind::Input, "ellipticity_check: symbol must be xi-side");
    EllipticityReport r;
    r.min_modulus = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < sigma.values.size(); ++i) {
        const double a = std::abs(sigma.values[i]);
        if (a < r.min_modulus) {
            r.min_modulus = a;
            r.argmin = i;
        }
    }
    const SpectralGrid& g = sigma.grid;
    const std::size_t n = static_cast<std::size_t>(g.points());
    r.xi_at = g.xi_prime(r.argmin / n);
    r.xi_at.push_back(g.xi_node(static_cast<int>(r.argmin % n)));
    return r;
}

}  // namespace hsd
