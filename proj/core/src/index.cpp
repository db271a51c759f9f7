#include "hsd/index.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "hsd/error.hpp"
#include "hsd/parallel.hpp"

namespace hsd {

const char* to_string(WindingMode mode) noexcept {
    return mode == WindingMode::LineWindow ? "line-window" : "per-period";
}

namespace {

constexpr double kMaxStep = std::numbers::pi / 2.0;
constexpr double kMaxClosure = std::numbers::pi / 2.0;

double increment(cplx from, cplx to) { return std::arg(to / from); }

int period_samples(const SpectralGrid& g, double period) {
    if (!(period > 0.0)) throw Error(ErrorKind::Input, "per-period winding needs a positive period");
    const double p = period / g.dxi();
    const double r = std::round(p);
    if (std::abs(p - r) > 1e-9 * std::max(1.0, p))
        throw Error(ErrorKind::Resolution, "period is not an integer number of xi-samples");
    if (r < 4 || r > g.points())
        throw Error(ErrorKind::Resolution, "period does not fit the xi window");
    return static_cast<int>(r);
}

std::vector<std::size_t> used_slices(const SpectralGrid& g, const WindingOptions& opt) {
    std::vector<std::size_t> ids;
    for (std::size_t s = 0; s < g.slices(); ++s)
        if (opt.mode == WindingMode::PerPeriod || g.xi_prime_norm(s) <= opt.slice_fraction * g.xi_extent())
            ids.push_back(s);
    return ids;
}

void check_ellipticity(const SampledField& sigma, double threshold) {
    const EllipticityReport e = ellipticity_check(sigma);
    if (e.min_modulus <= threshold) {
        std::ostringstream msg;
        msg << "symbol is not elliptic on the grid: min |sigma| = " << e.min_modulus;
        throw Error(ErrorKind::NonElliptic, msg.str());
    }
}

}  // namespace

namespace {

struct SliceResult {
    double raw = 0.0;
    bool closed = true;  // false: closure through infinity exceeded the limit
};

SliceResult slice_result(const SampledField& sigma, std::size_t slice, const WindingOptions& opt) {
    const SpectralGrid& g = sigma.grid;
    const cplx* row = sigma.slice(slice);
    const int n = g.points();
    SliceResult r;
    double total = 0.0;
    const int steps = opt.mode == WindingMode::LineWindow ? n - 1 : period_samples(g, opt.period);
    for (int j = 0; j < steps; ++j) {
        const double d = increment(row[j], row[(j + 1) % n]);
        if (std::abs(d) >= kMaxStep)
            throw Error(ErrorKind::Resolution, "phase increment exceeds pi/2; refine the xi-grid");
        total += d;
    }
    if (opt.mode == WindingMode::LineWindow) {
        const double closure = increment(row[n - 1], row[0]);
        r.closed = std::abs(closure) <= kMaxClosure;
        total += closure;
    }
    r.raw = total / (2.0 * std::numbers::pi);
    return r;
}

std::size_t central_slice(const SpectralGrid& g) {
    std::size_t best = 0;
    for (std::size_t s = 1; s < g.slices(); ++s)
        if (g.xi_prime_norm(s) < g.xi_prime_norm(best)) best = s;
    return best;
}

// Windings of the candidate slices. In line-window mode a slice whose closure
// through infinity is too large is dropped, except the central one.
void collect(const SampledField& sigma, const WindingOptions& opt, std::vector<std::size_t>& ids,
             std::vector<double>& raw, std::size_t& skipped) {
    const std::vector<std::size_t> candidates = used_slices(sigma.grid, opt);
    std::vector<SliceResult> results(candidates.size());
    parallel_for(candidates.size(), [&](std::size_t k) { results[k] = slice_result(sigma, candidates[k], opt); });
    const std::size_t centre = central_slice(sigma.grid);
    skipped = 0;
    for (std::size_t k = 0; k < candidates.size(); ++k) {
        if (!results[k].closed) {
            if (candidates[k] == centre)
                throw Error(ErrorKind::Resolution,
                            "symbol has no limit at infinity or the window is too short; closure increment too large");
            ++skipped;
            continue;
        }
        ids.push_back(candidates[k]);
        raw.push_back(results[k].raw);
    }
}

}  // namespace

double slice_winding(const SampledField& sigma, std::size_t slice, const WindingOptions& opt) {
    const SliceResult r = slice_result(sigma, slice, opt);
    if (!r.closed)
        throw Error(ErrorKind::Resolution, "symbol has no limit at infinity; closure increment too large");
    return r.raw;
}

IndexReport winding_number(const SampledField& sigma, const WindingOptions& opt) {
    if (sigma.side != Side::Xi) throw Error(ErrorKind::Input, "winding_number: symbol must be xi-side");
    check_ellipticity(sigma, opt.ellipticity_threshold);
    const SpectralGrid& g = sigma.grid;
    IndexReport r;
    r.mode = opt.mode;
    collect(sigma, opt, r.slice_ids, r.per_slice, r.skipped_slices);

    const std::size_t centre = central_slice(g);
    for (std::size_t k = 0; k < r.slice_ids.size(); ++k)
        if (r.slice_ids[k] == centre) r.raw_winding = r.per_slice[k];
    r.ae = static_cast<int>(std::lround(r.raw_winding));

    for (std::size_t k = 0; k < r.per_slice.size(); ++k) {
        const double w = r.per_slice[k];
        if (std::lround(w) != r.ae) {
            std::ostringstream msg;
            msg << "winding differs between xi'-slices (" << r.raw_winding << " vs " << w << " at slice "
                << r.slice_ids[k] << ")";
            throw Error(ErrorKind::Input, msg.str());
        }
        if (std::abs(w - r.ae) >= opt.rounding_tolerance) {
            std::ostringstream msg;
            msg << "raw winding " << w << " is not within " << opt.rounding_tolerance << " of an integer";
            throw Error(ErrorKind::Numerical, msg.str());
        }
    }
    return r;
}

HomotopyReport homotopy_check(const SampledField& sigma, const WindingOptions& opt) {
    HomotopyReport r;
    std::vector<std::size_t> ids;
    std::size_t skipped = 0;
    try {
        check_ellipticity(sigma, opt.ellipticity_threshold);
        collect(sigma, opt, ids, r.per_slice, skipped);
    } catch (const Error& e) {
        r.detail = e.what();
        return r;
    }
    std::map<long, int> counts;
    for (double w : r.per_slice) {
        r.rounded.push_back(std::lround(w));
        ++counts[r.rounded.back()];
    }
    r.consistent = counts.size() <= 1;
    if (!r.consistent) {
        std::ostringstream msg;
        msg << "slices wind differently:";
        for (const auto& [w, c] : counts) msg << " " << c << " slice(s) with " << w;
        r.detail = msg.str();
    }
    return r;
}

int winding_oracle_roots(const DifferenceOperator& d, std::optional<double> step) {
    for (const ShiftTerm& t : d.terms())
        for (std::size_t a = 0; a + 1 < t.shift.size(); ++a)
            if (t.shift[a] != 0.0) throw Error(ErrorKind::Input, "root oracle needs shifts along x_m only");
    const std::optional<double> h = step ? step : last_axis_step(d);
    std::vector<cplx> poly;
    for (const ShiftTerm& t : d.terms()) {
        long j = 0;
        if (t.shift.back() != 0.0) {
            if (!h) throw Error(ErrorKind::Input, "root oracle: shifts are not commensurate");
            const double q = t.shift.back() / *h;
            j = std::lround(q);
            if (std::abs(q - static_cast<double>(j)) > 1e-9 * std::max(1.0, q))
                throw Error(ErrorKind::Input, "root oracle: shift is not a multiple of the step");
        }
        if (poly.size() <= static_cast<std::size_t>(j)) poly.resize(static_cast<std::size_t>(j) + 1, 0.0);
        poly[static_cast<std::size_t>(j)] += t.coeff;
    }
    while (!poly.empty() && poly.back() == cplx(0.0)) poly.pop_back();
    if (poly.empty()) throw Error(ErrorKind::NonElliptic, "root oracle: zero polynomial");
    std::size_t low = 0;
    while (poly[low] == cplx(0.0)) ++low;
    const std::size_t degree = poly.size() - 1 - low;
    int inside = static_cast<int>(low);
    if (degree > 0) {
        Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(degree),
                                                            static_cast<Eigen::Index>(degree));
        const cplx lead = poly.back();
        for (std::size_t k = 0; k < degree; ++k) {
            companion(0, static_cast<Eigen::Index>(k)) = -poly[poly.size() - 2 - k] / lead;
            if (k + 1 < degree) companion(static_cast<Eigen::Index>(k + 1), static_cast<Eigen::Index>(k)) = 1.0;
        }
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
        for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k) {
            const double r = std::abs(solver.eigenvalues()(k));
            if (std::abs(r - 1.0) < 1e-8) throw Error(ErrorKind::NonElliptic, "root oracle: root on the unit circle");
            if (r < 1.0) ++inside;
        }
    }
    return -inside;
}

}  // namespace hsd
