#include "hsd/symbol.hpp"

#include <cmath>

#include "hsd/error.hpp"
#include "hsd/parallel.hpp"

namespace hsd {

RationalPreset RationalPreset::omega_power(int ae) {
    RationalPreset p;
    const RationalRoot upper{0.0, 1.0, true};
    const RationalRoot lower{0.0, -1.0, true};
    for (int k = 0; k < std::abs(ae); ++k) {
        p.zeros.push_back(ae > 0 ? upper : lower);
        p.poles.push_back(ae > 0 ? lower : upper);
    }
    return p;
}

RationalPreset RationalPreset::quadratic_ratio(double b, double a) {
    RationalPreset p;
    p.zeros = {{0.0, b, false}, {0.0, -b, false}};
    p.poles = {{0.0, a, false}, {0.0, -a, false}};
    return p;
}

namespace {

double xi_prime_norm(const std::vector<double>& xi) {
    double acc = 0.0;
    for (std::size_t d = 0; d + 1 < xi.size(); ++d) acc += xi[d] * xi[d];
    return std::sqrt(acc);
}

struct PointEval {
    const std::vector<double>& xi;

    cplx operator()(const DifferenceOperator& d) const {
        if (static_cast<std::size_t>(d.dim()) != xi.size())
            throw Error(ErrorKind::Input, "operator dimension does not match the grid");
        return d.symbol(xi);
    }
    cplx operator()(const RationalPreset& p) const {
        const double xp = xi_prime_norm(xi);
        const double xm = xi.back();
        cplx r = p.gain;
        for (const RationalRoot& z : p.zeros) r *= xm - z.at(xp);
        for (const RationalRoot& q : p.poles) r /= xm - q.at(xp);
        return r;
    }
    cplx operator()(const ProductSpec& p) const {
        cplx r = 1.0;
        for (const SymbolSpec& f : p.factors) r *= symbol_at(f, xi);
        return r;
    }
};

}  // namespace

void validate(const SymbolSpec& spec) {
    if (const auto* p = std::get_if<RationalPreset>(&spec.source)) {
        for (const RationalRoot& r : p->zeros)
            if (r.im == 0.0) throw Error(ErrorKind::Input, "rational preset zero lies on the real axis");
        for (const RationalRoot& r : p->poles)
            if (r.im == 0.0) throw Error(ErrorKind::Input, "rational preset pole lies on the real axis");
        if (p->gain == cplx(0.0)) throw Error(ErrorKind::Input, "rational preset gain is zero");
    } else if (const auto* q = std::get_if<ProductSpec>(&spec.source)) {
        if (q->factors.empty()) throw Error(ErrorKind::Input, "product symbol has no factors");
        for (const SymbolSpec& f : q->factors) validate(f);
    }
}

cplx symbol_at(const SymbolSpec& spec, const std::vector<double>& xi) {
    return std::visit(PointEval{xi}, spec.source);
}

SampledField symbol_eval(const SymbolSpec& spec, const SpectralGrid& g) {
    validate(spec);
    const int dim = spec_dimension(spec);
    if (dim != 0 && dim != g.dim()) throw Error(ErrorKind::Input, "symbol dimension does not match the grid");
    SampledField out(g, Side::Xi);
    const int n = g.points();
    parallel_for(g.slices(), [&](std::size_t s) {
        std::vector<double> xi = g.xi_prime(s);
        xi.push_back(0.0);
        cplx* row = out.slice(s);
        for (int j = 0; j < n; ++j) {
            xi.back() = g.xi_node(j);
            row[j] = symbol_at(spec, xi);
        }
    });
    return out;
}

int spec_dimension(const SymbolSpec& spec) {
    if (const auto* d = std::get_if<DifferenceOperator>(&spec.source)) return d->dim();
    if (const auto* q = std::get_if<ProductSpec>(&spec.source)) {
        int dim = 0;
        for (const SymbolSpec& f : q->factors) {
            const int fd = spec_dimension(f);
            if (fd != 0) {
                if (dim != 0 && dim != fd) throw Error(ErrorKind::Input, "product factors have different dimensions");
                dim = fd;
            }
        }
        return dim;
    }
    return 0;
}

}  // namespace hsd
