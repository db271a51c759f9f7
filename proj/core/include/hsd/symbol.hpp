#pragma once

#include <variant>
#include <vector>

#include "hsd/diffop.hpp"
#include "hsd/grid.hpp"

namespace hsd {

/// A zero or pole of a rational symbol in xi_m. When `scaled` is set the
/// imaginary part is multiplied by (|xi'| + 1).
struct RationalRoot {
    double re = 0.0;
    double im = 1.0;
    bool scaled = true;

    cplx at(double xi_prime_norm) const { return {re, scaled ? im * (xi_prime_norm + 1.0) : im}; }
};

/// gain * prod (xi_m - zero) / prod (xi_m - pole); all roots off the real axis.
struct RationalPreset {
    cplx gain = 1.0;
    std::vector<RationalRoot> zeros;
    std::vector<RationalRoot> poles;

    /// ((xi_m - i(|xi'|+1)) / (xi_m + i(|xi'|+1)))^ae.
    static RationalPreset omega_power(int ae);
    /// (xi_m^2 + b^2) / (xi_m^2 + a^2) with unscaled roots.
    static RationalPreset quadratic_ratio(double b, double a);
};

struct SymbolSpec;

struct ProductSpec {
    std::vector<SymbolSpec> factors;
};

struct SymbolSpec {
    std::variant<DifferenceOperator, RationalPreset, ProductSpec> source;
};

/// Throws Input on a RationalPreset root with zero imaginary part or an empty product.
void validate(const SymbolSpec& spec);

/// Symbol value at one point; xi holds (xi', xi_m).
cplx symbol_at(const SymbolSpec& spec, const std::vector<double>& xi);

/// Samples of the symbol on the xi-grid.
SampledField symbol_eval(const SymbolSpec& spec, const SpectralGrid& g);

/// Spatial dimension implied by the spec (operator shift length), or 0 if unconstrained.
int spec_dimension(const SymbolSpec& spec);

}  // namespace hsd
