#pragma once

#include <string>
#include <vector>

#include "hsd/grid.hpp"
#include "hsd/index.hpp"
#include "hsd/symbol.hpp"

namespace hsd {

/// How the log of a zero-index symbol was split on a given slice.
enum class SplitMethod {
    Periodic,  // log is periodic over the window; split directly
    Decaying,  // log tends to a constant; first-moment tail handled analytically
    Tapered,   // neither; raised-cosine taper applied before splitting
};

const char* to_string(SplitMethod m) noexcept;

struct FactorizeOptions {
    double taper_fraction = 0.1;
    /// Band excluded from the reconstruction diagnostic on each side of the window.
    double untrusted_fraction = 0.1;
    double reconstruction_tolerance = 1e-6;
    double one_sidedness_tolerance = 1e-6;
    WindingOptions winding;
};

/// log sigma_+ = core + i M / Lambda_+ + constant, where the core is an exact
/// projector output (used for off-grid interpolation).
struct ZeroIndexFactors {
    SampledField sigma_plus;
    SampledField sigma_minus;
    SampledField log_plus;
    SampledField log_minus;
    SampledField log_plus_core;
    std::vector<cplx> plus_moment;    // M per slice (conjugate value at x_m = 0+)
    std::vector<cplx> plus_constant;  // per slice
    std::vector<SplitMethod> methods;  // per slice
    double one_sided_plus = 0.0;       // wrong-side leakage of log sigma_+
    double one_sided_minus = 0.0;
};

struct FactorizationResult {
    SampledField sigma;
    SampledField sigma_plus;
    SampledField sigma_minus;
    SampledField omega;
    int ae = 0;
    IndexReport index;
    SampledField log_plus;
    SampledField log_minus;
    SampledField log_plus_core;
    std::vector<cplx> plus_moment;
    std::vector<cplx> plus_constant;
    double reconstruction_residual = 0.0;
    double one_sided_plus = 0.0;
    double one_sided_minus = 0.0;
    std::vector<SplitMethod> methods;
};

/// omega^ae with omega = (xi_m - i(|xi'|+1)) / (xi_m + i(|xi'|+1)).
SampledField omega_eval(const SpectralGrid& g, int ae);

/// sigma * omega^{-ae}; throws Input if the result still winds.
SampledField strip_index(const SampledField& sigma, int ae, const WindingOptions& opt = {});

/// Splits a zero-index symbol into exp(Pi_+ log) and exp(Pi_- log);
/// log sigma_- has zero mean over each slice.
ZeroIndexFactors factorize_zero_index(const SampledField& sigma0, const FactorizeOptions& opt = {});

/// Full pipeline: winding -> omega -> strip -> zero-index split, with diagnostics.
/// Products are factorized constituent-wise and multiplied.
FactorizationResult factorize(const SymbolSpec& spec, const SpectralGrid& g, const FactorizeOptions& opt = {});

/// Winding options appropriate for a spec: per-period for commensurate operators,
/// line-window otherwise.
WindingOptions winding_options_for(const SymbolSpec& spec, const SpectralGrid& g, WindingOptions base = {});

/// Factorization index of a spec (sum over product constituents).
IndexReport spec_index(const SymbolSpec& spec, const SpectralGrid& g, const WindingOptions& base = {});

/// Max relative error of omega * sigma_+ * sigma_- against sigma over interior xi_m nodes.
double reconstruction_residual(const FactorizationResult& f, double untrusted_fraction = 0.1);

/// Band-limited interpolation of log sigma_+ at an off-grid xi_m for one slice.
cplx sigma_plus_at(const FactorizationResult& f, std::size_t slice, double xi_m);

}  // namespace hsd
