#pragma once

#include <vector>

#include "hsd/grid.hpp"

namespace hsd {

/// Riemann-sum transform over all axes, F(xi) = integral of e^{i x.xi} f(x) dx.
SampledField fourier_forward(const SampledField& f);
/// Exact grid inverse of fourier_forward: (2 pi)^{-m} integral of e^{-i x.xi} F(xi) dxi.
SampledField fourier_inverse(const SampledField& f);

/**
 * Position of the conjugate x_m-grid used by the projectors.
 * Field: cell-centred, no node on x_m = 0 (default for solution data).
 * Symbol: node-aligned, the x_m = 0 node and the wrap node are split evenly
 * between the two sides (used for log-symbol splitting).
 */
enum class Alignment { Field, Symbol };

/// Transforms along the last axis only (x_m <-> xi_m), leaving x' / xi' untouched.
SampledField fourier_forward_last(const SampledField& f, Alignment align = Alignment::Field);
SampledField fourier_inverse_last(const SampledField& f, Alignment align = Alignment::Field);

/// H f = (2 Pi_+ - I) f, the sign multiplier sgn(x_m) in the conjugate variable of xi_m.
SampledField hilbert_transform(const SampledField& f, Alignment align = Alignment::Field);

/// Cauchy projector: Pi_+ keeps the x_m >= 0 part of f, Pi_- the x_m <= 0 part.
/// Pi_+ f + Pi_- f = f exactly.
SampledField projector(const SampledField& f, Sign sign, Alignment align = Alignment::Field);

/// Raised-cosine taper over the outer `fraction` of each xi_m window.
SampledField taper(const SampledField& f, double fraction = 0.1);
/// The taper weights along one xi_m line.
std::vector<double> taper_weights(int points, double fraction = 0.1);

struct MeanValue {
    std::vector<cplx> values;  // one per xi'-slice
    double edge_ratio = 0.0;   // max over slices of (edge magnitude / slice peak)
};

/// (1 / 2 pi) * trapezoidal integral of f over xi_m, per xi'-slice.
/// In strict mode an edge ratio above edge_tolerance throws Resolution.
MeanValue mean_functional(const SampledField& f, bool strict = false, double edge_tolerance = 1e-3);

/// Lambda_+/- (xi', xi_m) = xi_m +/- i (|xi'| + 1).
SampledField lambda_multiplier(const SpectralGrid& g, Sign sign);
/// Lambda_+/- raised to an integer power.
SampledField lambda_power(const SpectralGrid& g, Sign sign, int power);

/// Repeats a per-slice function of xi' along xi_m.
SampledField broadcast_slices(const SpectralGrid& g, const std::vector<cplx>& per_slice);

struct Decomposition {
    Sign sign = Sign::Plus;
    std::vector<std::vector<cplx>> coefficients;  // c_k = Pi'(Lambda^{k-1} f), k = 1..n
    SampledField remainder;                       // Lambda^{-n} Pi(Lambda^n f)
    double edge_ratio = 0.0;
};

/**
 * Splits the projection Pi f into n boundary coefficients and a smoother remainder:
 *   Pi_+ f = i sum_k c_k Lambda_+^{-k} + Lambda_+^{-n} Pi_+(Lambda_+^n f),
 *   Pi_- f = -i sum_k c_k Lambda_-^{-k} + Lambda_-^{-n} Pi_-(Lambda_-^n f).
 * Throws Resolution if Lambda^{n-1} f grows toward the window edge.
 */
Decomposition decompose(const SampledField& f, int n, Sign sign);

/// Evaluates the right-hand side of the decomposition identity.
SampledField reassemble(const Decomposition& d);

/// Fraction of slice peak at which Lambda^{n-1} f counts as growing.
inline constexpr double kDecomposeGrowthLimit = 0.5;

}  // namespace hsd
