#pragma once

#include <string>
#include <vector>

#include "hsd/factorize.hpp"
#include "hsd/grid.hpp"
#include "hsd/symbol.hpp"

namespace hsd {

enum class RegimeKind { Unique, Plus, Minus, Forbidden };

const char* to_string(RegimeKind k) noexcept;

struct SobolevRegime {
    double s = 0.0;
    int ae = 0;
    RegimeKind kind = RegimeKind::Unique;
    int n = 0;
    std::vector<double> trace_orders;  // s_k, k = 1..n
};

/// Unique if |s+ae| < 1/2, Plus(n) / Minus(n) with the nearest integer n to |s+ae|,
/// Forbidden when s+ae is a half-integer (within 1e-9).
SobolevRegime classify_regime(double s, int ae);

enum class Extension { Zero, Reflect };

const char* to_string(Extension e) noexcept;

/// Continuation of a plus-supported right-hand side to the full space.
/// Zero: lv = 0 for x_m < 0. Reflect: lv(x', x_m) = v(x', -x_m) e^{x_m} for x_m < 0.
SampledField extend(const SampledField& v, Extension method, double support_tolerance = 1e-3);

struct SolveOptions {
    Extension extension = Extension::Zero;
    double residual_tolerance = 1e-4;
    double support_tolerance = 1e-3;
    /// Fourier-side residuals are measured on boundary_layer <= x_m <= interior_fraction * x_max.
    double boundary_layer = 1.0;
    double interior_fraction = 0.8;
    /// Raised-cosine taper applied along xi_m before inverting a Fourier-side residual;
    /// suppresses ringing from the jump at x_m = 0.
    double residual_taper = 0.25;
    /// Throw Numerical when the residual check fails instead of only flagging it.
    bool throw_on_failure = true;
    FactorizeOptions factorize;
};

/// A symbol together with its factorization on a grid.
struct HalfSpaceProblem {
    SymbolSpec spec;
    FactorizationResult factors;

    HalfSpaceProblem(SymbolSpec s, const SpectralGrid& g, const FactorizeOptions& opt = {});
    const SpectralGrid& grid() const noexcept { return factors.sigma.grid; }
};

struct SolveResult {
    explicit SolveResult(const SpectralGrid& g) : u_plus(g, Side::X), u_plus_xi(g, Side::Xi) {}

    SampledField u_plus;     // x-side, regular part of the solution
    SampledField u_plus_xi;  // its transform
    /// c_k over the xi'-grid; the first `boundary_terms` multiply polynomial symbols
    /// (distributions on x_m = 0) and are not part of u_plus.
    std::vector<std::vector<cplx>> coefficients;
    int boundary_terms = 0;
    double residual = 0.0;
    std::string residual_method;  // "x-side" or "fourier"
    bool residual_ok = true;
    double support_leakage = 0.0;
    Extension extension_used = Extension::Zero;
    SobolevRegime regime;
    double h_edge_ratio = 0.0;  // edge / peak of the reduced right-hand side
};

/// u_+ = F^{-1} sigma_+^{-1} Pi_+ (sigma_-^{-1} F(lv)) for |s + ae| < 1/2.
SolveResult solve_unique(const HalfSpaceProblem& p, const SampledField& v, double s, const SolveOptions& opt = {});

/// Plus(n) regime: representation with n uniquely determined coefficients.
SolveResult solve_plus(const HalfSpaceProblem& p, const SampledField& v, double s, const SolveOptions& opt = {});

/// Minus(n) regime: particular solution plus the homogeneous family fixed by `free` (n functions of xi').
SolveResult solve_minus_general(const HalfSpaceProblem& p, const SampledField& v, double s,
                                const std::vector<std::vector<cplx>>& free, const SolveOptions& opt = {});

/// xi-side homogeneous solution Lambda_+^ae sigma_+^{-1} sum_k c_k xi_m^{k-1}.
SampledField homogeneous_solution(const HalfSpaceProblem& p, double s, const std::vector<std::vector<cplx>>& free);

/// Dispatches on the regime; Minus uses `free` (zeros if empty).
SolveResult solve(const HalfSpaceProblem& p, const SampledField& v, double s,
                  const std::vector<std::vector<cplx>>& free = {}, const SolveOptions& opt = {});

/// Relative L2 mass of an x-side field at x_m < -dx.
double support_leakage(const SampledField& u);

struct EquationResidual {
    double value = 0.0;  // absolute, max over interior plus-side nodes
    std::string method;  // "x-side" or "fourier"
};

/// Interior residual of sigma u_+ = v on the plus side. Commensurate difference operators are
/// applied in x to u_plus; otherwise the xi-side residual r is inverted.
EquationResidual equation_residual(const HalfSpaceProblem& p, const SampledField& u_plus, const SampledField& v,
                                   const SampledField& xi_residual, const SolveOptions& opt);

/// Max over plus-side interior nodes of |F^{-1} r|, for a xi-side residual r.
double plus_side_residual(const SampledField& r, const SolveOptions& opt);

}  // namespace hsd
