#pragma once

#include <string>

#include "hsd/grid.hpp"

namespace hsd {

struct NormReport {
    double s = 0.0;
    double norm_value = 0.0;
    /// Share of the weighted integrand in the outer 10% of the xi window along any axis.
    double window_tail_fraction = 0.0;
    bool tail_warning = false;  // tail fraction above 1e-2
    /// "full" for sobolev_norm, "zero-extension upper bound" for plus_norm_upper.
    std::string kind = "full";
};

inline constexpr double kNormTailWarning = 1e-2;

/// ((2 pi)^{-m} integral of |u~|^2 (1 + |xi|)^{2s} dxi)^{1/2}, trapezoidal on the grid.
/// X-side input is transformed first.
NormReport sobolev_norm(const SampledField& u, double s);

/// Norm of the zero extension of a plus-supported x-side field: an upper bound for the
/// infimum over all continuations. Throws Input on a support violation.
NormReport plus_norm_upper(const SampledField& v, double s, double support_tolerance = 1e-3);

struct MembershipReport {
    bool member = false;
    double leakage = 0.0;  // relative L2 mass on the wrong side
};

/// Support test for x-side data; side is Plus or Minus.
MembershipReport membership_check(const SampledField& u, Support side, double tolerance = 1e-3);

}  // namespace hsd
