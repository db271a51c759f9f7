#pragma once

#include <optional>
#include <vector>

#include "hsd/grid.hpp"

namespace hsd {

struct ShiftTerm {
    cplx coeff;
    std::vector<double> shift;  // length m, last component >= 0
};

/// D u(x) = sum_k a_k u(x + alpha_k).
class DifferenceOperator {
public:
    explicit DifferenceOperator(std::vector<ShiftTerm> terms);

    static DifferenceOperator identity(int dim);

    const std::vector<ShiftTerm>& terms() const noexcept { return terms_; }
    int dim() const noexcept { return static_cast<int>(terms_.front().shift.size()); }

    /// sigma(xi) = sum_k a_k e^{-i alpha_k . xi}.
    cplx symbol(const std::vector<double>& xi) const;

private:
    std::vector<ShiftTerm> terms_;
};

/// sum_k |a_k|, an operator-norm bound on L2.
double summability_norm(const DifferenceOperator& d);

/// Applies D to x-side samples. Every shift component must be an integer
/// multiple of the grid spacing; reads outside the window count as zero.
SampledField apply_operator(const DifferenceOperator& d, const SampledField& u);

/// True when every shift is an integer multiple of the x-grid spacing.
bool is_commensurate(const DifferenceOperator& d, const SpectralGrid& g);

/// Largest h such that every last-axis shift is an integer multiple of h,
/// searched among the positive shift components; nullopt if no shift moves along x_m
/// or the shifts are not mutually commensurate.
std::optional<double> last_axis_step(const DifferenceOperator& d);

struct EllipticityReport {
    double min_modulus = 0.0;
    std::size_t argmin = 0;     // flat grid index
    std::vector<double> xi_at;  // coordinates of the minimum
};

EllipticityReport ellipticity_check(const SampledField& sigma);

}  // namespace hsd
