#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hsd/diffop.hpp"
#include "hsd/grid.hpp"

namespace hsd {

enum class WindingMode { LineWindow, PerPeriod };

const char* to_string(WindingMode mode) noexcept;

struct WindingOptions {
    WindingMode mode = WindingMode::LineWindow;
    /// Period in xi_m for PerPeriod mode (2 pi / h for an h-commensurate symbol).
    double period = 0.0;
    double ellipticity_threshold = 1e-6;
    /// Slices with |xi'| above this fraction of the window are skipped in LineWindow mode,
    /// as are slices (other than the central one) whose closure through infinity is too large.
    double slice_fraction = 0.25;
    double rounding_tolerance = 0.1;
};

struct IndexReport {
    int ae = 0;
    double raw_winding = 0.0;            // slice nearest xi' = 0
    std::vector<double> per_slice;       // raw windings of the slices used
    std::vector<std::size_t> slice_ids;  // their indices in the grid
    std::size_t skipped_slices = 0;      // line-window slices whose window is too short to close
    WindingMode mode = WindingMode::LineWindow;
};

/// Raw argument variation / 2 pi along xi_m for one slice.
double slice_winding(const SampledField& sigma, std::size_t slice, const WindingOptions& opt);

/// Factorization index of sigma. Throws NonElliptic, Resolution, Numerical
/// (rounding deviation) or Input (slices disagree).
IndexReport winding_number(const SampledField& sigma, const WindingOptions& opt = {});

struct HomotopyReport {
    bool consistent = false;
    std::vector<double> per_slice;
    std::vector<long> rounded;
    std::string detail;
};

/// Checks that every slice winds the same integer number of times; never throws
/// for inconsistent data.
HomotopyReport homotopy_check(const SampledField& sigma, const WindingOptions& opt = {});

/// Independent index oracle for operators shifting only along x_m by multiples of
/// `step` (default: last_axis_step): minus the number of roots of sum a_j z^j inside
/// the unit disk.
int winding_oracle_roots(const DifferenceOperator& d, std::optional<double> step = std::nullopt);

}  // namespace hsd
