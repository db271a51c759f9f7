#pragma once

#include <cstddef>

#include "hsd/grid.hpp"

namespace hsd::detail {

enum class Direction { Forward, Inverse };

/**
 * Phase-corrected 1D transform of one contiguous line of n samples.
 *
 * Forward maps x-samples to xi-samples, F(xi_j) = dx * sum_n e^{i x_n xi_j} f_n,
 * inverse maps back with (dxi / 2 pi) * sum_j e^{-i x_n xi_j} F_j. The x-grid is
 * x_n = (n - n/2 + offset) dx with offset = twice_offset / 2 (0 or 1/2).
 */
void transform_line(const cplx* in, cplx* out, int n, double xi_extent, Direction dir, int twice_offset);

/// Applies transform_line along one axis of a tensor-grid array, in place.
void transform_axis(cplx* data, const SpectralGrid& g, int axis, Direction dir, int twice_offset);

}  // namespace hsd::detail
