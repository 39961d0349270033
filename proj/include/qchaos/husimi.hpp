#pragma once

#include "qchaos/kernels.hpp"

namespace qchaos {

/// Husimi density of a state on a G x G phase-space grid (G >= 8): overlaps
/// with periodized Gaussian coherent states, scaled so the grid mean is 1
/// (sum * (1/G^2) = 1). Entry (i, j) samples (x, xi) = (i/G, j/G).
kernels::RealMatrix husimi(const kernels::Vector& u, int G);

/// Unnormalized samples |<psi_{x,xi}, u>|^2; summing these over a complete
/// orthonormal basis gives exactly 1 at every grid point.
kernels::RealMatrix husimi_raw(const kernels::Vector& u, int G);

}  // namespace qchaos
