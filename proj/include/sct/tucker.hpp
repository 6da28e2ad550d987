#pragma once

#include "sct/linalg.hpp"
#include "sct/tensor.hpp"

namespace sct {

// Core tensor plus one orthonormal-column factor per mode.
struct TuckerDecomposition {
    DenseTensor3 core;
    std::array<Matrix, 3> factors;

    Dims ranks() const { return core.dims(); }
};

// Truncated higher-order SVD: factor k holds the leading left singular
// vectors of the mode-k unfolding and the core is the tensor contracted with
// the transposed factors. Exact when the multilinear rank is within ranks.
TuckerDecomposition hosvd(const DenseTensor3& t, const Dims& ranks);

DenseTensor3 reconstruct(const TuckerDecomposition& d);

// Squared relative Frobenius error |approx - reference|^2 / |reference|^2.
double relative_error(const DenseTensor3& approx, const DenseTensor3& reference);

// Residual spectral energy of the mode-k unfolding: entry r is the fraction
// of squared Frobenius norm not captured by rank r. Starts at 1,
// non-increasing, ends at 0. A zero tensor yields all zeros.
Vector scree(const DenseTensor3& t, int mode);

}  // namespace sct
