#pragma once

#include "sct/rng.hpp"
#include "sct/tensor.hpp"

namespace sct {

// Dimension-reducing random map, out_dim x in_dim with out_dim <= in_dim.
using ReductionMap = Matrix;

// i.i.d. N(0, 1/out_dim) entries.
ReductionMap gaussian_map(Index out_dim, Index in_dim, RngState& rng);

struct QrPair {
    Matrix q;
    Matrix r;
};

// Thin QR, requires rows >= cols. Q has orthonormal columns and R is upper
// triangular; rank-deficient inputs still yield an orthonormal Q.
QrPair qr_thin(const Matrix& m);

// Orthonormal basis for the range, rows x min(rows, cols). Accepts wide
// matrices, unlike qr_thin.
Matrix orthonormal_basis(const Matrix& m);

// Top-r left singular vectors in descending singular-value order. Each
// column is sign-fixed so its first nonzero entry is positive.
Matrix leading_left_singular_vectors(const Matrix& m, Index r);

// Squared singular values, descending.
Vector singular_values_sq(const Matrix& m);

// Moore-Penrose pseudoinverse. Singular values <= tol * sigma_max are
// dropped; tol < 0 selects the default 1e-12 * max(rows, cols).
Matrix pseudo_inverse(const Matrix& m, double tol = -1.0);

}  // namespace sct
