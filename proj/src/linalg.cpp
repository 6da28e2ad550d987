#include "sct/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sct/errors.hpp"

namespace sct {

namespace {

void fix_column_signs(Matrix& u) {
    for (Index j = 0; j < u.cols(); ++j) {
        for (Index i = 0; i < u.rows(); ++i) {
            if (u(i, j) != 0.0) {
                if (u(i, j) < 0.0) u.col(j) = -u.col(j);
                break;
            }
        }
    }
}

}  // namespace

ReductionMap gaussian_map(Index out_dim, Index in_dim, RngState& rng) {
    if (out_dim < 1 || out_dim > in_dim) {
        throw ValidationError("gaussian map needs 1 <= out_dim <= in_dim");
    }
    const double stddev = 1.0 / std::sqrt(static_cast<double>(out_dim));
    Matrix m(out_dim, in_dim);
    for (Index i = 0; i < out_dim; ++i) {
        for (Index j = 0; j < in_dim; ++j) {
            m(i, j) = rng.normal(stddev);
        }
    }
    return m;
}

QrPair qr_thin(const Matrix& m) {
    if (m.rows() < m.cols()) {
        throw ValidationError("thin QR needs rows >= cols");
    }
    Eigen::HouseholderQR<Matrix> qr(m);
    Matrix q = qr.householderQ() * Matrix::Identity(m.rows(), m.cols());
    Matrix r = qr.matrixQR().topRows(m.cols()).triangularView<Eigen::Upper>();
    return {std::move(q), std::move(r)};
}

Matrix orthonormal_basis(const Matrix& m) {
    const Index k = std::min(m.rows(), m.cols());
    Eigen::HouseholderQR<Matrix> qr(m);
    return qr.householderQ() * Matrix::Identity(m.rows(), k);
}

Matrix leading_left_singular_vectors(const Matrix& m, Index r) {
    if (r < 1 || r > std::min(m.rows(), m.cols())) {
        throw ValidationError("singular vector count out of range");
    }
    Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeThinU);
    Matrix u = svd.matrixU().leftCols(r);
    fix_column_signs(u);
    return u;
}

Vector singular_values_sq(const Matrix& m) {
    Eigen::BDCSVD<Matrix> svd(m);
    return svd.singularValues().array().square();
}

Matrix pseudo_inverse(const Matrix& m, double tol) {
    if (tol < 0.0) {
        tol = 1e-12 * static_cast<double>(std::max(m.rows(), m.cols()));
    }
    Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vector& sv = svd.singularValues();
    const double cutoff = sv.size() > 0 ? tol * sv(0) : 0.0;
    Vector inv = Vector::Zero(sv.size());
    for (Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > cutoff && sv(i) > 0.0) inv(i) = 1.0 / sv(i);
    }
    return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

}  // namespace sct
