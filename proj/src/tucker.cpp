#include "sct/tucker.hpp"

#include <algorithm>
#include <string>

#include "sct/errors.hpp"

namespace sct {

TuckerDecomposition hosvd(const DenseTensor3& t, const Dims& ranks) {
    const Dims& d = t.dims();
    for (int k = 0; k < 3; ++k) {
        const Index limit = std::min(d[static_cast<std::size_t>(k)],
                                     unfold_cols(d, k + 1));
        if (ranks[static_cast<std::size_t>(k)] < 1 ||
            ranks[static_cast<std::size_t>(k)] > limit) {
            throw ValidationError("rank for mode " + std::to_string(k + 1) +
                                  " out of range [1, " + std::to_string(limit) + "]");
        }
    }
    std::array<Matrix, 3> factors = {Matrix(), Matrix(), Matrix()};
    for (int k = 1; k <= 3; ++k) {
        factors[static_cast<std::size_t>(k - 1)] = leading_left_singular_vectors(
            unfold(t, k), ranks[static_cast<std::size_t>(k - 1)]);
    }
    DenseTensor3 core = mode_product(
        mode_product(mode_product(t, factors[0].transpose(), 1),
                     factors[1].transpose(), 2),
        factors[2].transpose(), 3);
    return TuckerDecomposition{std::move(core), std::move(factors)};
}

DenseTensor3 reconstruct(const TuckerDecomposition& d) {
    return mode_product(mode_product(mode_product(d.core, d.factors[0], 1),
                                     d.factors[1], 2),
                        d.factors[2], 3);
}

double relative_error(const DenseTensor3& approx, const DenseTensor3& reference) {
    if (approx.dims() != reference.dims()) {
        throw ValidationError("error comparison needs matching extents");
    }
    const double denom = frobenius_norm_sq(reference);
    if (denom == 0.0) {
        throw ValidationError("reference tensor must not be all zero");
    }
    double num = 0.0;
    const auto& a = approx.data();
    const auto& b = reference.data();
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double diff = a[i] - b[i];
        num += diff * diff;
    }
    return num / denom;
}

Vector scree(const DenseTensor3& t, int mode) {
    const Vector sq = singular_values_sq(unfold(t, mode));
    const double total = sq.sum();
    Vector out = Vector::Zero(sq.size() + 1);
    if (total == 0.0) return out;
    // Tail sums keep the curve non-increasing and pin the endpoints.
    double tail = 0.0;
    for (Index r = sq.size(); r-- > 0;) {
        tail += sq(r);
        out(r) = tail / total;
    }
    out(0) = 1.0;
    for (Index r = 1; r < out.size(); ++r) {
        out(r) = std::min(out(r), out(r - 1));
    }
    return out;
}

}  // namespace sct
