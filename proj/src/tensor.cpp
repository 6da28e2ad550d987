#include "sct/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sct/errors.hpp"

namespace sct {

namespace {

void check_mode(int mode) {
    if (mode < 1 || mode > 3) {
        throw ValidationError("mode must be 1, 2, or 3, got " + std::to_string(mode));
    }
}

std::array<int, 2> other_modes(int mode) {
    switch (mode) {
        case 1: return {2, 3};
        case 2: return {1, 3};
        default: return {1, 2};
    }
}

}  // namespace

DenseTensor3::DenseTensor3(Dims dims, std::vector<double> data)
    : dims_(dims), data_(std::move(data)) {
    for (Index d : dims_) {
        if (d <= 0) throw ValidationError("tensor extents must be positive");
    }
    const auto expected = static_cast<std::size_t>(dims_[0]) * dims_[1] * dims_[2];
    if (data_.size() != expected) {
        throw ValidationError("tensor buffer has " + std::to_string(data_.size()) +
                              " entries, expected " + std::to_string(expected));
    }
    for (double v : data_) {
        if (!std::isfinite(v)) throw ValidationError("tensor entries must be finite");
    }
}

DenseTensor3 DenseTensor3::zeros(Dims dims) {
    for (Index d : dims) {
        if (d <= 0) throw ValidationError("tensor extents must be positive");
    }
    return DenseTensor3(dims, std::vector<double>(
                                  static_cast<std::size_t>(dims[0]) * dims[1] * dims[2], 0.0));
}

IndexSet make_index_set(int mode, std::vector<Index> indices, Index extent) {
    check_mode(mode);
    for (std::size_t i = 0; i < indices.size(); ++i) {
        if (indices[i] < 0 || indices[i] >= extent) {
            throw ValidationError("index " + std::to_string(indices[i]) +
                                  " out of range [0, " + std::to_string(extent) + ")");
        }
        if (i > 0 && indices[i] <= indices[i - 1]) {
            throw ValidationError("index set must be strictly increasing");
        }
    }
    return IndexSet{mode, std::move(indices)};
}

IndexSet full_index_set(int mode, Index extent) {
    std::vector<Index> all(static_cast<std::size_t>(extent));
    for (Index i = 0; i < extent; ++i) all[static_cast<std::size_t>(i)] = i;
    return make_index_set(mode, std::move(all), extent);
}

Index unfold_cols(const Dims& dims, int mode) {
    check_mode(mode);
    const auto [a, b] = other_modes(mode);
    return dims[a - 1] * dims[b - 1];
}

Matrix unfold(const DenseTensor3& t, int mode) {
    check_mode(mode);
    const auto& d = t.dims();
    Matrix m(d[mode - 1], unfold_cols(d, mode));
    for (Index i1 = 0; i1 < d[0]; ++i1) {
        for (Index i2 = 0; i2 < d[1]; ++i2) {
            for (Index i3 = 0; i3 < d[2]; ++i3) {
                const double v = t(i1, i2, i3);
                switch (mode) {
                    case 1: m(i1, i2 * d[2] + i3) = v; break;
                    case 2: m(i2, i1 * d[2] + i3) = v; break;
                    default: m(i3, i1 * d[1] + i2) = v; break;
                }
            }
        }
    }
    return m;
}

DenseTensor3 fold(const Matrix& m, int mode, const Dims& dims) {
    check_mode(mode);
    if (m.rows() != dims[mode - 1] || m.cols() != unfold_cols(dims, mode)) {
        throw ValidationError("matrix shape does not match the target tensor extents");
    }
    std::vector<double> buf(static_cast<std::size_t>(dims[0]) * dims[1] * dims[2]);
    for (Index i1 = 0; i1 < dims[0]; ++i1) {
        for (Index i2 = 0; i2 < dims[1]; ++i2) {
            for (Index i3 = 0; i3 < dims[2]; ++i3) {
                double v;
                switch (mode) {
                    case 1: v = m(i1, i2 * dims[2] + i3); break;
                    case 2: v = m(i2, i1 * dims[2] + i3); break;
                    default: v = m(i3, i1 * dims[1] + i2); break;
                }
                buf[static_cast<std::size_t>((i1 * dims[1] + i2) * dims[2] + i3)] = v;
            }
        }
    }
    return DenseTensor3(dims, std::move(buf));
}

DenseTensor3 mode_product(const DenseTensor3& t, const Matrix& u, int mode) {
    check_mode(mode);
    if (u.cols() != t.dim(mode)) {
        throw ValidationError("matrix has " + std::to_string(u.cols()) +
                              " columns, mode extent is " + std::to_string(t.dim(mode)));
    }
    if (u.rows() <= 0) throw ValidationError("matrix must have at least one row");
    Dims out = t.dims();
    out[mode - 1] = u.rows();
    return fold(u * unfold(t, mode), mode, out);
}

Matrix slice(const DenseTensor3& t, int mode, Index idx) {
    check_mode(mode);
    const auto& d = t.dims();
    if (idx < 0 || idx >= d[mode - 1]) {
        throw ValidationError("slice index " + std::to_string(idx) + " out of range");
    }
    const auto [a, b] = other_modes(mode);
    Matrix s(d[a - 1], d[b - 1]);
    for (Index i = 0; i < s.rows(); ++i) {
        for (Index j = 0; j < s.cols(); ++j) {
            switch (mode) {
                case 1: s(i, j) = t(idx, i, j); break;
                case 2: s(i, j) = t(i, idx, j); break;
                default: s(i, j) = t(i, j, idx); break;
            }
        }
    }
    return s;
}

DenseTensor3 intersect(const DenseTensor3& t, const IndexSet& d1,
                       const IndexSet& d2, const IndexSet& d3) {
    const std::array<const IndexSet*, 3> sets = {&d1, &d2, &d3};
    for (int k = 0; k < 3; ++k) {
        if (sets[k]->mode != k + 1) {
            throw ValidationError("intersection index sets must come in mode order 1, 2, 3");
        }
        if (sets[k]->indices.empty()) {
            throw ValidationError("intersection index sets must be nonempty");
        }
        if (sets[k]->indices.back() >= t.dims()[static_cast<std::size_t>(k)]) {
            throw ValidationError("intersection index out of range");
        }
    }
    const Dims out = {d1.count(), d2.count(), d3.count()};
    std::vector<double> buf(static_cast<std::size_t>(out[0]) * out[1] * out[2]);
    std::size_t pos = 0;
    for (Index a = 0; a < out[0]; ++a) {
        for (Index b = 0; b < out[1]; ++b) {
            for (Index c = 0; c < out[2]; ++c) {
                buf[pos++] = t(d1.indices[static_cast<std::size_t>(a)],
                               d2.indices[static_cast<std::size_t>(b)],
                               d3.indices[static_cast<std::size_t>(c)]);
            }
        }
    }
    return DenseTensor3(out, std::move(buf));
}

double frobenius_norm_sq(const DenseTensor3& t) {
    double acc = 0.0;
    for (double v : t.data()) acc += v * v;
    return acc;
}

Matrix gather_columns(const DenseTensor3& t, int mode, const std::vector<Index>& cols) {
    check_mode(mode);
    const auto& d = t.dims();
    const Index width = unfold_cols(d, mode);
    Matrix m(d[mode - 1], static_cast<Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j) {
        const Index c = cols[j];
        if (c < 0 || c >= width) throw ValidationError("column index out of range");
        for (Index i = 0; i < m.rows(); ++i) {
            switch (mode) {
                case 1: m(i, static_cast<Index>(j)) = t(i, c / d[2], c % d[2]); break;
                case 2: m(i, static_cast<Index>(j)) = t(c / d[2], i, c % d[2]); break;
                default: m(i, static_cast<Index>(j)) = t(c / d[1], c % d[1], i); break;
            }
        }
    }
    return m;
}

}  // namespace sct
