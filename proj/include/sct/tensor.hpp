#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <vector>

namespace sct {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;
using Dims = std::array<Index, 3>;

// Dense order-3 tensor of doubles in one contiguous buffer, canonical order
// with i3 fastest and i1 slowest. Construction rejects non-finite entries.
class DenseTensor3 {
  public:
    DenseTensor3(Dims dims, std::vector<double> data);

    static DenseTensor3 zeros(Dims dims);

    const Dims& dims() const { return dims_; }
    Index dim(int mode) const { return dims_[mode - 1]; }
    Index size() const { return static_cast<Index>(data_.size()); }

    double operator()(Index i1, Index i2, Index i3) const {
        return data_[(i1 * dims_[1] + i2) * dims_[2] + i3];
    }

    const std::vector<double>& data() const { return data_; }

  private:
    Dims dims_;
    std::vector<double> data_;
};

// Strictly increasing indices into one tensor mode (1, 2, or 3).
struct IndexSet {
    int mode = 1;
    std::vector<Index> indices;

    Index count() const { return static_cast<Index>(indices.size()); }
};

IndexSet make_index_set(int mode, std::vector<Index> indices, Index extent);
IndexSet full_index_set(int mode, Index extent);

// Number of columns of the mode-k unfolding (product of the other extents).
Index unfold_cols(const Dims& dims, int mode);

// Matricization. Rows index the chosen mode; columns flatten the remaining
// two modes lexicographically with the later mode fastest:
//   mode 1: column i2*N3 + i3,  mode 2: column i1*N3 + i3,
//   mode 3: column i1*N2 + i2.
Matrix unfold(const DenseTensor3& t, int mode);

// Inverse of unfold for the stated column convention.
DenseTensor3 fold(const Matrix& m, int mode, const Dims& dims);

// Contract the given mode with u (u.cols() must equal that mode's extent);
// the result replaces the extent by u.rows().
DenseTensor3 mode_product(const DenseTensor3& t, const Matrix& u, int mode);

// The order-2 slice at a fixed index of one mode: mode 1 -> N2 x N3,
// mode 2 -> N1 x N3, mode 3 -> N1 x N2. Equals the matching row of the
// unfolding, reshaped.
Matrix slice(const DenseTensor3& t, int mode, Index idx);

// Subtensor at the crossing of three nonempty index sets.
DenseTensor3 intersect(const DenseTensor3& t, const IndexSet& d1,
                       const IndexSet& d2, const IndexSet& d3);

double frobenius_norm_sq(const DenseTensor3& t);

// Columns of the mode-k unfolding gathered directly from the tensor, without
// materializing the full unfolding.
Matrix gather_columns(const DenseTensor3& t, int mode,
                      const std::vector<Index>& cols);

}  // namespace sct
