#pragma once

#include <cstdint>
#include <optional>

#include "sct/tucker.hpp"

namespace sct {

// Sketch sizes for one SketchyCoreTucker run. Per mode: target rank r,
// range-sketch width k, core-sketch width s, sampled column count m and
// sampled row count n of that mode's unfolding. Feasibility chain:
//   r <= min(k, N) <= s <= min(m, n),  n <= N,  m <= product of the other
// two extents, and r_k <= k_a * k_b so the core can be truncated to r.
struct SketchBudget {
    Dims r{};
    Dims k{};
    Dims s{};
    Dims m{};
    Dims n{};

    void validate(const Dims& dims) const;

    // Fractions of the unfolding sampled: columns m_k over the unfolding
    // width, rows n_k over the mode extent.
    std::array<double, 3> column_ratios(const Dims& dims) const;
    std::array<double, 3> row_ratios(const Dims& dims) const;
};

// Which indices a run touched and how many distinct tensor entries that is
// (row slices, column fibers, and their intersection, counted once).
struct SampleLog {
    std::array<IndexSet, 3> rows;
    std::array<IndexSet, 3> columns;
    std::int64_t entries_touched = 0;
};

struct SketchResult {
    TuckerDecomposition decomposition;
    SampleLog log;
};

// Sketch widths interpolated between rank and row count:
// k = floor(r + (n - r)/3), s = floor(r + 2(n - r)/3).
Dims sketch_widths_k(const Dims& r, const Dims& n);
Dims sketch_widths_s(const Dims& r, const Dims& n);

// Columns of the mode-k unfolding whose fibers cross the row intersection.
IndexSet intersection_columns(int mode, const std::array<IndexSet, 3>& rows,
                              const Dims& dims);

std::int64_t count_entries_touched(const Dims& dims,
                                   const std::array<IndexSet, 3>& rows,
                                   const std::array<IndexSet, 3>& cols);

// SketchyCoreTucker: sketch each unfolding from sampled columns, sketch the
// row intersection, recover the core through pseudoinverses and truncate it.
// Missing rows/columns are drawn uniformly without replacement; omega
// (k x m per mode) and phi (s x n per mode) default to Gaussian maps drawn
// from rng but may be supplied explicitly.
SketchResult sct(const DenseTensor3& t, const SketchBudget& budget, RngState& rng,
                 const std::optional<std::array<IndexSet, 3>>& rows = std::nullopt,
                 const std::optional<std::array<IndexSet, 3>>& cols = std::nullopt,
                 const std::optional<std::array<Matrix, 3>>& omega = std::nullopt,
                 const std::optional<std::array<Matrix, 3>>& phi = std::nullopt);

// Final stage shared by the randomized baseline and the progressive
// samplers: given sampled rows, use the columns crossing their intersection,
// widths from the interpolation schedule (clamped to stay feasible), and run
// sct with those sets.
SketchResult finalize_from_rows(const DenseTensor3& t, const Dims& ranks,
                                const std::array<IndexSet, 3>& rows, RngState& rng);

// Baseline with randomized per-mode row counts: a Dirichlet(1,1,1) split of
// n_allow, floored, clamped to [r + 3, N] and adjusted back toward the
// budget, rows uniform without replacement.
SketchResult rsct_baseline(const DenseTensor3& t, const Dims& ranks,
                           Index n_allow, RngState& rng);

// n_allow split used by rsct_baseline, exposed for tests.
Dims split_row_budget(Index n_allow, const Dims& ranks, const Dims& dims,
                      const std::array<double, 3>& ratios);

// Sorted uniform sample without replacement from [0, extent).
std::vector<Index> uniform_sample(Index extent, Index count, RngState& rng);

}  // namespace sct
