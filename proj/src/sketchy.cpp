#include "sct/sketchy.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <utility>

#include "sct/errors.hpp"

namespace sct {

namespace {

constexpr std::uint64_t kSplitSalt = 0x5C701;
constexpr std::uint64_t kRowSalt = 0x5C710;  // + mode
constexpr std::uint64_t kMapSalt = 0x5C720;

std::array<int, 2> other_modes(int mode) {
    switch (mode) {
        case 1: return {2, 3};
        case 2: return {1, 3};
        default: return {1, 2};
    }
}

Matrix gather_rows(const Matrix& m, const std::vector<Index>& rows) {
    Matrix out(static_cast<Index>(rows.size()), m.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out.row(static_cast<Index>(i)) = m.row(rows[i]);
    }
    return out;
}

}  // namespace

void SketchBudget::validate(const Dims& dims) const {
    for (std::size_t i = 0; i < 3; ++i) {
        const Index width = unfold_cols(dims, static_cast<int>(i) + 1);
        const Index k_eff = std::min(k[i], dims[i]);
        const std::string mode = std::to_string(i + 1);
        if (r[i] < 1) throw ValidationError("rank must be >= 1 in mode " + mode);
        if (r[i] > k_eff) {
            throw ValidationError("rank exceeds effective sketch width in mode " + mode);
        }
        if (k[i] > m[i]) {
            throw ValidationError("range sketch wider than sampled columns in mode " + mode);
        }
        if (k_eff > s[i]) {
            throw ValidationError("core sketch narrower than range sketch in mode " + mode);
        }
        if (s[i] > std::min(m[i], n[i])) {
            throw ValidationError("core sketch exceeds sample counts in mode " + mode);
        }
        if (n[i] > dims[i]) {
            throw ValidationError("row count exceeds extent in mode " + mode);
        }
        if (m[i] > width) {
            throw ValidationError("column count exceeds unfolding width in mode " + mode);
        }
    }
    for (std::size_t i = 0; i < 3; ++i) {
        const auto [a, b] = other_modes(static_cast<int>(i) + 1);
        const Index cap = std::min(k[static_cast<std::size_t>(a - 1)], dims[static_cast<std::size_t>(a - 1)]) *
                          std::min(k[static_cast<std::size_t>(b - 1)], dims[static_cast<std::size_t>(b - 1)]);
        if (r[i] > cap) {
            throw ValidationError("rank in mode " + std::to_string(i + 1) +
                                  " exceeds the other modes' sketch capacity");
        }
    }
}

std::array<double, 3> SketchBudget::column_ratios(const Dims& dims) const {
    std::array<double, 3> p{};
    for (std::size_t i = 0; i < 3; ++i) {
        p[i] = static_cast<double>(m[i]) /
               static_cast<double>(unfold_cols(dims, static_cast<int>(i) + 1));
    }
    return p;
}

std::array<double, 3> SketchBudget::row_ratios(const Dims& dims) const {
    std::array<double, 3> q{};
    for (std::size_t i = 0; i < 3; ++i) {
        q[i] = static_cast<double>(n[i]) / static_cast<double>(dims[i]);
    }
    return q;
}

Dims sketch_widths_k(const Dims& r, const Dims& n) {
    Dims k{};
    for (std::size_t i = 0; i < 3; ++i) {
        if (n[i] < r[i]) throw ValidationError("fewer sampled rows than rank");
        k[i] = r[i] + (n[i] - r[i]) / 3;
    }
    return k;
}

Dims sketch_widths_s(const Dims& r, const Dims& n) {
    Dims s{};
    for (std::size_t i = 0; i < 3; ++i) {
        if (n[i] < r[i]) throw ValidationError("fewer sampled rows than rank");
        s[i] = r[i] + 2 * (n[i] - r[i]) / 3;
    }
    return s;
}

IndexSet intersection_columns(int mode, const std::array<IndexSet, 3>& rows,
                              const Dims& dims) {
    const auto [a, b] = other_modes(mode);
    const IndexSet& first = rows[static_cast<std::size_t>(a - 1)];
    const IndexSet& second = rows[static_cast<std::size_t>(b - 1)];
    // Column index of the mode-k unfolding is first*extent(second) + second.
    const Index stride = dims[static_cast<std::size_t>(b - 1)];
    std::vector<Index> cols;
    cols.reserve(static_cast<std::size_t>(first.count() * second.count()));
    for (Index i : first.indices) {
        for (Index j : second.indices) {
            cols.push_back(i * stride + j);
        }
    }
    return make_index_set(mode, std::move(cols), unfold_cols(dims, mode));
}

std::int64_t count_entries_touched(const Dims& dims,
                                   const std::array<IndexSet, 3>& rows,
                                   const std::array<IndexSet, 3>& cols) {
    const Index n1 = dims[0], n2 = dims[1], n3 = dims[2];
    std::vector<std::uint8_t> mark(static_cast<std::size_t>(n1 * n2 * n3), 0);
    const auto at = [&](Index i1, Index i2, Index i3) -> std::uint8_t& {
        return mark[static_cast<std::size_t>((i1 * n2 + i2) * n3 + i3)];
    };
    for (Index i1 : rows[0].indices) {
        std::fill_n(mark.begin() + static_cast<std::ptrdiff_t>(i1 * n2 * n3), n2 * n3,
                    std::uint8_t{1});
    }
    for (Index i2 : rows[1].indices) {
        for (Index i1 = 0; i1 < n1; ++i1) {
            std::fill_n(mark.begin() + static_cast<std::ptrdiff_t>((i1 * n2 + i2) * n3), n3,
                        std::uint8_t{1});
        }
    }
    for (Index i3 : rows[2].indices) {
        for (Index i1 = 0; i1 < n1; ++i1) {
            for (Index i2 = 0; i2 < n2; ++i2) at(i1, i2, i3) = 1;
        }
    }
    for (Index c : cols[0].indices) {
        for (Index i1 = 0; i1 < n1; ++i1) at(i1, c / n3, c % n3) = 1;
    }
    for (Index c : cols[1].indices) {
        for (Index i2 = 0; i2 < n2; ++i2) at(c / n3, i2, c % n3) = 1;
    }
    for (Index c : cols[2].indices) {
        std::fill_n(mark.begin() + static_cast<std::ptrdiff_t>(((c / n2) * n2 + c % n2) * n3),
                    n3, std::uint8_t{1});
    }
    return std::count(mark.begin(), mark.end(), std::uint8_t{1});
}

std::vector<Index> uniform_sample(Index extent, Index count, RngState& rng) {
    if (count < 0 || count > extent) {
        throw ValidationError("sample count out of range");
    }
    std::vector<Index> pool(static_cast<std::size_t>(extent));
    std::iota(pool.begin(), pool.end(), Index{0});
    for (Index i = 0; i < count; ++i) {
        const Index j = i + rng.below(extent - i);
        std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
    }
    pool.resize(static_cast<std::size_t>(count));
    std::sort(pool.begin(), pool.end());
    return pool;
}

SketchResult sct(const DenseTensor3& t, const SketchBudget& budget, RngState& rng,
                 const std::optional<std::array<IndexSet, 3>>& rows,
                 const std::optional<std::array<IndexSet, 3>>& cols,
                 const std::optional<std::array<Matrix, 3>>& omega,
                 const std::optional<std::array<Matrix, 3>>& phi) {
    const Dims& dims = t.dims();
    budget.validate(dims);

    std::array<IndexSet, 3> theta;
    for (int k = 1; k <= 3; ++k) {
        const std::size_t i = static_cast<std::size_t>(k - 1);
        if (cols) {
            if ((*cols)[i].mode != k || (*cols)[i].count() != budget.m[i]) {
                throw ValidationError("supplied columns do not match the budget");
            }
            if (!(*cols)[i].indices.empty() &&
                (*cols)[i].indices.back() >= unfold_cols(dims, k)) {
                throw ValidationError("supplied column index out of range");
            }
            theta[i] = (*cols)[i];
        } else {
            theta[i] = make_index_set(k, uniform_sample(unfold_cols(dims, k), budget.m[i], rng),
                                      unfold_cols(dims, k));
        }
    }
    std::array<IndexSet, 3> delta;
    for (int k = 1; k <= 3; ++k) {
        const std::size_t i = static_cast<std::size_t>(k - 1);
        if (rows) {
            if ((*rows)[i].mode != k || (*rows)[i].count() != budget.n[i]) {
                throw ValidationError("supplied rows do not match the budget");
            }
            if (!(*rows)[i].indices.empty() && (*rows)[i].indices.back() >= dims[i]) {
                throw ValidationError("supplied row index out of range");
            }
            delta[i] = (*rows)[i];
        } else {
            delta[i] = make_index_set(k, uniform_sample(dims[i], budget.n[i], rng), dims[i]);
        }
    }

    std::array<Matrix, 3> range_maps;
    for (std::size_t i = 0; i < 3; ++i) {
        if (omega) {
            if ((*omega)[i].rows() != budget.k[i] || (*omega)[i].cols() != budget.m[i]) {
                throw ValidationError("column sketch map has the wrong shape");
            }
            range_maps[i] = (*omega)[i];
        } else {
            range_maps[i] = gaussian_map(budget.k[i], budget.m[i], rng);
        }
    }
    std::array<Matrix, 3> core_maps;
    for (std::size_t i = 0; i < 3; ++i) {
        if (phi) {
            if ((*phi)[i].rows() != budget.s[i] || (*phi)[i].cols() != budget.n[i]) {
                throw ValidationError("intersection sketch map has the wrong shape");
            }
            core_maps[i] = (*phi)[i];
        } else {
            core_maps[i] = gaussian_map(budget.s[i], budget.n[i], rng);
        }
    }

    // Range sketches Y_k and their orthonormal bases Q_k.
    std::array<Matrix, 3> bases;
    for (int k = 1; k <= 3; ++k) {
        const std::size_t i = static_cast<std::size_t>(k - 1);
        const Matrix y = gather_columns(t, k, theta[i].indices) * range_maps[i].transpose();
        bases[i] = orthonormal_basis(y);
    }

    // Intersection sketch and core recovery.
    DenseTensor3 core_sketch = intersect(t, delta[0], delta[1], delta[2]);
    for (int k = 1; k <= 3; ++k) {
        core_sketch = mode_product(core_sketch, core_maps[static_cast<std::size_t>(k - 1)], k);
    }
    DenseTensor3 core_wide = core_sketch;
    for (int k = 1; k <= 3; ++k) {
        const std::size_t i = static_cast<std::size_t>(k - 1);
        const Matrix b = core_maps[i] * gather_rows(bases[i], delta[i].indices);
        if (b.size() == 0 || b.lpNorm<Eigen::Infinity>() == 0.0) {
            throw ValidationError("core recovery map is empty or all zero in mode " +
                                  std::to_string(k));
        }
        core_wide = mode_product(core_wide, pseudo_inverse(b), k);
    }

    TuckerDecomposition truncated = hosvd(core_wide, budget.r);
    std::array<Matrix, 3> factors;
    for (std::size_t i = 0; i < 3; ++i) {
        factors[i] = bases[i] * truncated.factors[i];
    }

    SampleLog log{delta, theta, count_entries_touched(dims, delta, theta)};
    return SketchResult{TuckerDecomposition{std::move(truncated.core), std::move(factors)},
                        std::move(log)};
}

SketchResult finalize_from_rows(const DenseTensor3& t, const Dims& ranks,
                                const std::array<IndexSet, 3>& rows, RngState& rng) {
    const Dims& dims = t.dims();
    SketchBudget budget;
    budget.r = ranks;
    for (std::size_t i = 0; i < 3; ++i) {
        budget.n[i] = rows[i].count();
        if (budget.n[i] < 1) throw ValidationError("every mode needs at least one sampled row");
    }
    budget.k = sketch_widths_k(ranks, budget.n);
    budget.s = sketch_widths_s(ranks, budget.n);

    std::array<IndexSet, 3> cols;
    for (int k = 1; k <= 3; ++k) {
        const std::size_t i = static_cast<std::size_t>(k - 1);
        cols[i] = intersection_columns(k, rows, dims);
        budget.m[i] = cols[i].count();
        budget.s[i] = std::min(budget.s[i], std::min(budget.m[i], budget.n[i]));
        budget.k[i] = std::min(budget.k[i], budget.s[i]);
        if (budget.k[i] < ranks[i]) {
            throw ValidationError("sketch budget infeasible after clamping in mode " +
                                  std::to_string(k));
        }
    }
    return sct(t, budget, rng, rows, cols);
}

Dims split_row_budget(Index n_allow, const Dims& ranks, const Dims& dims,
                      const std::array<double, 3>& ratios) {
    Dims lows{}, n{};
    Index low_total = 0, cap_total = 0;
    for (std::size_t i = 0; i < 3; ++i) {
        lows[i] = std::min(ranks[i] + 3, dims[i]);
        low_total += lows[i];
        cap_total += dims[i];
        n[i] = static_cast<Index>(ratios[i] * static_cast<double>(n_allow));
        n[i] = std::clamp(n[i], lows[i], dims[i]);
    }
    const Index target = std::clamp(n_allow, low_total, cap_total);
    auto total = [&]() { return n[0] + n[1] + n[2]; };
    // Nudge back toward the budget: shrink the most padded mode, then grow
    // the one with the most headroom.
    while (total() > target) {
        std::size_t pick = 3;
        Index best = 0;
        for (std::size_t i = 0; i < 3; ++i) {
            if (n[i] - lows[i] > best) {
                best = n[i] - lows[i];
                pick = i;
            }
        }
        if (pick == 3) break;
        --n[pick];
    }
    while (total() < target) {
        std::size_t pick = 3;
        Index best = 0;
        for (std::size_t i = 0; i < 3; ++i) {
            if (dims[i] - n[i] > best) {
                best = dims[i] - n[i];
                pick = i;
            }
        }
        if (pick == 3) break;
        ++n[pick];
    }
    return n;
}

SketchResult rsct_baseline(const DenseTensor3& t, const Dims& ranks,
                           Index n_allow, RngState& rng) {
    const Dims& dims = t.dims();
    Index max_rank = 0;
    for (std::size_t i = 0; i < 3; ++i) {
        if (ranks[i] < 1 || ranks[i] > dims[i] ||
            ranks[i] > unfold_cols(dims, static_cast<int>(i) + 1)) {
            throw ValidationError("rank out of range in mode " + std::to_string(i + 1));
        }
        max_rank = std::max(max_rank, ranks[i]);
    }
    if (n_allow < 3 * max_rank + 3) {
        throw ValidationError("row budget " + std::to_string(n_allow) +
                              " too small; need at least " + std::to_string(3 * max_rank + 3));
    }

    RngState split_rng = rng.derive(kSplitSalt);
    std::array<double, 3> g{};
    double g_total = 0.0;
    for (auto& v : g) {
        v = split_rng.gamma(1.0);
        g_total += v;
    }
    std::array<double, 3> ratios{};
    for (std::size_t i = 0; i < 3; ++i) {
        ratios[i] = g_total > 0.0 ? g[i] / g_total : 1.0 / 3.0;
    }

    const Dims n = split_row_budget(n_allow, ranks, dims, ratios);
    std::array<IndexSet, 3> rows;
    for (int k = 1; k <= 3; ++k) {
        const std::size_t i = static_cast<std::size_t>(k - 1);
        RngState row_rng = rng.derive(kRowSalt + static_cast<std::uint64_t>(k));
        rows[i] = make_index_set(k, uniform_sample(dims[i], n[i], row_rng), dims[i]);
    }
    RngState map_rng = rng.derive(kMapSalt);
    return finalize_from_rows(t, ranks, rows, map_rng);
}

}  // namespace sct
