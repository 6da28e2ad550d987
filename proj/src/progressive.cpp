#include "sct/progressive.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "sct/errors.hpp"

namespace sct {

namespace {

constexpr double kAlphaMin = 1e-3;
constexpr std::uint64_t kLoopSalt = 0x9C701;
constexpr std::uint64_t kTopupSalt = 0x9C710;  // + mode
constexpr std::uint64_t kFinalSalt = 0x9C720;
constexpr std::uint64_t kInterimSalt = 0x9C730;  // + round
constexpr int kZeroRoundLimit = 10000;

std::array<int, 2> other_modes(int mode) {
    switch (mode) {
        case 1: return {2, 3};
        case 2: return {1, 3};
        default: return {1, 2};
    }
}

void merge_sampled(IndexSet& delta, IndexSet& omega, const std::vector<Index>& picked) {
    std::vector<Index> merged;
    merged.reserve(delta.indices.size() + picked.size());
    std::merge(delta.indices.begin(), delta.indices.end(), picked.begin(), picked.end(),
               std::back_inserter(merged));
    delta.indices = std::move(merged);
    std::vector<Index> remaining;
    remaining.reserve(omega.indices.size() - picked.size());
    std::set_difference(omega.indices.begin(), omega.indices.end(), picked.begin(),
                        picked.end(), std::back_inserter(remaining));
    omega.indices = std::move(remaining);
}

std::int64_t touched_by_rows(const Dims& dims, const std::array<IndexSet, 3>& delta) {
    const std::array<IndexSet, 3> no_cols = {IndexSet{1, {}}, IndexSet{2, {}}, IndexSet{3, {}}};
    return count_entries_touched(dims, delta, no_cols);
}

}  // namespace

double sad(const DenseTensor3& t, int mode, Index idx) {
    const Matrix s = slice(t, mode, idx);
    double acc = 0.0;
    for (Index j = 0; j < s.cols(); ++j) {
        for (Index i = 0; i + 1 < s.rows(); ++i) {
            acc += std::abs(s(i, j) - s(i + 1, j));
        }
    }
    for (Index i = 0; i < s.rows(); ++i) {
        for (Index j = 0; j + 1 < s.cols(); ++j) {
            acc += std::abs(s(i, j) - s(i, j + 1));
        }
    }
    return acc / static_cast<double>(s.rows() * s.cols());
}

std::array<double, 3> draw_ratios(const std::array<double, 3>& alpha, RngState& rng) {
    std::array<double, 3> g{};
    double total = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
        if (!(alpha[i] > 0.0)) {
            throw ValidationError("Dirichlet concentrations must be positive");
        }
        g[i] = rng.gamma(alpha[i]);
        total += g[i];
    }
    if (total == 0.0) {
        // All Gamma draws underflowed (possible for tiny concentrations).
        return {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
    }
    return {g[0] / total, g[1] / total, g[2] / total};
}

std::array<Index, 3> allocate(const std::array<double, 3>& ratios, Index n_batch) {
    if (n_batch < 1) throw ValidationError("batch size must be positive");
    std::array<Index, 3> n{};
    for (std::size_t i = 0; i < 3; ++i) {
        n[i] = static_cast<Index>(std::floor(ratios[i] * static_cast<double>(n_batch)));
    }
    return n;
}

std::vector<Index> weighted_sample(const std::vector<Index>& pool,
                                   const std::vector<double>& weights,
                                   Index count, RngState& rng) {
    if (weights.size() != pool.size()) {
        throw ValidationError("weights must align with the pool");
    }
    if (count < 0 || count > static_cast<Index>(pool.size())) {
        throw ValidationError("sample count exceeds the pool");
    }
    double weight_sum = 0.0;
    for (double w : weights) {
        if (w < 0.0 || !std::isfinite(w)) {
            throw ValidationError("weights must be finite and nonnegative");
        }
        weight_sum += w;
    }
    // Exponential keys: log(u)/w ranks positive-weight items; zero weights
    // (or an all-zero vector, which degrades to uniform) go to a lower tier
    // keyed by a plain uniform draw.
    struct Key {
        int tier;
        double value;
        Index item;
    };
    std::vector<Key> keys;
    keys.reserve(pool.size());
    for (std::size_t i = 0; i < pool.size(); ++i) {
        const double u = rng.uniform();
        const double w = weight_sum > 0.0 ? weights[i] : 0.0;
        if (w > 0.0) {
            keys.push_back({1, std::log(u) / w, pool[i]});
        } else {
            keys.push_back({0, u, pool[i]});
        }
    }
    std::stable_sort(keys.begin(), keys.end(), [](const Key& a, const Key& b) {
        if (a.tier != b.tier) return a.tier > b.tier;
        return a.value > b.value;
    });
    std::vector<Index> out(static_cast<std::size_t>(count));
    for (Index i = 0; i < count; ++i) {
        out[static_cast<std::size_t>(i)] = keys[static_cast<std::size_t>(i)].item;
    }
    std::sort(out.begin(), out.end());
    return out;
}

double sad_entropy(const std::vector<double>& values) {
    if (values.empty()) throw ValidationError("entropy needs at least one value");
    double total = 0.0;
    for (double v : values) {
        if (v < 0.0 || !std::isfinite(v)) {
            throw ValidationError("entropy values must be finite and nonnegative");
        }
        total += v;
    }
    if (total == 0.0) return 0.0;
    double h = 0.0;
    for (double v : values) {
        if (v > 0.0) {
            const double p = v / total;
            h -= p * std::log(p);
        }
    }
    return std::max(h, 0.0);
}

SamplerState make_sampler_state(const Dims& dims) {
    SamplerState state;
    for (int k = 1; k <= 3; ++k) {
        const std::size_t i = static_cast<std::size_t>(k - 1);
        const std::size_t extent = static_cast<std::size_t>(dims[i]);
        state.delta[i] = IndexSet{k, {}};
        state.omega_tilde[i] = full_index_set(k, dims[i]);
        state.weights[i].assign(extent, 1.0);
        state.estimate[i].assign(extent, 0.0);
        state.observed[i].assign(extent, 0.0);
    }
    return state;
}

void update_weights(SamplerState& state, int mode,
                    const std::vector<std::pair<Index, double>>& observations) {
    const std::size_t i = static_cast<std::size_t>(mode - 1);
    const Index extent = static_cast<Index>(state.weights[i].size());
    for (const auto& [idx, value] : observations) {
        if (idx < 0 || idx >= extent) throw ValidationError("observation index out of range");
        if (value < 0.0 || !std::isfinite(value)) {
            throw ValidationError("observations must be finite and nonnegative");
        }
        state.observed[i][static_cast<std::size_t>(idx)] = value;
    }
    const auto& sampled = state.delta[i].indices;
    if (sampled.empty()) return;

    // Linear interpolation along the index axis from every sampled index,
    // constant beyond the extremes; sampled entries are pinned to zero.
    auto& est = state.estimate[i];
    std::size_t seg = 0;
    for (Index q = 0; q < extent; ++q) {
        const std::size_t qi = static_cast<std::size_t>(q);
        while (seg + 1 < sampled.size() && sampled[seg + 1] < q) ++seg;
        const bool is_sampled = std::binary_search(sampled.begin(), sampled.end(), q);
        if (is_sampled) {
            est[qi] = 0.0;
            continue;
        }
        if (q < sampled.front()) {
            est[qi] = state.observed[i][static_cast<std::size_t>(sampled.front())];
        } else if (q > sampled.back()) {
            est[qi] = state.observed[i][static_cast<std::size_t>(sampled.back())];
        } else {
            const Index lo = sampled[seg];
            const Index hi = sampled[seg + 1];
            const double vlo = state.observed[i][static_cast<std::size_t>(lo)];
            const double vhi = state.observed[i][static_cast<std::size_t>(hi)];
            const double frac = static_cast<double>(q - lo) / static_cast<double>(hi - lo);
            est[qi] = vlo + frac * (vhi - vlo);
        }
    }

    auto& w = state.weights[i];
    double total = 0.0;
    for (Index q : state.omega_tilde[i].indices) {
        total += est[static_cast<std::size_t>(q)];
    }
    std::fill(w.begin(), w.end(), 0.0);
    if (total > 0.0) {
        for (Index q : state.omega_tilde[i].indices) {
            w[static_cast<std::size_t>(q)] = est[static_cast<std::size_t>(q)] / total;
        }
    } else if (!state.omega_tilde[i].indices.empty()) {
        const double uniform = 1.0 / static_cast<double>(state.omega_tilde[i].indices.size());
        for (Index q : state.omega_tilde[i].indices) {
            w[static_cast<std::size_t>(q)] = uniform;
        }
    }
}

double latent_variance_entropy(const DenseTensor3& t,
                               const std::array<IndexSet, 3>& delta, int mode,
                               Index sketch_width, RngState& rng) {
    for (const auto& d : delta) {
        if (d.indices.empty()) {
            throw ValidationError("latent entropy needs at least one sampled row per mode");
        }
    }
    const IndexSet cols = intersection_columns(mode, delta, t.dims());
    const Matrix y = gather_columns(t, mode, cols.indices) *
                     gaussian_map(sketch_width, cols.count(), rng).transpose();
    const Matrix q = orthonormal_basis(y);
    const double rows = static_cast<double>(q.rows());
    std::vector<double> variances(static_cast<std::size_t>(q.cols()), 0.0);
    if (q.rows() > 1) {
        for (Index j = 0; j < q.cols(); ++j) {
            const double mean = q.col(j).mean();
            variances[static_cast<std::size_t>(j)] =
                (q.col(j).array() - mean).square().sum() / (rows - 1.0);
        }
    }
    return sad_entropy(variances);
}

namespace detail {

LoopResult run_sampling_loop(const DenseTensor3& t, const Dims& ranks,
                             const ProgressiveOptions& opts, RewardKind kind,
                             RngState& rng) {
    const Dims& dims = t.dims();
    Index max_rank = 0;
    for (std::size_t i = 0; i < 3; ++i) {
        if (ranks[i] < 1 || ranks[i] > dims[i] ||
            ranks[i] > unfold_cols(dims, static_cast<int>(i) + 1)) {
            throw ValidationError("rank out of range in mode " + std::to_string(i + 1));
        }
        max_rank = std::max(max_rank, ranks[i]);
    }
    if (opts.n_allow < 3 * max_rank + 3) {
        throw ValidationError("row budget " + std::to_string(opts.n_allow) +
                              " too small; need at least " + std::to_string(3 * max_rank + 3));
    }
    if (opts.n_batch < 3) throw ValidationError("batch size must be at least 3");

    SamplerState state = make_sampler_state(dims);
    RngState loop_rng = rng.derive(kLoopSalt);
    ProgressTrace trace;
    int zero_rounds = 0;

    auto total_rows = [&]() {
        return state.delta[0].count() + state.delta[1].count() + state.delta[2].count();
    };
    auto all_present = [&]() {
        return state.delta[0].count() > 0 && state.delta[1].count() > 0 &&
               state.delta[2].count() > 0;
    };

    while (total_rows() <= opts.n_allow) {
        if (state.omega_tilde[0].indices.empty() && state.omega_tilde[1].indices.empty() &&
            state.omega_tilde[2].indices.empty()) {
            break;
        }
        const std::array<double, 3> ratios = draw_ratios(state.alpha, loop_rng);
        std::array<Index, 3> want = allocate(ratios, opts.n_batch);
        for (std::size_t i = 0; i < 3; ++i) {
            want[i] = std::min(want[i], state.omega_tilde[i].count());
        }
        if (want[0] + want[1] + want[2] == 0) {
            if (++zero_rounds < kZeroRoundLimit) continue;
            // The draw keeps landing on exhausted modes; force one row from
            // the widest-open mode so the loop always terminates.
            std::size_t pick = 0;
            for (std::size_t i = 1; i < 3; ++i) {
                if (state.omega_tilde[i].count() > state.omega_tilde[pick].count()) pick = i;
            }
            want[pick] = 1;
        }
        zero_rounds = 0;

        std::array<std::vector<Index>, 3> newly;
        for (std::size_t i = 0; i < 3; ++i) {
            if (want[i] == 0) continue;
            const auto& pool = state.omega_tilde[i].indices;
            std::vector<double> w;
            if (kind == RewardKind::SadWeighted) {
                w.reserve(pool.size());
                for (Index q : pool) w.push_back(state.weights[i][static_cast<std::size_t>(q)]);
            } else {
                w.assign(pool.size(), 1.0);
            }
            newly[i] = weighted_sample(pool, w, want[i], loop_rng);
            merge_sampled(state.delta[i], state.omega_tilde[i], newly[i]);
        }

        std::array<double, 3> entropies = {std::numeric_limits<double>::quiet_NaN(),
                                           std::numeric_limits<double>::quiet_NaN(),
                                           std::numeric_limits<double>::quiet_NaN()};
        if (kind == RewardKind::SadWeighted || kind == RewardKind::ConstantUniform) {
            for (std::size_t i = 0; i < 3; ++i) {
                if (!newly[i].empty()) {
                    std::vector<std::pair<Index, double>> obs;
                    obs.reserve(newly[i].size());
                    for (Index idx : newly[i]) {
                        const double value = kind == RewardKind::ConstantUniform
                                                 ? 1.0
                                                 : sad(t, static_cast<int>(i) + 1, idx);
                        obs.emplace_back(idx, value);
                    }
                    update_weights(state, static_cast<int>(i) + 1, obs);
                }
                if (state.delta[i].count() > 0) {
                    std::vector<double> values;
                    values.reserve(state.delta[i].indices.size());
                    for (Index idx : state.delta[i].indices) {
                        values.push_back(state.observed[i][static_cast<std::size_t>(idx)]);
                    }
                    const double h = sad_entropy(values);
                    state.alpha[i] = std::max(h, kAlphaMin);
                    entropies[i] = h;
                }
            }
        } else {
            for (std::size_t i = 0; i < 3; ++i) {
                if (!all_present()) break;
                const auto [a, b] = other_modes(static_cast<int>(i) + 1);
                const Index fibers = state.delta[static_cast<std::size_t>(a - 1)].count() *
                                     state.delta[static_cast<std::size_t>(b - 1)].count();
                const Index n_i = state.delta[i].count();
                Index width = ranks[i] + std::max<Index>(n_i - ranks[i], 0) / 3;
                width = std::max(width, ranks[i] + 1);
                width = std::min(width, fibers);
                const double h = latent_variance_entropy(t, state.delta, static_cast<int>(i) + 1,
                                                         width, loop_rng);
                state.alpha[i] = std::max(h, kAlphaMin);
                entropies[i] = h;
            }
        }

        ++state.round;
        if (opts.trace) {
            ProgressRound row;
            row.round = state.round;
            row.ratios = ratios;
            for (std::size_t i = 0; i < 3; ++i) {
                row.allocated[i] = static_cast<Index>(newly[i].size());
            }
            row.entropy = entropies;
            row.cumulative = total_rows();
            row.entries_touched = touched_by_rows(dims, state.delta);
            if (opts.trace_interim_error && all_present()) {
                RngState interim_rng =
                    rng.derive(kInterimSalt + static_cast<std::uint64_t>(state.round));
                try {
                    const SketchResult snap =
                        finalize_from_rows(t, ranks, state.delta, interim_rng);
                    row.interim_err = relative_error(reconstruct(snap.decomposition), t);
                } catch (const ValidationError&) {
                    // Not enough rows yet for a feasible sketch; leave NaN.
                }
            }
            trace.push_back(row);
        }
    }

    const Index loop_total = total_rows();

    // The final sketch needs a little headroom per mode; fill any deficit
    // uniformly and report it in the trace.
    for (std::size_t i = 0; i < 3; ++i) {
        const Index floor_i = std::min(ranks[i] + 3, dims[i]);
        const Index missing = floor_i - state.delta[i].count();
        if (missing <= 0) continue;
        RngState topup_rng = rng.derive(kTopupSalt + i);
        std::vector<double> w(state.omega_tilde[i].indices.size(), 1.0);
        const auto picked =
            weighted_sample(state.omega_tilde[i].indices, w, missing, topup_rng);
        merge_sampled(state.delta[i], state.omega_tilde[i], picked);
        if (opts.trace) {
            ProgressRound row;
            row.round = ++state.round;
            row.topup = true;
            row.allocated[i] = missing;
            row.cumulative = total_rows();
            row.entries_touched = touched_by_rows(dims, state.delta);
            trace.push_back(row);
        }
    }

    return LoopResult{std::move(state), std::move(trace), loop_total};
}

}  // namespace detail

namespace {

ProgressiveResult run_progressive(const DenseTensor3& t, const Dims& ranks,
                                  const ProgressiveOptions& opts,
                                  detail::RewardKind kind, RngState& rng) {
    detail::LoopResult loop = detail::run_sampling_loop(t, ranks, opts, kind, rng);
    RngState final_rng = rng.derive(kFinalSalt);
    SketchResult result = finalize_from_rows(t, ranks, loop.state.delta, final_rng);
    return ProgressiveResult{std::move(result.decomposition), std::move(result.log),
                             std::move(loop.trace)};
}

}  // namespace

ProgressiveResult psct(const DenseTensor3& t, const Dims& ranks,
                       const ProgressiveOptions& opts, RngState& rng) {
    return run_progressive(t, ranks, opts, detail::RewardKind::SadWeighted, rng);
}

ProgressiveResult psct_permute(const DenseTensor3& t, const Dims& ranks,
                               const ProgressiveOptions& opts, RngState& rng) {
    return run_progressive(t, ranks, opts, detail::RewardKind::LatentVariance, rng);
}

}  // namespace sct
