#pragma once

#include <limits>
#include <utility>

#include "sct/sketchy.hpp"

namespace sct {

// Mean absolute difference between neighboring entries of the slice at
// `idx` of the given mode, along both free axes, normalized by slice size.
double sad(const DenseTensor3& t, int mode, Index idx);

// Dirichlet draw via normalized Gamma variates; sums to one.
std::array<double, 3> draw_ratios(const std::array<double, 3>& alpha, RngState& rng);

// Per-mode batch allocation floor(p_k * n_batch).
std::array<Index, 3> allocate(const std::array<double, 3>& ratios, Index n_batch);

// Weighted sampling without replacement by exponential keys. `weights`
// aligns with `pool`; zero-weight entries are drawn only after every
// positive-weight entry, and an all-zero weight vector falls back to
// uniform. Returns sorted indices.
std::vector<Index> weighted_sample(const std::vector<Index>& pool,
                                   const std::vector<double>& weights,
                                   Index count, RngState& rng);

// Shannon entropy (natural log) of nonnegative values normalized to a
// distribution; zero terms contribute nothing and an all-zero vector gives 0.
double sad_entropy(const std::vector<double>& values);

// Per-mode Thompson-sampling state. `observed` keeps the raw per-slice
// variation scores of sampled indices; `estimate` is the interpolated score
// with sampled entries zeroed so they cannot be drawn again; `weights` is
// `estimate` normalized over the unsampled set.
struct SamplerState {
    std::array<double, 3> alpha{1.0, 1.0, 1.0};
    std::array<IndexSet, 3> delta;
    std::array<IndexSet, 3> omega_tilde;
    std::array<std::vector<double>, 3> weights;
    std::array<std::vector<double>, 3> estimate;
    std::array<std::vector<double>, 3> observed;
    int round = 0;
};

SamplerState make_sampler_state(const Dims& dims);

// Fold fresh per-slice scores for newly sampled indices of one mode into the
// state: re-interpolate estimates linearly along the index axis from every
// sampled index (constant beyond the extremes), zero the sampled entries and
// renormalize the weights (uniform when everything is zero).
void update_weights(SamplerState& state, int mode,
                    const std::vector<std::pair<Index, double>>& observations);

// Entropy of the per-column sample variance of an orthonormal range basis
// sketched from the columns crossing the current row intersection. Requires
// at least one sampled row in every mode.
double latent_variance_entropy(const DenseTensor3& t,
                               const std::array<IndexSet, 3>& delta, int mode,
                               Index sketch_width, RngState& rng);

struct ProgressiveOptions {
    Index n_allow = 0;
    Index n_batch = 3;
    bool trace = false;
    bool trace_interim_error = false;  // run a full sketch per round (slow)
};

struct ProgressRound {
    int round = 0;
    bool topup = false;
    std::array<double, 3> ratios{};
    std::array<Index, 3> allocated{};
    std::array<double, 3> entropy{std::numeric_limits<double>::quiet_NaN(),
                                  std::numeric_limits<double>::quiet_NaN(),
                                  std::numeric_limits<double>::quiet_NaN()};
    Index cumulative = 0;
    std::int64_t entries_touched = 0;
    double interim_err = std::numeric_limits<double>::quiet_NaN();
};

using ProgressTrace = std::vector<ProgressRound>;

struct ProgressiveResult {
    TuckerDecomposition decomposition;
    SampleLog log;
    ProgressTrace trace;
};

// Progressive SketchyCoreTucker: Dirichlet-Thompson allocation over the
// three modes with per-slice variation rewards and variation-weighted row
// selection, then the shared final sketch on the sampled rows.
ProgressiveResult psct(const DenseTensor3& t, const Dims& ranks,
                       const ProgressiveOptions& opts, RngState& rng);

// Permutation-agnostic variant: uniform row selection and latent-variance
// rewards; the final stage is identical.
ProgressiveResult psct_permute(const DenseTensor3& t, const Dims& ranks,
                               const ProgressiveOptions& opts, RngState& rng);

namespace detail {

enum class RewardKind { SadWeighted, LatentVariance, ConstantUniform };

struct LoopResult {
    SamplerState state;
    ProgressTrace trace;
    Index loop_total_rows = 0;  // sampled rows when the loop stopped, before top-up
};

// The sampling loop alone, exposed for tests.
LoopResult run_sampling_loop(const DenseTensor3& t, const Dims& ranks,
                             const ProgressiveOptions& opts, RewardKind kind,
                             RngState& rng);

}  // namespace detail

}  // namespace sct
