#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sct/progressive.hpp"

namespace sct {

enum class Method { Rsct, Psct, PsctPermute };

std::string_view method_name(Method m);
std::optional<Method> parse_method(std::string_view name);

enum class SyntheticKind { ExactLowRank, LowRankPlusNoise, StructuredField };

std::string_view synthetic_kind_name(SyntheticKind k);
std::optional<SyntheticKind> parse_synthetic_kind(std::string_view name);

// Test-data recipe. exact-lowrank: random core times random orthonormal
// factors. lowrank-plus-noise: the same plus Gaussian noise scaled to
// noise_level times the signal norm. structured-field: a smooth separable
// background of low-frequency sinusoid products plus a localized
// high-variation block covering at most 10% of each mode.
struct SyntheticSpec {
    Dims dims{};
    SyntheticKind kind = SyntheticKind::ExactLowRank;
    Dims ranks{};
    double noise_level = 0.0;
    std::uint64_t seed = 0;
};

DenseTensor3 generate(const SyntheticSpec& spec);

struct LearningCurveRecord {
    Method method = Method::Rsct;
    int trial = 0;
    Index n_allow = 0;
    double err = 0.0;
    double used_space_ratio = 0.0;
    double wall_time = 0.0;  // seconds; decomposition only, not error evaluation
};

struct BenchConfig {
    Dims ranks{};
    std::vector<Index> budgets;  // strictly increasing n_allow values
    std::vector<Method> methods;
    int trials = 30;
    Index n_batch = 12;
    std::uint64_t master_seed = 0;
};

struct BenchRun {
    std::vector<LearningCurveRecord> records;
    std::vector<std::string> skipped;  // infeasible cells with reasons
};

// One record per (method, budget, trial). Trial seeds are folded from the
// master seed and the method and trial only, so one trial's sampling nests
// as the budget grows.
BenchRun learning_curve(const DenseTensor3& t, const BenchConfig& config);

struct MethodSummary {
    Method method = Method::Rsct;
    int trials = 0;
    double mean_err = 0.0;
    double mean_time = 0.0;  // median-of-3 repetitions per trial
    double err_min = 0.0;
    double err_q25 = 0.0;
    double err_median = 0.0;
    double err_q75 = 0.0;
    double err_max = 0.0;
};

std::vector<MethodSummary> comparison_table(const DenseTensor3& t, const Dims& ranks,
                                            Index n_allow,
                                            const std::vector<Method>& methods,
                                            int trials, Index n_batch,
                                            std::uint64_t master_seed);

// Per method, the smallest median used-space ratio among budgets whose
// median error meets the target; methods that never reach it are absent.
std::map<Method, double> space_to_target(const std::vector<LearningCurveRecord>& records,
                                         double target_err);

// Linear-interpolation quantile of an unsorted sample, q in [0, 1].
double quantile(std::vector<double> values, double q);

}  // namespace sct
