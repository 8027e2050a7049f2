#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qpf/element.hpp"
#include "qpf/metrics.hpp"
#include "qpf/period.hpp"
#include "qpf/series.hpp"
#include "qpf/trend.hpp"

namespace qpf {

enum class PeriodMethod { lsg_raw, lsg_smoothed };

std::string period_method_name(PeriodMethod method);

/// One point of the per-iteration search grid.
struct Configuration {
    double validation_ratio = 0.0;
    PeriodMethod period_method = PeriodMethod::lsg_raw;
    WeightingStrategy weighting;
    int degree = 0;          // integer degree, or the lower bracket m for blends
    bool fractional = false;
    int blend_index = 0;     // i in [1, N-1] when fractional
    int blend_count = 1;     // N

    std::string trend_name() const;
};

struct FitOptions {
    std::size_t max_iterations = 10;
    std::vector<double> validation_ratios{0.10, 0.15, 0.20, 0.25};
    int max_degree = 10;
    int fractional_n = 10;
    std::size_t test_length = 0;
    double alpha = 0.9;            // exponential-recency decay
    std::uint64_t random_seed = 0; // reserved; the pipeline is deterministic
};

/// One accepted decomposition pass: the trend (REG), the semi-period, the
/// basic element, and the tiled periodic estimate (G) over the pre-test
/// range, plus the validation scores the selection used.
struct IterationResult {
    Configuration config;
    TrendModel trend;
    std::vector<double> trend_values;      // REG, pre-test length
    int semi_period = 0;
    BasicElement element;
    std::vector<double> periodic_estimate; // G, pre-test length
    double validation_smape = 0.0;         // candidate's own validation window
    double common_smape = 0.0;             // shared trailing window, selection key
    std::size_t train_length = 0;
};

struct IterationMetrics {
    MetricReport train;
    MetricReport validation;
};

/// Fitted model plus the full report. `final_prediction` is the elementwise
/// sum of (REG + G) over all accepted iterations on the pre-test range.
struct Model {
    Series input;
    FitOptions options;
    std::size_t pretest_length = 0;
    std::size_t common_window = 0;

    std::vector<IterationResult> iterations;
    std::vector<IterationMetrics> iteration_metrics;
    std::vector<double> final_prediction;
    std::vector<double> final_residual; // pre-test actuals minus final_prediction

    MetricReport final_train;
    MetricReport final_validation;
    MetricReport final_test; // n == 0 when no test window was configured

    bool guaranteed_mode = false;
    bool guarantee_unreachable = false;
    std::vector<double> residual_norms; // guaranteed mode: post-iteration L2 norms
    std::vector<bool> test_trend_fallback; // per iteration, blend left its sign
                                           // domain on the test horizon
};

/// Context a candidate is scored against: the pre-test actuals, the
/// cumulative prediction of previously accepted iterations, and the length
/// of the common evaluation window (the last `common_window` pre-test
/// samples shared by every validation ratio).
struct CandidateContext {
    const Series* actual = nullptr;            // pre-test actual values
    const std::vector<double>* prior = nullptr; // cumulative prediction so far
    std::size_t common_window = 0;
};

/// Runs one configuration on the current residual: fit trend on the train
/// part, detrend, scan for the semi-period, average segments into the basic
/// element, tile it across train+validation with phase continuity, and score
/// the cumulative prediction against the held-out windows. Throws on
/// infeasible candidates (sign-domain, singular fit, insufficient data).
IterationResult run_candidate(const Series& residual, const Configuration& config,
                              const CandidateContext& context);

/// Smallest common-window SMAPE wins; ties go to the earlier candidate.
/// Throws errc::infeasible on an empty pool.
const IterationResult& select_configuration(const std::vector<IterationResult>& candidates);

/// The full iterative decomposition with validation-driven configuration
/// selection. The test window is read exactly once, after the loop, for the
/// final report.
Model fit(const Series& series, const FitOptions& options);

/// Like fit, but a candidate is admitted only if it cuts the pre-test
/// residual L2 norm to strictly below half of the previous bound (initially
/// the norm of the mean-centered input). When the regular grid has no
/// admissible candidate, integer degrees are raised past max_degree until
/// one qualifies or every escalation path is exhausted, in which case the
/// partial model is returned with `guarantee_unreachable` set.
Model fit_guaranteed(const Series& series, const FitOptions& options);

struct PredictionDetail {
    Series total;
    std::vector<std::vector<double>> trend_components;    // per iteration
    std::vector<std::vector<double>> periodic_components; // per iteration
    std::vector<bool> fallback_used; // blend replaced by its nearer integer fit
};

/// Extends every iteration past the pre-test range: trends evaluated on the
/// horizon grid, basic elements tiled with continued phase. A fractional
/// trend that leaves its sign domain on the horizon falls back to its nearer
/// bracketing integer-degree fit.
PredictionDetail predict_components(const Model& model, std::size_t horizon);

Series predict(const Model& model, std::size_t horizon);

} // namespace qpf
