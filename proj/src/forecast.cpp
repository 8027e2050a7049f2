#include "qpf/forecast.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

namespace qpf {

std::string period_method_name(PeriodMethod method) {
    return method == PeriodMethod::lsg_raw ? "lsg-raw" : "lsg-smoothed";
}

std::string Configuration::trend_name() const {
    if (!fractional) return "degree " + std::to_string(degree);
    return "fractional m=" + std::to_string(degree) + " i=" + std::to_string(blend_index) +
           " N=" + std::to_string(blend_count);
}

namespace {

double l2_norm(std::span<const double> v) {
    double acc = 0.0;
    for (double x : v) acc += x * x;
    return std::sqrt(acc);
}

double l2_centered(std::span<const double> v) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double acc = 0.0;
    for (double x : v) acc += (x - mean) * (x - mean);
    return std::sqrt(acc);
}

TrendModel make_trend(const Series& train, const Configuration& config) {
    if (!config.fractional) {
        return TrendModel::integer(fit_polynomial(train, config.degree));
    }
    TrendModel lower = TrendModel::integer(fit_polynomial(train, config.degree));
    TrendModel upper = TrendModel::integer(fit_polynomial(train, config.degree + 1));
    return fractional_blend(lower, upper, config.blend_index, config.blend_count);
}

void validate_options(const FitOptions& options) {
    if (options.max_iterations < 1) {
        raise(errc::invalid_input, "max_iterations must be at least 1");
    }
    if (options.validation_ratios.empty()) {
        raise(errc::invalid_input, "validation ratio grid is empty");
    }
    for (double r : options.validation_ratios) {
        if (!(r > 0.0 && r < 1.0)) {
            raise(errc::invalid_input, "validation ratios must lie in (0,1)");
        }
    }
    if (options.max_degree < 0) raise(errc::invalid_input, "max_degree must be nonnegative");
    if (options.fractional_n < 1) raise(errc::invalid_input, "fractional_n must be positive");
    if (!(options.alpha > 0.0 && options.alpha < 1.0)) {
        raise(errc::invalid_input, "alpha must lie in (0,1)");
    }
}

struct CandidateOutcome {
    std::optional<IterationResult> result;
    errc failure = errc::invalid_input;
};

/// Fixed enumeration: ratios, then period methods, then weightings, then
/// degrees ascending. Ties in selection resolve to the earlier entry.
std::vector<Configuration> integer_grid(const FitOptions& options) {
    const std::array<PeriodMethod, 2> methods{PeriodMethod::lsg_raw, PeriodMethod::lsg_smoothed};
    const std::array<WeightingStrategy, 3> weightings{
        WeightingStrategy::uniform(), WeightingStrategy::linear(),
        WeightingStrategy::exponential(options.alpha)};

    std::vector<Configuration> grid;
    grid.reserve(options.validation_ratios.size() * methods.size() * weightings.size() *
                 static_cast<std::size_t>(options.max_degree + 1));
    for (double ratio : options.validation_ratios) {
        for (PeriodMethod method : methods) {
            for (const WeightingStrategy& weighting : weightings) {
                for (int degree = 0; degree <= options.max_degree; ++degree) {
                    Configuration c;
                    c.validation_ratio = ratio;
                    c.period_method = method;
                    c.weighting = weighting;
                    c.degree = degree;
                    grid.push_back(c);
                }
            }
        }
    }
    return grid;
}

std::vector<CandidateOutcome> evaluate_grid(const Series& residual,
                                            const std::vector<Configuration>& grid,
                                            const CandidateContext& context) {
    std::vector<CandidateOutcome> out(grid.size());
    const std::int64_t count = static_cast<std::int64_t>(grid.size());
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t idx = 0; idx < count; ++idx) {
        try {
            out[static_cast<std::size_t>(idx)].result =
                run_candidate(residual, grid[static_cast<std::size_t>(idx)], context);
        } catch (const Error& e) {
            out[static_cast<std::size_t>(idx)].failure = e.code();
        }
    }
    return out;
}

double residual_norm_after(std::span<const double> residual, const IterationResult& candidate) {
    double acc = 0.0;
    for (std::size_t i = 0; i < residual.size(); ++i) {
        const double r = residual[i] - candidate.trend_values[i] - candidate.periodic_estimate[i];
        acc += r * r;
    }
    return std::sqrt(acc);
}

Model fit_impl(const Series& series, const FitOptions& options, bool guaranteed) {
    validate_options(options);
    const std::size_t n = series.size();
    if (options.test_length >= n) {
        raise(errc::insufficient_data, "test window swallows the whole series");
    }
    const std::size_t m = n - options.test_length;
    if (m < 16) {
        raise(errc::insufficient_data, "need at least 16 pre-test samples, got " +
                                           std::to_string(m));
    }
    const Series pretest = series.slice(0, m);

    std::size_t w = m;
    for (double r : options.validation_ratios) {
        const auto v = static_cast<std::size_t>(std::ceil(r * static_cast<double>(m)));
        w = std::min(w, v);
    }

    Model model;
    model.input = series;
    model.options = options;
    model.pretest_length = m;
    model.common_window = w;
    model.guaranteed_mode = guaranteed;

    Series residual = pretest;
    std::vector<double> cumulative(m, 0.0);
    CandidateContext context{&pretest, &cumulative, w};

    const double scale0 = l2_norm(pretest.view());
    double bound = guaranteed ? l2_centered(pretest.view()) : 0.0;
    const double zero_floor = 1e-12 * scale0;

    auto admissible = [&](const IterationResult& candidate) -> bool {
        if (!guaranteed) return true;
        const double after = residual_norm_after(residual.view(), candidate);
        return after < 0.5 * bound || after <= zero_floor;
    };

    // Stable argmin over common-window SMAPE, restricted to admissible
    // candidates; `current` (when set) must be strictly beaten.
    auto pick_best = [&](const std::vector<CandidateOutcome>& outcomes,
                         const IterationResult* current) -> const IterationResult* {
        const IterationResult* best = current;
        for (const auto& o : outcomes) {
            if (!o.result || !admissible(*o.result)) continue;
            if (!best || o.result->common_smape < best->common_smape) best = &*o.result;
        }
        return best;
    };

    const auto grid = integer_grid(options);
    double previous_best = std::numeric_limits<double>::infinity();

    for (std::size_t iter = 0; iter < options.max_iterations; ++iter) {
        if (guaranteed && l2_norm(residual.view()) <= zero_floor) break;

        const auto outcomes = evaluate_grid(residual, grid, context);
        const IterationResult* best = pick_best(outcomes, nullptr);

        std::optional<IterationResult> escalated;
        if (!best && guaranteed) {
            // Raise integer degrees past max_degree until a candidate halves
            // the residual. A combo that hits a singular or underdetermined
            // fit stays singular at every higher degree, so it drops out.
            struct Combo {
                double ratio;
                PeriodMethod method;
                WeightingStrategy weighting;
                bool exhausted = false;
            };
            std::vector<Combo> combos;
            const std::array<PeriodMethod, 2> methods{PeriodMethod::lsg_raw,
                                                      PeriodMethod::lsg_smoothed};
            const std::array<WeightingStrategy, 3> weightings{
                WeightingStrategy::uniform(), WeightingStrategy::linear(),
                WeightingStrategy::exponential(options.alpha)};
            for (double ratio : options.validation_ratios)
                for (PeriodMethod method : methods)
                    for (const WeightingStrategy& weighting : weightings)
                        combos.push_back(Combo{ratio, method, weighting, false});

            const int degree_cap = static_cast<int>(n) - 1;
            for (int degree = options.max_degree + 1;
                 degree <= degree_cap && !escalated; ++degree) {
                std::vector<Configuration> configs;
                std::vector<std::size_t> combo_of;
                for (std::size_t c = 0; c < combos.size(); ++c) {
                    if (combos[c].exhausted) continue;
                    Configuration cfg;
                    cfg.validation_ratio = combos[c].ratio;
                    cfg.period_method = combos[c].method;
                    cfg.weighting = combos[c].weighting;
                    cfg.degree = degree;
                    configs.push_back(cfg);
                    combo_of.push_back(c);
                }
                if (configs.empty()) break;
                const auto escalation = evaluate_grid(residual, configs, context);
                const IterationResult* found = nullptr;
                for (std::size_t k = 0; k < escalation.size(); ++k) {
                    if (escalation[k].result) {
                        const IterationResult& cand = *escalation[k].result;
                        if (admissible(cand) &&
                            (!found || cand.common_smape < found->common_smape)) {
                            found = &cand;
                        }
                    } else if (escalation[k].failure == errc::singular_fit ||
                               escalation[k].failure == errc::insufficient_data) {
                        combos[combo_of[k]].exhausted = true;
                    }
                }
                if (found) escalated = *found;
            }
            if (escalated) {
                best = &*escalated;
            } else {
                model.guarantee_unreachable = true;
                break;
            }
        }
        if (!best) break; // every candidate infeasible

        IterationResult chosen = *best;

        // Fractional refinement between the winner's degree and its
        // neighbors, with the winner's split/method/weighting kept fixed.
        // Escalated (past-max) degrees stay integer.
        if (!chosen.config.fractional && chosen.config.degree <= options.max_degree &&
            options.fractional_n > 1) {
            std::vector<Configuration> fractional;
            auto add_bracket = [&](int low) {
                if (low < 0 || low + 1 > options.max_degree) return;
                for (int i = 1; i < options.fractional_n; ++i) {
                    Configuration c = chosen.config;
                    c.degree = low;
                    c.fractional = true;
                    c.blend_index = i;
                    c.blend_count = options.fractional_n;
                    fractional.push_back(c);
                }
            };
            add_bracket(chosen.config.degree - 1);
            add_bracket(chosen.config.degree);
            if (!fractional.empty()) {
                const auto refined = evaluate_grid(residual, fractional, context);
                if (const IterationResult* r = pick_best(refined, &chosen); r != &chosen) {
                    chosen = *r;
                }
            }
        }

        // Equal validation quality counts as no improvement.
        if (chosen.common_smape >= previous_best) break;

        for (std::size_t i = 0; i < m; ++i) {
            cumulative[i] += chosen.trend_values[i] + chosen.periodic_estimate[i];
        }
        {
            std::vector<double> next(m);
            for (std::size_t i = 0; i < m; ++i) {
                next[i] = residual[i] - chosen.trend_values[i] - chosen.periodic_estimate[i];
            }
            residual = Series(std::move(next), pretest.start_index());
        }
        if (guaranteed) {
            bound = l2_norm(residual.view());
            model.residual_norms.push_back(bound);
        }

        IterationMetrics metrics;
        const auto actual = pretest.view();
        const std::span<const double> cum_view(cumulative);
        metrics.train = error_metrics(actual.first(chosen.train_length),
                                      cum_view.first(chosen.train_length));
        metrics.validation = error_metrics(actual.subspan(chosen.train_length),
                                           cum_view.subspan(chosen.train_length));
        previous_best = chosen.common_smape;
        model.iterations.push_back(std::move(chosen));
        model.iteration_metrics.push_back(metrics);
    }

    model.final_prediction = cumulative;
    model.final_residual = residual.values();
    {
        const auto actual = pretest.view();
        const std::span<const double> cum_view(cumulative);
        model.final_train = error_metrics(actual.first(m - w), cum_view.first(m - w));
        model.final_validation = error_metrics(actual.subspan(m - w), cum_view.subspan(m - w));
    }
    if (options.test_length > 0) {
        // The only place the held-out window is read.
        const PredictionDetail detail = predict_components(model, options.test_length);
        model.final_test =
            error_metrics(series.view().subspan(m), detail.total.view());
        model.test_trend_fallback = detail.fallback_used;
    }
    return model;
}

} // namespace

IterationResult run_candidate(const Series& residual, const Configuration& config,
                              const CandidateContext& context) {
    const std::size_t m = residual.size();
    if (m < 8) {
        raise(errc::insufficient_data, "candidate evaluation needs at least 8 samples");
    }
    if (context.actual == nullptr || context.prior == nullptr ||
        context.actual->size() != m || context.prior->size() != m ||
        context.common_window < 1 || context.common_window > m) {
        raise(errc::invalid_input, "candidate context does not match the residual");
    }

    const SplitResult parts = split(residual, SplitSpec{config.validation_ratio, 0});
    const Series& train = parts.train;
    const std::size_t train_len = train.size();

    TrendModel trend = make_trend(train, config);
    Series reg = evaluate_trend(trend, residual.start_index(), m);
    Series detrended = subtract(train, reg.slice(0, train_len));

    const int t_max = static_cast<int>(train_len / 2);
    if (t_max < 2) {
        raise(errc::insufficient_data, "train part too short for a period scan");
    }
    const Series scan_source =
        (config.period_method == PeriodMethod::lsg_smoothed) ? smooth3(detrended) : detrended;
    const PeriodScan scan = scan_semi_period(scan_source, 2, t_max);

    const SegmentSet segments = partition(detrended, scan.best_period);
    BasicElement element = build_basic_element(segments, config.weighting);
    Series periodic = tile(element, m, 0);

    IterationResult out;
    out.config = config;
    out.trend = std::move(trend);
    out.trend_values = reg.values();
    out.semi_period = scan.best_period;
    out.element = std::move(element);
    out.periodic_estimate = periodic.values();
    out.train_length = train_len;

    std::vector<double> cumulative(m);
    for (std::size_t i = 0; i < m; ++i) {
        cumulative[i] = (*context.prior)[i] + out.trend_values[i] + out.periodic_estimate[i];
    }
    const auto actual = context.actual->view();
    const std::span<const double> cum_view(cumulative);
    out.validation_smape = smape(actual.subspan(train_len), cum_view.subspan(train_len));
    const std::size_t w = context.common_window;
    out.common_smape = smape(actual.subspan(m - w), cum_view.subspan(m - w));
    return out;
}

const IterationResult& select_configuration(const std::vector<IterationResult>& candidates) {
    if (candidates.empty()) {
        raise(errc::infeasible, "no feasible candidate in this iteration");
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < candidates.size(); ++i) {
        if (candidates[i].common_smape < candidates[best].common_smape) best = i;
    }
    return candidates[best];
}

Model fit(const Series& series, const FitOptions& options) {
    return fit_impl(series, options, false);
}

Model fit_guaranteed(const Series& series, const FitOptions& options) {
    return fit_impl(series, options, true);
}

PredictionDetail predict_components(const Model& model, std::size_t horizon) {
    const std::size_t m = model.pretest_length;
    const std::int64_t first =
        model.input.start_index() + static_cast<std::int64_t>(m);

    PredictionDetail detail;
    detail.trend_components.resize(model.iterations.size());
    detail.periodic_components.resize(model.iterations.size());
    detail.fallback_used.assign(model.iterations.size(), false);

    std::vector<double> total(horizon, 0.0);
    for (std::size_t k = 0; k < model.iterations.size(); ++k) {
        const IterationResult& iter = model.iterations[k];
        std::vector<double> trend_part(horizon);
        try {
            for (std::size_t h = 0; h < horizon; ++h) {
                trend_part[h] = iter.trend.value_at(first + static_cast<std::int64_t>(h));
            }
        } catch (const Error& e) {
            if (e.code() != errc::sign_domain) throw;
            // Blend left its sign domain on the horizon: fall back to the
            // nearer bracketing integer fit (ties toward the lower one).
            const PolyFit& fallback = (2 * iter.trend.blend_index >= iter.trend.blend_count)
                                          ? iter.trend.lower
                                          : iter.trend.upper;
            for (std::size_t h = 0; h < horizon; ++h) {
                trend_part[h] = fallback.evaluate_at(first + static_cast<std::int64_t>(h));
            }
            detail.fallback_used[k] = true;
        }

        const std::size_t period = static_cast<std::size_t>(iter.semi_period);
        std::vector<double> periodic_part(horizon);
        for (std::size_t h = 0; h < horizon; ++h) {
            periodic_part[h] = iter.element.values[(m + h) % period];
        }

        for (std::size_t h = 0; h < horizon; ++h) {
            total[h] += trend_part[h] + periodic_part[h];
        }
        detail.trend_components[k] = std::move(trend_part);
        detail.periodic_components[k] = std::move(periodic_part);
    }
    detail.total = Series(std::move(total), first);
    return detail;
}

Series predict(const Model& model, std::size_t horizon) {
    return predict_components(model, horizon).total;
}

} // namespace qpf
