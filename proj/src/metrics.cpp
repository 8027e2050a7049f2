#include "qpf/metrics.hpp"

#include <cmath>
#include <limits>

namespace qpf {

namespace {

void check_pair(std::span<const double> actual, std::span<const double> predicted) {
    if (actual.empty()) {
        raise(errc::invalid_input, "metrics need at least one sample");
    }
    if (actual.size() != predicted.size()) {
        raise(errc::invalid_input, "metric inputs differ in length: " +
                                       std::to_string(actual.size()) + " vs " +
                                       std::to_string(predicted.size()));
    }
}

constexpr double kUndefined = std::numeric_limits<double>::quiet_NaN();

} // namespace

bool metric_undefined(double value) { return std::isnan(value); }

double smape(std::span<const double> actual, std::span<const double> predicted) {
    check_pair(actual, predicted);
    double acc = 0.0;
    for (std::size_t t = 0; t < actual.size(); ++t) {
        const double f = actual[t];
        const double y = predicted[t];
        // Denominator in magnitudes: equal to (Y+F)/2 on same-sign data and
        // keeps every term inside [0, 200] otherwise. A both-zero term
        // contributes 0; Y = -F != 0 lands exactly on the supremum 200.
        const double denom = (std::abs(y) + std::abs(f)) / 2.0;
        if (denom != 0.0) {
            acc += std::abs(y - f) / denom * 100.0;
        }
    }
    return acc / static_cast<double>(actual.size());
}

double smape(const Series& actual, const Series& predicted) {
    return smape(actual.view(), predicted.view());
}

MetricReport error_metrics(std::span<const double> actual, std::span<const double> predicted) {
    check_pair(actual, predicted);
    const std::size_t n = actual.size();

    MetricReport r;
    r.n = n;
    r.smape = smape(actual, predicted);

    double se = 0.0;
    double ae = 0.0;
    double ape = 0.0;
    std::size_t ape_terms = 0;
    double mean_f = 0.0;
    for (std::size_t t = 0; t < n; ++t) mean_f += actual[t];
    mean_f /= static_cast<double>(n);

    double var_f = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        const double e = predicted[t] - actual[t];
        se += e * e;
        ae += std::abs(e);
        if (actual[t] != 0.0) {
            ape += std::abs(e) / std::abs(actual[t]);
            ++ape_terms;
        }
        var_f += (actual[t] - mean_f) * (actual[t] - mean_f);
    }

    r.mse = se / static_cast<double>(n);
    r.mae = ae / static_cast<double>(n);
    r.mape = (ape_terms > 0) ? ape / static_cast<double>(ape_terms) * 100.0 : kUndefined;
    r.nmse = (var_f > 0.0) ? se / var_f : kUndefined;
    return r;
}

MetricReport error_metrics(const Series& actual, const Series& predicted) {
    return error_metrics(actual.view(), predicted.view());
}

} // namespace qpf
