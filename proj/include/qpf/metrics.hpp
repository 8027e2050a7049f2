#pragma once

#include <span>

#include "qpf/series.hpp"

namespace qpf {

/// Forecast-quality metrics over one evaluation window. `nmse` (and `mape`
/// when every actual value is zero) may be the undefined sentinel, see
/// `metric_undefined`.
struct MetricReport {
    double smape = 0.0; // percent, in [0, 200] for same-sign data
    double nmse = 0.0;  // error energy over variance of the actuals
    double mse = 0.0;
    double mae = 0.0;
    double mape = 0.0; // percent, over terms with a nonzero actual
    std::size_t n = 0;
};

/// True for metrics reported as undefined (e.g. NMSE of a constant actual).
bool metric_undefined(double value);

/// Symmetric mean absolute percentage error,
///   (100/n) * sum |Y - F| / ((|Y| + |F|) / 2),
/// with Y the prediction and F the actual; identical to the plain
/// (Y + F)/2 form wherever both share a sign, and bounded in [0, 200]
/// everywhere. A term with Y + F = 0 contributes 0 when Y = F and the
/// formula's supremum 200 otherwise.
double smape(std::span<const double> actual, std::span<const double> predicted);
double smape(const Series& actual, const Series& predicted);

MetricReport error_metrics(std::span<const double> actual, std::span<const double> predicted);
MetricReport error_metrics(const Series& actual, const Series& predicted);

} // namespace qpf
