#include "qpf/period.hpp"

#include <cmath>
#include <cstddef>

namespace qpf {

double lsg_score(std::span<const double> values, int period) {
    const std::size_t len = values.size();
    if (period < 1) {
        raise(errc::invalid_period, "period must be positive");
    }
    const std::size_t t = static_cast<std::size_t>(period);
    if (len < 2 * t) {
        raise(errc::insufficient_data, "LSG needs at least two full segments: length " +
                                           std::to_string(len) + " < 2*" +
                                           std::to_string(period));
    }
    // Sum of |F_{i+1}(x) - F_i(x)| over every overlap sample is exactly the
    // sum of lag-T differences; the per-T and pair-count normalizations
    // collapse to a single division by (len - T).
    double acc = 0.0;
    for (std::size_t x = 0; x + t < len; ++x) {
        acc += std::abs(values[x + t] - values[x]);
    }
    return acc / static_cast<double>(len - t);
}

double lsg_score(const Series& series, int period) {
    return lsg_score(series.view(), period);
}

namespace {

PeriodScan scan_impl(const Series& series, int t_min, int t_max, bool parallel) {
    const std::size_t len = series.size();
    if (t_min < 2 || t_min > t_max) {
        raise(errc::invalid_range, "empty or invalid candidate range [" +
                                       std::to_string(t_min) + ", " + std::to_string(t_max) +
                                       "]");
    }
    if (static_cast<std::size_t>(t_max) > len / 2) {
        raise(errc::invalid_range, "t_max " + std::to_string(t_max) +
                                       " exceeds half the series length " +
                                       std::to_string(len));
    }

    PeriodScan scan;
    scan.t_min = t_min;
    scan.t_max = t_max;
    const int count = t_max - t_min + 1;
    scan.scores.resize(static_cast<std::size_t>(count));

    const auto view = series.view();
    if (parallel) {
#pragma omp parallel for schedule(static)
        for (int k = 0; k < count; ++k) {
            scan.scores[static_cast<std::size_t>(k)] = lsg_score(view, t_min + k);
        }
    } else {
        for (int k = 0; k < count; ++k) {
            scan.scores[static_cast<std::size_t>(k)] = lsg_score(view, t_min + k);
        }
    }

    // Smallest period wins ties.
    std::size_t best = 0;
    for (std::size_t k = 1; k < scan.scores.size(); ++k) {
        if (scan.scores[k] < scan.scores[best]) best = k;
    }
    scan.best_period = t_min + static_cast<int>(best);
    scan.best_score = scan.scores[best];
    return scan;
}

} // namespace

PeriodScan scan_semi_period(const Series& series, int t_min, int t_max) {
    return scan_impl(series, t_min, t_max, true);
}

PeriodScan scan_semi_period_serial(const Series& series, int t_min, int t_max) {
    return scan_impl(series, t_min, t_max, false);
}

Series smooth3(const Series& series) {
    const std::size_t n = series.size();
    if (n <= 2) return series;
    std::vector<double> out(n);
    out[0] = (series[0] + series[1]) / 2.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        out[i] = (series[i - 1] + series[i] + series[i + 1]) / 3.0;
    }
    out[n - 1] = (series[n - 2] + series[n - 1]) / 2.0;
    return Series(std::move(out), series.start_index());
}

} // namespace qpf
