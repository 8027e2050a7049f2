#pragma once

#include <span>
#include <vector>

#include "qpf/series.hpp"

namespace qpf {

/// Result of scanning an inclusive candidate range [t_min, t_max].
/// `scores[k]` is the LSG value for period t_min + k. `best_period` is the
/// smallest candidate attaining the minimum score.
struct PeriodScan {
    int t_min = 0;
    int t_max = 0;
    std::vector<double> scores;
    int best_period = 0;
    double best_score = 0.0;

    double score_at(int period) const { return scores.at(static_cast<std::size_t>(period - t_min)); }
};

/// LSG score for one candidate period: the mean absolute difference between
/// each segment and its successor over their overlap, averaged per sample and
/// per effective segment pair. Zero iff the series repeats exactly at lag T.
/// Requires at least two full segments (len >= 2*T).
double lsg_score(std::span<const double> values, int period);
double lsg_score(const Series& series, int period);

/// Scores every candidate in [t_min, t_max] and picks the semi-period.
/// Candidate evaluations run in parallel; results are deterministic.
PeriodScan scan_semi_period(const Series& series, int t_min, int t_max);

/// Single-threaded reference scan. Kept as the comparison baseline for the
/// parallel kernel; produces bit-identical output.
PeriodScan scan_semi_period_serial(const Series& series, int t_min, int t_max);

/// Three-point centered moving average, shrinking to two points at the
/// edges. Used as the smoothed period-detection variant.
Series smooth3(const Series& series);

} // namespace qpf
