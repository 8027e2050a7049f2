#pragma once

#include <string>
#include <vector>

#include "qpf/series.hpp"

namespace qpf {

/// How segments are weighted when averaged into the basic element.
/// Recency strategies give later segments (including the remainder, which
/// carries the newest samples) more influence.
struct WeightingStrategy {
    enum class Kind { uniform, linear_recency, exponential_recency };

    Kind kind = Kind::uniform;
    double alpha = 0.9; // exponential decay base, in (0,1)

    static WeightingStrategy uniform() { return {Kind::uniform, 0.9}; }
    static WeightingStrategy linear() { return {Kind::linear_recency, 0.9}; }
    static WeightingStrategy exponential(double alpha = 0.9) {
        return {Kind::exponential_recency, alpha};
    }

    std::string name() const;
};

/// Length-T template obtained by weighted pointwise averaging of the
/// segments; tiled side by side it estimates (and forecasts) the series.
struct BasicElement {
    std::vector<double> values;
    int period = 0;
    std::vector<int> contributing_counts; // segments covering each position
};

/// values[j] = sum_i w_i F_i(j) / sum_i w_i over every segment covering
/// position j; the remainder participates with the weight of index n+1.
BasicElement build_basic_element(const SegmentSet& segments, const WeightingStrategy& strategy);

/// output[k] = element.values[(start_phase + k) mod period]. Phase
/// continuity lets a forecast horizon continue the training-side tiling
/// without a seam.
Series tile(const BasicElement& element, std::size_t length, std::size_t start_phase);

} // namespace qpf
