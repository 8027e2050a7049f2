#include "qpf/element.hpp"

#include <cmath>

namespace qpf {

std::string WeightingStrategy::name() const {
    switch (kind) {
    case Kind::uniform: return "uniform";
    case Kind::linear_recency: return "linear";
    case Kind::exponential_recency: return "exp";
    }
    return "?";
}

BasicElement build_basic_element(const SegmentSet& segments, const WeightingStrategy& strategy) {
    const std::size_t n = segments.segment_count();
    if (n < 1) {
        raise(errc::insufficient_data, "basic element needs at least one full segment");
    }
    if (strategy.kind == WeightingStrategy::Kind::exponential_recency &&
        !(strategy.alpha > 0.0 && strategy.alpha < 1.0)) {
        raise(errc::invalid_input, "exponential weighting needs alpha in (0,1)");
    }
    const std::size_t t = static_cast<std::size_t>(segments.period);
    const std::size_t rem = segments.remainder_length();
    const std::size_t total = n + (rem > 0 ? 1 : 0);

    // Weight of segment i (1-based position among the participants).
    auto weight = [&](std::size_t i) -> double {
        switch (strategy.kind) {
        case WeightingStrategy::Kind::uniform: return 1.0;
        case WeightingStrategy::Kind::linear_recency: return static_cast<double>(i);
        case WeightingStrategy::Kind::exponential_recency:
            return std::pow(strategy.alpha, static_cast<double>(total - i));
        }
        return 1.0;
    };

    BasicElement out;
    out.period = segments.period;
    out.values.assign(t, 0.0);
    out.contributing_counts.assign(t, 0);

    std::vector<double> wsum(t, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double w = weight(i + 1);
        for (std::size_t j = 0; j < t; ++j) {
            out.values[j] += w * segments.full_segments[i][j];
            wsum[j] += w;
            out.contributing_counts[j] += 1;
        }
    }
    if (rem > 0) {
        const double w = weight(n + 1);
        for (std::size_t j = 0; j < rem; ++j) {
            out.values[j] += w * segments.remainder[j];
            wsum[j] += w;
            out.contributing_counts[j] += 1;
        }
    }
    for (std::size_t j = 0; j < t; ++j) out.values[j] /= wsum[j];
    return out;
}

Series tile(const BasicElement& element, std::size_t length, std::size_t start_phase) {
    if (element.period < 1 || element.values.size() != static_cast<std::size_t>(element.period)) {
        raise(errc::invalid_input, "basic element has inconsistent period");
    }
    const std::size_t t = static_cast<std::size_t>(element.period);
    if (start_phase >= t) {
        raise(errc::invalid_input, "start phase must be below the period");
    }
    std::vector<double> out(length);
    for (std::size_t k = 0; k < length; ++k) {
        out[k] = element.values[(start_phase + k) % t];
    }
    return Series(std::move(out));
}

} // namespace qpf
