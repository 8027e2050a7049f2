#include "qpf/series.hpp"

#include <cmath>

namespace qpf {

Series::Series(std::vector<double> values, std::int64_t start_index,
               std::vector<std::string> labels)
    : values_(std::move(values)), start_index_(start_index), labels_(std::move(labels)) {
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            raise(errc::invalid_input,
                  "series value at position " + std::to_string(i) + " is not finite");
        }
    }
    if (!labels_.empty() && labels_.size() != values_.size()) {
        raise(errc::invalid_input, "label count does not match value count");
    }
}

Series Series::slice(std::size_t pos, std::size_t count) const {
    if (pos + count > values_.size()) {
        raise(errc::invalid_input, "slice out of range");
    }
    std::vector<double> v(values_.begin() + pos, values_.begin() + pos + count);
    std::vector<std::string> l;
    if (!labels_.empty()) {
        l.assign(labels_.begin() + pos, labels_.begin() + pos + count);
    }
    return Series(std::move(v), start_index_ + static_cast<std::int64_t>(pos), std::move(l));
}

Series Series::with_start_index(std::int64_t start) const {
    return Series(values_, start, labels_);
}

SegmentSet partition(const Series& series, int period) {
    const std::size_t len = series.size();
    if (period < 1 || static_cast<std::size_t>(period) > len) {
        raise(errc::invalid_period,
              "period " + std::to_string(period) + " invalid for series of length " +
                  std::to_string(len));
    }
    const std::size_t t = static_cast<std::size_t>(period);
    const std::size_t n = len / t;

    SegmentSet out;
    out.period = period;
    out.full_segments.reserve(n);
    const auto& v = series.values();
    for (std::size_t i = 0; i < n; ++i) {
        out.full_segments.emplace_back(v.begin() + i * t, v.begin() + (i + 1) * t);
    }
    out.remainder.assign(v.begin() + n * t, v.end());
    return out;
}

SplitResult split(const Series& series, const SplitSpec& spec) {
    const std::size_t len = series.size();
    if (!(spec.validation_ratio > 0.0 && spec.validation_ratio < 1.0)) {
        raise(errc::invalid_input, "validation ratio must lie in (0,1)");
    }
    if (spec.test_length >= len) {
        raise(errc::insufficient_data, "test length " + std::to_string(spec.test_length) +
                                           " leaves no data from " + std::to_string(len) +
                                           " samples");
    }
    const std::size_t pre = len - spec.test_length;
    const std::size_t val =
        static_cast<std::size_t>(std::ceil(spec.validation_ratio * static_cast<double>(pre)));
    if (val >= pre || pre - val < 4) {
        raise(errc::insufficient_data,
              "split leaves train of " + std::to_string(val >= pre ? 0 : pre - val) +
                  " samples, need at least 4");
    }
    const std::size_t train = pre - val;
    return SplitResult{series.slice(0, train), series.slice(train, val),
                       series.slice(pre, spec.test_length)};
}

namespace {

void check_aligned(const Series& a, const Series& b) {
    if (a.size() != b.size()) {
        raise(errc::alignment, "length mismatch: " + std::to_string(a.size()) + " vs " +
                                   std::to_string(b.size()));
    }
    if (a.start_index() != b.start_index()) {
        raise(errc::alignment, "start index mismatch: " + std::to_string(a.start_index()) +
                                   " vs " + std::to_string(b.start_index()));
    }
}

} // namespace

Series subtract(const Series& a, const Series& b) {
    check_aligned(a, b);
    std::vector<double> v(a.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = a[i] - b[i];
    return Series(std::move(v), a.start_index(), a.labels());
}

Series add(const Series& a, const Series& b) {
    check_aligned(a, b);
    std::vector<double> v(a.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = a[i] + b[i];
    return Series(std::move(v), a.start_index(), a.labels());
}

} // namespace qpf
