#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qpf/errors.hpp"

namespace qpf {

/// Uniformly sampled real-valued sequence. Values are immutable after
/// construction and always finite. `start_index` is the absolute sample
/// offset of the first value; optional per-sample labels (original
/// timestamps) are carried through untouched for output purposes.
class Series {
public:
    Series() = default;

    explicit Series(std::vector<double> values, std::int64_t start_index = 0,
                    std::vector<std::string> labels = {});

    std::size_t size() const noexcept { return values_.size(); }
    bool empty() const noexcept { return values_.empty(); }
    double operator[](std::size_t i) const noexcept { return values_[i]; }

    std::int64_t start_index() const noexcept { return start_index_; }
    const std::vector<double>& values() const noexcept { return values_; }
    std::span<const double> view() const noexcept { return values_; }

    bool has_labels() const noexcept { return !labels_.empty(); }
    const std::vector<std::string>& labels() const noexcept { return labels_; }

    /// Sub-series of `count` samples starting at position `pos`;
    /// start_index and labels follow the slice.
    Series slice(std::size_t pos, std::size_t count) const;

    /// Same values, different sample offset.
    Series with_start_index(std::int64_t start) const;

    auto begin() const noexcept { return values_.begin(); }
    auto end() const noexcept { return values_.end(); }

private:
    std::vector<double> values_;
    std::int64_t start_index_ = 0;
    std::vector<std::string> labels_;
};

/// A series cut into `n = floor(len/period)` full segments of exactly
/// `period` samples plus a remainder of `len mod period` samples.
/// Concatenating full segments then the remainder reproduces the source.
struct SegmentSet {
    int period = 0;
    std::vector<std::vector<double>> full_segments;
    std::vector<double> remainder;

    std::size_t segment_count() const noexcept { return full_segments.size(); }
    std::size_t remainder_length() const noexcept { return remainder.size(); }
};

/// Train/validation/test split policy. `validation_ratio` is the fraction
/// of the non-test prefix held out for validation (taken from its end).
struct SplitSpec {
    double validation_ratio = 0.0;
    std::size_t test_length = 0;
};

struct SplitResult {
    Series train;
    Series validation;
    Series test;
};

SegmentSet partition(const Series& series, int period);

SplitResult split(const Series& series, const SplitSpec& spec);

/// Elementwise a - b; requires equal length and aligned start_index.
/// Labels are carried from `a`.
Series subtract(const Series& a, const Series& b);

/// Elementwise a + b, same alignment rules as subtract.
Series add(const Series& a, const Series& b);

} // namespace qpf
