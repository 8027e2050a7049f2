#pragma once

#include <cstdint>
#include <vector>

#include "qpf/series.hpp"

namespace qpf {

/// Least-squares polynomial of one integer degree. Coefficients live in a
/// centered/scaled basis u = (x - center) / half_width with x the absolute
/// sample index; degree-10 fits on raw indices would be numerically
/// hopeless otherwise. `sample_basis_coefficients` converts back to plain
/// ascending powers of (x - domain_offset) for inspection.
struct PolyFit {
    std::vector<double> coefficients; // ascending powers of u
    double center = 0.0;
    double half_width = 1.0;
    std::int64_t domain_offset = 0;

    int degree() const noexcept { return static_cast<int>(coefficients.size()) - 1; }

    double evaluate_at(std::int64_t x) const;

    std::vector<double> sample_basis_coefficients() const;
};

/// Trend component: either a single integer-degree fit or a geometric blend
/// between the best fits of two consecutive degrees,
///   value(x) = sign * (|lower(x)|^(i/N) * |upper(x)|^((N-i)/N)),
/// defined only where both fits share a strict sign. i = N reproduces the
/// lower fit exactly, i = 0 the upper fit.
struct TrendModel {
    enum class Kind { integer_degree, fractional_blend };

    Kind kind = Kind::integer_degree;
    PolyFit lower;
    PolyFit upper;      // fractional case only
    int blend_index = 0; // i
    int blend_count = 1; // N

    static TrendModel integer(PolyFit fit);

    bool is_fractional() const noexcept { return kind == Kind::fractional_blend; }

    /// Degree of the fit (lower degree for blends).
    int degree() const noexcept { return lower.degree(); }

    /// Throws errc::sign_domain when a blend hits mixed signs or a zero.
    double value_at(std::int64_t x) const;
};

struct DetrendResult {
    Series trend_values;
    Series residual; // input - trend
};

/// Least-squares fit over the series' sample grid. Throws
/// errc::insufficient_data when underdetermined and errc::singular_fit when
/// the design matrix is numerically rank-deficient.
PolyFit fit_polynomial(const Series& series, int degree);

/// Geometric interpolation between integer-degree models; requires
/// upper.degree == lower.degree + 1 and 0 <= i <= n.
TrendModel fractional_blend(const TrendModel& lower, const TrendModel& upper, int i, int n);

/// Samples the model on `count` consecutive absolute indices starting at
/// `first`. Propagates sign-domain errors from blends.
Series evaluate_trend(const TrendModel& model, std::int64_t first, std::size_t count);

DetrendResult detrend(const Series& series, const TrendModel& model);

} // namespace qpf
