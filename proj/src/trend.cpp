#include "qpf/trend.hpp"

#include <cmath>
#include <cstddef>

namespace qpf {

double PolyFit::evaluate_at(std::int64_t x) const {
    const double u = (static_cast<double>(x) - center) / half_width;
    double acc = 0.0;
    for (std::size_t k = coefficients.size(); k-- > 0;) {
        acc = acc * u + coefficients[k];
    }
    return acc;
}

std::vector<double> PolyFit::sample_basis_coefficients() const {
    // Horner with polynomial arithmetic: substitute
    // u = (x' - c0) / half_width, x' = x - domain_offset.
    const double c0 = center - static_cast<double>(domain_offset);
    std::vector<double> q; // ascending powers of x'
    for (std::size_t k = coefficients.size(); k-- > 0;) {
        std::vector<double> next(q.size() + 1, 0.0);
        for (std::size_t j = 0; j < q.size(); ++j) {
            next[j + 1] += q[j] / half_width;
            next[j] -= q[j] * (c0 / half_width);
        }
        if (next.empty()) next.resize(1, 0.0);
        next[0] += coefficients[k];
        q = std::move(next);
    }
    if (q.empty()) q.resize(1, 0.0);
    return q;
}

TrendModel TrendModel::integer(PolyFit fit) {
    TrendModel m;
    m.kind = Kind::integer_degree;
    m.lower = std::move(fit);
    return m;
}

double TrendModel::value_at(std::int64_t x) const {
    if (kind == Kind::integer_degree) return lower.evaluate_at(x);
    if (blend_index == blend_count) return lower.evaluate_at(x);
    if (blend_index == 0) return upper.evaluate_at(x);

    const double a = lower.evaluate_at(x);
    const double b = upper.evaluate_at(x);
    const double wi = static_cast<double>(blend_index) / static_cast<double>(blend_count);
    if (a > 0.0 && b > 0.0) {
        return std::pow(a, wi) * std::pow(b, 1.0 - wi);
    }
    if (a < 0.0 && b < 0.0) {
        return -std::pow(-a, wi) * std::pow(-b, 1.0 - wi);
    }
    raise(errc::sign_domain, "fractional blend undefined at sample " + std::to_string(x) +
                                 ": bracketing fits disagree in sign or vanish");
}

PolyFit fit_polynomial(const Series& series, int degree) {
    if (degree < 0) {
        raise(errc::invalid_input, "polynomial degree must be nonnegative");
    }
    const std::size_t m = series.size();
    const std::size_t cols = static_cast<std::size_t>(degree) + 1;
    if (m < cols) {
        raise(errc::insufficient_data, "degree-" + std::to_string(degree) +
                                           " fit needs at least " + std::to_string(cols) +
                                           " samples, got " + std::to_string(m));
    }

    PolyFit fit;
    fit.domain_offset = series.start_index();
    fit.center = static_cast<double>(series.start_index()) +
                 static_cast<double>(m - 1) / 2.0;
    fit.half_width = (m > 1) ? static_cast<double>(m - 1) / 2.0 : 1.0;

    // Design matrix in the scaled basis, row-major m x cols.
    std::vector<double> a(m * cols);
    std::vector<double> rhs = series.values();
    for (std::size_t j = 0; j < m; ++j) {
        const double u = (static_cast<double>(series.start_index()) +
                          static_cast<double>(j) - fit.center) /
                         fit.half_width;
        double p = 1.0;
        for (std::size_t k = 0; k < cols; ++k) {
            a[j * cols + k] = p;
            p *= u;
        }
    }

    std::vector<double> col_norm(cols, 0.0);
    for (std::size_t k = 0; k < cols; ++k) {
        double s = 0.0;
        for (std::size_t j = 0; j < m; ++j) s += a[j * cols + k] * a[j * cols + k];
        col_norm[k] = std::sqrt(s);
    }

    // Householder QR, eliminating column by column.
    std::vector<double> v(m);
    for (std::size_t k = 0; k < cols; ++k) {
        double sigma = 0.0;
        for (std::size_t j = k; j < m; ++j) sigma += a[j * cols + k] * a[j * cols + k];
        sigma = std::sqrt(sigma);
        if (sigma <= 1e-13 * col_norm[k] || sigma == 0.0) {
            raise(errc::singular_fit, "rank-deficient design matrix at degree " +
                                          std::to_string(k));
        }
        const double akk = a[k * cols + k];
        const double alpha = (akk >= 0.0) ? -sigma : sigma;
        double vnorm2 = 0.0;
        for (std::size_t j = k; j < m; ++j) {
            v[j] = a[j * cols + k];
            if (j == k) v[j] -= alpha;
            vnorm2 += v[j] * v[j];
        }
        if (vnorm2 == 0.0) continue;
        const double beta = 2.0 / vnorm2;
        for (std::size_t c = k; c < cols; ++c) {
            double dot = 0.0;
            for (std::size_t j = k; j < m; ++j) dot += v[j] * a[j * cols + c];
            const double f = beta * dot;
            for (std::size_t j = k; j < m; ++j) a[j * cols + c] -= f * v[j];
        }
        double dot = 0.0;
        for (std::size_t j = k; j < m; ++j) dot += v[j] * rhs[j];
        const double f = beta * dot;
        for (std::size_t j = k; j < m; ++j) rhs[j] -= f * v[j];
    }

    for (std::size_t k = 0; k < cols; ++k) {
        if (std::abs(a[k * cols + k]) <= 1e-13 * col_norm[k]) {
            raise(errc::singular_fit, "near-singular triangular factor at degree " +
                                          std::to_string(k));
        }
    }

    fit.coefficients.assign(cols, 0.0);
    for (std::size_t k = cols; k-- > 0;) {
        double s = rhs[k];
        for (std::size_t c = k + 1; c < cols; ++c) s -= a[k * cols + c] * fit.coefficients[c];
        fit.coefficients[k] = s / a[k * cols + k];
    }
    return fit;
}

TrendModel fractional_blend(const TrendModel& lower, const TrendModel& upper, int i, int n) {
    if (lower.is_fractional() || upper.is_fractional()) {
        raise(errc::invalid_input, "blend endpoints must be integer-degree models");
    }
    if (n < 1 || i < 0 || i > n) {
        raise(errc::invalid_input, "blend index must satisfy 0 <= i <= N, N >= 1");
    }
    if (upper.degree() != lower.degree() + 1) {
        raise(errc::invalid_input, "blend requires consecutive degrees, got " +
                                       std::to_string(lower.degree()) + " and " +
                                       std::to_string(upper.degree()));
    }
    TrendModel m;
    m.kind = TrendModel::Kind::fractional_blend;
    m.lower = lower.lower;
    m.upper = upper.lower;
    m.blend_index = i;
    m.blend_count = n;
    return m;
}

Series evaluate_trend(const TrendModel& model, std::int64_t first, std::size_t count) {
    std::vector<double> out(count);
    for (std::size_t j = 0; j < count; ++j) {
        out[j] = model.value_at(first + static_cast<std::int64_t>(j));
    }
    return Series(std::move(out), first);
}

DetrendResult detrend(const Series& series, const TrendModel& model) {
    Series trend = evaluate_trend(model, series.start_index(), series.size());
    Series residual = subtract(series, trend);
    return DetrendResult{std::move(trend), std::move(residual)};
}

} // namespace qpf
