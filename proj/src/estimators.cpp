#include "netsamp/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <tuple>

#include "netsamp/errors.hpp"
#include "netsamp/fastproc.hpp"

namespace netsamp {

std::string to_string(VarianceMethod method) {
    switch (method) {
        case VarianceMethod::simple: return "simple";
        case VarianceMethod::diagonal: return "diagonal";
        case VarianceMethod::diagonal_conservative: return "conservative";
        case VarianceMethod::edge: return "edge";
        case VarianceMethod::full: return "full";
    }
    return "simple";
}

VarianceMethod parse_variance_method(const std::string &text) {
    if (text == "simple") return VarianceMethod::simple;
    if (text == "diagonal") return VarianceMethod::diagonal;
    if (text == "conservative" || text == "diagonal_conservative") return VarianceMethod::diagonal_conservative;
    if (text == "edge") return VarianceMethod::edge;
    if (text == "full") return VarianceMethod::full;
    throw ConfigError("variance must be one of simple, diagonal, conservative, edge, full; got '" + text + "'");
}

namespace {

void check_lengths(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw DomainError("value and weight vectors differ in length");
    if (a.empty()) throw DomainError("estimator needs at least one sample value");
}

void check_positive(std::span<const double> w, const char *what) {
    for (double v : w) {
        if (!(v > 0.0)) throw DomainError(std::string(what) + " must be strictly positive");
    }
}

double inverse_weight_sum(std::span<const double> f) {
    double s = 0.0;
    for (double v : f) s += 1.0 / v;
    return s;
}

}  // namespace

double gupe_mean(std::span<const double> y, std::span<const double> weights) {
    check_lengths(y, weights);
    check_positive(weights, "weights");
    double num = 0.0;
    double den = 0.0;
    double lo = y[0], hi = y[0];
    for (std::size_t i = 0; i < y.size(); ++i) {
        num += y[i] / weights[i];
        den += 1.0 / weights[i];
        lo = std::min(lo, y[i]);
        hi = std::max(hi, y[i]);
    }
    // a convex combination; clamp away rounding that lands an ulp outside
    return std::clamp(num / den, lo, hi);
}

double vh_mean(std::span<const double> y, std::span<const double> degrees) {
    check_lengths(y, degrees);
    for (double d : degrees) {
        if (!(d >= 1.0)) throw DomainError("degree below 1 in VH estimator");
    }
    return gupe_mean(y, degrees);
}

double sample_mean(std::span<const double> y) {
    if (y.empty()) throw DomainError("sample mean of an empty sample");
    double s = 0.0;
    for (double v : y) s += v;
    return s / static_cast<double>(y.size());
}

double variance_simple(std::span<const double> y, std::span<const double> f, double mu) {
    check_lengths(y, f);
    check_positive(f, "inclusion frequencies");
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double r = (y[i] - mu) / f[i];
        s += r * r;
    }
    const double norm = inverse_weight_sum(f);
    return s / (norm * norm);
}

double variance_diagonal(std::span<const double> y, std::span<const double> f, double mu, bool conservative) {
    check_lengths(y, f);
    check_positive(f, "inclusion frequencies");
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double d = y[i] - mu;
        s += conservative ? d * d / f[i] : (1.0 - f[i]) * d * d / f[i];
    }
    const double norm = inverse_weight_sum(f);
    return s / (norm * norm);
}

VarianceResult variance_edge(std::span<const double> y, std::span<const double> f, std::span<const Edge> edges,
                             std::span<const double> pair_f, double mu) {
    check_lengths(y, f);
    check_positive(f, "inclusion frequencies");
    if (pair_f.size() != edges.size()) throw DomainError("joint frequencies missing for sample edges");
    VarianceResult out;
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double d = y[i] - mu;
        s += (f[i] - 1.0) * d * d / f[i];
    }
    for (std::size_t k = 0; k < edges.size(); ++k) {
        const auto [i, j] = edges[k];
        if (i >= y.size() || j >= y.size()) throw DomainError("edge index outside the sample");
        if (!(pair_f[k] > 0.0)) {
            ++out.skipped;
            continue;
        }
        const double delta = (pair_f[k] - f[i] * f[j]) / pair_f[k];
        s += delta * ((y[i] - mu) / f[i]) * ((y[j] - mu) / f[j]);
    }
    const double norm = inverse_weight_sum(f);
    out.raw = s / (norm * norm);
    out.clamped = out.raw < 0.0;
    out.value = out.clamped ? 0.0 : out.raw;
    return out;
}

VarianceResult variance_full(std::span<const double> y, std::span<const double> f, std::span<const double> pair_f,
                             double mu) {
    check_lengths(y, f);
    check_positive(f, "inclusion frequencies");
    const std::size_t n = y.size();
    if (pair_f.size() != n * (n - 1) / 2) throw DomainError("full variance needs joint frequencies for every pair");
    VarianceResult out;
    double diag = 0.0;
    double cross = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = y[i] - mu;
        const double ri = d / f[i];
        diag += (1.0 - f[i]) * d * d / f[i];
        for (std::size_t j = i + 1; j < n; ++j) {
            const double fij = pair_f[triangle_index(n, i, j)];
            if (!(fij > 0.0)) {
                ++out.skipped;
                continue;
            }
            const double delta = (fij - f[i] * f[j]) / fij;
            cross += delta * ri * ((y[j] - mu) / f[j]);
        }
    }
    const double norm = inverse_weight_sum(f);
    out.raw = (diag + 2.0 * cross) / (norm * norm);
    out.clamped = out.raw < 0.0;
    out.value = out.clamped ? 0.0 : out.raw;
    return out;
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("normal quantile needs 0 < p < 1");
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                   1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                   6.680131188771972e+01,  -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                   -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                   3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    double x;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log1p(-p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    // Halley refinement
    const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
    const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(x * x / 2.0);
    return x - u / (1.0 + x * u / 2.0);
}

std::pair<double, double> confidence_interval(double mu, double variance, double alpha) {
    if (!(variance >= 0.0)) throw DomainError("variance must be non-negative");
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
    if (variance == 0.0) return {mu, mu};
    const double half = normal_quantile(1.0 - alpha / 2.0) * std::sqrt(variance);
    return {mu - half, mu + half};
}

double wr_mean(std::span<const double> y, std::span<const double> m, std::span<const double> g) {
    check_lengths(y, m);
    check_lengths(y, g);
    check_positive(g, "mean selection counts g");
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (!(m[i] >= 1.0)) throw DomainError("selection counts m must be at least 1");
        num += m[i] * y[i] / g[i];
        den += m[i] / g[i];
    }
    return num / den;
}

double wr_variance(std::span<const double> y, std::span<const double> m, std::span<const double> g, double mu) {
    check_lengths(y, m);
    check_lengths(y, g);
    check_positive(g, "mean selection counts g");
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (!(m[i] >= 1.0)) throw DomainError("selection counts m must be at least 1");
        const double d = y[i] - mu;
        num += m[i] * d * d / (g[i] * g[i]);
        den += m[i] / g[i];
    }
    return num / (den * den);
}

double ratio_estimate(std::span<const double> y, std::span<const double> x, std::span<const double> f) {
    check_lengths(y, f);
    check_lengths(x, f);
    check_positive(f, "inclusion frequencies");
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        num += y[i] / f[i];
        den += x[i] / f[i];
    }
    if (den == 0.0) throw DomainError("ratio estimator denominator Σ x/f is zero");
    return num / den;
}

double ratio_variance(std::span<const double> y, std::span<const double> x, std::span<const double> f, double ratio) {
    check_lengths(y, f);
    check_lengths(x, f);
    check_positive(f, "inclusion frequencies");
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double r = (y[i] - x[i] * ratio) / f[i];
        num += r * r;
        den += x[i] / f[i];
    }
    if (den == 0.0) throw DomainError("ratio estimator denominator Σ x/f is zero");
    return num / (den * den);
}

Estimate make_estimate(std::string method, double value, double variance, double alpha, bool clamped) {
    Estimate e;
    e.method = std::move(method);
    e.value = value;
    e.variance = variance;
    e.alpha = alpha;
    e.clamped = clamped;
    std::tie(e.ci_low, e.ci_high) = confidence_interval(value, variance, alpha);
    return e;
}

}  // namespace netsamp
